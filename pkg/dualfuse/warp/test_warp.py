import numpy as np

from dualfuse.imagecore import ImageBuffer, FlowField, FusionConfig
from .warp import backward_warp, forward_warp, multi_warp_average


def random_image(h=12, w=10, seed=0):
    return ImageBuffer(np.random.default_rng(seed).random((h, w, 3)))


def test_backward_zero_flow_identity():
    img = random_image()
    out, valid = backward_warp(img, FlowField.constant(12, 10), with_validity=True)
    assert (out.data == img.data).all() and valid.bits.all()

def test_backward_unit_shift():
    img = random_image()
    out, valid = backward_warp(img, FlowField.constant(12, 10, 1, 0), with_validity=True)
    assert (out.data[:, :-1] == img.data[:, 1:]).all()
    assert not valid.bits[:, -1].any() and valid.bits[:, :-1].all()

def test_backward_half_pixel():
    img = random_image()
    out = backward_warp(img, FlowField.constant(12, 10, 0.5, 0))
    np.testing.assert_allclose(out.data[:, :-1], (img.data[:, :-1] + img.data[:, 1:]) / 2, atol=1e-12)

def test_forward_zero_identity():
    img = random_image()
    res = forward_warp(img, FlowField.constant(12, 10))
    assert (res.image.data == img.data).all() and res.validity.bits.all()

def test_forward_shift_leaves_strip():
    img = random_image()
    res = forward_warp(img, FlowField.constant(12, 10, 3, 0))
    assert (res.image.data[:, 3:] == img.data[:, :-3]).all()
    assert not res.validity.bits[:, :3].any() and res.validity.bits[:, 3:].all()

def test_forward_priority_rule():
    # sources (0, 0) and (0, 2) both land on (0, 2); the magnitude-20 source wins
    u = np.zeros((1, 25))
    u[0, 0] = 2.0
    img = ImageBuffer(np.arange(25.0).reshape(1, 25))
    priority = np.zeros((1, 25))
    priority[0, 0] = 20.0
    res = forward_warp(img, FlowField(u, np.zeros((1, 25))), priority)
    assert res.image.data[0, 2, 0] == 0.0
    # equal priorities: larger source index wins
    res = forward_warp(img, FlowField(u, np.zeros((1, 25))), np.zeros((1, 25)))
    assert res.image.data[0, 2, 0] == 2.0

def test_forward_default_priority_is_magnitude():
    u = np.zeros((1, 8))
    u[0, 1] = 3.0 # source 1 -> 4, collides with the static source 4
    img = ImageBuffer(np.arange(8.0).reshape(1, 8))
    res = forward_warp(img, FlowField(u, np.zeros((1, 8))))
    assert res.image.data[0, 4, 0] == 1.0
    assert not res.validity.bits[0, 1]

def test_forward_flow_values():
    f = FlowField.constant(4, 4, 1, 0)
    res = forward_warp(f, f)
    assert isinstance(res.image, FlowField)
    assert (res.image.u[:, 1:] == 1).all() and not res.image.valid[:, 0].any()

def test_forward_deterministic():
    rng = np.random.default_rng(5)
    img = random_image(32, 32)
    disp = FlowField(rng.normal(0, 3, (32, 32)), rng.normal(0, 3, (32, 32)))
    a, b = forward_warp(img, disp), forward_warp(img, disp)
    assert (a.image.data == b.image.data).all() and (a.validity.bits == b.validity.bits).all()

def test_multi_warp_constant():
    img = ImageBuffer.full(16, 16, 0.4)
    rng = np.random.default_rng(1)
    disp = FlowField(rng.normal(0, 2, (16, 16)), rng.normal(0, 2, (16, 16)))
    res = multi_warp_average(img, disp, FusionConfig())
    np.testing.assert_allclose(res.image.data[res.validity.bits], 0.4, atol=1e-12)

def test_multi_warp_zero_disp_interior():
    img = ImageBuffer.full(8, 8, 0.25)
    res = multi_warp_average(img, FlowField.constant(8, 8), FusionConfig())
    assert res.validity.bits.all()
    np.testing.assert_allclose(res.image.data, 0.25, atol=1e-12)

def test_single_offset_equals_forward_warp():
    img = random_image()
    rng = np.random.default_rng(2)
    disp = FlowField(rng.normal(0, 2, (12, 10)), rng.normal(0, 2, (12, 10)))
    cfg = FusionConfig(offset_start=0, offset_end=0)
    a, b = multi_warp_average(img, disp, cfg), forward_warp(img, disp)
    assert (a.image.data == b.image.data).all() and (a.validity.bits == b.validity.bits).all()
    c = multi_warp_average(img, disp, FusionConfig(multi_warp=False))
    assert (c.image.data == b.image.data).all()

def test_worker_count_does_not_change_result():
    img = random_image(24, 24)
    rng = np.random.default_rng(3)
    disp = FlowField(rng.normal(0, 4, (24, 24)), rng.normal(0, 4, (24, 24)))
    a = multi_warp_average(img, disp, FusionConfig(workers=1))
    b = multi_warp_average(img, disp, FusionConfig(workers=4))
    assert (a.image.data == b.image.data).all()
