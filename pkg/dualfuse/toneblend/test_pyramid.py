import numpy as np
import pytest

from dualfuse.imagecore import ImageBuffer, WeightMap, ParameterError
from .pyramid import auto_levels, gaussian_pyramid, pyramid_blend

K = np.array([1, 4, 6, 4, 1]) / 16


def ref_blur(a):
    pad = ((2, 2), (2, 2)) + ((0, 0),) * (a.ndim - 2)
    p = np.pad(a, pad, mode='symmetric')
    h, w = a.shape[:2]
    rows = sum(K[i] * p[i:i + h] for i in range(5))
    return sum(K[i] * rows[:, i:i + w] for i in range(5))


def ref_expand(a, shape):
    zi = np.zeros(tuple(shape) + a.shape[2:])
    zi[::2, ::2] = a
    ones = np.zeros(shape)
    ones[::2, ::2] = 1
    norm = ref_blur(ones)
    return ref_blur(zi) / (norm[..., None] if a.ndim == 3 else norm)


def ref_blend(a, b, w, levels):
    """Straightforward multi-band blend, one level at a time"""
    ga, gb, gw = [a], [b], [w]
    for _ in range(levels - 1):
        ga.append(ref_blur(ga[-1])[::2, ::2])
        gb.append(ref_blur(gb[-1])[::2, ::2])
        gw.append(ref_blur(gw[-1])[::2, ::2])
    out = gw[-1][..., None] * ga[-1] + (1 - gw[-1][..., None]) * gb[-1]
    for i in range(levels - 2, -1, -1):
        shape = ga[i].shape[:2]
        la = ga[i] - ref_expand(ga[i + 1], shape)
        lb = gb[i] - ref_expand(gb[i + 1], shape)
        out = gw[i][..., None] * la + (1 - gw[i][..., None]) * lb + ref_expand(out, shape)
    return out


def pair(shape=(48, 56, 3), seed=0):
    rng = np.random.default_rng(seed)
    return ImageBuffer(rng.random(shape)), ImageBuffer(rng.random(shape))


def test_auto_levels():
    assert auto_levels(1024, 1024) == 7
    assert auto_levels(16, 400) == 3
    assert auto_levels(1 << 14, 1 << 14) == 8

def test_gaussian_pyramid_stops_at_one_pixel():
    pyr = gaussian_pyramid(np.ones((5, 9)), 10)
    assert [p.shape for p in pyr] == [(5, 9), (3, 5), (2, 3), (1, 2)]

def test_weight_one_selects_a():
    a, b = pair()
    out = pyramid_blend(a, b, WeightMap(np.ones(a.shape)), 4)
    assert np.abs(out.data - a.data).max() <= 1e-6

def test_weight_zero_selects_b():
    a, b = pair((37, 53, 3), 1)
    out = pyramid_blend(a, b, WeightMap(np.zeros(a.shape)), 4)
    assert np.abs(out.data - b.data).max() <= 1e-6

def test_blend_of_equals():
    a, _ = pair(seed=2)
    w = WeightMap(np.random.default_rng(3).random(a.shape))
    out = pyramid_blend(a, a.copy(), w, 5)
    assert np.abs(out.data - a.data).max() <= 1e-6

def test_step_mask_matches_reference():
    a = ImageBuffer.full(64, 80, 0.9)
    b = ImageBuffer.full(64, 80, 0.2)
    w = np.zeros((64, 80))
    w[:, :40] = 1.0
    out = pyramid_blend(a, b, WeightMap(w), 4).data
    assert np.abs(out - ref_blend(a.data, b.data, w, 4)).max() <= 1e-5
    row = out[32, :, 0]
    assert (np.diff(row) <= 1e-12).all() # monotone from a down to b
    assert out.min() >= 0.2 - 1e-3 and out.max() <= 0.9 + 1e-3

def test_random_inputs_match_reference():
    a, b = pair((45, 62, 3), 4)
    w = np.random.default_rng(5).random((45, 62))
    out = pyramid_blend(a, b, WeightMap(w), 3).data
    assert np.abs(out - ref_blend(a.data, b.data, w, 3)).max() <= 1e-5

def test_single_level_is_plain_blend():
    a, b = pair(seed=6)
    w = np.random.default_rng(7).random(a.shape)
    out = pyramid_blend(a, b, WeightMap(w), 1).data
    np.testing.assert_allclose(out, w[..., None] * a.data + (1 - w[..., None]) * b.data, atol=1e-12)

def test_bad_levels():
    a, b = pair()
    with pytest.raises(ParameterError):
        pyramid_blend(a, b, WeightMap(np.ones(a.shape)), 0)
