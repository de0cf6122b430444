import numpy as np
import pytest

from dualfuse.warp import backward_warp
from .oracle import occlusion_oracle, iou
from .scene import Texture, Layer, SceneSpec, render_views, degrade_wide, generate_scene, default_suite
from .synth_errors import SceneSpecError


def two_layer(bg=(10, 0), fg=(30, 0), **kw):
    return SceneSpec(
        width=160, height=160,
        background=Texture('noise', 1, 6.0),
        background_disparity=bg,
        layers=(Layer((70, 40, 40, 60), fg, Texture('checker', 0, 4.0, 0.6, (0.4, 0.5, 0.6))),),
        **kw,
    )


def test_zero_disparity():
    spec = two_layer(bg=(0, 0), fg=(0, 0))
    _, _, flow, occ = generate_scene(spec)
    assert (flow.u == 0).all() and (flow.v == 0).all()
    assert occ.count() == 0

def test_ground_truth_flow():
    _, _, flow, _ = render_views(two_layer())
    assert (flow.u[40:100, 70:110] == -30).all()
    assert flow.u[:40].max() == -10 and (flow.v == 0).all()

def test_occlusion_band_width():
    _, _, _, occ = render_views(two_layer())
    expected = np.zeros((160, 160), bool)
    expected[40:100, 50:70] = True
    assert (occ.bits == expected).all()

@pytest.mark.parametrize('bg, fg', [((10, 0), (30, 0)), ((0, 0), (6, 8)), ((3, 2), (12, 9))])
def test_tele_warped_by_flow_is_clean_wide(bg, fg):
    clean, tele, flow, occ = render_views(two_layer(bg, fg))
    warped, in_range = backward_warp(tele, flow, with_validity=True)
    sel = in_range.bits & ~occ.bits
    assert sel.sum() > 0.8 * sel.size
    assert np.abs(warped.data - clean.data)[sel].max() < 1e-12

def test_analytic_occlusion_matches_oracle():
    for spec in default_suite(4, 256, seed=1):
        _, _, flow, occ = render_views(spec)
        assert occ.count() > 0
        assert iou(occ, occlusion_oracle(flow)) >= 0.95

def test_degradation_order():
    spec = two_layer(blur_sigma=0.0, tone_offset=0.1)
    clean, _, _, _ = render_views(spec)
    wide = degrade_wide(clean, spec)
    assert (wide.data == np.clip(clean.data + 0.1, 0, 1)).all()
    blurred = degrade_wide(clean, two_layer())
    assert np.abs(blurred.data - clean.data).max() > 0.05

def test_deterministic_per_seed():
    spec = two_layer(noise_sigma=0.02, seed=5)
    a = generate_scene(spec)
    b = generate_scene(spec)
    assert (a[0].data == b[0].data).all() and (a[1].data == b[1].data).all()
    c = generate_scene(two_layer(noise_sigma=0.02, seed=6))
    assert not (a[0].data == c[0].data).all()

def test_default_suite_geometry():
    suite = default_suite(10, 1024, seed=0)
    assert len(suite) == 10
    for spec in suite:
        (x, y, w, h), = [layer.rect for layer in spec.layers]
        step = spec.layers[0].disparity[0] - spec.background_disparity[0]
        assert 80 <= w <= 140 and 180 <= h <= 260 and 420 <= x <= 480
        assert 10 <= step <= 24 and spec.layers[0].disparity[1] == 0
    assert default_suite(3, 256, seed=2) == default_suite(3, 256, seed=2)

@pytest.mark.parametrize('kw', [
    dict(fg=(50, 0)), # too large for the frame
    dict(bg=(12, 0), fg=(8, 0)), # nearer layer moves less
    dict(noise_sigma=-1.0),
])
def test_invalid_specs(kw):
    with pytest.raises(SceneSpecError):
        two_layer(**kw)

def test_layer_outside_frame():
    with pytest.raises(SceneSpecError):
        SceneSpec(width=64, height=64, layers=(Layer((40, 0, 30, 10), (2, 0)),))

def test_scene_file(tmp_path):
    spec = default_suite(1, 256, seed=3, tone_offset=0.05)[0]
    spec.to_file(tmp_path / 'scene.txt')
    assert SceneSpec.from_file(tmp_path / 'scene.txt') == spec
    (tmp_path / 'bad.txt').write_text("width=64\nlayer=1,2,3 4,0 noise\n")
    with pytest.raises(SceneSpecError):
        SceneSpec.from_file(tmp_path / 'bad.txt')

def test_unknown_scene_key():
    with pytest.raises(SceneSpecError):
        SceneSpec.from_mapping({'width': '64', 'depth': '3'})
    with pytest.raises(SceneSpecError):
        Texture.parse('marble 1')
