import numpy as np
import pytest

from dualfuse.imagecore import ImageBuffer, BinaryMask, FusionConfig
from .blend_errors import RectOutOfBoundsError
from .compose import fuse_overlap, full_view_weights, compose_full_view
from .histogram import regional_histogram_match

CFG = FusionConfig(rhe_block=64, rhe_stride=16, pyramid_levels=3, overlap_soft_width=20)


def textured(shape, seed):
    rng = np.random.default_rng(seed)
    return ImageBuffer(rng.integers(20, 180, size=shape) / 255.0)


def overlap_pair(shape=(128, 128, 3)):
    tele = textured(shape, 0)
    wide = ImageBuffer(np.clip(tele.data * 0.85 + 0.1, 0, 1))
    return tele, wide


def test_no_occlusion_gives_matched_tele():
    tele, wide = overlap_pair()
    occ = BinaryMask.empty(128, 128)
    out = fuse_overlap(tele, wide, occ, CFG)
    matched = regional_histogram_match(tele, wide, BinaryMask(np.ones((128, 128), bool)), CFG)
    assert np.abs(out.data - matched.data).max() <= 1e-6

def test_full_occlusion_gives_wide():
    tele, wide = overlap_pair()
    out = fuse_overlap(tele, wide, BinaryMask(np.ones((128, 128), bool)), CFG)
    assert np.abs(out.data - wide.data).max() <= 1e-6

def test_precomputed_match_is_used():
    tele, wide = overlap_pair()
    out = fuse_overlap(tele, wide, BinaryMask.empty(128, 128), CFG, matched=tele)
    assert np.abs(out.data - tele.data).max() <= 1e-6

def test_band_regions():
    tele, wide = overlap_pair()
    occ = np.zeros((128, 128), bool)
    occ[:, 30:80] = True
    out = fuse_overlap(tele, wide, BinaryMask(occ), CFG)
    matched = regional_histogram_match(tele, wide, BinaryMask(~occ), CFG)
    assert np.abs(out.data[:, 45:66] - wide.data[:, 45:66]).max() <= 2 / 255
    assert np.abs(out.data[:, 112:] - matched.data[:, 112:]).max() <= 2 / 255
    assert np.isfinite(out.data).all()

def test_full_view_weights_ramp_interior_edges_only():
    m = full_view_weights((40, 40), (10, 10, 20, 20), 4).w
    assert m[10, 10] == pytest.approx(0.2)
    assert m[20, 20] == 1.0
    assert m[:10].max() == 0.0 and m[:, 30:].max() == 0.0
    m = full_view_weights((40, 40), (0, 0, 20, 40), 4).w
    assert (m[:, 0] == 1.0).all()
    np.testing.assert_allclose(m[:, 19], 0.2)
    assert (m[:, 20:] == 0.0).all()

def test_full_frame_overlap_gives_overlap():
    iO = textured((64, 64, 3), 1)
    out = compose_full_view(iO, textured((64, 64, 3), 2), (0, 0), CFG)
    assert np.abs(out.data - iO.data).max() <= 1e-6

def test_matching_crop_gives_wide():
    wide = textured((96, 120, 3), 3)
    iO = wide.crop(30, 20, 50, 40)
    out = compose_full_view(iO, wide, (30, 20), CFG)
    assert np.abs(out.data - wide.data).max() <= 1e-6

def test_seam_ramp_profile():
    wide = ImageBuffer.full(256, 256, 0.0, channels=1)
    iO = ImageBuffer.full(128, 128, 1.0, channels=1)
    out = compose_full_view(iO, wide, (64, 64), CFG).data[..., 0]
    row = out[128]
    assert (row[:64] == 0.0).all() and (row[192:] == 0.0).all()
    assert row[64] < 0.5
    assert row[64:74].mean() < row[74:84].mean() < row[84:94].mean()
    assert np.abs(row[104:150] - 1.0).max() <= 1e-9

def test_outside_rect_bit_exact():
    wide = textured((100, 140, 3), 4)
    iO = textured((50, 60, 3), 5)
    out = compose_full_view(iO, wide, (40, 25), CFG).data
    outside = np.ones((100, 140), bool)
    outside[25:75, 40:100] = False
    assert (out[outside] == wide.data[outside]).all()

def test_rect_out_of_bounds():
    with pytest.raises(RectOutOfBoundsError):
        compose_full_view(ImageBuffer.full(30, 30), ImageBuffer.full(40, 40), (20, 0), CFG)
