"""Occlusion from a single backward flow, and soft blend weights.

The telephoto camera sits up and to the left of the wide one, so a nearer
(foreground) surface hides background on its left and upper sides. A
foreground pixel next to background on the left / upper side seeds a
rectangle reaching back from it by the flow difference; the union of those
rectangles, restricted to background pixels, is the occluded region.
"""
__all__ = ['NEIGHBORS', 'foreground_mask', 'compute_occlusion', 'soften_mask', 'occlusion_area_pct']

import logging

import numpy as np
from scipy import ndimage

from dualfuse.imagecore import FlowField, BinaryMask, WeightMap, FusionConfig, ParameterError, box_mean

logger = logging.getLogger(__name__)

# (dy, dx) of the neighbors on the left / upper side
NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (1, -1))
FOREGROUND_TOL = 1e-9


def _neighbor(a, dy, dx, fill):
    """out[j, i] = a[j + dy, i + dx], `fill` where that falls off the grid"""
    h, w = a.shape
    out = np.full_like(a, fill)
    out[max(0, -dy):h - max(0, dy), max(0, -dx):w - max(0, dx)] = \
        a[max(0, dy):h + min(0, dy), max(0, dx):w + min(0, dx)]
    return out


def _rect_union(seed, up, left):
    """Union of the rectangles [j - up, j] x [i - left, i] over seed pixels (j, i)"""
    h, w = seed.shape
    # vertical pass: reach[y, i] = 1 + widest rectangle anchored in column i covering row y
    reach = np.zeros((h, w), dtype=np.int64)
    span = np.where(seed, left + 1, 0)
    for dy in range(int(up[seed].max()) + 1 if seed.any() else 0):
        active = np.where(seed[dy:] & (up[dy:] >= dy), span[dy:], 0)
        reach[:h - dy] = np.maximum(reach[:h - dy], active)
    # horizontal pass: covered if some anchor at or right of x starts at or left of x
    cols = np.arange(w)
    start = np.where(reach > 0, cols - (reach - 1), w)
    first = np.flip(np.minimum.accumulate(np.flip(start, axis=1), axis=1), axis=1)
    return first <= cols


def foreground_mask(f: FlowField, k) -> np.ndarray:
    """|f| above its k x k local mean"""
    mag = f.magnitude()
    return mag > box_mean(mag, k) + FOREGROUND_TOL


def compute_occlusion(f: FlowField, cfg: FusionConfig) -> BinaryMask:
    """Occluded wide-grid pixels for backward flow f (see module doc).

    Rectangle extents are the per-axis flow differences between the seed and
    its background neighbor, rounded half up; seeds with both extents 0 are
    ignored.
    """
    fg = foreground_mask(f, cfg.kernel)
    occ = np.zeros(f.shape, dtype=bool)
    for dy, dx in NEIGHBORS:
        seed = fg & ~_neighbor(fg, dy, dx, True)
        up = np.floor(np.abs(_neighbor(f.v, dy, dx, 0.0) - f.v) + 0.5).astype(np.int64)
        left = np.floor(np.abs(_neighbor(f.u, dy, dx, 0.0) - f.u) + 0.5).astype(np.int64)
        seed &= (up > 0) | (left > 0)
        if seed.any():
            occ |= _rect_union(seed, up, left)
    occ &= ~fg
    logger.debug("compute_occlusion k=%d: %d foreground px, %d occluded px", cfg.kernel, int(fg.sum()), int(occ.sum()))
    return BinaryMask(occ)


def soften_mask(m: BinaryMask, width) -> WeightMap:
    """1 on the mask, falling linearly to 0 at `width` pixels (Euclidean) away from it.
    Raises:
        ParameterError: negative width
    """
    if width < 0:
        raise ParameterError(f"Soft width must be >= 0, got {width}")
    if width == 0 or not m.bits.any():
        return WeightMap(m.bits.astype(np.float64))
    dist = ndimage.distance_transform_edt(~m.bits)
    return WeightMap(np.clip(1.0 - dist / width, 0.0, 1.0))


def occlusion_area_pct(m: BinaryMask) -> float:
    return 100.0 * m.count() / m.size
