"""Overlap fusion and placement of the overlap result into the full wide frame"""
__all__ = ['pyramid_levels_for', 'overlap_weights', 'fuse_overlap', 'full_view_weights', 'compose_full_view']

import logging
from typing import Optional

import numpy as np

from dualfuse.imagecore import ImageBuffer, BinaryMask, WeightMap, FusionConfig, DimensionMismatchError, same_grid
from dualfuse.occlusion import soften_mask
from .blend_errors import RectOutOfBoundsError
from .histogram import regional_histogram_match
from .pyramid import auto_levels, pyramid_blend

logger = logging.getLogger(__name__)


def pyramid_levels_for(shape, cfg: FusionConfig) -> int:
    return cfg.pyramid_levels or auto_levels(*shape)


def overlap_weights(occ: BinaryMask, cfg: FusionConfig) -> WeightMap:
    """1 on occluded pixels (take the wide view), ramping to 0 over occ_soft_width"""
    return soften_mask(occ, cfg.occ_soft_width)


def fuse_overlap(itO: ImageBuffer, iwO: ImageBuffer, occ: BinaryMask, cfg: FusionConfig,
                 valid: Optional[BinaryMask] = None, matched: Optional[ImageBuffer] = None) -> ImageBuffer:
    """Blend the transformed telephoto and wide images of the overlap region.

    Occluded pixels come from iwO, the rest from itO after tone matching to
    iwO. Histograms only see pixels that are in `valid` and not occluded.
    Args:
        valid: pixels where both images hold real samples (default: all)
        matched: tone-matched itO, when the caller already computed it
    """
    same_grid(itO, iwO, occ, what='fuse_overlap inputs')
    if matched is None:
        usable = ~occ.bits if valid is None else valid.bits & ~occ.bits
        matched = regional_histogram_match(itO, iwO, BinaryMask(usable), cfg)
    w = overlap_weights(occ, cfg)
    return pyramid_blend(iwO, matched, w, pyramid_levels_for(itO.shape, cfg))


def full_view_weights(frame_shape, rect, width) -> WeightMap:
    """Overlap mask on the full frame: 0 outside `rect`, 1 inside, with a
    linear inward ramp min(1, (t + 1) / (width + 1)) at rect edges that lie
    inside the frame (t = pixels from the edge)."""
    fh, fw = frame_shape
    x, y, w, h = rect
    ys = np.arange(h)[:, None]
    xs = np.arange(w)[None, :]
    t = np.full((h, w), np.inf)
    if x > 0:
        t = np.minimum(t, xs)
    if y > 0:
        t = np.minimum(t, ys)
    if x + w < fw:
        t = np.minimum(t, w - 1 - xs)
    if y + h < fh:
        t = np.minimum(t, h - 1 - ys)
    m = np.zeros((fh, fw))
    m[y:y + h, x:x + w] = np.minimum(1.0, (t + 1.0) / (width + 1.0))
    return WeightMap(m)


def compose_full_view(iO: ImageBuffer, wideFull: ImageBuffer, overlap_origin, cfg: FusionConfig) -> ImageBuffer:
    """Put the overlap result back into the full wide frame with a soft seam.
    Pixels outside the overlap rectangle are copied unchanged from wideFull.
    Raises:
        RectOutOfBoundsError: the overlap does not fit inside wideFull
    """
    x, y = overlap_origin
    h, w = iO.shape
    fh, fw = wideFull.shape
    if x < 0 or y < 0 or x + w > fw or y + h > fh:
        raise RectOutOfBoundsError(f"Overlap {w}x{h} at ({x}, {y}) does not fit a {fw}x{fh} frame")
    if iO.channels != wideFull.channels:
        raise DimensionMismatchError(f"Overlap has {iO.channels} channel(s), frame has {wideFull.channels}")

    framed = wideFull.data.copy()
    framed[y:y + h, x:x + w] = iO.data
    m = full_view_weights((fh, fw), (x, y, w, h), cfg.overlap_soft_width)
    out = pyramid_blend(ImageBuffer(framed), wideFull, m, pyramid_levels_for((fh, fw), cfg)).data
    outside = m.w == 0.0
    out[outside] = wideFull.data[outside]
    logger.debug("compose_full_view: %dx%d overlap at (%d, %d) in %dx%d", w, h, x, y, fw, fh)
    return ImageBuffer(out)
