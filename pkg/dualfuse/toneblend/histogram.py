"""Regional histogram matching of the telephoto image to the wide image.

The grid is tiled with overlapping block x block windows; each block (and
channel) gets its own CDF-matching lookup table built from the pixels valid
in both images, applied to every source pixel of the block. A pixel's final
value is the plain average over the blocks that cover it.
"""
__all__ = ['BINS', 'quantize', 'match_lut', 'block_starts', 'regional_histogram_match', 'chi_square_distance']

import logging

import numpy as np

from dualfuse.imagecore import ImageBuffer, BinaryMask, FusionConfig, DimensionMismatchError, same_grid

logger = logging.getLogger(__name__)

BINS = 256


def quantize(a) -> np.ndarray:
    """[0, 1] samples -> integer levels 0..255, round half up"""
    return np.clip(np.floor(np.asarray(a) * (BINS - 1) + 0.5), 0, BINS - 1).astype(np.intp)


def match_lut(src_levels, ref_levels) -> np.ndarray:
    """Lookup table (256 values in [0, 1]) taking src levels onto ref by CDF matching.

    Each level maps to the first ref level whose CDF reaches the src CDF.
    CDFs are compared as integer counts cross-multiplied by the sample
    sizes, so matching an image to itself is the identity on present levels.
    """
    src_levels = np.ravel(src_levels)
    ref_levels = np.ravel(ref_levels)
    cdf_src = np.cumsum(np.bincount(src_levels, minlength=BINS)) * ref_levels.size
    cdf_ref = np.cumsum(np.bincount(ref_levels, minlength=BINS)) * src_levels.size
    idx = np.searchsorted(cdf_ref, cdf_src, side='left')
    return np.minimum(idx, BINS - 1) / (BINS - 1)


def block_starts(n, block, stride) -> list[int]:
    """0, stride, 2*stride, ... until a block reaches the end of the axis"""
    starts = [0]
    while starts[-1] + block < n:
        starts.append(starts[-1] + stride)
    return starts


def _kahan_add(total, comp, values):
    y = values - comp
    t = total + y
    comp[...] = (t - total) - y
    total[...] = t


def regional_histogram_match(src: ImageBuffer, ref: ImageBuffer, valid: BinaryMask, cfg: FusionConfig) -> ImageBuffer:
    """Tone-match `src` to `ref` block by block.
    Args:
        src: image to adjust (the transformed telephoto image)
        ref: tone reference on the same grid (the transformed wide image)
        valid: pixels usable in both images; only these shape the histograms
        cfg: rhe_block, rhe_stride and min_block_valid are used
    Returns:
        ImageBuffer; pixels no used block covers keep their src value
    """
    same_grid(src, ref, valid, what='histogram matching inputs')
    if src.channels != ref.channels:
        raise DimensionMismatchError(f"src has {src.channels} channel(s), ref has {ref.channels}")
    h, w = src.shape
    block, stride = cfg.rhe_block, cfg.rhe_stride
    src_q = quantize(src.data)
    ref_q = quantize(ref.data)

    total = np.zeros_like(src.data)
    comp = np.zeros_like(src.data)
    count = np.zeros((h, w), dtype=np.int64)
    skipped = 0
    # fixed block order (rows, then columns) keeps the sums reproducible
    for y0 in block_starts(h, block, stride):
        for x0 in block_starts(w, block, stride):
            win = np.s_[y0:y0 + block, x0:x0 + block]
            mask = valid.bits[win]
            if mask.sum() < cfg.min_block_valid:
                skipped += 1
                continue
            out = np.empty(src_q[win].shape, dtype=np.float64)
            for c in range(src.channels):
                lut = match_lut(src_q[win][..., c][mask], ref_q[win][..., c][mask])
                out[..., c] = lut[src_q[win][..., c]]
            _kahan_add(total[win], comp[win], out)
            count[win] += 1

    covered = count > 0
    result = src.data.copy()
    result[covered] = total[covered] / count[covered][:, None]
    if skipped:
        logger.debug("regional_histogram_match: %d block(s) skipped (< %d valid px)", skipped, cfg.min_block_valid)
    if not covered.all():
        logger.warning("regional_histogram_match: %d px left unmatched", int((~covered).sum()))
    return ImageBuffer(result)


def chi_square_distance(a: ImageBuffer, b: ImageBuffer, valid: BinaryMask) -> float:
    """Symmetric chi-square distance between the 256-bin histograms of a and b
    over valid pixels, summed over channels (histograms normalized to 1)"""
    same_grid(a, b, valid, what='histogram inputs')
    total = 0.0
    for c in range(a.channels):
        ha = np.bincount(quantize(a.plane(c)[valid.bits]), minlength=BINS).astype(np.float64)
        hb = np.bincount(quantize(b.plane(c)[valid.bits]), minlength=BINS).astype(np.float64)
        ha /= max(ha.sum(), 1.0)
        hb /= max(hb.sum(), 1.0)
        both = (ha + hb) > 0
        total += float((((ha - hb) ** 2)[both] / (ha + hb)[both]).sum())
    return total
