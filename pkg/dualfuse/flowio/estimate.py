"""Diagnostic flow estimator: coarse-to-fine integer block matching.

Good enough for synthetic pairs when no precomputed flow file is supplied;
not a replacement for a learned flow network. Output is a backward flow on
the wide grid: wide(p) ~ tele(p + F(p)).
"""
__all__ = ['estimate_flow_diagnostic']

import logging

import numpy as np
from scipy import ndimage

from dualfuse.imagecore import ImageBuffer, FlowField, box_sum
from .io_errors import FlowEstimationError

logger = logging.getLogger(__name__)

TEXTURE_EPS = 1e-6 # minimum cost spread (per block pixel) for a trusted match


def _gray(img: ImageBuffer) -> np.ndarray:
    return img.data.mean(axis=2)


def _pyramid(a, levels):
    out = [a]
    for _ in range(levels - 1):
        if min(out[-1].shape) < 8:
            break
        out.append(ndimage.gaussian_filter(out[-1], 1.0, mode='nearest')[::2, ::2])
    return out


def _candidates(radius):
    """Search offsets ordered by length, then raster order (dy, dx)"""
    offsets = [(dy, dx) for dy in range(-radius, radius + 1) for dx in range(-radius, radius + 1)]
    return sorted(offsets, key=lambda d: (d[0] ** 2 + d[1] ** 2, d[0], d[1]))


def _match_level(wide, tele, init_u, init_v, radius, block):
    h, w = wide.shape
    ys, xs = np.mgrid[0:h, 0:w]
    best_cost = np.full((h, w), np.inf)
    worst_cost = np.full((h, w), -np.inf)
    best_u = init_u.copy()
    best_v = init_v.copy()
    for dy, dx in _candidates(radius):
        cu = init_u + dx
        cv = init_v + dy
        ty = np.clip(ys + cv, 0, h - 1)
        tx = np.clip(xs + cu, 0, w - 1)
        cost, _ = box_sum(np.abs(wide - tele[ty, tx]), block)
        better = cost < best_cost # strict: earlier (shorter) candidates win ties
        best_cost = np.where(better, cost, best_cost)
        worst_cost = np.maximum(worst_cost, cost)
        best_u = np.where(better, cu, best_u)
        best_v = np.where(better, cv, best_v)
    spread = (worst_cost - best_cost) / (block * block)
    return best_u, best_v, spread > TEXTURE_EPS


def estimate_flow_diagnostic(wide: ImageBuffer, tele: ImageBuffer, levels=3, search_radius=4, block=7) -> FlowField:
    """Estimate the backward flow from the wide grid into the tele image.
    Args:
        wide, tele: images on the same grid (tele already resampled to the overlap)
        levels: pyramid levels, coarse to fine
        search_radius: per-level search radius in pixels
        block: odd SAD block size
    Returns:
        Integer-valued FlowField; textureless pixels are marked invalid (low confidence)
    Raises:
        FlowEstimationError: grids differ or arguments out of range
    """
    if wide.shape != tele.shape:
        raise FlowEstimationError(f"wide {wide.shape} and tele {tele.shape} must share one grid")
    if levels < 1 or search_radius < 0 or block < 1 or block % 2 == 0:
        raise FlowEstimationError(f"bad estimator settings: levels={levels}, radius={search_radius}, block={block}")

    wide_pyr = _pyramid(_gray(wide), levels)
    tele_pyr = _pyramid(_gray(tele), levels)
    logger.info("Diagnostic flow: %d level(s), radius %d, block %d", len(wide_pyr), search_radius, block)

    u = np.zeros(wide_pyr[-1].shape, dtype=np.intp)
    v = np.zeros_like(u)
    valid = None
    for lw, lt in zip(reversed(wide_pyr), reversed(tele_pyr)):
        if u.shape != lw.shape:
            # upsample the coarser estimate: repeat 2x2, double, crop
            u = (2 * np.repeat(np.repeat(u, 2, 0), 2, 1))[:lw.shape[0], :lw.shape[1]]
            v = (2 * np.repeat(np.repeat(v, 2, 0), 2, 1))[:lw.shape[0], :lw.shape[1]]
        u, v, valid = _match_level(lw, lt, u, v, search_radius, block)

    if not valid.any():
        logger.warning("Diagnostic flow: no textured pixels, every match is low-confidence")
    return FlowField(u.astype(np.float64), v.astype(np.float64), valid)
