"""Bounded flow adjustment, hole filling, and the transformed telephoto image"""
__all__ = ['clip_flow', 'fill_empty', 'transform_flow', 'warp_tele']

import logging
from typing import Optional

import numpy as np

from dualfuse.imagecore import ImageBuffer, FlowField, DistanceMap, FusionConfig, same_grid
from dualfuse.warp import forward_warp, backward_warp
from .transition_errors import InvalidFlowError, EmptyFlowError

logger = logging.getLogger(__name__)


def _clamp_exact(target, base, bound):
    """clip(target, base - bound, base + bound), then pull values whose
    rounded offset still exceeds `bound` one ulp at a time towards base"""
    out = np.clip(target, base - bound, base + bound)
    over = np.abs(out - base) > bound
    while over.any():
        out[over] = np.nextafter(out[over], base[over])
        over = np.abs(out - base) > bound
    return out


def clip_flow(f: FlowField, fstar: FlowField, dist: DistanceMap, ratio) -> FlowField:
    """Move f towards fstar by at most ratio * dist per component.
    Guarantees |f_hat - f| <= ratio * dist exactly in floating point, so the
    outer ring (dist 0) keeps f bit for bit.
    """
    same_grid(f, fstar, dist, what='clip_flow inputs')
    bound = ratio * dist.d
    u = _clamp_exact(fstar.u, f.u, bound)
    v = _clamp_exact(fstar.v, f.v, bound)
    return FlowField(u, v, f.valid & fstar.valid)


def _nearest_index(valid, axis, reverse):
    """Index of the nearest valid pixel at or before (after, if reverse) each pixel along axis; -1 if none"""
    n = valid.shape[axis]
    idx = np.arange(n).reshape((-1, 1) if axis == 0 else (1, -1))
    if not reverse:
        near = np.maximum.accumulate(np.where(valid, idx, -1), axis=axis)
        return near
    flipped = np.flip(np.where(valid, idx, n), axis=axis)
    near = np.flip(np.minimum.accumulate(flipped, axis=axis), axis=axis)
    return np.where(near == n, -1, near)


def fill_empty(f: FlowField) -> FlowField:
    """Fill invalid pixels from the nearest valid pixel along the four axis directions.

    Among the candidates the smallest flow magnitude wins (background
    preference); ties resolve left, up, right, down. Passes repeat until
    every pixel is valid.
    Raises:
        EmptyFlowError: no valid pixel to propagate
    """
    if not f.valid.any():
        raise EmptyFlowError("Cannot fill a flow field with no valid pixels")
    u, v, valid = f.u.copy(), f.v.copy(), f.valid.copy()
    h, w = f.shape
    ys, xs = np.mgrid[0:h, 0:w]
    passes = 0
    while not valid.all():
        passes += 1
        mag = np.hypot(u, v)
        left = _nearest_index(valid, 1, False)
        up = _nearest_index(valid, 0, False)
        right = _nearest_index(valid, 1, True)
        down = _nearest_index(valid, 0, True)
        sources = [(ys, left), (up, xs), (ys, right), (down, xs)] # tie priority order
        cost = np.stack([
            np.where((sy >= 0) & (sx >= 0), mag[np.maximum(sy, 0), np.maximum(sx, 0)], np.inf)
            for sy, sx in sources
        ])
        choice = np.argmin(cost, axis=0)
        fill = ~valid & np.isfinite(cost.min(axis=0))
        sy = np.choose(choice, [s[0] for s in sources])
        sx = np.choose(choice, [s[1] for s in sources])
        u[fill] = u[sy[fill], sx[fill]]
        v[fill] = v[sy[fill], sx[fill]]
        valid = valid | fill
    if passes:
        logger.debug("fill_empty: %d hole px filled in %d pass(es)", int((~f.valid).sum()), passes)
    return FlowField(u, v)


def transform_flow(f: FlowField, fhat: FlowField, cfg: Optional[FusionConfig] = None, priority=None) -> FlowField:
    """Revise pixel coordinates by the adjustment fhat - f and fill the exposed holes.

    The stored value is fhat ('literal'), or 2f - fhat ('ray', which keeps
    each moved pixel on its original telephoto sample). Collisions keep the
    source with the largest |f| unless another priority is given.
    Returns:
        fully valid transformed flow
    """
    same_grid(f, fhat, what='transform_flow inputs')
    mode = cfg.transition_value if cfg else 'literal'
    disp = FlowField(fhat.u - f.u, fhat.v - f.v)
    if mode == 'ray':
        values = FlowField(2 * f.u - fhat.u, 2 * f.v - fhat.v)
    else:
        values = fhat
    warped = forward_warp(values, disp, f.magnitude() if priority is None else priority)
    logger.debug("transform_flow (%s): %d px exposed", mode, int((~warped.validity.bits).sum()))
    return fill_empty(warped.image)


def warp_tele(tele: ImageBuffer, fto: FlowField, with_validity=False):
    """Backward-warp the telephoto image with the transformed flow.
    Returns:
        the warped telephoto overlap, plus the in-range mask when `with_validity` is set
    Raises:
        InvalidFlowError: fto has holes
    """
    if not fto.fully_valid:
        raise InvalidFlowError("warp_tele needs a fully valid flow")
    return backward_warp(tele, fto, with_validity=with_validity)
