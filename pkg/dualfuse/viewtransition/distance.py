"""Distance to the overlap boundary, relaxed across flow discontinuities.

Each pixel casts four axis-aligned rays. A ray that reaches the boundary
without passing a non-connected point (flow-magnitude jump above the
gradient threshold) counts its length; a blocked ray counts as infinite.
The distance is the shortest ray, or max(H, W) when every ray is blocked,
so objects cut loose from the border get a large transformation budget.
"""
__all__ = ['non_connected_points', 'baseline_distance', 'distance_map']

import logging

import numpy as np

from dualfuse.imagecore import FlowField, BinaryMask, DistanceMap, FusionConfig

logger = logging.getLogger(__name__)


def non_connected_points(f: FlowField, threshold) -> BinaryMask:
    """Pixels whose flow magnitude differs from a 4-neighbor by more than `threshold`"""
    mag = f.magnitude()
    nc = np.zeros(f.shape, dtype=bool)
    dx = np.abs(np.diff(mag, axis=1)) > threshold
    dy = np.abs(np.diff(mag, axis=0)) > threshold
    nc[:, :-1] |= dx
    nc[:, 1:] |= dx
    nc[:-1, :] |= dy
    nc[1:, :] |= dy
    return BinaryMask(nc)


def _lengths(h, w):
    ys, xs = np.mgrid[0:h, 0:w]
    return xs, w - 1 - xs, ys, h - 1 - ys # left, right, up, down


def baseline_distance(height, width) -> DistanceMap:
    """Plain distance to the nearest border (0 on the outer ring)"""
    return DistanceMap(np.minimum.reduce(_lengths(height, width)).astype(np.float64))


def _blocked(nc, axis):
    """(before, after): any non-connected point strictly before / after each pixel along axis"""
    c = np.cumsum(nc, axis=axis)
    total = np.take(c, [-1], axis=axis)
    return (c - nc) > 0, (total - c) > 0


def distance_map(f: FlowField, cfg: FusionConfig) -> DistanceMap:
    """Per-pixel transformation budget scale (see module doc).
    cfg.distance_mode 'baseline' skips the relaxation.
    """
    h, w = f.shape
    if cfg.distance_mode == 'baseline':
        return baseline_distance(h, w)

    nc = non_connected_points(f, cfg.gradient_threshold).bits
    left_b, right_b = _blocked(nc, 1)
    up_b, down_b = _blocked(nc, 0)
    rays = [
        np.where(blocked, np.inf, length)
        for blocked, length in zip((left_b, right_b, up_b, down_b), _lengths(h, w))
    ]
    d = np.minimum.reduce(rays)
    decoupled = np.isinf(d)
    d[decoupled] = max(h, w)
    logger.debug("distance_map: %d non-connected px, %d fully decoupled px", int(nc.sum()), int(decoupled.sum()))
    return DistanceMap(d.astype(np.float64))
