"""Backward and forward warping, and the jittered multi-warp average.

Forward warping splats each source pixel to the nearest target pixel
(round half up). Collisions keep the source with the highest priority
(default: displacement magnitude, i.e. the nearer object); equal priorities
keep the larger source raster index. Winner selection is a single
`maximum.at` over packed (priority, index) keys, so the result does not
depend on scan order.
"""
__all__ = ['WarpResult', 'backward_warp', 'forward_warp', 'multi_warp_average']

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from dualfuse.imagecore import ImageBuffer, FlowField, BinaryMask, FusionConfig, DimensionMismatchError, bilinear_grid

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class WarpResult:
    """Warped raster plus the pixels that received at least one splat / in-range sample"""
    image: Union[ImageBuffer, FlowField]
    validity: BinaryMask

    def __post_init__(self):
        if tuple(self.image.shape) != tuple(self.validity.shape):
            raise DimensionMismatchError(f"validity {self.validity.shape} does not match image {self.image.shape}")


def _grid(shape):
    ys, xs = np.mgrid[0:shape[0], 0:shape[1]]
    return xs.astype(np.float64), ys.astype(np.float64)


def backward_warp(src: ImageBuffer, f: FlowField, with_validity=False):
    """out(p) = src(p + f(p)), bilinear; the flow grid defines the output grid.
    Returns:
        ImageBuffer, or (ImageBuffer, BinaryMask) when `with_validity` is set;
        out-of-range samples clamp to the edge and are reported invalid
    """
    xs, ys = _grid(f.shape)
    values, in_range = bilinear_grid(src, xs + f.u, ys + f.v)
    out = ImageBuffer(values)
    if with_validity:
        return out, BinaryMask(in_range & f.valid)
    return out


def _packed_keys(priority, n):
    # non-negative float32 bit patterns sort like their values
    bits = np.ascontiguousarray(priority, dtype=np.float32).view(np.uint32).astype(np.uint64)
    return (bits << np.uint64(32)) | np.arange(n, dtype=np.uint64)


def forward_warp(src: Union[ImageBuffer, FlowField], disp: FlowField, priority: Optional[np.ndarray] = None) -> WarpResult:
    """Push every source pixel p to round(p + disp(p)).
    Args:
        src: image or flow field carried to the new positions
        disp: displacement field on the source grid
        priority: per-source collision priority (>= 0); defaults to |disp|
    Returns:
        WarpResult of the same kind as `src`; unhit pixels are invalid (and 0)
    """
    if tuple(src.shape) != tuple(disp.shape):
        raise DimensionMismatchError(f"source {src.shape} and displacement {disp.shape} differ")
    h, w = disp.shape
    is_flow = isinstance(src, FlowField)
    values = src.stack() if is_flow else src.data
    source_ok = disp.valid & (src.valid if is_flow else True)
    if priority is None:
        priority = disp.magnitude()
    priority = np.abs(np.asarray(priority, dtype=np.float64))

    xs, ys = _grid((h, w))
    tx = np.floor(xs + disp.u + 0.5).astype(np.int64)
    ty = np.floor(ys + disp.v + 0.5).astype(np.int64)
    ok = source_ok & (tx >= 0) & (tx < w) & (ty >= 0) & (ty < h)

    flat_src = np.flatnonzero(ok)
    flat_dst = (ty * w + tx).ravel()[flat_src]
    keys = _packed_keys(priority.ravel(), h * w)[flat_src]

    best = np.zeros(h * w, dtype=np.uint64)
    np.maximum.at(best, flat_dst, keys)
    hit = np.zeros(h * w, dtype=bool)
    hit[flat_dst] = True

    winner = (best[hit] & np.uint64(0xFFFFFFFF)).astype(np.intp)
    flat_values = values.reshape(h * w, -1)
    out = np.zeros_like(flat_values)
    out[hit] = flat_values[winner]
    out = out.reshape(values.shape)
    hit = hit.reshape(h, w)

    logger.debug("forward_warp %dx%d: %d sources, %d targets hit", w, h, flat_src.size, int(hit.sum()))
    if is_flow:
        return WarpResult(FlowField.from_stack(out, hit), BinaryMask(hit))
    return WarpResult(ImageBuffer(out), BinaryMask(hit))


def multi_warp_average(src: ImageBuffer, disp: FlowField, cfg: FusionConfig, priority: Optional[np.ndarray] = None) -> WarpResult:
    """Average forward warps of `src` over the sub-pixel jitter grid.

    Every (du, dv) in cfg.offset_grid() x cfg.offset_grid() (u outer, v inner)
    adds a warp by disp + (du, dv); each pixel averages the warps that hit it.
    Collision priority comes from the unjittered field. With
    `cfg.multi_warp` off, a single unjittered warp is returned.
    """
    if priority is None:
        priority = disp.magnitude()
    if not cfg.multi_warp:
        return forward_warp(src, disp, priority)

    grid = cfg.offset_grid()
    offsets = [(du, dv) for du in grid for dv in grid]
    logger.debug("multi_warp_average: %d warps, %d worker(s)", len(offsets), cfg.workers)

    def one(offset):
        du, dv = offset
        return forward_warp(src, FlowField(disp.u + du, disp.v + dv, disp.valid), priority)

    total = np.zeros_like(src.data)
    count = np.zeros(src.shape, dtype=np.float64)
    # results are folded in grid order whatever the worker count
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        for result in pool.map(one, offsets):
            total += result.image.data
            count += result.validity.bits

    hit = count > 0
    avg = np.zeros_like(total)
    avg[hit] = total[hit] / count[hit][:, None]
    return WarpResult(ImageBuffer(avg), BinaryMask(hit))
