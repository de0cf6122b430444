"""Sampling primitives: bilinear lookup, resizing, flow magnitude"""
__all__ = ['bilinear_grid', 'bilinear_sample', 'resize_bilinear', 'flow_magnitude']

import logging

import numpy as np

from .raster import ImageBuffer, FlowField

logger = logging.getLogger(__name__)


def bilinear_grid(a, xs, ys):
    """Bilinear lookup of array `a` (HxW or HxWxC) at coordinate arrays xs, ys.

    Coordinates outside [0, W-1] x [0, H-1] clamp to the edge. Integer
    coordinates return the stored sample exactly.
    Returns:
        (values, in_range); values has the shape of xs (plus C), in_range is boolean
    """
    a = a.data if isinstance(a, ImageBuffer) else np.asarray(a, dtype=np.float64)
    h, w = a.shape[:2]
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    in_range = (xs >= 0) & (xs <= w - 1) & (ys >= 0) & (ys <= h - 1)

    x = np.clip(xs, 0, w - 1)
    y = np.clip(ys, 0, h - 1)
    x0 = np.floor(x).astype(np.intp)
    y0 = np.floor(y).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = x - x0
    fy = y - y0
    if a.ndim == 3:
        fx = fx[..., None]
        fy = fy[..., None]

    top = a[y0, x0] * (1 - fx) + a[y0, x1] * fx
    bot = a[y1, x0] * (1 - fx) + a[y1, x1] * fx
    return top * (1 - fy) + bot * fy, in_range


def bilinear_sample(img: ImageBuffer, x, y, with_validity=False):
    """Sample an image at (x, y) (scalars or arrays).
    Returns:
        per-channel values; with `with_validity`, a (values, in_range) tuple
    """
    values, in_range = bilinear_grid(img, x, y)
    if with_validity:
        return values, in_range
    return values


def resize_bilinear(img: ImageBuffer, height, width) -> ImageBuffer:
    """Resample onto a height x width grid, pixel centers aligned"""
    if (height, width) == img.shape:
        return img.copy()
    logger.debug("Resizing %dx%d -> %dx%d", img.width, img.height, width, height)
    sy = img.height / height
    sx = img.width / width
    ys = (np.arange(height) + 0.5) * sy - 0.5
    xs = (np.arange(width) + 0.5) * sx - 0.5
    gy, gx = np.meshgrid(ys, xs, indexing='ij')
    values, _ = bilinear_grid(img, gx, gy)
    return ImageBuffer(values)


def flow_magnitude(f: FlowField) -> ImageBuffer:
    """Per-pixel sqrt(u^2 + v^2) as a one-channel image"""
    return ImageBuffer(f.magnitude())
