"""Laplacian pyramid blending.

REDUCE blurs with the 5-tap binomial kernel and keeps every second sample;
EXPAND inserts zeros, blurs, and divides by the blurred insertion pattern
(x4 in the interior, exact for constants at the borders). Borders reflect
half-sample symmetrically.
"""
__all__ = ['KERNEL', 'auto_levels', 'gaussian_pyramid', 'laplacian_pyramid', 'collapse', 'pyramid_blend']

import logging
import math

import numpy as np
from scipy import ndimage

from dualfuse.imagecore import ImageBuffer, WeightMap, ParameterError, DimensionMismatchError, same_grid

logger = logging.getLogger(__name__)

KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0


def _blur(a):
    a = ndimage.convolve1d(a, KERNEL, axis=0, mode='reflect')
    return ndimage.convolve1d(a, KERNEL, axis=1, mode='reflect')


def _reduce(a):
    return _blur(a)[::2, ::2]


def _expand(a, shape):
    """Upsample `a` to the (height, width) `shape` it was reduced from"""
    zi = np.zeros(tuple(shape) + a.shape[2:])
    zi[::2, ::2] = a
    ones = np.zeros(tuple(shape))
    ones[::2, ::2] = 1.0
    norm = _blur(ones)
    if a.ndim == 3:
        norm = norm[..., None]
    return _blur(zi) / norm


def auto_levels(height, width) -> int:
    """floor(log2(min side)) - 3, clamped to [3, 8]"""
    return min(8, max(3, int(math.floor(math.log2(max(1, min(height, width))))) - 3))


def gaussian_pyramid(a, levels) -> list[np.ndarray]:
    """Finest first; stops early once a level is 1 pixel thin"""
    pyr = [np.asarray(a, dtype=np.float64)]
    while len(pyr) < levels and min(pyr[-1].shape[:2]) > 1:
        pyr.append(_reduce(pyr[-1]))
    return pyr


def laplacian_pyramid(a, levels) -> list[np.ndarray]:
    gauss = gaussian_pyramid(a, levels)
    bands = [g - _expand(coarse, g.shape[:2]) for g, coarse in zip(gauss, gauss[1:])]
    return bands + [gauss[-1]]


def collapse(bands) -> np.ndarray:
    out = bands[-1]
    for band in reversed(bands[:-1]):
        out = band + _expand(out, band.shape[:2])
    return out


def pyramid_blend(a: ImageBuffer, b: ImageBuffer, w: WeightMap, levels) -> ImageBuffer:
    """Multi-band blend: w * a + (1 - w) * b per Laplacian band, w from its Gaussian pyramid.
    w = 1 selects a.
    Raises:
        ParameterError: levels < 1
        DimensionMismatchError: grids or channel counts differ
    """
    if levels < 1:
        raise ParameterError(f"Pyramid levels must be >= 1, got {levels}")
    same_grid(a, b, w, what='pyramid_blend inputs')
    if a.channels != b.channels:
        raise DimensionMismatchError(f"Cannot blend {a.channels} channel(s) with {b.channels}")
    la = laplacian_pyramid(a.data, levels)
    lb = laplacian_pyramid(b.data, levels)
    gw = gaussian_pyramid(w.w, levels)
    bands = [wl[..., None] * x + (1.0 - wl[..., None]) * y for wl, x, y in zip(gw, la, lb)]
    logger.debug("pyramid_blend %dx%d: %d level(s)", a.width, a.height, len(bands))
    return ImageBuffer(collapse(bands))
