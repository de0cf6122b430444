"""Summed-area tables and the box filter built on them.

Table convention (exclusive prefix): for an H x W input the table is
(H+1) x (W+1), table[r, c] = sum of input[:r, :c]. The inclusive sum over
(0,0)..(r,c) is therefore table[r+1, c+1]. Any rectangle sum costs four
lookups, so box filtering is O(n) whatever the window size.
"""
__all__ = ['integral_image', 'rect_sum', 'normalize_kernel', 'box_sum', 'box_mean', 'box_filter']

import logging

import numpy as np

from .core_errors import ParameterError
from .raster import ImageBuffer

logger = logging.getLogger(__name__)


def _as_array(img) -> np.ndarray:
    return img.data if isinstance(img, ImageBuffer) else np.asarray(img, dtype=np.float64)


def integral_image(img) -> np.ndarray:
    """Summed-area table of an image (ImageBuffer or array).
    Returns:
        float64 array shaped (H+1, W+1) or (H+1, W+1, C), matching the input rank
    """
    a = _as_array(img)
    table = np.zeros((a.shape[0] + 1, a.shape[1] + 1) + a.shape[2:], dtype=np.float64)
    table[1:, 1:] = np.cumsum(np.cumsum(a, axis=0, dtype=np.float64), axis=1)
    return table


def rect_sum(table, y0, x0, y1, x1):
    """Sum over rows y0..y1-1, cols x0..x1-1 (half-open). Index args may be arrays."""
    return table[y1, x1] - table[y0, x1] - table[y1, x0] + table[y0, x0]


def normalize_kernel(k) -> int:
    """Validate a window size; even sizes round up to the next odd one"""
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ParameterError(f"Kernel size must be a positive integer, got {k!r}")
    k = int(k)
    return k + 1 if k % 2 == 0 else k


def _window_bounds(n, r):
    idx = np.arange(n)
    return np.clip(idx - r, 0, n), np.clip(idx + r + 1, 0, n)


def box_sum(a, k):
    """Windowed sums and in-bounds pixel counts for a centered k x k window.
    Returns:
        (sums, counts); counts is 2-D
    """
    k = normalize_kernel(k)
    a = _as_array(a)
    h, w = a.shape[:2]
    r = k // 2
    y0, y1 = _window_bounds(h, r)
    x0, x1 = _window_bounds(w, r)
    table = integral_image(a)
    sums = rect_sum(table, *(np.ix_(y0, x0) + np.ix_(y1, x1)))
    counts = np.outer(y1 - y0, x1 - x0).astype(np.float64)
    return sums, counts


def box_mean(a, k) -> np.ndarray:
    """Mean over the in-bounds part of each centered k x k window (array in, array out)"""
    sums, counts = box_sum(a, k)
    if sums.ndim == 3:
        counts = counts[..., None]
    return sums / counts


def box_filter(img: ImageBuffer, k) -> ImageBuffer:
    """Box-filter an image; borders normalize by the in-bounds count.
    Raises:
        ParameterError: k <= 0
    """
    logger.debug("box_filter %dx%d k=%s", img.width, img.height, k)
    return ImageBuffer(box_mean(img.data, k))
