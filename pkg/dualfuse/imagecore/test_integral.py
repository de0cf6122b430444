import time

import numpy as np
import pytest

from .integral import integral_image, rect_sum, box_mean, box_filter, normalize_kernel
from .raster import ImageBuffer
from .core_errors import ParameterError


def brute_mean(a, k):
    h, w = a.shape
    r = k // 2
    out = np.empty_like(a)
    for y in range(h):
        for x in range(w):
            out[y, x] = a[max(0, y - r):y + r + 1, max(0, x - r):x + r + 1].mean()
    return out


def test_single_pixel():
    assert integral_image(ImageBuffer(np.array([[5.0]])))[1, 1, 0] == 5.0

def test_ones():
    t = integral_image(np.ones((2, 2)))
    assert t.shape == (3, 3)
    assert t[2, 2] == 4.0
    assert (t[0] == 0).all() and (t[:, 0] == 0).all()

def test_rectangles_exact():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 256, (8, 8)).astype(float)
    t = integral_image(a)
    for y0 in range(8):
        for y1 in range(y0 + 1, 9):
            for x0 in range(8):
                for x1 in range(x0 + 1, 9):
                    assert rect_sum(t, y0, x0, y1, x1) == a[y0:y1, x0:x1].sum()

def test_kernel_normalization():
    assert normalize_kernel(600) == 601
    assert normalize_kernel(1) == 1
    for bad in (0, -3, 2.5):
        with pytest.raises(ParameterError):
            normalize_kernel(bad)

def test_box_filter_constant():
    img = ImageBuffer.full(7, 5, 0.3)
    out = box_filter(img, 31)
    np.testing.assert_allclose(out.data, 0.3, atol=1e-12)

def test_box_filter_impulse():
    a = np.zeros((9, 9))
    a[4, 4] = 1.0
    out = box_mean(a, 3)
    expected = np.zeros((9, 9))
    expected[3:6, 3:6] = 1 / 9
    np.testing.assert_allclose(out, expected, atol=1e-12)

@pytest.mark.parametrize('k', [1, 3, 5, 31])
def test_box_filter_matches_brute_force(k):
    a = np.random.default_rng(k).random((64, 64))
    np.testing.assert_allclose(box_mean(a, k), brute_mean(a, k), atol=1e-4)

def test_box_filter_channels():
    a = np.random.default_rng(1).random((16, 12, 3))
    out = box_filter(ImageBuffer(a), 5)
    for c in range(3):
        np.testing.assert_allclose(out.data[..., c], brute_mean(a[..., c], 5), atol=1e-10)

def test_box_filter_rejects_bad_kernel():
    with pytest.raises(ParameterError):
        box_filter(ImageBuffer.full(3, 3), 0)

def test_runtime_independent_of_kernel():
    a = np.random.default_rng(2).random((1024, 1024))

    def best(k):
        times = []
        for _ in range(3):
            start = time.perf_counter()
            box_mean(a, k)
            times.append(time.perf_counter() - start)
        return min(times)

    small, large = best(3), best(301)
    assert large < 2 * small and small < 2 * large
