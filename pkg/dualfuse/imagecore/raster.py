"""Raster types shared by every stage.

All rasters are numpy arrays indexed [row, col] (y, x). Samples are float64,
normalized to [0, 1] for images; 8-bit only exists at the file boundary.
"""
__all__ = ['ImageBuffer', 'FlowField', 'BinaryMask', 'WeightMap', 'DistanceMap', 'same_grid']

from dataclasses import dataclass, field

import numpy as np

from .core_errors import InvalidBufferError, DimensionMismatchError


def _plane(a, name, dtype=np.float64):
    a = np.asarray(a, dtype=dtype)
    if a.ndim != 2:
        raise InvalidBufferError(f"{name} must be a 2-D array, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise InvalidBufferError(f"{name} must be at least 1x1, got shape {a.shape}")
    return a


class _Grid:
    """Shape helpers for anything with a (height, width) grid"""

    @property
    def shape(self) -> tuple[int, int]:
        raise NotImplementedError

    @property
    def height(self) -> int:
        return self.shape[0]

    @property
    def width(self) -> int:
        return self.shape[1]

    @property
    def size(self) -> int:
        return self.shape[0] * self.shape[1]


@dataclass(eq=False)
class ImageBuffer(_Grid):
    """H x W x C image, C in (1, 3). A 2-D array is taken as one channel."""
    data: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.data, dtype=np.float64)
        if a.ndim == 2:
            a = a[..., None]
        if a.ndim != 3 or a.shape[2] not in (1, 3):
            raise InvalidBufferError(f"Image must be HxW, HxWx1 or HxWx3, got shape {np.shape(self.data)}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise InvalidBufferError(f"Image must be at least 1x1, got shape {a.shape}")
        if not np.isfinite(a).all():
            raise InvalidBufferError("Image holds non-finite samples")
        self.data = a

    @property
    def shape(self):
        return self.data.shape[:2]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def plane(self, c=0) -> np.ndarray:
        return self.data[..., c]

    def crop(self, x, y, w, h) -> 'ImageBuffer':
        return ImageBuffer(self.data[y:y + h, x:x + w].copy())

    def copy(self) -> 'ImageBuffer':
        return ImageBuffer(self.data.copy())

    @classmethod
    def full(cls, height, width, value=0.0, channels=3) -> 'ImageBuffer':
        return cls(np.full((height, width, channels), value, dtype=np.float64))


@dataclass(eq=False)
class FlowField(_Grid):
    """Per-pixel displacement (u horizontal, v vertical) in pixels, with validity.
    Invalid pixels hold 0 after construction.
    """
    u: np.ndarray
    v: np.ndarray
    valid: np.ndarray = None

    def __post_init__(self):
        u = _plane(self.u, 'u')
        v = _plane(self.v, 'v')
        if u.shape != v.shape:
            raise DimensionMismatchError(f"u {u.shape} and v {v.shape} differ")
        valid = np.ones(u.shape, bool) if self.valid is None else _plane(self.valid, 'valid', bool)
        if valid.shape != u.shape:
            raise DimensionMismatchError(f"valid {valid.shape} and flow {u.shape} differ")
        if not (np.isfinite(u[valid]).all() and np.isfinite(v[valid]).all()):
            raise InvalidBufferError("Flow holds non-finite displacements at valid pixels")
        # keep invalid pixels finite so arithmetic on whole planes stays clean
        self.u = np.where(valid, u, 0.0)
        self.v = np.where(valid, v, 0.0)
        self.valid = valid

    @property
    def shape(self):
        return self.u.shape

    @property
    def fully_valid(self) -> bool:
        return bool(self.valid.all())

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.u, self.v)

    def stack(self) -> np.ndarray:
        """H x W x 2 array, channel order (u, v)"""
        return np.stack([self.u, self.v], axis=-1)

    def with_valid(self, valid) -> 'FlowField':
        return FlowField(self.u, self.v, valid)

    @classmethod
    def from_stack(cls, uv, valid=None) -> 'FlowField':
        uv = np.asarray(uv, dtype=np.float64)
        if uv.ndim != 3 or uv.shape[2] != 2:
            raise InvalidBufferError(f"Expected HxWx2 flow, got shape {uv.shape}")
        return cls(uv[..., 0], uv[..., 1], valid)

    @classmethod
    def constant(cls, height, width, u=0.0, v=0.0) -> 'FlowField':
        return cls(np.full((height, width), float(u)), np.full((height, width), float(v)))


@dataclass(eq=False)
class BinaryMask(_Grid):
    bits: np.ndarray

    def __post_init__(self):
        self.bits = _plane(self.bits, 'bits', bool)

    @property
    def shape(self):
        return self.bits.shape

    def count(self) -> int:
        return int(self.bits.sum())

    @classmethod
    def empty(cls, height, width) -> 'BinaryMask':
        return cls(np.zeros((height, width), bool))


@dataclass(eq=False)
class WeightMap(_Grid):
    """Soft blend weights in [0, 1]"""
    w: np.ndarray

    def __post_init__(self):
        w = _plane(self.w, 'w')
        if not np.isfinite(w).all() or w.min() < 0.0 or w.max() > 1.0:
            raise InvalidBufferError("Weights must lie in [0, 1]")
        self.w = w

    @property
    def shape(self):
        return self.w.shape


@dataclass(eq=False)
class DistanceMap(_Grid):
    """Per-pixel distance to the overlap boundary, in pixels"""
    d: np.ndarray

    def __post_init__(self):
        d = _plane(self.d, 'd')
        if not np.isfinite(d).all() or d.min() < 0.0:
            raise InvalidBufferError("Distances must be finite and non-negative")
        self.d = d

    @property
    def shape(self):
        return self.d.shape


def same_grid(*items, what='inputs'):
    """Raise DimensionMismatchError unless every item shares one (height, width)"""
    shapes = {tuple(item.shape) for item in items}
    if len(shapes) > 1:
        raise DimensionMismatchError(f"{what} must share one grid, got {sorted(shapes)}")
