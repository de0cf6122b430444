"""Middlebury .flo flow files.

Layout (little-endian): float32 magic 202021.25 ("PIEH"), int32 width,
int32 height, then height*width interleaved (u, v) float32 pairs, row-major.
Components with magnitude above 1e9 (or non-finite) mark the pixel invalid;
invalid pixels are written as 1e10, the customary "unknown flow" value.
"""
__all__ = ['FLO_MAGIC', 'FlowFileHeader', 'read_flow', 'write_flow']

import logging
from pathlib import Path

import numpy as np

from dualfuse.imagecore import FlowField
from .io_errors import *

logger = logging.getLogger(__name__)

FLO_MAGIC = np.float32(202021.25)
UNKNOWN_THRESHOLD = 1e9
UNKNOWN_VALUE = np.float32(1e10)
MAX_PIXELS = 1 << 28

FlowFileHeader = np.dtype([('magic', '<f4'), ('width', '<i4'), ('height', '<i4')])


@handle_error
def read_flow(path) -> FlowField:
    """Read a .flo file.
    Raises:
        FlowFormatError: bad magic, non-positive size, payload longer than declared
        TruncatedFileError: payload shorter than declared
        DimensionOverflowError: declared size beyond MAX_PIXELS
    """
    raw = Path(path).read_bytes()
    if len(raw) < FlowFileHeader.itemsize:
        raise TruncatedFileError(f"{path}: {len(raw)} bytes, shorter than the .flo header")
    header = np.frombuffer(raw, FlowFileHeader, count=1)[0]
    if header['magic'] != FLO_MAGIC:
        raise FlowFormatError(f"{path}: bad magic {float(header['magic'])!r}, expected 202021.25")
    w, h = int(header['width']), int(header['height'])
    if w <= 0 or h <= 0:
        raise FlowFormatError(f"{path}: invalid size {w}x{h}")
    if w * h > MAX_PIXELS:
        raise DimensionOverflowError(f"{path}: {w}x{h} exceeds {MAX_PIXELS} pixels")

    expected = FlowFileHeader.itemsize + 8 * w * h
    if len(raw) < expected:
        raise TruncatedFileError(f"{path}: payload is {len(raw) - FlowFileHeader.itemsize} bytes, {w}x{h} needs {8 * w * h}")
    if len(raw) > expected:
        raise FlowFormatError(f"{path}: {len(raw) - expected} trailing bytes after the {w}x{h} payload")

    uv = np.frombuffer(raw, '<f4', count=2 * w * h, offset=FlowFileHeader.itemsize).reshape(h, w, 2)
    with np.errstate(invalid='ignore'):
        valid = (np.isfinite(uv) & (np.abs(uv) <= UNKNOWN_THRESHOLD)).all(axis=-1)
    logger.debug("Read %s: %dx%d, %d invalid", path, w, h, int((~valid).sum()))
    return FlowField.from_stack(np.where(valid[..., None], uv, 0).astype(np.float64), valid)


@handle_error
def write_flow(path, f: FlowField):
    """Write a flow field as .flo (values stored as float32)"""
    path = Path(path)
    header = np.array([(FLO_MAGIC, f.width, f.height)], dtype=FlowFileHeader)
    uv = f.stack().astype('<f4')
    uv[~f.valid] = UNKNOWN_VALUE
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'wb') as fp:
        fp.write(header.tobytes())
        fp.write(np.ascontiguousarray(uv).tobytes())
    logger.debug("Wrote %s", path)
