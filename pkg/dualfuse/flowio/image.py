"""Image files: PNG (8-bit) and binary PPM/PGM, via Pillow.

Samples are normalized to [0, 1] on read and quantized (round half up) on
write, so 8-bit files round-trip exactly.
"""
__all__ = ['read_image', 'write_image', 'write_mask', 'write_weights', 'write_distance']

import logging
from pathlib import Path

import numpy as np
from PIL import Image

from dualfuse.imagecore import ImageBuffer, BinaryMask, WeightMap, DistanceMap
from .io_errors import *

logger = logging.getLogger(__name__)

READ_FORMATS = ('PNG', 'PPM') # Pillow reports PGM files as PPM
WRITE_FORMATS = {'.png': 'PNG', '.ppm': 'PPM', '.pgm': 'PPM', '.pnm': 'PPM'}

# Pillow mode -> (channels, full-scale value)
MODES = {
    '1': (1, 1),
    'L': (1, 255),
    'RGB': (3, 255),
    'I': (1, 65535), # 16-bit PGM
    'I;16': (1, 65535),
    'I;16B': (1, 65535),
}


def _quantize(a, scale=255, dtype=np.uint8):
    return np.floor(np.clip(a, 0.0, 1.0) * scale + 0.5).astype(dtype)


@handle_error
def read_image(path) -> ImageBuffer:
    """Read a PNG or binary PPM/PGM file.
    Returns:
        ImageBuffer with 1 channel (gray) or 3 (color); alpha and palettes are flattened
    Raises:
        UnsupportedFormatError: other file types
        ImageFormatError / TruncatedFileError / DimensionOverflowError: bad file
    """
    with Image.open(path) as im:
        if im.format not in READ_FORMATS:
            raise UnsupportedFormatError(f"{path}: {im.format} files are not supported")
        im.load() # decode now so truncation surfaces here
        if im.mode in ('P', 'RGBA', 'LA', 'PA'):
            im = im.convert('RGB' if im.mode != 'LA' else 'L')
        if im.mode not in MODES:
            raise UnsupportedFormatError(f"{path}: pixel mode {im.mode} is not supported")
        channels, scale = MODES[im.mode]
        a = np.asarray(im, dtype=np.float64) / scale
    logger.debug("Read %s: %dx%d, %d channel(s)", path, a.shape[1], a.shape[0], channels)
    return ImageBuffer(a)


@handle_error
def write_image(path, img: ImageBuffer):
    """Write an image as 8-bit PNG / PPM / PGM, chosen by file suffix.
    Raises:
        UnsupportedFormatError: unknown suffix, or a color image to .pgm
    """
    path = Path(path)
    fmt = WRITE_FORMATS.get(path.suffix.lower())
    if fmt is None:
        raise UnsupportedFormatError(f"{path}: cannot write '{path.suffix}' files")
    if path.suffix.lower() == '.pgm' and img.channels != 1:
        raise UnsupportedFormatError(f"{path}: PGM holds one channel, image has {img.channels}")
    a = _quantize(img.data)
    a = a[..., 0] if img.channels == 1 else a
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(a).save(path, format=fmt)
    logger.debug("Wrote %s", path)


@handle_error
def write_mask(path, m: BinaryMask):
    """Write a mask as an 8-bit image, 0 / 255"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.where(m.bits, 255, 0).astype(np.uint8)).save(path, format=WRITE_FORMATS.get(path.suffix.lower(), 'PPM'))


@handle_error
def write_weights(path, w: WeightMap):
    """Write weights as an 8-bit image, 0..1 -> 0..255"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(_quantize(w.w)).save(path, format=WRITE_FORMATS.get(path.suffix.lower(), 'PPM'))


@handle_error
def write_distance(path, dist: DistanceMap):
    """Write distances as a 16-bit PGM, one unit per pixel of distance (saturates at 65535)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    a = np.clip(np.floor(dist.d + 0.5), 0, 65535).astype(np.int32)
    Image.fromarray(a).save(path, format='PPM') # mode I -> maxval 65535
