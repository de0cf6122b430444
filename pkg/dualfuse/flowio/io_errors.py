"""File I/O errors, for images and .flo flow files"""

from dualfuse.errors import FusionError # Base Error

# Generic I/O error
class FlowIOError(FusionError): pass

# File type or pixel mode not handled (eg. JPEG, 16-bit RGB)
class UnsupportedFormatError(FlowIOError): pass

# Image header or content could not be parsed
class ImageFormatError(FlowIOError): pass

# File ended before the declared payload
class TruncatedFileError(FlowIOError): pass

# Declared dimensions too large to allocate
class DimensionOverflowError(FlowIOError): pass

# .flo layout broken (bad magic, size mismatch)
class FlowFormatError(FlowIOError): pass

# Diagnostic flow estimation could not run (eg. image grids differ)
class FlowEstimationError(FlowIOError): pass


# Below is some short code to map raw library error text (Pillow, OSError) onto the errors above.

import re
from typing import Union, Optional

ERROR_MAP = {
    DimensionOverflowError: [
        r'\bexceeds\s+limit\b',
        r'\bdecompression\s+bomb\b',
    ],
    TruncatedFileError: [
        r'\btruncated\b',
        r'\bimage\s+was\s+incomplete\b',
        r'\bbroken\s+data\s+stream\b',
        r'\bnot\s+enough\s+image\s+data\b',
    ],
    UnsupportedFormatError: [
        r'\bcannot\s+write\s+mode\b',
        r'\bunknown\s+file\s+extension\b',
    ],
    ImageFormatError: [
        r'\bcannot\s+identify\s+image\s+file\b',
        r'\bnot\s+a\s+\w+\s+file\b',
        r'\bheader\b',
        r'\bmaxval\b',
        r'\bcannot\s+parse\b',
        r'\binvalid\s+token\b',
    ],
}

def check_error(
    output: str,
    *,
    errors: Optional[Union[list[type[Exception]], type[Exception]]] = None
) -> None:
    """Raise the first mapped error whose pattern matches `output`; return quietly otherwise"""
    if errors is None:
        errors = list(ERROR_MAP.keys())
    elif isinstance(errors, type):
        errors = [errors]

    for error, patterns in ERROR_MAP.items():
        if error not in errors:
            continue

        for regex in patterns:
            if re.search(regex, output, re.IGNORECASE):
                raise error(f"Output matches pattern '{regex}'\nOutput: {output}")


from functools import wraps

from PIL import Image

LIBRARY_ERRORS = (OSError, ValueError, SyntaxError, EOFError, Image.DecompressionBombError)

def handle_error(func):
    """Wraps library and OS errors raised by `func` into FlowIOError subclasses"""
    @wraps(func)
    def magic(*args, **kw):
        try:
            return func(*args, **kw)
        except FusionError:
            raise
        except LIBRARY_ERRORS as e:
            try:
                check_error(str(e))
            except FlowIOError as mapped:
                raise mapped from e
            raise FlowIOError(f"{type(e).__name__}: {e}") from e
    return magic
