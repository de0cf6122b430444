"""Tone matching and blending errors"""

from dualfuse.errors import FusionError # Base Error

# Generic tone matching / blending error
class BlendError(FusionError): pass

# Overlap rectangle does not fit inside the full wide frame
class RectOutOfBoundsError(BlendError): pass
