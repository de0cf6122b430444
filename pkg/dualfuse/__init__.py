"""dualfuse
Fuses the overlap region of a wide-angle / telephoto image pair by moving both
into a mixed view with less occlusion, then blending.
"""
from ._version import __version__
