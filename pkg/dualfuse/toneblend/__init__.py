"""Tone matching of the telephoto image and multi-band blending of the outputs"""

from .blend_errors import BlendError, RectOutOfBoundsError
from .histogram import BINS, quantize, match_lut, block_starts, regional_histogram_match, chi_square_distance
from .pyramid import KERNEL, auto_levels, gaussian_pyramid, laplacian_pyramid, collapse, pyramid_blend
from .compose import pyramid_levels_for, overlap_weights, fuse_overlap, full_view_weights, compose_full_view
