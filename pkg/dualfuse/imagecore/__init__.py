"""Core raster types, integral-image box filtering and sampling primitives"""

from .core_errors import *
from .raster import ImageBuffer, FlowField, BinaryMask, WeightMap, DistanceMap, same_grid
from .config import FusionConfig
from .integral import integral_image, rect_sum, normalize_kernel, box_sum, box_mean, box_filter
from .sample import bilinear_grid, bilinear_sample, resize_bilinear, flow_magnitude
