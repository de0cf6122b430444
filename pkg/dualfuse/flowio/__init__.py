"""Image and flow file I/O, and the diagnostic flow estimator"""

from .io_errors import FlowIOError, UnsupportedFormatError, ImageFormatError, TruncatedFileError, DimensionOverflowError, FlowFormatError, FlowEstimationError
from .image import read_image, write_image, write_mask, write_weights, write_distance
from .flo import FLO_MAGIC, FlowFileHeader, read_flow, write_flow
from .estimate import estimate_flow_diagnostic
