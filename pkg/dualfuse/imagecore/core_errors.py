"""Core errors, for raster types, filters and configuration"""

from dualfuse.errors import FusionError # Base Error

# Generic core error
class CoreError(FusionError): pass

# Raster data breaks a type invariant (shape, channel count, non-finite samples)
class InvalidBufferError(CoreError): pass

# Operation argument out of range (eg. kernel size <= 0)
class ParameterError(CoreError): pass

# Bad configuration value or unknown configuration key
class ConfigError(ParameterError): pass

# Two rasters that must share a grid do not
class DimensionMismatchError(CoreError): pass
