"""The base exception of the package"""

class FusionError(Exception): pass
