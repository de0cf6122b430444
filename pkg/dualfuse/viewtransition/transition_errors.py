"""View transition errors"""

from dualfuse.errors import FusionError # Base Error

# Generic view transition error
class TransitionError(FusionError): pass

# Flow field not usable for the stage (eg. holes where a full field is required)
class InvalidFlowError(TransitionError): pass

# Nothing valid to propagate while filling holes
class EmptyFlowError(TransitionError): pass
