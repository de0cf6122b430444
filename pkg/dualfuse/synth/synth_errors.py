"""Synthetic scene errors"""

from dualfuse.errors import FusionError # Base Error

# Generic synthetic scene error
class SceneError(FusionError): pass

# Scene description is malformed or breaks a geometry rule (eg. layer outside the frame)
class SceneSpecError(SceneError): pass
