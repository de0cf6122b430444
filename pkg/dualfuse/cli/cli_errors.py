"""Command line errors"""

from dualfuse.errors import FusionError # Base Error

# Generic command line error
class CliError(FusionError): pass

# A required input file or argument was not given, or does not exist
class MissingInputError(CliError): pass

# A pipeline stage failed; `stage` names it
class StageError(CliError):
    def __init__(self, stage, message):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
