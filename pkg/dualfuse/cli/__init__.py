"""Pipeline orchestration and the `dualfuse` command line"""

from .cli_errors import CliError, MissingInputError, StageError
from .pipeline import STAGES, FusionResult, Pipeline, StageLogger, StageTimer, default_overlap_rect, run_fusion
from .metrics import transition_metrics, result_metrics, stage_time_values
