"""PID auto-tuning: closed-loop step-response simulation, a rise-time plus
settling-band objective, Ziegler-Nichols and random initialization, and
compass-search optimization with full evaluation traces."""

from .errors import (
    ImproperLoop,
    ImproperSystem,
    NonFiniteStart,
    NoUltimateGain,
    OutputUnwritable,
    PidTuneError,
    PlantParseError,
    ResampleExhausted,
)
from .lti import (
    PidGains,
    SimConfig,
    StateSpace,
    StepResponse,
    TransferFunction,
    close_unity_feedback,
    pid_transfer_function,
    simulate_step,
    tf_to_state_space,
)
from .objective import ObjectiveValue, SettlingBand, band_deviation, evaluate, rise_time
from .render import FrameStyle, export_trace, render_animation, render_frame
from .search import (
    BUDGET_EXHAUSTED,
    STEP_CONVERGED,
    EvaluationRecord,
    SearchConfig,
    SearchTrace,
    optimize,
)
from .tuning import (
    RandomStartConfig,
    UltimatePoint,
    random_gains,
    ultimate_point,
    zn_pid_gains,
)

__version__ = "0.1.0"

__all__ = [
    "BUDGET_EXHAUSTED",
    "STEP_CONVERGED",
    "EvaluationRecord",
    "FrameStyle",
    "ImproperLoop",
    "ImproperSystem",
    "NoUltimateGain",
    "NonFiniteStart",
    "ObjectiveValue",
    "OutputUnwritable",
    "PidGains",
    "PidTuneError",
    "PlantParseError",
    "RandomStartConfig",
    "ResampleExhausted",
    "SearchConfig",
    "SearchTrace",
    "SettlingBand",
    "SimConfig",
    "StateSpace",
    "StepResponse",
    "TransferFunction",
    "UltimatePoint",
    "band_deviation",
    "close_unity_feedback",
    "evaluate",
    "export_trace",
    "optimize",
    "pid_transfer_function",
    "random_gains",
    "render_animation",
    "render_frame",
    "rise_time",
    "simulate_step",
    "tf_to_state_space",
    "ultimate_point",
    "zn_pid_gains",
]
