"""ltilab: an LTI-system exploration engine.

Parse transfer functions, compute Bode/Nyquist/pole-zero/time-domain views
and stability margins, and drive a gamified learning layer, over an HTTP
API and a CLI.
"""

from .polynomial import Polynomial, eval_complex, from_roots, multiply, roots
from .transfer import TransferFunction, make_tf
from .parsing import ExpressionError, parse_expression
from .templates import TemplateId, TemplateInstance, instantiate, match_template
from .frequency import (
    FrequencyGrid,
    FrequencyResponse,
    StabilityMargins,
    default_grid,
    densify_for_delay,
    freq_response,
    log_grid,
    margins,
    nyquist_curve,
    unwrap_phase,
)
from .timeresp import (
    StehfestWeights,
    TimeGrid,
    TimeResponse,
    default_time_grid,
    impulse_analytic,
    impulse_numeric,
    invert_laplace_gs,
    linear_grid,
    respond,
    step_analytic,
    step_numeric,
    stehfest_weights,
)
from .export import EXPORT_TARGETS, SourceText, generate_code

__version__ = "0.1.0"

__all__ = [
    "Polynomial",
    "eval_complex",
    "from_roots",
    "multiply",
    "roots",
    "TransferFunction",
    "make_tf",
    "ExpressionError",
    "parse_expression",
    "TemplateId",
    "TemplateInstance",
    "instantiate",
    "match_template",
    "FrequencyGrid",
    "FrequencyResponse",
    "StabilityMargins",
    "default_grid",
    "densify_for_delay",
    "freq_response",
    "log_grid",
    "margins",
    "nyquist_curve",
    "unwrap_phase",
    "StehfestWeights",
    "TimeGrid",
    "TimeResponse",
    "default_time_grid",
    "impulse_analytic",
    "impulse_numeric",
    "invert_laplace_gs",
    "linear_grid",
    "respond",
    "step_analytic",
    "step_numeric",
    "stehfest_weights",
    "EXPORT_TARGETS",
    "SourceText",
    "generate_code",
    "__version__",
]
