"""Interactive decomposition-based evolutionary multi-objective optimization.

A decomposition optimizer (Tchebycheff subproblems or reference-point
niching) runs as usual until, every few generations, a decision maker scores
a handful of candidates.  A radial-basis surrogate of their value function is
refit on everything scored so far and the reference set migrates toward the
region the surrogate favors, concentrating the search there.
"""

from .config import RunConfig, RunResult, load_config, config_from_dict
from .core import Population, approximation_error, dominates, update_ideal
from .engine import RunAborted, run_single
from .learning import ConsultationSchedule, RbfNetwork, train_avf
from .problems import GoldenSpec, NoiseSpec, ProblemSpec, evaluate, golden_point, psi
from .refpoints import ReferenceSet, das_dennis, two_layer
from .variation import VariationParams

__version__ = "0.1.0"

__all__ = [
    "RunConfig",
    "RunResult",
    "load_config",
    "config_from_dict",
    "Population",
    "approximation_error",
    "dominates",
    "update_ideal",
    "RunAborted",
    "run_single",
    "ConsultationSchedule",
    "RbfNetwork",
    "train_avf",
    "GoldenSpec",
    "NoiseSpec",
    "ProblemSpec",
    "evaluate",
    "golden_point",
    "psi",
    "ReferenceSet",
    "das_dennis",
    "two_layer",
    "VariationParams",
    "__version__",
]
