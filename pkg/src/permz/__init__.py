"""permz: permutation complexity classes and Z-entropies for time series.

The package turns real-valued series into ordinal-pattern statistics
(:mod:`permz.ordinal`), measures them with Renyi and class-specific
Z-entropies (:mod:`permz.entropy`), generates the reference processes
used in the experiments (:mod:`permz.processes`), and provides the
higher-level analytics and experiment harness (:mod:`permz.analysis`,
:mod:`permz.experiments`).  The ``permz`` command line fronts all of it.
"""

__version__ = "0.1.0"

from .errors import DataError, NumericalError, PermzError, ValidationError
from .ordinal import (
    CensusTrace,
    OrdinalPattern,
    PatternDistribution,
    census_trace,
    lehmer_decode,
    lehmer_encode,
    pattern_census,
    rank_vector,
    visible_curve,
    window_codes,
)
from .entropy import (
    ComplexityClass,
    EntropyReport,
    RateFit,
    entropy_rate_estimate,
    entropy_report,
    exp_iterated,
    lambert_n,
    lambert_w,
    log_iterated,
    renyi_entropy,
    shannon_permutation_entropy,
    z_entropy,
    z_topological,
)
from .processes import ProcessSpec, derive_seed, fgn_autocovariance, generate, with_seed
from .analysis import (
    ClassConstantFit,
    DecayFit,
    XpAnalytics,
    estimate_class_constant,
    fit_decay,
    forbidden_patterns_of_map,
    missing_series,
    pc_function_trace,
    stabilized_census,
    xp_allowed_count,
    xp_class_constant,
    xp_distribution,
    xp_pattern_probabilities,
)
from .experiments import EXPERIMENTS, ExperimentConfig, run_experiment

__all__ = [
    "__version__",
    "PermzError",
    "ValidationError",
    "DataError",
    "NumericalError",
    "OrdinalPattern",
    "PatternDistribution",
    "CensusTrace",
    "rank_vector",
    "lehmer_encode",
    "lehmer_decode",
    "window_codes",
    "pattern_census",
    "visible_curve",
    "census_trace",
    "ComplexityClass",
    "EntropyReport",
    "RateFit",
    "lambert_w",
    "lambert_n",
    "exp_iterated",
    "log_iterated",
    "renyi_entropy",
    "shannon_permutation_entropy",
    "z_entropy",
    "z_topological",
    "entropy_report",
    "entropy_rate_estimate",
    "ProcessSpec",
    "generate",
    "fgn_autocovariance",
    "derive_seed",
    "with_seed",
    "DecayFit",
    "XpAnalytics",
    "ClassConstantFit",
    "missing_series",
    "pc_function_trace",
    "fit_decay",
    "xp_allowed_count",
    "xp_distribution",
    "xp_class_constant",
    "xp_pattern_probabilities",
    "estimate_class_constant",
    "forbidden_patterns_of_map",
    "stabilized_census",
    "EXPERIMENTS",
    "ExperimentConfig",
    "run_experiment",
]
