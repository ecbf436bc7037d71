"""locmom: drift/diffusion reconstruction for stochastic time series.

Estimates Kramers-Moyal coefficients via Nadaraya-Watson kernel regression,
binning, global statistical moments and local (kernel-weighted) statistical
moments, with an Euler-Maruyama simulator and fixed-point analysis on top.
"""

__version__ = "0.1.0"

from .analysis import DriftLine, drift_surface, error_metrics, fixed_point
from .basis import FitBasis, eval_basis, function_matrix, make_polynomial_basis
from .errors import (
    BasisEvaluationError,
    ConfigError,
    EstimationError,
    IngestError,
    LocmomError,
    SimulationError,
    SolveRejectedError,
)
from .estimators import (
    Grid,
    Increments,
    LocalCoefficients,
    MomentEstimate,
    binning_estimate,
    conditional_moment_nw,
    global_moment_fit,
    increments,
    km_from_moments,
    local_moment_fit,
)
from .ingest import RawRecords, aggregate, load_csv
from .kernels import KernelFamily, KernelSpec, WeightVector, kernel_eval, normalized_weights, product_kernel
from .series import ConditionSeries, SampledSeries
from .simulate import ProcessSpec, builtin_process, euler_maruyama

__all__ = [
    "__version__",
    "BasisEvaluationError", "ConfigError", "EstimationError", "IngestError",
    "LocmomError", "SimulationError", "SolveRejectedError",
    "DriftLine", "drift_surface", "error_metrics", "fixed_point",
    "FitBasis", "eval_basis", "function_matrix", "make_polynomial_basis",
    "Grid", "Increments", "LocalCoefficients", "MomentEstimate",
    "binning_estimate", "conditional_moment_nw", "global_moment_fit",
    "increments", "km_from_moments", "local_moment_fit",
    "RawRecords", "aggregate", "load_csv",
    "KernelFamily", "KernelSpec", "WeightVector", "kernel_eval",
    "normalized_weights", "product_kernel",
    "ConditionSeries", "SampledSeries",
    "ProcessSpec", "builtin_process", "euler_maruyama",
]
