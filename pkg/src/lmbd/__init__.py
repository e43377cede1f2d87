"""Multiplicative binomial model for sums of exchangeable dependent
Bernoulli variables: exact log-domain pmf/cdf/moments/sampling, limit
regimes, a Gaussian-approximation diagnostic, the K-difference
factorization scans, and majority-vote ensemble accuracy with MLE
fitting.
"""

__version__ = "0.1.0"

from .asymptotics import (
    LimitRegime,
    LimitReport,
    convergence_report,
    limit_distribution,
    limit_moments,
    tau_limit_omega_inf_even,
    tau_limit_omega_inf_odd,
    tau_limit_omega_zero,
    total_variation,
)
from .constants import LOG_TOL, RATIO_TOL
from .core import (
    JointOutcome,
    ModelParams,
    MomentSummary,
    PmfTable,
    cdf,
    conditional_cpr,
    enumerate_pmf_oracle,
    joint_log_prob,
    joint_outcome,
    log_k,
    marginal_pi,
    moments,
    pmf,
    sample,
    tau,
)
from .ensemble import (
    ComparisonReport,
    CountSample,
    EnsembleSpec,
    FitResult,
    ModelReport,
    beta_binomial_accuracy,
    binomial_accuracy,
    ensemble_accuracy,
    fit_mle,
    majority_threshold,
    model_comparison,
)
from .factorization import (
    GridSpec,
    RegionGrid,
    Theorem2Report,
    d_n,
    delta,
    delta_grid,
    is_singular,
    tau1_region_grid,
    theorem2_check,
)
from .gauss import CltScanRow, clt_scan, standardized_ks_distance

__all__ = [
    "__version__",
    "LOG_TOL",
    "RATIO_TOL",
    # core
    "ModelParams", "PmfTable", "MomentSummary", "JointOutcome",
    "log_k", "tau", "pmf", "cdf", "moments", "marginal_pi",
    "joint_log_prob", "joint_outcome", "conditional_cpr", "sample",
    "enumerate_pmf_oracle",
    # asymptotics
    "LimitRegime", "LimitReport", "tau_limit_omega_zero",
    "tau_limit_omega_inf_even", "tau_limit_omega_inf_odd",
    "limit_moments", "limit_distribution", "convergence_report",
    "total_variation",
    # gauss
    "CltScanRow", "standardized_ks_distance", "clt_scan",
    # factorization
    "GridSpec", "RegionGrid", "Theorem2Report", "d_n", "delta",
    "is_singular", "delta_grid", "tau1_region_grid", "theorem2_check",
    # ensemble
    "EnsembleSpec", "CountSample", "FitResult", "ModelReport",
    "ComparisonReport", "majority_threshold", "ensemble_accuracy",
    "binomial_accuracy", "beta_binomial_accuracy", "fit_mle",
    "model_comparison",
]
