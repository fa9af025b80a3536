"""Heavy-tailed p-value combination toolkit.

Combines dependent p-values by mapping them through heavy-tailed inverse
survival functions (calibrators), aggregating with sum / prefix-max / max
statistics, and calibrating decisions with critical values or tail-precise
combining functions.  Includes stable-law numerics for the Landau-adjusted
harmonic mean, parameter-selection guidance, and a reproducible Monte Carlo
engine for size/power studies under equicorrelated normal test statistics.
"""

__version__ = "0.1.0"

from .calibrators import (
    Calibrator,
    Cauchy,
    LogPareto,
    Pareto,
    TailClassification,
    TruncatedCauchy,
    Weibull,
    calibrator_from_json_dict,
)
from .combine import (
    CombinationSpec,
    WeightVector,
    a_n_gamma,
    bonferroni_p,
    combine,
    combining_function,
    critical_value,
    log_critical_value,
    m_family,
    m_family_asymptotic_scale,
    rejects,
)
from .errors import NumericalError, TailcombError, UnsupportedCombinationError
from .guidance import (
    AlphaRateReport,
    GammaAdvice,
    PerfectCorrSetting,
    alpha_rate_check,
    bvn_conditional_tail_ratio,
    gclt_tail_approx,
    independence_reference,
    optimal_logpareto_gamma,
    optimal_weibull_k,
    perfect_corr_multiplier,
    perfect_corr_size,
    recommend_gamma,
    wilson_adjusted_alpha,
)
from .simulate import (
    MethodSpec,
    RejectionReport,
    SimulationScenario,
    estimate_rejection,
    gclt_samples,
    gen_pvalues,
    power_table,
    size_table,
    table_methods,
    tail_equivalence_check,
)
from .stable import (
    StableParams,
    gclt_normalize,
    landau_quantile,
    landau_tail_ratio,
    stable_cdf,
    stable_sf,
)

__all__ = [name for name in dir() if not name.startswith("_")]
