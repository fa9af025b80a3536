"""Parameter selection and diagnostics for heavy-tailed combined tests.

Under perfect positive correlation every p-value collapses onto one uniform
draw, and the size of the equal-weight sum test has the exact closed form
``Fbar((1/n) Fbar^{-1}(alpha/n))``.  Requiring that size to equal the
nominal level pins down a unique Weibull shape and (numerically) a unique
log-Pareto index for each (n, alpha); those are the "variable-parameter"
calibrators used in the simulation tables.  The remaining helpers quantify
when the plain index-1 Pareto test (the harmonic mean) is safe, what its
Landau-adjusted threshold is, which significance-level decay rates the
diverging-n theory demands, and why bivariate-normal p-values violate the
conditional-tail boundedness needed outside the regularly varying class.

All functions are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import ndtr

from .calibrators import Calibrator, LogPareto, Pareto, Weibull
from .stable import landau_quantile

__all__ = [
    "PerfectCorrSetting",
    "GammaAdvice",
    "AlphaRateReport",
    "optimal_weibull_k",
    "optimal_logpareto_gamma",
    "perfect_corr_multiplier",
    "independence_reference",
    "perfect_corr_size",
    "wilson_adjusted_alpha",
    "gclt_tail_approx",
    "alpha_rate_check",
    "bvn_conditional_tail_ratio",
    "recommend_gamma",
]

Regime = Literal["equal-weights", "nonrandom-weights", "random-weights"]


@dataclass(frozen=True)
class PerfectCorrSetting:
    """n tests of which n - m share one perfectly correlated p-value.

    m counts the tests without a correlated copy; a perfect block needs at
    least two members, so 0 <= m <= n - 2.
    """

    n: int
    m: int
    gamma: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("a perfect-correlation setting needs n >= 2")
        if not (0 <= self.m <= self.n - 2):
            raise ValueError("m must satisfy 0 <= m <= n - 2 (block of >= 2)")
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class GammaAdvice:
    """Recommended regular-variation index for a planned analysis.

    use_landau marks the Landau-adjusted harmonic mean as an equally good
    alternative when the raw index-1 test would over-reject.
    """

    recommended_gamma: float
    use_landau: bool
    rationale: str


@dataclass(frozen=True)
class AlphaRateReport:
    """Advisory check of the significance-level decay rate for diverging n."""

    regime: Regime
    gamma: float
    required_exponent: float
    alpha_times_n_tau: float
    ok: bool


def optimal_weibull_k(n: int, alpha: float) -> float:
    """Weibull shape giving exact size under perfect correlation.

    ``k = log(1 - log n / log alpha) / log n``.  Smaller alpha or larger n
    push k down (heavier tail); the result must land in (0, 1) to define a
    heavy-tailed Weibull.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    k = math.log(1.0 - math.log(n) / math.log(alpha)) / math.log(n)
    if not (0.0 < k < 1.0):
        raise ValueError(
            f"no heavy-tailed Weibull shape matches n={n}, alpha={alpha} "
            f"(formula gives k={k:.4g})"
        )
    return k


def optimal_logpareto_gamma(
    n: int,
    alpha: float,
    grid_step: float = 0.001,
    grid_max: float = 10.0,
) -> float:
    """Log-Pareto index giving (nearly) exact size under perfect correlation.

    The exact-size condition ``alpha = ((n^(1/gamma) - 1)/log n)^gamma`` has
    no closed inverse; the index is located by grid search from grid_step
    to grid_max in steps of grid_step, minimizing the distance between
    alpha and the attained size.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    steps = int(round(grid_max / grid_step))
    grid = np.arange(1, steps + 1, dtype=float) * grid_step
    log_n = math.log(n)
    with np.errstate(over="ignore", invalid="ignore"):
        attained = ((np.exp(log_n / grid) - 1.0) / log_n) ** grid
    distance = np.abs(attained - alpha)
    distance[~np.isfinite(distance)] = np.inf
    return float(grid[int(np.argmin(distance))])


def perfect_corr_multiplier(j: int, setting: PerfectCorrSetting) -> float:
    """Asymptotic tail multiplier (relative to Fbar(t)) with a perfect block.

    j = 1 (sum): ``(m + (n-m)^gamma) / n^gamma``.
    j = 3 (max): ``(m + 1) / n^gamma``.
    Compare against ``independence_reference`` = ``n^(1-gamma)``.
    """
    n, m, g = setting.n, setting.m, setting.gamma
    if j == 1:
        return (m + (n - m) ** g) / n**g
    if j == 3:
        return (m + 1) / n**g
    raise ValueError("j must be 1 (sum) or 3 (max)")


def independence_reference(n: int, gamma: float) -> float:
    """Tail multiplier ``n^(1-gamma)`` with no perfect correlation."""
    if n < 1 or gamma <= 0.0:
        raise ValueError("need n >= 1 and gamma > 0")
    return float(n ** (1.0 - gamma))


def perfect_corr_size(cal: Calibrator, n: int, alpha: float) -> float:
    """Exact size of the equal-weight sum test when all p-values coincide.

    Evaluates ``Fbar((1/n) Fbar^{-1}(alpha/n))`` through the per-family
    closed forms, which avoid both overflow (log-Pareto) and rounding noise
    (Pareto reduces to ``alpha * n^(gamma-1)`` exactly).
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not (0.0 < alpha < 1.0) or alpha / n >= 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if isinstance(cal, Pareto):
        return float(alpha * n ** (cal.gamma - 1.0))
    if isinstance(cal, Weibull):
        return float(math.exp(n ** (-cal.k) * (math.log(alpha) - math.log(n))))
    if isinstance(cal, LogPareto):
        z = (alpha / n) ** (-1.0 / cal.gamma)
        base = z - math.log(n)
        if base <= 1.0:  # threshold below the support start
            return 1.0
        return float(base ** (-cal.gamma))
    # Cauchy-type families: compose in log space where possible.
    if alpha / n < 0.5:
        log_t = cal.log_inverse_survival(alpha / n) - math.log(n)
        return float(cal.survival_given_log(log_t))
    return float(cal.survival(cal.inverse_survival(alpha / n) / n))


def wilson_adjusted_alpha(alpha: float, n: int) -> float:
    """Landau-adjusted significance threshold for the harmonic-mean test.

    Returns the level whose reciprocal is the Landau upper-tail quantile:
    ``P(Landau(n) > 1/alpha_adj) = alpha``.  Always below alpha for n >= 2,
    compensating the over-rejection measured by ``landau_tail_ratio``.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    q = landau_quantile(alpha, n)
    if q <= 0.0:
        raise ValueError(
            f"alpha={alpha} is too large for a Landau-adjusted threshold at n={n}"
        )
    return 1.0 / q


def gclt_tail_approx(alpha: float, n: int, gamma: float) -> float:
    """Iid tail probability of the sum test via the generalized CLT.

    gamma = 1: ``1 / (1/alpha - log n)``, valid while 1/alpha > log n;
    gamma in (0, 1): the approximation is alpha itself.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not (0.0 < gamma <= 1.0):
        raise ValueError("gamma must lie in (0, 1]")
    if gamma < 1.0:
        return alpha
    log_n = math.log(n)
    if 1.0 / alpha <= log_n:
        raise ValueError(
            f"the gamma=1 tail approximation needs 1/alpha > log n "
            f"(got 1/alpha={1.0/alpha:.4g}, log n={log_n:.4g})"
        )
    return 1.0 / (1.0 / alpha - log_n)


_RATE_EXPONENTS = {
    "equal-weights": lambda g: (g - 1.0) if g > 1.0 else 0.0,
    "nonrandom-weights": lambda g: abs(1.0 - g),
    "random-weights": lambda g: (1.0 - g) if g <= 1.0 else 2.0 * (g - 1.0),
}

_ADVISORY_CUTOFF = 0.1


def alpha_rate_check(
    gamma: float, n: int, alpha: float, regime: Regime
) -> AlphaRateReport:
    """Advisory check that alpha shrinks fast enough for diverging n.

    Each weight regime demands ``alpha = o(n^-tau)`` for a regime-specific
    exponent tau; the report flags whether ``alpha * n^tau`` is still small
    (below 0.1) at the given n.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    try:
        tau = _RATE_EXPONENTS[regime](gamma)
    except KeyError:
        raise ValueError(f"unknown regime {regime!r}")
    scaled = alpha * n**tau
    return AlphaRateReport(
        regime=regime,
        gamma=gamma,
        required_exponent=tau,
        alpha_times_n_tau=scaled,
        ok=scaled < _ADVISORY_CUTOFF,
    )


def bvn_conditional_tail_ratio(y1: float, y2: float, rho: float) -> float:
    """Conditional-to-marginal tail ratio of folded bivariate normals.

    ``[Phibar((y1 - rho y2)/s) + Phibar((y1 + rho y2)/s)] / (2 Phibar(y1))``
    with ``s = sqrt(1 - rho^2)``.  Unbounded over (y1, y2): picking y2 with
    |rho| y2 > 2 y1 and y1 large drives it past any constant, which is what
    rules out bivariate-normal p-values for calibrators relying on the
    conditional-tail boundedness assumptions.
    """
    if y1 <= 0.0 or y2 <= 0.0:
        raise ValueError("y1 and y2 must be positive")
    if not (0.0 < abs(rho) < 1.0):
        raise ValueError("rho must lie in (-1, 1) excluding 0")
    s = math.sqrt(1.0 - rho * rho)
    num = float(ndtr(-(y1 - rho * y2) / s) + ndtr(-(y1 + rho * y2) / s))
    den = 2.0 * float(ndtr(-y1))
    if den == 0.0:
        raise ValueError("y1 is too deep in the normal tail for double precision")
    return num / den


def recommend_gamma(alpha: float, n: int) -> GammaAdvice:
    """Pick a regular-variation index for the sum test at level alpha.

    When alpha is small enough that 1/alpha dominates log n (cutoff:
    ``1/alpha >= 20 * log10(n)``), the plain index-1 test is tail-accurate
    and simplest.  Otherwise an index below 1 avoids the over-rejection at
    ordinary levels; the Landau-adjusted harmonic mean is flagged as an
    equally defensible alternative.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be a positive integer")
    dominates = 1.0 / alpha >= 20.0 * math.log10(max(n, 2))
    if alpha <= 0.01 and dominates:
        return GammaAdvice(
            recommended_gamma=1.0,
            use_landau=False,
            rationale="small-alpha: tail approximation accurate at index 1",
        )
    return GammaAdvice(
        recommended_gamma=0.5,
        use_landau=True,
        rationale=(
            "alpha too large for the raw index-1 tail approximation; "
            "use index 0.5, or index 1 with the Landau-adjusted threshold"
        ),
    )
