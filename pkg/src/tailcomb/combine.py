"""Combination statistics, critical values, and combining functions.

Three statistics aggregate the calibrated p-values ``X_i = Fbar^{-1}(p_i)``
with weights ``w_i``: the weighted sum, the maximum over prefix sums, and
the weighted maximum.  For calibrators with positive support the prefix-max
coincides with the sum, and the weighted maximum with equal weights makes
exactly the same accept/reject decisions as Bonferroni.

For regularly varying calibrators the statistic can be turned back into a
p-value-like quantity: ``T = Fbar(a_{n,gamma} * S)`` where the scaling
``a_{n,gamma} = (sum E w_i^gamma)^(-1/gamma)`` matches the combined tail to
a single calibrated variable's tail.  With a Pareto index-1 calibrator and
equal weights this is the harmonic mean of the p-values; general Pareto
indices reproduce the power-mean merging family ``a~ * M_{r,n}`` with
``r = -1/gamma``.

Weight handling follows three regimes: exactly equal, fixed (summing to 1),
and random weights represented solely by the moments ``E w_i^gamma`` the
scaling formulas consume, so no sampling mechanism is baked in.

Everything here is pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np
from scipy.special import logsumexp

from .calibrators import Calibrator, LogPareto, Pareto
from .errors import UnsupportedCombinationError

__all__ = [
    "WeightVector",
    "CombinationSpec",
    "combine",
    "rejects",
    "a_n_gamma",
    "combining_function",
    "critical_value",
    "log_critical_value",
    "m_family",
    "m_family_asymptotic_scale",
    "bonferroni_p",
]

Statistic = Literal["sum", "cumsum", "max"]
_STATISTICS = ("sum", "cumsum", "max")
_SUM_TOL = 1e-12


@dataclass(frozen=True)
class WeightVector:
    """Weights for a combined test.

    mode 'equal' pins every weight at 1/n; 'fixed' holds an explicit vector
    summing to 1; 'random-moments' describes random weights through their
    mean (summing to 1) and the per-index moments ``E w_i^gamma`` for the
    gamma values the caller intends to use.
    """

    mode: Literal["equal", "fixed", "random-moments"]
    n: int
    values: tuple[float, ...] | None = None
    mean_values: tuple[float, ...] | None = None
    gamma_moments: dict[float, tuple[float, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("weight vector needs at least one entry")
        if self.mode == "equal":
            if self.values is not None:
                raise ValueError("equal mode derives its values; do not pass any")
        elif self.mode == "fixed":
            if self.values is None or len(self.values) != self.n:
                raise ValueError("fixed mode needs one weight per test")
            arr = np.asarray(self.values, dtype=float)
            if np.any(arr <= 0.0) or np.any(arr >= 1.0):
                raise ValueError("weights must lie strictly inside (0, 1)")
            if abs(arr.sum() - 1.0) > _SUM_TOL:
                raise ValueError("fixed weights must sum to 1 within 1e-12")
        elif self.mode == "random-moments":
            if self.mean_values is None or len(self.mean_values) != self.n:
                raise ValueError("random-moments mode needs mean weights per test")
            means = np.asarray(self.mean_values, dtype=float)
            if np.any(means <= 0.0) or np.any(means >= 1.0):
                raise ValueError("mean weights must lie strictly inside (0, 1)")
            if abs(means.sum() - 1.0) > _SUM_TOL:
                raise ValueError("mean weights must sum to 1 within 1e-12")
            for g, mom in self.gamma_moments.items():
                if g <= 0.0 or len(mom) != self.n:
                    raise ValueError("gamma moments need gamma > 0 and one entry per test")
        else:
            raise ValueError(f"unknown weight mode {self.mode!r}")

    @classmethod
    def equal(cls, n: int) -> "WeightVector":
        return cls(mode="equal", n=n)

    @classmethod
    def fixed(cls, values: Sequence[float]) -> "WeightVector":
        return cls(mode="fixed", n=len(values), values=tuple(float(v) for v in values))

    @classmethod
    def random_moments(
        cls,
        mean_values: Sequence[float],
        gamma_moments: dict[float, Sequence[float]],
    ) -> "WeightVector":
        return cls(
            mode="random-moments",
            n=len(mean_values),
            mean_values=tuple(float(v) for v in mean_values),
            gamma_moments={
                float(g): tuple(float(m) for m in mom) for g, mom in gamma_moments.items()
            },
        )

    def realized(self) -> np.ndarray:
        """The concrete weight vector, when one exists."""
        if self.mode == "equal":
            return np.full(self.n, 1.0 / self.n)
        if self.mode == "fixed":
            return np.asarray(self.values, dtype=float)
        raise UnsupportedCombinationError(
            "random-moments weights carry only moments E w^gamma; evaluating a "
            "statistic on data needs realized weights (use 'equal' or 'fixed')"
        )

    def gamma_power_sum(self, gamma: float) -> float:
        """``sum_i E w_i^gamma`` for the requested index."""
        if gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if self.mode == "equal":
            # n * n^-gamma, kept in exponential form for exactness
            return float(self.n ** (1.0 - gamma))
        if self.mode == "fixed":
            return float(np.sum(np.asarray(self.values, dtype=float) ** gamma))
        try:
            return float(sum(self.gamma_moments[gamma]))
        except KeyError:
            raise UnsupportedCombinationError(
                f"random-moments weights carry no moments for gamma={gamma!r}"
            )


@dataclass(frozen=True)
class CombinationSpec:
    """A fully specified combined test: statistic kind, calibrator, weights."""

    statistic: Statistic
    calibrator: Calibrator
    weights: WeightVector

    def __post_init__(self):
        if self.statistic not in _STATISTICS:
            raise ValueError(f"statistic must be one of {_STATISTICS}")


def _checked_pvalues(pvalues: Sequence[float], n: int) -> np.ndarray:
    arr = np.asarray(pvalues, dtype=float)
    if arr.ndim != 1 or arr.size != n:
        raise ValueError(f"expected {n} p-values, got shape {arr.shape}")
    if np.any(arr <= 0.0) or np.any(arr >= 1.0) or np.any(~np.isfinite(arr)):
        raise ValueError("p-values must lie strictly inside (0, 1)")
    return arr


def _log_weighted_values(spec: CombinationSpec, p: np.ndarray) -> np.ndarray:
    """log(w_i * X_i) for positive-support calibrators, overflow-free."""
    w = spec.weights.realized()
    return np.log(w) + spec.calibrator.log_inverse_survival(p)


def combine(spec: CombinationSpec, pvalues: Sequence[float]) -> float:
    """Evaluate the combination statistic on a vector of p-values.

    Log-Pareto calibrated values grow like exp(p^(-1/gamma)) and can exceed
    double range; the sum is then accumulated in log space and the returned
    value saturates at inf only when the true statistic does.
    """
    p = _checked_pvalues(pvalues, spec.weights.n)
    if isinstance(spec.calibrator, LogPareto):
        logs = _log_weighted_values(spec, p)
        if spec.statistic == "max":
            return float(np.exp(np.max(logs)))
        if spec.statistic == "sum":
            return float(np.exp(logsumexp(logs)))
        prefix = np.logaddexp.accumulate(logs)
        return float(np.exp(np.max(prefix)))

    w = spec.weights.realized()
    x = w * np.asarray(spec.calibrator.inverse_survival(p), dtype=float)
    if spec.statistic == "sum":
        return float(np.sum(x))
    if spec.statistic == "max":
        return float(np.max(x))
    return float(np.max(np.cumsum(x)))


def rejects(spec: CombinationSpec, pvalues: Sequence[float], alpha: float) -> bool:
    """Decision of the combined test at level alpha.

    The max statistic with equal weights always decides exactly as
    Bonferroni (min p < alpha/n), regardless of calibrator.  Log-Pareto
    comparisons happen in log space, where both the statistic and its
    threshold can exceed double range.
    """
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    p = _checked_pvalues(pvalues, spec.weights.n)
    n = spec.weights.n

    if spec.statistic == "max" and spec.weights.mode == "equal":
        # Exact Bonferroni equivalence; independent of the calibrator.
        return bool(np.min(p) < alpha / n)

    if isinstance(spec.calibrator, LogPareto):
        log_t = log_critical_value(alpha, n, spec.calibrator, spec.weights)
        logs = _log_weighted_values(spec, p)
        if spec.statistic == "max":
            stat = float(np.max(logs))
        elif spec.statistic == "sum":
            stat = float(logsumexp(logs))
        else:
            stat = float(np.max(np.logaddexp.accumulate(logs)))
        return stat > log_t

    return combine(spec, pvalues) > critical_value(alpha, n, spec.calibrator, spec.weights)


def a_n_gamma(weights: WeightVector, gamma: float) -> float:
    """Scaling constant ``(sum E w_i^gamma)^(-1/gamma)``.

    Equal weights give exactly ``n^((gamma-1)/gamma)``.
    """
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    if weights.mode == "equal":
        return float(weights.n ** ((gamma - 1.0) / gamma))
    return float(weights.gamma_power_sum(gamma) ** (-1.0 / gamma))


def combining_function(spec: CombinationSpec, pvalues: Sequence[float]) -> float:
    """Tail-precise combined p-value ``T = Fbar(a_{n,gamma} * S)``.

    Needs a regularly varying calibrator; for subexponential families
    outside that class the scaling constant does not exist and callers
    should compare the raw statistic against ``critical_value`` instead.
    For Pareto calibrators the survival/scale/inverse-survival sandwich is
    composed analytically in log space, so no intermediate overflows.
    """
    rv_index = spec.calibrator.classify().rv_index
    if rv_index is None:
        raise UnsupportedCombinationError(
            f"combining_function needs a regularly varying calibrator; "
            f"{spec.calibrator.family!r} has none (use critical_value instead)"
        )
    gamma = rv_index
    p = _checked_pvalues(pvalues, spec.weights.n)
    scale = a_n_gamma(spec.weights, gamma)

    if isinstance(spec.calibrator, Pareto):
        w = spec.weights.realized()
        logs = np.log(w) - np.log(p) / gamma
        if spec.statistic == "max":
            log_s = float(np.max(logs))
        elif spec.statistic == "sum":
            log_s = float(logsumexp(logs))
        else:
            log_s = float(np.max(np.logaddexp.accumulate(logs)))
        log_t = -gamma * (math.log(scale) + log_s)
        return float(min(1.0, math.exp(log_t)))

    value = scale * combine(spec, pvalues)
    return float(spec.calibrator.survival(value))


def _critical_target(
    alpha: float, n: int, cal: Calibrator, weights: WeightVector
) -> tuple[float, float]:
    """(survival target, post-inversion scale) defining the threshold."""
    if not (0.0 < alpha < 1.0):
        raise ValueError("alpha must lie in (0, 1)")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if weights.n != n:
        raise ValueError("weight vector length must match n")

    if weights.mode == "equal":
        # t = (1/n) Fbar^{-1}(alpha/n)
        return alpha / n, 1.0 / n

    rv_index = cal.classify().rv_index
    if rv_index is None:
        raise UnsupportedCombinationError(
            "critical values with unequal weights need a regularly varying "
            "calibrator (no closed tail inversion exists otherwise)"
        )
    target = alpha / weights.gamma_power_sum(rv_index)
    if not (0.0 < target < 1.0):
        raise ValueError("alpha / sum E w^gamma falls outside the survival range")
    return target, 1.0


def critical_value(
    alpha: float, n: int, cal: Calibrator, weights: WeightVector
) -> float:
    """Threshold t with tail probability alpha for the combined statistic.

    Equal weights use ``(1/n) Fbar^{-1}(alpha/n)``; unequal (fixed or
    random-moment) weights require a regularly varying calibrator and solve
    ``sum E w_i^gamma * Fbar(t) = alpha``.  May return inf when the
    threshold exceeds double range (log-Pareto deep tails); use
    ``log_critical_value`` or ``rejects`` in that regime.
    """
    target, scale = _critical_target(alpha, n, cal, weights)
    with np.errstate(over="ignore"):
        return float(scale * cal.inverse_survival(target))


def log_critical_value(
    alpha: float, n: int, cal: Calibrator, weights: WeightVector
) -> float:
    """log of ``critical_value``, finite even when the value overflows.

    Only meaningful when the threshold is positive, which holds for every
    positive-support calibrator; the Cauchy family raises once the survival
    target reaches 0.5 (threshold at or below zero).
    """
    target, scale = _critical_target(alpha, n, cal, weights)
    return float(cal.log_inverse_survival(target) + math.log(scale))


def m_family(pvalues: Sequence[float], r: float, a_tilde: float) -> float:
    """Power-mean merging function ``a~ * ((sum p_i^r)/n)^(1/r)``."""
    if r == 0.0:
        raise ValueError("r must be nonzero (the geometric-mean limit is not provided)")
    if a_tilde <= 0.0:
        raise ValueError("a_tilde must be positive")
    p = np.asarray(pvalues, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("pvalues must be a nonempty 1-d sequence")
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError("p-values must lie strictly inside (0, 1)")
    log_mean = logsumexp(r * np.log(p)) - math.log(p.size)
    return float(a_tilde * math.exp(log_mean / r))


def m_family_asymptotic_scale(r: float, n: int) -> float:
    """Scale factor making the power-mean family asymptotically precise.

    For ``r in (-1, 0)`` the factor is the constant ``(1 - 1/gamma)^-gamma``
    with ``gamma = -1/r``; ``r = -1`` needs ``log n``; ``r < -1`` needs
    ``n^(1+gamma) / (1-gamma)``.
    """
    if r >= 0.0:
        raise ValueError("only negative exponents r are supported")
    if n < 1:
        raise ValueError("n must be a positive integer")
    gamma = -1.0 / r
    if r > -1.0:  # gamma > 1
        return float((1.0 - 1.0 / gamma) ** (-gamma))
    if r == -1.0:
        return float(math.log(n))
    return float(n ** (1.0 + gamma) / (1.0 - gamma))


def bonferroni_p(pvalues: Sequence[float]) -> float:
    """``n * min(p)``: the max-combination decision in p-value form.

    Can exceed 1; values above 1 simply mean no evidence at any usable
    level.
    """
    p = np.asarray(pvalues, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("pvalues must be a nonempty 1-d sequence")
    return float(p.size * np.min(p))
