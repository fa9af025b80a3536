"""Calibrator distribution families.

A calibrator maps a p-value ``p`` to a heavy-tailed random variable through
the inverse survival function of a distribution ``F``: ``X = Fbar^{-1}(p)``.
Under the null, ``p`` is Uniform(0,1) and ``X`` follows ``F``.  The right
tail of ``F`` determines how aggressively small p-values are amplified and
which dependence-robustness guarantees the combined test inherits.

Five families are provided:

================    ===========================================  ==========
family              survival function                            support
================    ===========================================  ==========
pareto              ``t**(-gamma)``  (scale fixed at 1)           [1, inf)
cauchy              ``1/2 - arctan(t)/pi``                        (-inf, inf)
truncated-cauchy    Cauchy with p-values clamped at ``1-delta``   [tan((delta-1/2)pi), inf)
weibull             ``exp(-t**k)``, heavy-tailed shape k<1        [0, inf)
log-pareto          ``(log t)**(-gamma)`` for t > e, else 1       [e, inf)
================    ===========================================  ==========

All calibrators are immutable after construction and every operation is a
pure function, so instances can be shared freely across threads.

Deep-tail arithmetic: ``Fbar^{-1}(p)`` for log-Pareto grows like
``exp(p**(-1/gamma))`` and leaves double range long before ``p`` reaches the
smallest representable values.  Each family therefore also exposes the pair
``log_inverse_survival`` / ``survival_given_log`` which work on ``log X``
and never overflow; composed operations (critical values, combining
functions, exact perfect-correlation sizes) are built on those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Calibrator",
    "Pareto",
    "Cauchy",
    "TruncatedCauchy",
    "Weibull",
    "LogPareto",
    "TailClassification",
    "calibrator_from_json_dict",
]

ArrayLike = Union[float, np.ndarray]

# Tail-class labels, from narrowest to widest.
REGULARLY_VARYING = "regularly-varying"
CONSISTENTLY_VARYING = "consistently-varying"
DOMINATEDLY_VARYING = "dominatedly-varying"
SUBEXPONENTIAL = "subexponential"
LONG_TAILED = "long-tailed"

# A regularly varying tail is consistently varying, dominatedly varying,
# subexponential and long-tailed; each narrower class implies the wider ones.
_RV_CHAIN = frozenset(
    {
        REGULARLY_VARYING,
        CONSISTENTLY_VARYING,
        DOMINATEDLY_VARYING,
        SUBEXPONENTIAL,
        LONG_TAILED,
    }
)
_SLOWLY_VARYING_CHAIN = frozenset(
    {CONSISTENTLY_VARYING, DOMINATEDLY_VARYING, SUBEXPONENTIAL, LONG_TAILED}
)
_SUBEXP_ONLY = frozenset({SUBEXPONENTIAL, LONG_TAILED})


@dataclass(frozen=True)
class TailClassification:
    """Tail metadata for a calibrator family.

    rv_index is the regular-variation index gamma when the survival function
    is a power law times a slowly varying factor, and None otherwise.
    left_tail_ok records whether the left tail is light enough for the
    sum/max tail-equivalence results to apply (true whenever the support is
    bounded below).  balance is the (right, left) tail mass split
    (p_F, q_F) for regularly varying families.
    """

    rv_index: float | None
    tail_class: frozenset[str]
    left_tail_ok: bool
    balance: tuple[float, float] | None = None


def _prepare(x: ArrayLike) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _finish(arr: np.ndarray, scalar: bool) -> ArrayLike:
    return float(arr) if scalar else arr


def _check_open_unit(p: np.ndarray, what: str = "p") -> None:
    if np.any(p <= 0.0) or np.any(p >= 1.0):
        raise ValueError(f"{what} must lie strictly inside (0, 1)")


class Calibrator:
    """Common interface of the calibrator families.

    Subclasses provide ``survival``, ``inverse_survival``, their log-space
    variants, and ``classify``.  Values below the support lower bound have
    survival 1 by convention.
    """

    family: str = ""

    @property
    def support_lower(self) -> float:
        raise NotImplementedError

    def survival(self, t: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def inverse_survival(self, p: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def log_inverse_survival(self, p: ArrayLike) -> ArrayLike:
        """log(inverse_survival(p)), exact even where the value overflows."""
        raise NotImplementedError

    def survival_given_log(self, log_t: ArrayLike) -> ArrayLike:
        """survival(exp(log_t)), exact even where exp(log_t) overflows."""
        raise NotImplementedError

    def classify(self) -> TailClassification:
        raise NotImplementedError

    def _params(self) -> dict[str, float]:
        return {}

    def to_json_dict(self) -> dict:
        return {"family": self.family, "params": self._params()}

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        params = ", ".join(f"{k}={v:g}" for k, v in self._params().items())
        return f"{type(self).__name__}({params})"


@dataclass(frozen=True, repr=False)
class Pareto(Calibrator):
    """Pareto tail with index gamma > 0 and scale fixed at 1."""

    gamma: float

    family = "pareto"

    def __post_init__(self):
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise ValueError("Pareto index gamma must be a positive finite real")

    @property
    def support_lower(self) -> float:
        return 1.0

    def survival(self, t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(t)
        out = np.where(arr <= 1.0, 1.0, arr ** (-self.gamma))
        return _finish(out, scalar)

    def inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        return _finish(arr ** (-1.0 / self.gamma), scalar)

    def log_inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        return _finish(-np.log(arr) / self.gamma, scalar)

    def survival_given_log(self, log_t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(log_t)
        out = np.where(arr <= 0.0, 1.0, np.exp(-self.gamma * arr))
        return _finish(out, scalar)

    def classify(self) -> TailClassification:
        return TailClassification(
            rv_index=self.gamma,
            tail_class=_RV_CHAIN,
            left_tail_ok=True,
            balance=(1.0, 0.0),
        )

    def _params(self) -> dict[str, float]:
        return {"gamma": self.gamma}


def _cauchy_survival(arr: np.ndarray) -> np.ndarray:
    # 1/2 - arctan(t)/pi loses relative precision for large positive t;
    # arctan(1/t)/pi is the same quantity without cancellation.
    out = np.empty_like(arr)
    pos = arr > 0.0
    out[pos] = np.arctan(1.0 / arr[pos]) / np.pi
    out[~pos] = 0.5 - np.arctan(arr[~pos]) / np.pi
    return out


def _cauchy_inverse_survival(arr: np.ndarray) -> np.ndarray:
    # tan((1/2 - p) pi) == 1/tan(p pi); the cotangent form stays accurate
    # as p -> 0 where the direct tangent argument hugs pi/2.
    out = np.empty_like(arr)
    small = arr < 0.5
    out[small] = 1.0 / np.tan(np.pi * arr[small])
    out[~small] = np.tan((0.5 - arr[~small]) * np.pi)
    return out


@dataclass(frozen=True, repr=False)
class Cauchy(Calibrator):
    """Standard Cauchy; the classic arctangent calibrator."""

    family = "cauchy"

    @property
    def support_lower(self) -> float:
        return -math.inf

    def survival(self, t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(t)
        return _finish(_cauchy_survival(arr), scalar)

    def inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        return _finish(_cauchy_inverse_survival(arr), scalar)

    def log_inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        if np.any(arr >= 0.5):
            raise ValueError("log of the Cauchy calibrated value needs p < 0.5")
        return _finish(-np.log(np.tan(np.pi * arr)), scalar)

    def survival_given_log(self, log_t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(log_t)
        # exp(log_t) > 0 always, so the cotangent branch applies; for
        # log_t beyond double range arctan(e^-log_t) ~ e^-log_t.
        with np.errstate(over="ignore", under="ignore"):
            out = np.arctan(np.exp(-arr)) / np.pi
        return _finish(out, scalar)

    def classify(self) -> TailClassification:
        return TailClassification(
            rv_index=1.0,
            tail_class=_RV_CHAIN,
            left_tail_ok=False,
            balance=(0.5, 0.5),
        )


@dataclass(frozen=True, repr=False)
class TruncatedCauchy(Calibrator):
    """Cauchy calibrator with p-values above ``1 - delta`` clamped.

    Clamping bounds the support below at ``tan((delta - 1/2) pi)``, thinning
    the left tail so that the sum/max tail-equivalence assumptions hold at
    the price of an extra user-chosen threshold delta in (0, 1/2).
    """

    delta: float

    family = "truncated-cauchy"

    def __post_init__(self):
        if not (0.0 < self.delta < 0.5):
            raise ValueError("truncation threshold delta must lie in (0, 0.5)")

    @property
    def support_lower(self) -> float:
        return math.tan((self.delta - 0.5) * math.pi)

    def survival(self, t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(t)
        out = np.where(arr < self.support_lower, 1.0, _cauchy_survival(arr))
        return _finish(out, scalar)

    def inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        clamped = np.minimum(arr, 1.0 - self.delta)
        return _finish(_cauchy_inverse_survival(clamped), scalar)

    def log_inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        if np.any(arr >= 0.5):
            raise ValueError("log of the calibrated value needs p < 0.5")
        return _finish(-np.log(np.tan(np.pi * arr)), scalar)

    def survival_given_log(self, log_t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(log_t)
        with np.errstate(over="ignore", under="ignore"):
            out = np.arctan(np.exp(-arr)) / np.pi
        return _finish(out, scalar)

    def classify(self) -> TailClassification:
        return TailClassification(
            rv_index=1.0,
            tail_class=_RV_CHAIN,
            left_tail_ok=True,
            balance=(1.0, 0.0),
        )

    def _params(self) -> dict[str, float]:
        return {"delta": self.delta}


@dataclass(frozen=True, repr=False)
class Weibull(Calibrator):
    """Heavy-tailed Weibull with shape k in (0,1) and scale fixed at 1."""

    k: float

    family = "weibull"

    def __post_init__(self):
        if not (0.0 < self.k < 1.0):
            raise ValueError("Weibull shape k must lie in (0, 1) for a heavy tail")

    @property
    def support_lower(self) -> float:
        return 0.0

    def survival(self, t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(t)
        out = np.where(arr <= 0.0, 1.0, np.exp(-np.abs(arr) ** self.k))
        return _finish(out, scalar)

    def inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        return _finish((-np.log(arr)) ** (1.0 / self.k), scalar)

    def log_inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        return _finish(np.log(-np.log(arr)) / self.k, scalar)

    def survival_given_log(self, log_t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(log_t)
        with np.errstate(over="ignore", under="ignore"):
            out = np.exp(-np.exp(self.k * arr))
        return _finish(out, scalar)

    def classify(self) -> TailClassification:
        # exp(-t^k), k < 1: subexponential but not dominatedly varying.
        return TailClassification(
            rv_index=None,
            tail_class=_SUBEXP_ONLY,
            left_tail_ok=True,
            balance=None,
        )

    def _params(self) -> dict[str, float]:
        return {"k": self.k}


@dataclass(frozen=True, repr=False)
class LogPareto(Calibrator):
    """Log-Pareto: survival (log t)^(-gamma), a slowly varying tail.

    Only the tail form is intrinsic; on (1, e) the power of log t would
    exceed 1, so survival is clamped to 1 there and the support starts at e.
    """

    gamma: float

    family = "log-pareto"

    def __post_init__(self):
        if not (self.gamma > 0.0 and math.isfinite(self.gamma)):
            raise ValueError("log-Pareto index gamma must be a positive finite real")

    @property
    def support_lower(self) -> float:
        return math.e

    def survival(self, t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(t)
        with np.errstate(invalid="ignore", divide="ignore"):
            raw = np.where(arr > 1.0, np.log(np.maximum(arr, 1.0 + 1e-300)), 1.0)
            out = np.where(arr <= math.e, 1.0, raw ** (-self.gamma))
        return _finish(out, scalar)

    def inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        with np.errstate(over="ignore"):
            out = np.exp(arr ** (-1.0 / self.gamma))
        return _finish(out, scalar)

    def log_inverse_survival(self, p: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(p)
        _check_open_unit(arr)
        return _finish(arr ** (-1.0 / self.gamma), scalar)

    def survival_given_log(self, log_t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(log_t)
        out = np.where(arr <= 1.0, 1.0, np.maximum(arr, 1e-300) ** (-self.gamma))
        return _finish(out, scalar)

    def classify(self) -> TailClassification:
        # Slowly varying tail: consistently varying (the ratio limit is 1)
        # but not regularly varying with any positive index.
        return TailClassification(
            rv_index=None,
            tail_class=_SLOWLY_VARYING_CHAIN,
            left_tail_ok=True,
            balance=None,
        )

    def _params(self) -> dict[str, float]:
        return {"gamma": self.gamma}


_FAMILIES = {
    "pareto": lambda params: Pareto(gamma=float(params["gamma"])),
    "cauchy": lambda params: Cauchy(),
    "truncated-cauchy": lambda params: TruncatedCauchy(delta=float(params["delta"])),
    "weibull": lambda params: Weibull(k=float(params["k"])),
    "log-pareto": lambda params: LogPareto(gamma=float(params["gamma"])),
}


def calibrator_from_json_dict(obj: dict) -> Calibrator:
    """Rebuild a calibrator from its ``{"family": ..., "params": {...}}`` form."""
    try:
        family = obj["family"]
    except (TypeError, KeyError):
        raise ValueError("calibrator JSON must be an object with a 'family' key")
    try:
        factory = _FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown calibrator family {family!r}; expected one of {sorted(_FAMILIES)}"
        )
    params = obj.get("params", {}) or {}
    try:
        return factory(params)
    except KeyError as exc:
        raise ValueError(f"calibrator family {family!r} is missing parameter {exc}")
