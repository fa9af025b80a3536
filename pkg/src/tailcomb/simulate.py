"""Monte Carlo engine for size and power of combined tests.

Data model: each replication draws an equicorrelated normal vector through
the one-factor identity ``Y_i = sqrt(rho) Z0 + sqrt(1-rho) Z_i + mu_i``
(O(n) per replication instead of an O(n^2) Cholesky product) and converts
to two-sided p-values ``U_i = 2 - 2 Phi(|Y_i|)``.  The global null sets
``mu = 0``; the sparse alternative plants ``s = floor(0.05 n)`` signals of
strength ``sqrt(4 log n) / s^0.1``.

Reproducibility contract: replications are grouped into fixed-size batches
(a pure function of n, never of the worker count), and batch ``b`` draws
from a counter-based Philox generator keyed by ``(seed, b, stream)``.
Each batch is a pure function of its key, and the only cross-batch
operation is an integer rejection-count sum, so runs with the same seed
produce bit-identical results on any number of workers.

Per-method thresholds are computed once per scenario, outside the
replication loop.  All statistic kernels are vectorized over a batch and
evaluate in log space where calibrated values can overflow (log-Pareto).
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.special import erfc, logsumexp

from .calibrators import (
    Calibrator,
    LogPareto,
    Pareto,
    Weibull,
    calibrator_from_json_dict,
)
from .combine import (
    WeightVector,
    critical_value,
    log_critical_value,
    m_family_asymptotic_scale,
)
from .errors import TailcombError
from .stable import LANDAU_LOCATION_OFFSET
from .guidance import (
    optimal_logpareto_gamma,
    optimal_weibull_k,
    perfect_corr_multiplier,
    PerfectCorrSetting,
    wilson_adjusted_alpha,
)

__all__ = [
    "MethodSpec",
    "SimulationScenario",
    "MethodResult",
    "RejectionReport",
    "TailCheckRow",
    "gen_pvalues",
    "estimate_rejection",
    "tail_equivalence_check",
    "gclt_samples",
    "perfect_block_expected_ratio",
    "table_methods",
    "TABLE_COLUMNS",
    "HARMONIC_M_SCALE_BY_N",
    "size_table",
    "power_table",
    "scenario_from_json_dict",
]

# Streams keep the normal-model draws and the iid-uniform draws disjoint.
_STREAM_NORMAL = 0
_STREAM_UNIFORM = 1
_KEY_SALT = 0x9E3779B97F4A7C15

# Precise scale factors for the harmonic-mean (r = -1) power-mean column,
# found by grid search over the exactness condition at finite n.  The other
# power-mean exponents use their closed asymptotic scales (see
# combine.m_family_asymptotic_scale); only r = -1 lacks a closed form.
HARMONIC_M_SCALE_BY_N = {25: 5.76, 100: 7.45, 1000: 10.11}

TABLE_COLUMNS = (
    "W_v",
    "T1_F0.5",
    "M_0.5",
    "T1_F1",
    "T1_W",
    "M_1",
    "T1_F1.5",
    "M_1.5",
    "LP_v",
    "LP_5",
    "Max",
)


def _batch_rng(seed: int, batch_index: int, stream: int) -> np.random.Generator:
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(_KEY_SALT)])
    counter = np.array(
        [0, 0, np.uint64(batch_index), np.uint64(stream)], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def _batch_size(n: int) -> int:
    # ~4M doubles per batch, clamped; depends only on n so that batch
    # boundaries (and hence all draws) are identical for any worker count.
    return int(min(16384, max(256, 2**22 // (n + 1))))


@dataclass(frozen=True)
class MethodSpec:
    """One rejection-rule column of a simulation.

    kind 'statistic' runs a calibrated combination statistic against its
    critical value; 'm-family' thresholds the scaled power mean at alpha;
    'wilson' is the index-1 Pareto sum with the Landau-adjusted level;
    'max' / 'bonferroni' reject when min p < alpha/n.
    """

    kind: Literal["statistic", "m-family", "wilson", "max", "bonferroni"]
    name: str
    calibrator: Calibrator | None = None
    statistic: Literal["sum", "cumsum", "max"] = "sum"
    r: float | None = None
    a_tilde: float | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"kind": self.kind, "name": self.name}
        if self.calibrator is not None:
            out["calibrator"] = self.calibrator.to_json_dict()
        if self.kind == "statistic":
            out["statistic"] = self.statistic
        if self.r is not None:
            out["r"] = self.r
        if self.a_tilde is not None:
            out["a_tilde"] = self.a_tilde
        return out


@dataclass(frozen=True)
class SimulationScenario:
    """Dependence strength, test count, level, and methods for one run."""

    n: int
    rho: float
    alpha: float
    replications: int
    seed: int
    mean_spec: Literal["null", "sparse-alternative"] = "null"
    methods: tuple[MethodSpec, ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not (0.0 <= self.rho < 1.0):
            raise ValueError("rho must lie in [0, 1)")
        if not (0.0 < self.alpha < 1.0):
            raise ValueError("alpha must lie in (0, 1)")
        if self.replications < 1:
            raise ValueError("replications must be positive")
        if self.mean_spec not in ("null", "sparse-alternative"):
            raise ValueError("mean_spec must be 'null' or 'sparse-alternative'")
        if self.mean_spec == "sparse-alternative" and self.n < 20:
            raise ValueError("the sparse alternative needs floor(0.05 n) >= 1")

    def mean_vector(self) -> np.ndarray:
        mu = np.zeros(self.n)
        if self.mean_spec == "sparse-alternative":
            s = int(math.floor(0.05 * self.n))
            mu[:s] = math.sqrt(4.0 * math.log(self.n)) / s**0.1
        return mu


@dataclass(frozen=True)
class MethodResult:
    name: str
    rejections: int | None
    rate: float | None
    mc_standard_error: float | None
    ratio_to_alpha: float | None
    error: str | None = None


@dataclass(frozen=True)
class RejectionReport:
    scenario: SimulationScenario
    results: tuple[MethodResult, ...]
    wall_time_seconds: float

    def by_name(self) -> dict[str, MethodResult]:
        return {r.name: r for r in self.results}


def _null_uniform_batch(scenario, batch_index: int, rows: int) -> np.ndarray:
    rng = _batch_rng(scenario.seed, batch_index, _STREAM_UNIFORM)
    u = rng.random((rows, scenario.n))
    # Guard the open interval; doubles from random() live in [0, 1).
    return np.clip(u, 5e-324, 1.0 - 1e-16)


def _normal_model_batch(
    scenario: SimulationScenario, batch_index: int, rows: int, mu: np.ndarray
) -> np.ndarray:
    """p-values of one batch of the (possibly shifted) equicorrelated model."""
    rng = _batch_rng(scenario.seed, batch_index, _STREAM_NORMAL)
    z = rng.standard_normal((rows, scenario.n + 1))
    y = math.sqrt(scenario.rho) * z[:, :1] + math.sqrt(1.0 - scenario.rho) * z[:, 1:]
    if mu.any():
        y = y + mu
    p = erfc(np.abs(y) / math.sqrt(2.0))
    return np.clip(p, 5e-324, 1.0 - 1e-16)


def gen_pvalues(scenario: SimulationScenario, replication_index: int) -> np.ndarray:
    """p-values of a single replication, deterministic in (seed, index).

    Regenerates the fixed-size batch containing the replication and picks
    its row, so spot checks see exactly what the batched engine consumed.
    """
    if not (0 <= replication_index < scenario.replications):
        raise ValueError("replication_index out of range")
    size = _batch_size(scenario.n)
    batch_index, offset = divmod(replication_index, size)
    rows = min(size, scenario.replications - batch_index * size)
    batch = _normal_model_batch(scenario, batch_index, rows, scenario.mean_vector())
    return batch[offset]


# ---------------------------------------------------------------------------
# Vectorized statistic kernels.  Each returns per-replication values that a
# precomputed threshold turns into rejection booleans.
# ---------------------------------------------------------------------------


def _sum_values(u: np.ndarray, cal: Calibrator) -> tuple[np.ndarray, bool]:
    """Equal-weight sum statistic per row; (values, in_log_space)."""
    n = u.shape[1]
    if isinstance(cal, Pareto):
        g = cal.gamma
        if g == 1.0:
            x = 1.0 / u
        elif g == 0.5:
            x = 1.0 / (u * u)
        else:
            x = u ** (-1.0 / g)
        return x.mean(axis=1), False
    if isinstance(cal, Weibull):
        x = (-np.log(u)) ** (1.0 / cal.k)
        return x.mean(axis=1), False
    if isinstance(cal, LogPareto):
        logx = u ** (-1.0 / cal.gamma)
        return logsumexp(logx, axis=1) - math.log(n), True
    x = np.asarray(cal.inverse_survival(u), dtype=float)
    return x.mean(axis=1), False


def _statistic_values(
    u: np.ndarray, cal: Calibrator, statistic: str
) -> tuple[np.ndarray, bool]:
    n = u.shape[1]
    if statistic == "sum":
        return _sum_values(u, cal)
    if statistic == "max":
        if isinstance(cal, LogPareto):
            return np.min(u, axis=1) ** (-1.0 / cal.gamma) - math.log(n), True
        x = np.asarray(cal.inverse_survival(np.min(u, axis=1)), dtype=float)
        return x / n, False
    # cumsum-max; equals the sum for positive-support calibrators but is
    # evaluated literally so negative-support families work too.
    if isinstance(cal, LogPareto):
        logx = u ** (-1.0 / cal.gamma) - math.log(n)
        return np.max(np.logaddexp.accumulate(logx, axis=1), axis=1), True
    x = np.asarray(cal.inverse_survival(u), dtype=float) / n
    return np.max(np.cumsum(x, axis=1), axis=1), False


class _CompiledMethod:
    """A method with its threshold resolved for one scenario."""

    def __init__(self, spec: MethodSpec, n: int, alpha: float):
        self.spec = spec
        self.name = spec.name
        self.denominator = alpha
        kind = spec.kind
        if kind in ("max", "bonferroni"):
            self._cut = alpha / n
            self._eval = self._eval_max
        elif kind == "wilson":
            self.denominator = wilson_adjusted_alpha(alpha, n)
            self._cut = 1.0 / self.denominator  # sum of reciprocals scale
            self._eval = self._eval_wilson
        elif kind == "m-family":
            if spec.a_tilde is None:
                raise ValueError(
                    "no power-mean scale factor available for this column "
                    f"(n={n}; tabulated for n in {sorted(HARMONIC_M_SCALE_BY_N)})"
                )
            if spec.r is None or spec.r >= 0.0:
                raise ValueError("m-family methods need a negative exponent r")
            self._r = spec.r
            self._log_cut = math.log(alpha) - math.log(spec.a_tilde)
            self._eval = self._eval_m_family
        elif kind == "statistic":
            if spec.calibrator is None:
                raise ValueError("statistic methods need a calibrator")
            weights = WeightVector.equal(n)
            if isinstance(spec.calibrator, LogPareto):
                self._cut = log_critical_value(alpha, n, spec.calibrator, weights)
                self._log_space = True
            else:
                self._cut = critical_value(alpha, n, spec.calibrator, weights)
                self._log_space = False
            self._eval = self._eval_statistic
        else:
            raise ValueError(f"unknown method kind {kind!r}")

    def rejections(self, u: np.ndarray) -> int:
        return int(self._eval(u).sum())

    def _eval_max(self, u: np.ndarray) -> np.ndarray:
        return np.min(u, axis=1) < self._cut

    def _eval_wilson(self, u: np.ndarray) -> np.ndarray:
        return (1.0 / u).mean(axis=1) > self._cut

    def _eval_m_family(self, u: np.ndarray) -> np.ndarray:
        n = u.shape[1]
        log_m = (logsumexp(self._r * np.log(u), axis=1) - math.log(n)) / self._r
        return log_m < self._log_cut

    def _eval_statistic(self, u: np.ndarray) -> np.ndarray:
        values, in_log = _statistic_values(u, self.spec.calibrator, self.spec.statistic)
        if in_log != self._log_space:  # pragma: no cover - internal consistency
            raise TailcombError("statistic kernel and threshold disagree on scale")
        return values > self._cut


def estimate_rejection(
    scenario: SimulationScenario, threads: int = 1
) -> RejectionReport:
    """Estimate per-method rejection rates over the scenario's replications.

    Method-level threshold failures (for example an unsupported calibrator
    at the requested level) are recorded on the method's result and do not
    abort the other columns.  The rejection counts are invariant to
    ``threads``.
    """
    if not scenario.methods:
        raise ValueError("scenario has no methods to evaluate")
    start = time.perf_counter()

    compiled: list[_CompiledMethod | None] = []
    errors: list[str | None] = []
    for spec in scenario.methods:
        try:
            compiled.append(_CompiledMethod(spec, scenario.n, scenario.alpha))
            errors.append(None)
        except (TailcombError, ValueError) as exc:
            compiled.append(None)
            errors.append(str(exc))

    live = [m for m in compiled if m is not None]
    counts = np.zeros(len(live), dtype=np.int64)
    if live:
        mu = scenario.mean_vector()
        size = _batch_size(scenario.n)
        n_batches = -(-scenario.replications // size)

        def run_batch(batch_index: int) -> np.ndarray:
            rows = min(size, scenario.replications - batch_index * size)
            u = _normal_model_batch(scenario, batch_index, rows, mu)
            return np.array([m.rejections(u) for m in live], dtype=np.int64)

        if threads <= 1 or n_batches == 1:
            for b in range(n_batches):
                counts += run_batch(b)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for partial in pool.map(run_batch, range(n_batches)):
                    counts += partial

    results = []
    reps = scenario.replications
    it = iter(counts)
    for spec, method, err in zip(scenario.methods, compiled, errors):
        if method is None:
            results.append(MethodResult(spec.name, None, None, None, None, error=err))
            continue
        c = int(next(it))
        rate = c / reps
        se = math.sqrt(rate * (1.0 - rate) / reps)
        results.append(
            MethodResult(
                name=spec.name,
                rejections=c,
                rate=rate,
                mc_standard_error=se,
                ratio_to_alpha=rate / method.denominator,
            )
        )
    return RejectionReport(
        scenario=scenario,
        results=tuple(results),
        wall_time_seconds=time.perf_counter() - start,
    )


# ---------------------------------------------------------------------------
# Tail-equivalence checks against the sum-of-marginals approximation.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TailCheckRow:
    alpha: float
    mc_tail_prob: float
    sum_of_marginals: float
    ratio: float


def _dependence_batch(
    seed: int, batch_index: int, rows: int, n: int, dependence
) -> np.ndarray:
    kind = dependence[0]
    if kind == "iid":
        rng = _batch_rng(seed, batch_index, _STREAM_UNIFORM)
        u = rng.random((rows, n))
    elif kind == "equicorrelated":
        rho = float(dependence[1])
        rng = _batch_rng(seed, batch_index, _STREAM_NORMAL)
        z = rng.standard_normal((rows, n + 1))
        y = math.sqrt(rho) * z[:, :1] + math.sqrt(1.0 - rho) * z[:, 1:]
        u = erfc(np.abs(y) / math.sqrt(2.0))
    elif kind == "perfect-block":
        m = int(dependence[1])
        if not (0 <= m <= n - 2):
            raise ValueError("perfect-block m must satisfy 0 <= m <= n - 2")
        rng = _batch_rng(seed, batch_index, _STREAM_UNIFORM)
        base = rng.random((rows, m + 1))
        u = np.empty((rows, n))
        u[:, :m] = base[:, :m]
        u[:, m:] = base[:, m:m + 1]
    else:
        raise ValueError(f"unknown dependence kind {kind!r}")
    return np.clip(u, 5e-324, 1.0 - 1e-16)


def tail_equivalence_check(
    cal: Calibrator,
    n: int,
    dependence,
    alpha_grid: Sequence[float],
    replications: int = 100_000,
    seed: int = 0,
    statistic: str = "sum",
    threads: int = 1,
) -> list[TailCheckRow]:
    """Monte Carlo tail probabilities versus the sum-of-marginals value.

    ``dependence`` is ``("iid",)``, ``("equicorrelated", rho)`` or
    ``("perfect-block", m)``.  Thresholds are the equal-weight critical
    values, at which the sum of marginal tails equals alpha exactly, so the
    ratio column converges to 1 under the tail-equivalence conditions and
    to the perfect-correlation multipliers under a perfect block.
    """
    alphas = [float(a) for a in alpha_grid]
    if not alphas or any(not 0.0 < a < 1.0 for a in alphas):
        raise ValueError("alpha_grid must contain levels in (0, 1)")
    weights = WeightVector.equal(n)
    in_log = isinstance(cal, LogPareto)
    cuts = []
    for a in alphas:
        if statistic == "max":
            cuts.append(a / n)
        elif in_log:
            cuts.append(log_critical_value(a, n, cal, weights))
        else:
            cuts.append(critical_value(a, n, cal, weights))

    size = _batch_size(n)
    n_batches = -(-replications // size)

    def run_batch(batch_index: int) -> np.ndarray:
        rows = min(size, replications - batch_index * size)
        u = _dependence_batch(seed, batch_index, rows, n, dependence)
        if statistic == "max":
            minu = np.min(u, axis=1)
            return np.array([(minu < c).sum() for c in cuts], dtype=np.int64)
        values, _ = _statistic_values(u, cal, statistic)
        return np.array([(values > c).sum() for c in cuts], dtype=np.int64)

    counts = np.zeros(len(alphas), dtype=np.int64)
    if threads <= 1 or n_batches == 1:
        for b in range(n_batches):
            counts += run_batch(b)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for partial in pool.map(run_batch, range(n_batches)):
                counts += partial

    rows = []
    for a, c in zip(alphas, counts):
        mc = c / replications
        rows.append(TailCheckRow(a, mc, a, mc / a))
    return rows


def perfect_block_expected_ratio(cal: Calibrator, n: int, m: int, j: int) -> float:
    """Expected tail-check ratio under a perfect block, per the multipliers."""
    rv = cal.classify().rv_index
    if rv is None:
        raise ValueError("expected ratios need a regularly varying calibrator")
    mult = perfect_corr_multiplier(j, PerfectCorrSetting(n=n, m=m, gamma=rv))
    return mult / n ** (1.0 - rv)


def gclt_samples(
    n: int,
    gamma: float,
    replications: int,
    seed: int = 0,
    threads: int = 1,
) -> np.ndarray:
    """Normalized equal-weight Pareto sums of iid uniforms, sorted.

    Each replication draws n iid uniforms, forms ``mean(U^(-1/gamma))`` and
    applies the generalized-CLT centering/scaling; the output is ready for
    a distributional comparison against the limiting stable law.
    """
    if not (0.0 < gamma <= 1.0):
        raise ValueError("gamma must lie in (0, 1]")
    size = _batch_size(n)
    n_batches = -(-replications // size)
    if gamma == 1.0:
        center, scale = math.log(n) + LANDAU_LOCATION_OFFSET, 0.5 * math.pi
    else:
        center = 0.0
        scale = (
            n ** (1.0 / gamma - 1.0)
            * ((2.0 / math.pi) * math.gamma(gamma) * math.sin(0.5 * math.pi * gamma))
            ** (-1.0 / gamma)
        )

    def run_batch(batch_index: int) -> np.ndarray:
        rows = min(size, replications - batch_index * size)
        rng = _batch_rng(seed, batch_index, _STREAM_UNIFORM)
        u = np.clip(rng.random((rows, n)), 5e-324, 1.0 - 1e-16)
        if gamma == 1.0:
            s = (1.0 / u).mean(axis=1)
        else:
            s = (u ** (-1.0 / gamma)).mean(axis=1)
        return (s - center) / scale

    if threads <= 1 or n_batches == 1:
        chunks = [run_batch(b) for b in range(n_batches)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run_batch, range(n_batches)))
    out = np.concatenate(chunks)
    out.sort()
    return out


# ---------------------------------------------------------------------------
# Reference-table assembly.
# ---------------------------------------------------------------------------


def table_methods(n: int, alpha: float) -> tuple[MethodSpec, ...]:
    """The eleven standard method columns for a table cell.

    The power-mean columns are scaled to be asymptotically precise: closed
    forms for exponents -2 and -2/3, the grid-searched finite-n constants
    for the harmonic mean.  The harmonic-mean column is reported as missing
    for test counts without a tabulated constant.
    """
    methods: list[MethodSpec] = [
        MethodSpec("statistic", "W_v", calibrator=Weibull(optimal_weibull_k(n, alpha))),
        MethodSpec("statistic", "T1_F0.5", calibrator=Pareto(0.5)),
        MethodSpec("m-family", "M_0.5", r=-2.0, a_tilde=m_family_asymptotic_scale(-2.0, n)),
        MethodSpec("statistic", "T1_F1", calibrator=Pareto(1.0)),
        MethodSpec("wilson", "T1_W"),
        MethodSpec("m-family", "M_1", r=-1.0, a_tilde=HARMONIC_M_SCALE_BY_N.get(n)),
        MethodSpec("statistic", "T1_F1.5", calibrator=Pareto(1.5)),
        MethodSpec(
            "m-family", "M_1.5", r=-2.0 / 3.0,
            a_tilde=m_family_asymptotic_scale(-2.0 / 3.0, n),
        ),
        MethodSpec(
            "statistic", "LP_v", calibrator=LogPareto(optimal_logpareto_gamma(n, alpha))
        ),
        MethodSpec("statistic", "LP_5", calibrator=LogPareto(5.0)),
        MethodSpec("max", "Max"),
    ]
    return tuple(methods)


def _table_rows(
    rhos: Sequence[float],
    ns: Sequence[int],
    alphas: Sequence[float],
    replications: int,
    seed: int,
    mean_spec: str,
    threads: int,
    report_ratio: bool,
) -> list[dict]:
    rows = []
    for rho in rhos:
        for n in ns:
            for alpha in alphas:
                scenario = SimulationScenario(
                    n=n,
                    rho=rho,
                    alpha=alpha,
                    replications=replications,
                    seed=seed,
                    mean_spec=mean_spec,
                    methods=table_methods(n, alpha),
                )
                report = estimate_rejection(scenario, threads=threads)
                row = {"rho": rho, "n": n, "alpha": alpha}
                for result in report.results:
                    if result.rate is None:
                        row[result.name] = None
                    else:
                        row[result.name] = (
                            result.ratio_to_alpha if report_ratio else result.rate
                        )
                rows.append(row)
    return rows


def size_table(
    rhos: Sequence[float],
    ns: Sequence[int],
    alphas: Sequence[float],
    replications: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> list[dict]:
    """Null rejection-rate ratios (rate / level) for the standard columns."""
    return _table_rows(
        rhos, ns, alphas, replications, seed, "null", threads, report_ratio=True
    )


def power_table(
    rhos: Sequence[float],
    ns: Sequence[int],
    alphas: Sequence[float],
    replications: int = 1_000_000,
    seed: int = 0,
    threads: int = 1,
) -> list[dict]:
    """Raw powers under the sparse alternative for the standard columns."""
    return _table_rows(
        rhos,
        ns,
        alphas,
        replications,
        seed,
        "sparse-alternative",
        threads,
        report_ratio=False,
    )


def scenario_from_json_dict(obj: dict, overrides: dict | None = None) -> SimulationScenario:
    """Build a scenario from its JSON form, honouring CLI-style overrides."""
    data = dict(obj)
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})
    methods = []
    for entry in data.get("methods", []):
        cal = entry.get("calibrator")
        methods.append(
            MethodSpec(
                kind=entry["kind"],
                name=entry.get("name", entry["kind"]),
                calibrator=calibrator_from_json_dict(cal) if cal else None,
                statistic=entry.get("statistic", "sum"),
                r=entry.get("r"),
                a_tilde=entry.get("a_tilde"),
            )
        )
    return SimulationScenario(
        n=int(data["n"]),
        rho=float(data.get("rho", 0.0)),
        alpha=float(data["alpha"]),
        replications=int(data.get("replications", 100_000)),
        seed=int(data.get("seed", 0)),
        mean_spec=data.get("mean_spec", "null"),
        methods=tuple(methods),
    )
