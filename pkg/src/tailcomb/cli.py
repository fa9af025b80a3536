"""Command-line front end.

Single-result verbs (combine, critical-value, calibrate, advise) print JSON
to standard output; table verbs (optimal-params, landau-table,
simulate-size, simulate-power, tail-check) emit CSV to standard output or
to ``--output``.  Diagnostics go to standard error only.  Exit codes:
0 success, 2 usage or input error, 3 numerical failure.

Table CSV uses '.' decimals, no thousands separators, 6 significant digits
for rates and ratios, and full precision for thresholds and statistics.
Reruns with identical flags and seed are byte-identical.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .calibrators import Calibrator, calibrator_from_json_dict
from .combine import (
    CombinationSpec,
    WeightVector,
    bonferroni_p,
    combine as combine_stat,
    combining_function,
    critical_value,
    rejects,
)
from .errors import NumericalError, TailcombError, UnsupportedCombinationError
from .guidance import (
    optimal_logpareto_gamma,
    optimal_weibull_k,
    recommend_gamma,
    wilson_adjusted_alpha,
)
from .simulate import (
    SimulationScenario,
    estimate_rejection,
    scenario_from_json_dict,
    tail_equivalence_check,
    table_methods,
)
from .stable import landau_tail_ratio

# Interface revision of the emitted JSON/CSV layouts.
OUTPUT_FORMAT_VERSION = 1

_TABLE4_N = (
    10, 25, 50, 100, 1000, 10_000, 100_000, 1_000_000,
    10_000_000, 100_000_000, 1_000_000_000, 10_000_000_000,
)
_TABLE4_ALPHA = (0.1, 0.05, 0.01, 0.001, 0.0001, 0.00001)
_TABLE2_N = (25, 50, 100, 500, 1000)
_TABLE2_ALPHA = (0.1, 0.05, 0.01, 0.001, 0.0001)


class UsageError(Exception):
    """Bad input that argparse cannot catch (exit code 2)."""


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("TAILCOMB_THREADS", "1")))
    except ValueError:
        return 1


def _rate(x: float | None) -> str:
    return "NA" if x is None else f"{x:.6g}"


def _parse_params(pairs: list[str]) -> dict[str, float]:
    params: dict[str, float] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep:
            raise UsageError(f"--param expects name=value, got {pair!r}")
        try:
            params[name] = float(value)
        except ValueError:
            raise UsageError(f"--param {name} needs a numeric value, got {value!r}")
    return params


def _build_calibrator(family: str, params: dict[str, float]) -> Calibrator:
    try:
        return calibrator_from_json_dict({"family": family, "params": params})
    except ValueError as exc:
        raise UsageError(str(exc))


def _read_pvalues(path: str, column: str | None) -> list[float]:
    """p-values from a file or '-' (stdin), one per line or a CSV column."""
    if path == "-":
        text = sys.stdin.read()
        name = "<stdin>"
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read p-values: {exc}")
        name = path

    values: list[float] = []
    if column is not None:
        reader = csv.reader(io.StringIO(text))
        rows = [row for row in reader if row]
        if not rows:
            raise UsageError(f"{name}: empty CSV input")
        header = rows[0]
        try:
            col = int(column)
            start = 0
        except ValueError:
            if column not in header:
                raise UsageError(f"{name}: no CSV column named {column!r}")
            col = header.index(column)
            start = 1
        for lineno, row in enumerate(rows[start:], start=start + 1):
            if col >= len(row):
                raise UsageError(f"{name}:{lineno}: missing column {column!r}")
            values.append(_parse_pvalue(row[col], name, lineno))
    else:
        for lineno, line in enumerate(text.splitlines(), start=1):
            token = line.strip()
            if not token:
                continue
            values.append(_parse_pvalue(token, name, lineno))
    if not values:
        raise UsageError(f"{name}: no p-values found")
    return values


def _parse_pvalue(token: str, name: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise UsageError(f"{name}:{lineno}: not a number: {token!r}")
    if not (0.0 < value < 1.0):
        raise UsageError(f"{name}:{lineno}: p-value {value!r} outside (0, 1)")
    return value


def _load_weights(arg: str, n: int) -> WeightVector:
    if arg == "equal":
        return WeightVector.equal(n)
    try:
        with open(arg, "r", encoding="utf-8") as fh:
            raw = [float(tok) for tok in fh.read().split()]
    except OSError as exc:
        raise UsageError(f"cannot read weights: {exc}")
    except ValueError:
        raise UsageError(f"weights file {arg!r} must hold whitespace-separated numbers")
    if len(raw) != n:
        raise UsageError(f"weights file holds {len(raw)} entries, need {n}")
    try:
        return WeightVector.fixed(raw)
    except ValueError as exc:
        raise UsageError(str(exc))


def _emit_json(payload: dict, output: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=False) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_csv(header: list[str], rows: list[list[str]], output: str | None) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_list(text: str, cast):
    try:
        return [cast(tok) for tok in text.split(",") if tok != ""]
    except ValueError:
        raise UsageError(f"cannot parse list {text!r}")


# ---------------------------------------------------------------------------
# Verb implementations.
# ---------------------------------------------------------------------------


def _cmd_combine(args) -> int:
    pvalues = _read_pvalues(args.input, args.column)
    n = len(pvalues)
    cal = _build_calibrator(args.calibrator, _parse_params(args.param))
    weights = _load_weights(args.weights, n)
    spec = CombinationSpec(statistic=args.stat, calibrator=cal, weights=weights)

    statistic = combine_stat(spec, pvalues)
    payload = {
        "n": n,
        "calibrator": cal.to_json_dict(),
        "statistic_kind": args.stat,
        "statistic": statistic,
        "alpha": args.alpha,
    }
    try:
        payload["critical_value"] = critical_value(args.alpha, n, cal, weights)
    except UnsupportedCombinationError as exc:
        payload["critical_value"] = None
        payload["critical_value_note"] = str(exc)
    if cal.classify().rv_index is not None:
        payload["combined_p"] = combining_function(spec, pvalues)
    else:
        payload["combined_p"] = None
    payload["bonferroni_p"] = bonferroni_p(pvalues)
    payload["reject"] = rejects(spec, pvalues, args.alpha)
    _emit_json(payload, args.output)
    return 0


def _cmd_critical_value(args) -> int:
    cal = _build_calibrator(args.calibrator, _parse_params(args.param))
    weights = _load_weights(args.weights, args.n)
    value = critical_value(args.alpha, args.n, cal, weights)
    _emit_json(
        {
            "calibrator": cal.to_json_dict(),
            "n": args.n,
            "alpha": args.alpha,
            "critical_value": value,
        },
        args.output,
    )
    return 0


def _cmd_calibrate(args) -> int:
    pvalues = _read_pvalues(args.input, args.column)
    cal = _build_calibrator(args.calibrator, _parse_params(args.param))
    values = [float(cal.inverse_survival(p)) for p in pvalues]
    _emit_json(
        {"calibrator": cal.to_json_dict(), "n": len(values), "calibrated": values},
        args.output,
    )
    return 0


def _cmd_optimal_params(args) -> int:
    ns = _csv_list(args.n, int) if args.n else list(_TABLE2_N)
    alphas = _csv_list(args.alpha, float) if args.alpha else list(_TABLE2_ALPHA)
    header = ["family", "n", "alpha", "value"]
    rows = []
    for n in ns:
        for alpha in alphas:
            if args.family in ("weibull", "both"):
                rows.append(
                    ["weibull", str(n), _rate(alpha), f"{optimal_weibull_k(n, alpha):.4f}"]
                )
            if args.family in ("log-pareto", "both"):
                rows.append(
                    [
                        "log-pareto",
                        str(n),
                        _rate(alpha),
                        f"{optimal_logpareto_gamma(n, alpha):.3f}",
                    ]
                )
    _emit_csv(header, rows, args.output)
    return 0


def _cmd_advise(args) -> int:
    advice = recommend_gamma(args.alpha, args.n)
    payload = {
        "alpha": args.alpha,
        "n": args.n,
        "recommended_gamma": advice.recommended_gamma,
        "use_landau": advice.use_landau,
        "rationale": advice.rationale,
    }
    if advice.use_landau:
        payload["landau_adjusted_alpha"] = wilson_adjusted_alpha(args.alpha, args.n)
    _emit_json(payload, args.output)
    return 0


def _cmd_landau_table(args) -> int:
    ns = _csv_list(args.n, int) if args.n else list(_TABLE4_N)
    alphas = _csv_list(args.alpha, float) if args.alpha else list(_TABLE4_ALPHA)
    rows = []
    for n in ns:
        for alpha in alphas:
            rows.append([str(n), _rate(alpha), f"{landau_tail_ratio(alpha, n):.4f}"])
    _emit_csv(["n", "alpha", "ratio"], rows, args.output)
    return 0


def _simulate_table(args, mean_spec: str) -> int:
    overrides = {
        "replications": args.reps,
        "seed": args.seed,
    }
    if args.scenario:
        try:
            with open(args.scenario, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read scenario file: {exc}")
        rhos = [float(obj.get("rho", 0.0))] if args.rho is None else _csv_list(args.rho, float)
        ns = [int(obj["n"])] if args.n is None else _csv_list(args.n, int)
        alphas = [float(obj["alpha"])] if args.alpha is None else _csv_list(args.alpha, float)
        base = scenario_from_json_dict(obj, overrides)
        reps, seed = base.replications, base.seed
        custom_methods = base.methods or None
    else:
        if args.rho is None or args.n is None or args.alpha is None:
            raise UsageError("need --rho, --n and --alpha (or a --scenario file)")
        rhos = _csv_list(args.rho, float)
        ns = _csv_list(args.n, int)
        alphas = _csv_list(args.alpha, float)
        reps = args.reps if args.reps is not None else 100_000
        seed = args.seed if args.seed is not None else 0
        custom_methods = None

    report_ratio = mean_spec == "null"
    failures: list[str] = []
    rows = []
    for rho in rhos:
        for n in ns:
            for alpha in alphas:
                methods = custom_methods or table_methods(n, alpha)
                scenario = SimulationScenario(
                    n=n,
                    rho=rho,
                    alpha=alpha,
                    replications=reps,
                    seed=seed,
                    mean_spec=mean_spec,
                    methods=methods,
                )
                report = estimate_rejection(scenario, threads=args.threads)
                row = [_rate(rho), str(n), _rate(alpha)]
                for result in report.results:
                    if result.rate is None:
                        row.append("NA")
                        failures.append(f"{result.name}: {result.error}")
                    else:
                        row.append(
                            _rate(result.ratio_to_alpha if report_ratio else result.rate)
                        )
                rows.append(row)
                print(
                    f"rho={rho} n={n} alpha={alpha}: "
                    f"{report.wall_time_seconds:.1f}s",
                    file=sys.stderr,
                )
    names = [m.name for m in (custom_methods or table_methods(ns[0], alphas[0]))]
    _emit_csv(["rho", "n", "alpha", *names], rows, args.output)
    if failures:
        seen = sorted(set(failures))
        print("method-level failures: " + "; ".join(seen), file=sys.stderr)
        return 3
    return 0


def _cmd_simulate_size(args) -> int:
    return _simulate_table(args, "null")


def _cmd_simulate_power(args) -> int:
    return _simulate_table(args, "sparse-alternative")


def _cmd_tail_check(args) -> int:
    cal = _build_calibrator(args.calibrator, _parse_params(args.param))
    alphas = _csv_list(args.alpha, float)
    dep = args.dependence
    if dep == "iid":
        dependence = ("iid",)
    elif dep.startswith("rho="):
        dependence = ("equicorrelated", float(dep[4:]))
    elif dep.startswith("perfect-block="):
        dependence = ("perfect-block", int(dep.split("=", 1)[1]))
    else:
        raise UsageError(
            "--dependence must be 'iid', 'rho=<value>' or 'perfect-block=<m>'"
        )
    rows_out = tail_equivalence_check(
        cal,
        args.n,
        dependence,
        alphas,
        replications=args.reps,
        seed=args.seed,
        statistic=args.stat,
        threads=args.threads,
    )
    rows = [
        [_rate(r.alpha), _rate(r.mc_tail_prob), _rate(r.sum_of_marginals), _rate(r.ratio)]
        for r in rows_out
    ]
    _emit_csv(["alpha", "mc_tail_prob", "sum_of_marginals", "ratio"], rows, args.output)
    return 0


# ---------------------------------------------------------------------------
# Parser assembly.
# ---------------------------------------------------------------------------


def _add_calibrator_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--calibrator",
        required=True,
        choices=["pareto", "cauchy", "truncated-cauchy", "weibull", "log-pareto"],
        help="calibrator family",
    )
    sub.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="family parameter (gamma=..., k=..., delta=...); repeatable",
    )


def _add_io_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--input", default="-", help="p-value file, or '-' for stdin")
    sub.add_argument(
        "--column",
        default=None,
        help="treat the input as CSV and read this column (name or 0-based index)",
    )
    sub.add_argument("--output", default=None, help="write result here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tailcomb",
        description="Heavy-tailed p-value combination toolkit",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"tailcomb {__version__} (output format {OUTPUT_FORMAT_VERSION})",
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("combine", help="combine p-values into one test")
    _add_calibrator_flags(p)
    _add_io_flags(p)
    p.add_argument("--stat", default="sum", choices=["sum", "cumsum", "max"])
    p.add_argument("--weights", default="equal", help="'equal' or a weights file")
    p.add_argument("--alpha", type=float, default=0.05)
    p.set_defaults(func=_cmd_combine)

    p = verbs.add_parser("critical-value", help="threshold for a combined statistic")
    _add_calibrator_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--weights", default="equal", help="'equal' or a weights file")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_critical_value)

    p = verbs.add_parser("calibrate", help="map p-values through the calibrator")
    _add_calibrator_flags(p)
    _add_io_flags(p)
    p.set_defaults(func=_cmd_calibrate)

    p = verbs.add_parser("optimal-params", help="size-exact Weibull/log-Pareto parameters")
    p.add_argument("--family", default="both", choices=["weibull", "log-pareto", "both"])
    p.add_argument("--n", default=None, help="comma-separated test counts")
    p.add_argument("--alpha", default=None, help="comma-separated levels")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_optimal_params)

    p = verbs.add_parser("advise", help="recommend a regular-variation index")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_advise)

    p = verbs.add_parser("landau-table", help="Landau tail-ratio table as CSV")
    p.add_argument("--n", default=None, help="comma-separated test counts")
    p.add_argument("--alpha", default=None, help="comma-separated levels")
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_landau_table)

    for verb, fn in (("simulate-size", _cmd_simulate_size), ("simulate-power", _cmd_simulate_power)):
        p = verbs.add_parser(verb, help=f"{verb.replace('-', ' ')} table as CSV")
        p.add_argument("--scenario", default=None, help="scenario JSON file")
        p.add_argument("--rho", default=None, help="comma-separated correlations")
        p.add_argument("--n", default=None, help="comma-separated test counts")
        p.add_argument("--alpha", default=None, help="comma-separated levels")
        p.add_argument("--reps", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=_default_threads())
        p.add_argument("--output", default=None)
        p.set_defaults(func=fn)

    p = verbs.add_parser("tail-check", help="Monte Carlo tail-equivalence table")
    _add_calibrator_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dependence", default="iid", help="iid | rho=<r> | perfect-block=<m>")
    p.add_argument("--alpha", required=True, help="comma-separated levels")
    p.add_argument("--stat", default="sum", choices=["sum", "cumsum", "max"])
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--output", default=None)
    p.set_defaults(func=_cmd_tail_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tailcomb: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"tailcomb: numerical failure: {exc}", file=sys.stderr)
        return 3
    except (TailcombError, ValueError) as exc:
        print(f"tailcomb: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
