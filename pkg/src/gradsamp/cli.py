"""Command-line front end: solve runs, diagnostics, and benchmark sweeps.

Exit codes: 0 on success (any recorded termination status counts as a
completed solve), 1 for usage errors (bad flags, unknown functions or
points, malformed inputs), 2 for unexpected runtime failures.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .analysis import classify_outcome, degeneracy_report, rho_estimate, subdiff_approx_experiment
from .core import GsParams, ParameterOutOfRange
from .sampling import RngStream
from .solver import gs_solve, gs_solve_fixed_radius
from .testbed import from_name
from .traceio import summary_from_trace, write_curves, write_trace

_PARAM_FIELDS = (
    "eps_opt", "nu_opt", "eps0", "nu0", "m", "beta", "gamma", "theta_eps",
    "theta_nu", "max_iter", "max_backtracks", "max_perturb_attempts",
    "divergence_floor",
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract here is 1.
    def error(self, message):
        raise _UsageError(message)


def _parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([float(tok) for tok in text.split(",") if tok.strip() != ""])
    except ValueError as exc:
        raise _UsageError(f"cannot parse vector '{text}': {exc}") from None


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("GS_DEFAULT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UsageError(f"GS_DEFAULT_SEED is not an integer: {env!r}") from None
    return 0


def _add_param_flags(sp) -> None:
    sp.add_argument("--eps-opt", dest="eps_opt", type=float)
    sp.add_argument("--nu-opt", dest="nu_opt", type=float)
    sp.add_argument("--eps0", type=float)
    sp.add_argument("--nu0", type=float)
    sp.add_argument("--m", type=int)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--gamma", type=float)
    sp.add_argument("--theta-eps", dest="theta_eps", type=float)
    sp.add_argument("--theta-nu", dest="theta_nu", type=float)
    sp.add_argument("--max-iter", dest="max_iter", type=int)
    sp.add_argument("--max-backtracks", dest="max_backtracks", type=int)
    sp.add_argument("--max-perturb-attempts", dest="max_perturb_attempts", type=int)
    sp.add_argument("--divergence-floor", dest="divergence_floor", type=float)
    sp.add_argument("--resample-outside-domain", action="store_true", default=None)


def _build_params(args, seed: int, base: dict | None = None) -> GsParams:
    """Defaults, overlaid by suite-file params, overlaid by explicit flags."""
    p = GsParams(seed=seed)
    if base:
        unknown = set(base) - {f.name for f in dataclasses.fields(GsParams)}
        if unknown:
            raise _UsageError(f"unknown parameter(s) in suite file: {sorted(unknown)}")
        p = dataclasses.replace(p, **base)
    overrides = {}
    for name in _PARAM_FIELDS:
        v = getattr(args, name, None)
        if v is not None:
            overrides[name] = v
    if getattr(args, "resample_outside_domain", None):
        overrides["resample_outside_domain"] = True
    if overrides:
        p = dataclasses.replace(p, **overrides)
    return dataclasses.replace(p, seed=seed)


def _json_ready(x):
    if isinstance(x, np.ndarray):
        return [float(c) for c in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    return x


def _cmd_solve(args) -> int:
    fn = from_name(args.fn)
    x0 = _parse_vector(args.x0)
    if x0.size != fn.dim():
        raise _UsageError(f"{fn.name} has dimension {fn.dim()}, got x0 of size {x0.size}")
    seed = _resolve_seed(args)
    params = _build_params(args, seed)
    runner = gs_solve_fixed_radius if args.fixed_radius else gs_solve
    trace = runner(fn, x0, params)
    header = {
        "fn": args.fn,
        "x0": [float(c) for c in x0],
        "fixed_radius": bool(args.fixed_radius),
        "params": {
            f.name: getattr(params, f.name) for f in dataclasses.fields(GsParams)
        },
    }
    write_trace(args.trace, trace, header)
    if args.curves:
        write_curves(args.curves, trace)
    print(summary_from_trace(trace))
    return 0


def _cmd_summarize(args) -> int:
    from .traceio import summary_from_file

    print(summary_from_file(args.trace))
    return 0


def _cmd_diag(args) -> int:
    fn = from_name(args.fn)
    at = _parse_vector(args.at)
    if at.size != fn.dim():
        raise _UsageError(f"{fn.name} has dimension {fn.dim()}, got point of size {at.size}")
    seed = _resolve_seed(args)
    out: dict = {"diag": args.what, "fn": args.fn, "at": [float(c) for c in at]}
    if args.what == "rho":
        out["eps"] = args.eps
        out["samples"] = args.samples
        out["seed"] = seed
        out["rho_estimate"] = rho_estimate(fn, at, args.eps, args.samples, RngStream(seed, 0))
    elif args.what == "degeneracy":
        kp = fn.known_point_at(at)
        if kp is None:
            known = [[float(c) for c in k.x] for k in fn.known_points]
            raise _UsageError(
                f"no analytic model stored for {args.fn} at {at.tolist()}; "
                f"available points: {known}"
            )
        rep = degeneracy_report(kp.model, tol=args.tol)
        out["tol"] = args.tol
        out["note"] = kp.note
        out["subdiff_empty"] = rep.subdiff_empty
        out["contains_zero"] = rep.contains_zero
        out["proj"] = _json_ready(rep.proj)
        out["neg_proj_interior"] = rep.neg_proj_interior
        out["classification"] = rep.classification.value
    else:  # approx
        deltas = [float(t) for t in args.deltas.split(",") if t.strip()]
        out["deltas"] = deltas
        out["samples"] = args.samples
        out["seed"] = seed
        levels = subdiff_approx_experiment(fn, at, deltas, args.samples, RngStream(seed, 0))
        out["levels"] = [
            {
                "delta": lv.delta,
                "min_norm": lv.min_norm_result.norm,
                "coord_min": _json_ready(lv.coord_min),
                "coord_max": _json_ready(lv.coord_max),
            }
            for lv in levels
        ]
    print(json.dumps(out))
    return 0


_BENCH_COLUMNS = ("fn", "seed", "status", "iterations", "final_f", "dist_to_known_min", "outcome", "error")


def _run_bench_cell(job: dict) -> dict:
    """One (cell, seed) run; returns a CSV row dict.  Top level for pickling."""
    row = {c: "" for c in _BENCH_COLUMNS}
    row["fn"] = job["fn"]
    row["seed"] = str(job["seed"])
    try:
        fn = from_name(job["fn"])
        x0 = np.asarray(job["x0"], dtype=float)
        if x0.size != fn.dim():
            raise ValueError(f"{job['fn']} has dimension {fn.dim()}, x0 has size {x0.size}")
        params = GsParams(seed=job["seed"])
        if job["params"]:
            params = dataclasses.replace(params, **job["params"])
        params = dataclasses.replace(params, seed=job["seed"])
        runner = gs_solve_fixed_radius if job.get("fixed_radius") else gs_solve
        trace = runner(fn, x0, params)
        row["status"] = trace.status.value
        row["iterations"] = str(len(trace.records))
        row["final_f"] = repr(float(trace.final_f))
        if fn.known_minimizers:
            dist = min(
                float(np.linalg.norm(trace.final_x - np.asarray(m, dtype=float)))
                for m in fn.known_minimizers
            )
            row["dist_to_known_min"] = repr(dist)
        row["outcome"] = classify_outcome(trace).value
    except Exception as exc:  # per-row failure; recorded, not fatal
        row["status"] = "Error"
        row["error"] = str(exc)
    return row


def _cmd_bench(args) -> int:
    try:
        with open(args.suite, encoding="utf-8") as fh:
            suite = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _UsageError(f"cannot read suite file {args.suite}: {exc}") from None
    if not isinstance(suite, list):
        raise _UsageError("suite file must be a JSON list of cells")

    flag_overrides = {}
    for name in _PARAM_FIELDS:
        v = getattr(args, name, None)
        if v is not None:
            flag_overrides[name] = v
    if getattr(args, "resample_outside_domain", None):
        flag_overrides["resample_outside_domain"] = True

    jobs = []
    for i, cell in enumerate(suite):
        if not isinstance(cell, dict) or "fn" not in cell or "x0" not in cell:
            raise _UsageError(f"suite cell {i} must be an object with at least fn and x0")
        seeds = cell.get("seeds", [0])
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        cell_params = dict(cell.get("params", {}))
        cell_params.update(flag_overrides)  # CLI flags beat the suite file
        for seed in seeds:
            jobs.append(
                {
                    "fn": cell["fn"],
                    "x0": cell["x0"],
                    "seed": int(seed),
                    "params": cell_params,
                    "fixed_radius": bool(cell.get("fixed_radius", False)),
                }
            )

    if args.jobs > 1 and jobs:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_run_bench_cell, jobs))
    else:
        rows = [_run_bench_cell(job) for job in jobs]

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=_BENCH_COLUMNS)
        w.writeheader()
        w.writerows(rows)
    failures = sum(1 for r in rows if r["status"] == "Error")
    print(f"wrote {len(rows)} rows to {args.out} ({failures} failed)")
    return 2 if failures else 0


def _make_parser() -> _Parser:
    parser = _Parser(prog="gradsamp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="run the sampling solver on a testbed function")
    sp.add_argument("--fn", required=True, help="registry name, e.g. abs_sum:2")
    sp.add_argument("--x0", required=True, help="comma-separated start point")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--fixed-radius", action="store_true")
    sp.add_argument("--trace", default="gs_trace.jsonl", help="JSON-lines trace output path")
    sp.add_argument("--curves", help="optional CSV of per-iteration curves")
    _add_param_flags(sp)
    sp.set_defaults(fun=_cmd_solve)

    sp = sub.add_parser("summarize", help="re-print the summary line of a trace file")
    sp.add_argument("--trace", required=True)
    sp.set_defaults(fun=_cmd_summarize)

    sp = sub.add_parser("diag", help="run a diagnostic")
    sp.add_argument("what", choices=("rho", "degeneracy", "approx"))
    sp.add_argument("--fn", required=True)
    sp.add_argument("--at", required=True, help="comma-separated point")
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--samples", type=int, default=500)
    sp.add_argument("--deltas", default="0.2,0.1,0.05")
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(fun=_cmd_diag)

    sp = sub.add_parser("bench", help="run a suite of solves and write a CSV")
    sp.add_argument("--suite", required=True, help="JSON list of {fn, x0, params, seeds}")
    sp.add_argument("--out", default="bench.csv")
    sp.add_argument("--jobs", type=int, default=1)
    _add_param_flags(sp)
    sp.set_defaults(fun=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _make_parser()
    try:
        args = parser.parse_args(argv)
        return args.fun(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParameterOutOfRange, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"unexpected failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
