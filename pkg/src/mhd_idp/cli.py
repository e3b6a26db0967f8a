"""Command-line interface.

Subcommands: project a single point, limit a CSV of cell averages, run a
benchmark case, emit the slicing-validation curves, and benchmark the
projection over a batch of points.

Exit codes: 0 success, 1 solver/limiter failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .brent import BrentConfig
from .limiter import (CsvFormatError, admissible_rows_mask, limit_cell_averages,
                      read_averages_csv, write_averages_csv)
from .slicing import eval_d2, project_admissible, search_interval
from .dg.config import load_config
from .dg.runner import run_case
from .dg.stepper import SolverAbort

_POINT_FIELDS = ("u", "v1", "v2", "v3", "w", "z1", "z2", "z3")


def _threads_default() -> int:
    env = os.environ.get("MHD_IDP_THREADS")
    return int(env) if env else 1


def _split_point(values):
    arr = np.asarray(values, dtype=float)
    return arr[0], arr[1:4], arr[4], arr[5:]


def cmd_project(args) -> int:
    u, v, w, z = _split_point(args.point)
    res = project_admissible(u, v, w, z, args.eps)
    s = res.state
    print("rho,m1,m2,m3,E,B1,B2,B3,beta_star,beta_low,beta_high,dist2,slice_calls")
    row = [s.rho, *s.m, s.E, *s.B, res.beta_star, res.interval[0], res.interval[1],
           res.dist2]
    print(",".join(f"{x:.17g}" for x in row) + f",{res.n_slice_calls}")
    if args.report_interval:
        print(f"# interval = [{res.interval[0]:.6g}, {res.interval[1]:.6g}], "
              f"beta* = {res.beta_star:.6g}", file=sys.stderr)
    return 0


def cmd_validate_slicing(args) -> int:
    u, v, w, z = _split_point(args.point)
    if not np.any(np.asarray(z) != 0.0):
        print("error: slicing curves require z != 0", file=sys.stderr)
        return 2
    beta_low, beta_high, _ = search_interval(u, v, w, z, args.eps)
    znorm = float(np.linalg.norm(z))
    res = project_admissible(u, v, w, z, args.eps)
    betas = np.linspace(beta_low, beta_high, args.samples)
    lines = ["beta,f,h,d2"]
    for beta in betas:
        h = (math.sqrt(beta) - znorm) ** 2
        d2 = eval_d2(u, v, w, z, args.eps, beta)
        lines.append(f"{beta:.17g},{d2 - h:.17g},{h:.17g},{d2:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"# interval = [{beta_low:.17g}, {beta_high:.17g}], "
          f"beta_star = {res.beta_star:.17g}", file=sys.stderr)
    return 0


def cmd_limit(args) -> int:
    try:
        U = read_averages_csv(args.input)
    except (CsvFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    x_star, report = limit_cell_averages(U, args.eps, tol_dy=args.tol,
                                         threads=args.threads)
    write_averages_csv(args.out, x_star)
    print(json.dumps(dict(n_iters=report.n_iters,
                          conservation_residual=report.conservation_residual,
                          feasibility_residual=report.feasibility_residual,
                          converged=report.converged,
                          n_slice_calls=report.n_slice_calls)))
    return 0 if report.converged else 1


def cmd_run(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out_dir:
        cfg.out_dir = args.out_dir
    if args.threads:
        cfg.threads = args.threads
    t0 = time.perf_counter()
    try:
        result = run_case(cfg)
    except SolverAbort as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return 1
    wall = time.perf_counter() - t0
    print(f"case={cfg.case} steps={result.n_steps} t={result.t:.17g} "
          f"dy_triggers={result.n_dy_triggers} min_rho={result.min_rho:.6g} "
          f"min_ie={result.min_internal_energy:.6g} wall={wall:.1f}s")
    if result.error_report is not None:
        print(f"err1={result.error_report.err1:.6e} "
              f"errinf={result.error_report.errinf:.6e}")
    return 0


def cmd_bench_projection(args) -> int:
    try:
        pts = read_averages_csv(args.input)
    except (CsvFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    counts = []
    t0 = time.perf_counter()
    for row in pts:
        res = project_admissible(row[0], row[1:4], row[4], row[5:8], args.eps)
        counts.append(res.n_slice_calls)
    wall = time.perf_counter() - t0
    counts = np.asarray(counts)
    ns = 1e9 * wall / len(counts)
    values, freq = np.unique(counts, return_counts=True)
    lines = ["slice_calls,count"] + [f"{v},{c}" for v, c in zip(values, freq)]
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    print(f"# mean={counts.mean():.2f} sd={counts.std():.2f} "
          f"min={counts.min()} max={counts.max()} ns_per_projection={ns:.0f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mhd-idp",
                                description="Invariant-domain projection and "
                                            "limiting tools for ideal MHD")
    p.add_argument("--threads", type=int, default=_threads_default(),
                   help="worker cap for row-parallel limiting "
                        "(env MHD_IDP_THREADS)")
    sub = p.add_subparsers(dest="command", required=True)

    pp = sub.add_parser("project", help="project one point onto the admissible set")
    pp.add_argument("point", type=float, nargs=8, metavar="|".join(_POINT_FIELDS))
    pp.add_argument("--eps", type=float, default=1e-13)
    pp.add_argument("--report-interval", action="store_true")
    pp.set_defaults(func=cmd_project)

    pv = sub.add_parser("validate-slicing", help="emit (beta, f, h, d2) curves")
    pv.add_argument("point", type=float, nargs=8, metavar="|".join(_POINT_FIELDS))
    pv.add_argument("--eps", type=float, default=1e-13)
    pv.add_argument("--samples", type=int, default=200)
    pv.add_argument("--out", default=None)
    pv.set_defaults(func=cmd_validate_slicing)

    pl = sub.add_parser("limit", help="limit a CSV of cell averages")
    pl.add_argument("input")
    pl.add_argument("--eps", type=float, default=1e-13)
    pl.add_argument("--tol", type=float, default=1e-12)
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_limit)

    pr = sub.add_parser("run", help="run a benchmark case from a config file")
    pr.add_argument("config")
    pr.add_argument("--out-dir", default=None)
    pr.set_defaults(func=cmd_run)

    pb = sub.add_parser("bench-projection", help="projection call statistics")
    pb.add_argument("input")
    pb.add_argument("--eps", type=float, default=1e-6)
    pb.add_argument("--out", default=None)
    pb.set_defaults(func=cmd_bench_projection)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
