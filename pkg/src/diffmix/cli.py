"""Command-line entry point.

Subcommands::

    diffmix run --case pvt_advection --out results/
    diffmix run --config my_case.yaml --cells 400 --solver implicit
    diffmix list-cases
    diffmix riemann --case shock_tube_no_diffusion --cells 1000 --out exact.csv
    diffmix converge --case shock_tube_no_diffusion --cells 100 200 400 --out conv.csv

Exit codes: 0 success, 2 configuration error, 3 numerical failure.  The
number of BLAS/OpenMP threads can be capped with ``DIFFMIX_NUM_THREADS``.
"""

import argparse
import logging
import os
import sys
from contextlib import nullcontext
from pathlib import Path

import numpy as np

from .errors import ConfigError, DiffmixError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
THREADS_ENV = "DIFFMIX_NUM_THREADS"


def _thread_limit():
    value = os.environ.get(THREADS_ENV)
    if not value:
        return nullcontext()
    try:
        n = int(value)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {value!r}") from None
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=max(n, 1))


def _add_case_args(p, config=True):
    p.add_argument("--case", help="built-in case name (see list-cases); "
                                  "triple_point:H+V selects a variant")
    if config:
        p.add_argument("--config", help="YAML case file")
    p.add_argument("--cells", type=int, nargs="+", help="cells per axis")
    p.add_argument("--tend", type=float, help="end time in solver units")


def build_parser():
    parser = argparse.ArgumentParser(prog="diffmix", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a case")
    _add_case_args(p)
    p.add_argument("--out", help="output directory for snapshots and diagnostics")
    p.add_argument("--solver", choices=("lim", "implicit"), help="parabolic solver")
    p.add_argument("--no-viscous", action="store_true")
    p.add_argument("--no-relax", action="store_true")
    p.add_argument("--no-conduct", action="store_true")
    p.add_argument("--cfl", type=float)
    p.add_argument("--snapshots", type=float, nargs="*", help="extra snapshot times")
    p.add_argument("--dump-config", metavar="PATH", help="write the resolved case as YAML and exit")

    sub.add_parser("list-cases", help="list built-in cases")

    p = sub.add_parser("riemann", help="sample the exact solution of a two-state shock tube")
    _add_case_args(p)
    p.add_argument("--out", help="CSV file (default: stdout)")

    p = sub.add_parser("converge", help="grid-convergence table of a 1D case")
    _add_case_args(p, config=False)
    p.add_argument("--reference", choices=("oracle", "finest"), default="oracle")
    p.add_argument("--out", help="CSV file for the table")
    return parser


def _plan_from_args(args):
    from .driver import RunPlan
    if (args.case is None) == (getattr(args, "config", None) is None):
        raise ConfigError("give exactly one of --case and --config")
    return RunPlan(case=args.case, config=getattr(args, "config", None),
                   cells=tuple(args.cells) if args.cells else None, t_end=args.tend,
                   viscous=False if getattr(args, "no_viscous", False) else None,
                   relax=False if getattr(args, "no_relax", False) else None,
                   conduct=False if getattr(args, "no_conduct", False) else None,
                   solver=getattr(args, "solver", None), cfl=getattr(args, "cfl", None),
                   out_dir=getattr(args, "out", None), snapshots=getattr(args, "snapshots", None))


def cmd_run(args):
    from .config import dump_case
    from .driver import run
    plan = _plan_from_args(args)
    if args.dump_config:
        plan.out_dir = None
        dump_case(plan.resolve(), args.dump_config)
        print(f"wrote {args.dump_config}")
        return EXIT_OK
    res = run(plan)
    last = res.diagnostics[-1]
    print(f"{res.case.name}: {res.simulation.step_index} steps, t = {res.time:.6g}, "
          f"p in [{last.p_min:.6g}, {last.p_max:.6g}], T in [{last.T_min:.6g}, {last.T_max:.6g}]")
    for f in res.files:
        print(f"  wrote {f}")
    if res.error is not None:
        print(f"error: {res.error}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_list_cases(args):
    from .cases import CASES, TRIPLE_POINT_VARIANTS
    for name, fn in CASES.items():
        doc = (fn.__doc__ or "").strip().split("\n")[0]
        print(f"{name:26s} {doc}")
    print("triple_point variants: " + ", ".join(f"triple_point:{v}" for v in TRIPLE_POINT_VARIANTS))
    return EXIT_OK


def cmd_riemann(args):
    from .driver import riemann_reference
    plan = _plan_from_args(args)
    plan.out_dir = None         # --out names a CSV file here, not a directory
    case = plan.resolve()
    if case.grid.ndim != 1:
        raise ConfigError("the exact Riemann solution is sampled on 1D cases")
    x = case.grid.centers(0)
    sol, smp = riemann_reference(case, x, case.t_end)
    table = np.column_stack([x, smp.rho, smp.u, smp.p, smp.T, smp.side])
    header = "x,rho,u,p,T,side"
    out = args.out or sys.stdout
    np.savetxt(out, table, fmt="%.17g", delimiter=",", header=header, comments="")
    print(f"p* = {sol.p_star:.10g}, u* = {sol.u_star:.10g}, waves: {sol.wave_L}/{sol.wave_R}",
          file=sys.stderr)
    return EXIT_OK


def cmd_converge(args):
    from .cases import builtin_case
    from .driver import convergence_report
    if args.case is None or not args.cells:
        raise ConfigError("converge needs --case and at least one --cells value")
    base = builtin_case(args.case)
    if base.grid.ndim != 1:
        raise ConfigError("converge works on 1D cases")

    def factory(n):
        case = builtin_case(args.case, cells=n)
        if args.tend is not None:
            from dataclasses import replace
            case = replace(case, t_end=args.tend)
        return case

    table = convergence_report(factory, args.cells, args.reference)
    print(table.summary())
    if args.out:
        table.to_csv(args.out)
        print(f"wrote {args.out}")
    return EXIT_OK


COMMANDS = {"run": cmd_run, "list-cases": cmd_list_cases, "riemann": cmd_riemann,
            "converge": cmd_converge}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with _thread_limit():
            return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DiffmixError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
