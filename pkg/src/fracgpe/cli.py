"""Command-line interface: ``fracgpe {solve,figures,validate,mlf,soliton}``.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 closure violation (profile backend), 4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from .config import PRESETS, RunConfig, load_config, load_preset
from .exceptions import (ClosureViolation, ConfigError, ConvergenceError, DomainError,
                         NumericalFailure, SeriesExtrapolationWarning)
from .figures import write_figures, write_table
from .hpm import _scalar_iterates, evaluate_series, hpm_iterate
from .model import PhysicalConstants, bright_soliton, dark_soliton, traveling_soliton
from .outputs import write_json, write_manifest
from .special import mittag_leffler

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_CLOSURE, EXIT_NUMERIC = 0, 1, 2, 3, 4


def _run_config(args) -> RunConfig:
    if args.config is None:
        raise ConfigError("--config is required")
    return load_config(args.config).with_overrides(alpha=args.alpha, order=args.order,
                                                   backend=args.backend)


def _coefficient_report(run: RunConfig, sol) -> dict:
    report = {
        "name": run.name,
        "alpha": sol.alpha,
        "order": sol.order,
        "backend": sol.config.backend,
        "nonlinearity": sol.config.nonlinearity,
        "exponents": sol.exponents.tolist(),
    }
    if sol.is_profile:
        report["coefficients"] = [complex(c) for c in sol.coefficients]
    else:
        projected, spread = _scalar_iterates(sol)
        report["projected_coefficients"] = [complex(c) for c in projected]
        report["proportionality_spread"] = spread
    if sol.closure is not None:
        report["closure"] = {
            "closed": sol.closure.closed,
            "rate": complex(sol.closure.rate),
            "deviation": sol.closure.deviation,
            "step_rates": [complex(r) for r in sol.closure.step_rates],
        }
    return report


def cmd_solve(args) -> int:
    run = _run_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    sol = hpm_iterate(run.scenario)
    t_solve = time.perf_counter() - t0

    write_json(out / "coefficients.json", _coefficient_report(run, sol))
    t = run.output.t.values
    if sol.is_profile:
        x = run.output.x.values
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SeriesExtrapolationWarning)
            psi = evaluate_series(sol, x[None, :], t[:, None])
    else:
        x = run.scenario.grid.x
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SeriesExtrapolationWarning)
            psi = evaluate_series(sol, None, t)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    rows = [[ti, xi, v.real, v.imag, abs(v) ** 2]
            for i, ti in enumerate(t) for xi, v in zip(x, psi[i])]
    write_table(out / "series.csv", ["t", "x", "re", "im", "density"], rows)
    write_manifest(out, "solve", run.source,
                   {"solve": t_solve, "total": time.perf_counter() - t0})
    if sol.closure is not None and sol.closure.closed:
        print(f"closure detected: rate {complex(sol.closure.rate):.12g}")
    else:
        print("no Mittag-Leffler closure detected")
    return EXIT_OK


def cmd_figures(args) -> int:
    run = _run_config(args) if args.config else load_preset(args.example, order=args.order)
    out = Path(args.out)
    t0 = time.perf_counter()
    write_figures(run, out, alphas=args.alpha_list)
    write_manifest(out, "figures", run.source, {"total": time.perf_counter() - t0})
    print(f"figure data for {run.name} written to {out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    from .validation import run_validation
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    report = run_validation(inject=args.inject_perturbation, numbers=args.criteria)
    for c in report["criteria"]:
        status = "PASS" if c["passed"] else "FAIL"
        failed = [s["name"] for s in c["checks"] if not s["passed"]]
        tail = f"  (failed: {', '.join(failed)})" if failed else ""
        print(f"[{status}] criterion {c['number']:2d}: {c['title']}{tail}")
    write_json(out / "validation.json", report)
    write_manifest(out, "validate", {"inject_perturbation": args.inject_perturbation},
                   {"total": time.perf_counter() - t0})
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


def cmd_mlf(args) -> int:
    try:
        v = mittag_leffler(args.alpha, complex(args.z_re, args.z_im), args.beta, tol=args.tol)
    except (ConvergenceError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    v = complex(v)
    print(f"{v.real:.17g} {v.imag:+.17g}j")
    return EXIT_OK


def cmd_soliton(args) -> int:
    c = PhysicalConstants(g=args.g, mu=args.mu)
    x = np.linspace(args.x_min, args.x_max, args.points)
    if args.v != 0 or args.x0 != 0:
        psi = traveling_soliton(args.kind, c, args.v, args.x0, x, args.t)
    elif args.kind == "dark":
        psi = dark_soliton(c, x, args.t)
    else:
        psi = bright_soliton(c, x, args.t)
    rows = [[xi, v.real, v.imag, abs(v) ** 2] for xi, v in zip(x, psi)]
    header = ["x", "re", "im", "density"]
    if args.out:
        write_table(args.out, header, rows)
    else:
        print(",".join(header))
        for r in rows:
            print(",".join(f"{v:.17g}" for v in r))
    return EXIT_OK


def _add_overrides(p):
    p.add_argument("--alpha", type=float, help="override the fractional order")
    p.add_argument("--order", type=int, help="override the truncation order N")
    p.add_argument("--backend", choices=["profile", "grid"], help="override the backend")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fracgpe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="build a series solution from a YAML scenario")
    p.add_argument("--config", required=True, help="scenario YAML file")
    p.add_argument("--out", required=True, help="output directory")
    _add_overrides(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("figures", help="emit figure data (CSV) for a worked example")
    p.add_argument("--example", type=int, choices=PRESETS, default=1)
    p.add_argument("--config", help="scenario YAML file instead of a shipped preset")
    p.add_argument("--alpha", dest="alpha_list", type=float, nargs="+", default=[1.0, 0.9, 0.8],
                   help="fractional orders of the trace curves")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--backend", choices=["profile"], default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_figures, alpha=None)

    p = sub.add_parser("validate", help="run the acceptance checks and write a JSON report")
    p.add_argument("--out", required=True)
    p.add_argument("--criteria", type=int, nargs="+", choices=range(1, 12), default=None)
    p.add_argument("--inject-perturbation", action="store_true",
                   help="perturb c_3 by 1e-6 to demonstrate the harness catches it")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mlf", help="evaluate the Mittag-Leffler function E_{alpha,beta}(z)")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("z_re", type=float)
    p.add_argument("z_im", type=float)
    p.add_argument("--tol", type=float, default=1e-14)
    p.set_defaults(func=cmd_mlf)

    p = sub.add_parser("soliton", help="sample a dark or bright soliton on a grid")
    p.add_argument("--kind", choices=["dark", "bright"], default="dark")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--v", type=float, default=0.0, help="soliton speed")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--out", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_soliton)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ClosureViolation as exc:
        print(f"closure violation: {exc}", file=sys.stderr)
        return EXIT_CLOSURE
    except (NumericalFailure, ConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
