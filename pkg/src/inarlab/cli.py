"""Batch command-line interface.

Subcommands: classify, moments, simulate, cir, fit, mc-converge, boston.
Every run is a pure function of its flags: outputs are byte-identical for
identical flags and seed, whatever the worker count. Exit codes: 0 success,
2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import cir as cirmod
from . import harness, moments, simulate, spectral
from .errors import NumericalError, SpecificationError
from .estimate import FitConfig, Method, fit as run_fit
from .model import ModelSpec, classify

__all__ = ["main"]


def _fmt(x) -> str:
    """Shortest round-trip decimal form; deterministic across runs."""
    return repr(float(x))


def _load_spec(text: str) -> ModelSpec:
    if text.lstrip().startswith("{"):
        return ModelSpec.from_json(text)
    return ModelSpec.from_json(Path(text).read_text())


def _parse_floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)


def _json_dumps(obj) -> str:
    return json.dumps(obj, indent=2)


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="base seed (64-bit unsigned)")
    parser.add_argument("--out", default="-", help="output path, '-' for stdout")
    parser.add_argument("--format", choices=["csv", "json"], default=None, help="override the output format")


def _cmd_classify(args) -> None:
    spec = _load_spec(args.spec)
    cls = classify(spec)
    report = {
        "regime": cls.regime.value,
        "alpha_sum": cls.alpha_sum,
        "rho": cls.rho,
        "sigma_alpha_sq": cls.sigma_alpha_sq,
        "phi_prime_at_one": cls.phi_prime_at_one,
        "d": cls.d,
        "primitive": cls.primitive,
        "u": None,
        "v": None,
        "pi": None,
        "lambda2_mod": None,
    }
    if cls.primitive:
        data = spectral.spectral_data(spec)
        report["u"] = list(data.u)
        report["v"] = list(data.v)
        report["pi"] = [list(row) for row in data.pi]
        report["lambda2_mod"] = data.lambda2_mod
    elif not spec.is_degenerate:
        report["lambda2_mod"] = spectral.second_eigen_modulus(spec)
    if args.format == "csv":
        lines = ["key,value"] + [f"{k},{json.dumps(v)}" for k, v in report.items()]
        _emit(args, "\n".join(lines))
    else:
        _emit(args, _json_dumps(report))


def _cmd_moments(args) -> None:
    spec = _load_spec(args.spec)
    table = moments.moment_table(spec, args.horizon)
    if args.format == "json":
        _emit(
            args,
            _json_dumps(
                {
                    "k": list(range(1, table.K + 1)),
                    "mean": list(table.mean),
                    "variance": list(table.variance),
                    "m2": list(table.m2),
                }
            ),
        )
        return
    lines = ["k,mean,variance,m2"]
    for k in range(table.K):
        lines.append(f"{k + 1},{_fmt(table.mean[k])},{_fmt(table.variance[k])},{_fmt(table.m2[k])}")
    _emit(args, "\n".join(lines))


def _cmd_simulate(args) -> None:
    spec = _load_spec(args.spec)
    if args.horizon is None and args.n is None:
        raise SpecificationError("provide --horizon or --n")
    horizon = args.horizon if args.horizon is not None else args.n
    if horizon < 1:
        raise SpecificationError("horizon must be >= 1")
    rows = []
    for rep in range(args.reps):
        path = simulate.simulate_path(
            spec, horizon, simulate.RngStream(args.seed, rep), record_mdiffs=args.mdiffs
        )
        for k in range(horizon):
            if args.mdiffs:
                rows.append((rep, k + 1, int(path.counts[k]), path.mdiffs[k]))
            else:
                rows.append((rep, k + 1, int(path.counts[k])))
    if args.format == "json":
        cols = ["rep", "k", "x"] + (["m"] if args.mdiffs else [])
        _emit(args, _json_dumps([dict(zip(cols, row)) for row in rows]))
        return
    header = "rep,k,x,m" if args.mdiffs else "rep,k,x"
    lines = [header]
    for row in rows:
        cells = [str(row[0]), str(row[1]), str(row[2])] + ([_fmt(row[3])] if args.mdiffs else [])
        lines.append(",".join(cells))
    _emit(args, "\n".join(lines))


def _cmd_cir(args) -> None:
    if args.spec is not None:
        params = cirmod.params_from_model(_load_spec(args.spec))
    elif args.a is not None and args.b2 is not None:
        params = cirmod.CirParams(a=args.a, b2=args.b2)
    else:
        raise SpecificationError("provide --spec or both --a and --b2")
    t_grid = _parse_floats(args.t_grid)
    if any(t <= 0.0 for t in t_grid):
        raise SpecificationError("t values must be positive")
    rng = simulate.RngStream(args.seed, 0)
    if args.euler:
        values = cirmod.euler_values(params, t_grid, args.dt, args.reps, rng)
    else:
        gen = rng.generator()
        values = np.column_stack(
            [cirmod.sample_marginal(params, t, gen, size=args.reps) for t in t_grid]
        )
    if args.format == "json":
        recs = [
            {"rep": rep, "t": t, "x": float(values[rep, j])}
            for rep in range(args.reps)
            for j, t in enumerate(t_grid)
        ]
        _emit(args, _json_dumps(recs))
        return
    lines = ["rep,t,x"]
    for rep in range(args.reps):
        for j, t in enumerate(t_grid):
            lines.append(f"{rep},{_fmt(t)},{_fmt(values[rep, j])}")
    _emit(args, "\n".join(lines))


def _fit_record(result) -> dict:
    return {
        "method": result.method.value,
        "alpha_hat": {str(l): a for l, a in sorted(result.alpha_hat.items())},
        "mu_hat": result.mu_hat,
        "sigma": result.sigma,
        "se": result.se,
        "sample_range": list(result.sample_range),
        "warnings": list(result.warnings),
    }


def _fit_csv(results) -> str:
    lags = sorted(results[0].alpha_hat)
    header = "method," + ",".join(f"alpha_{l}" for l in lags) + ",mu,sigma,se"
    lines = [header]
    for r in results:
        cells = [r.method.value] + [_fmt(r.alpha_hat[l]) for l in lags]
        cells += [_fmt(r.mu_hat), _fmt(r.sigma), _fmt(r.se)]
        lines.append(",".join(cells))
    return "\n".join(lines)


def _cmd_fit(args) -> None:
    series = harness.load_counts(args.data)
    config = FitConfig(lags=tuple(_parse_ints(args.lags)), method=Method(args.method))
    result = run_fit(series.values, config)
    if args.format == "csv":
        _emit(args, _fit_csv([result]))
    else:
        _emit(args, _json_dumps(_fit_record(result)))


def _cmd_mc_converge(args) -> None:
    spec = _load_spec(args.spec)
    report = harness.mc_convergence(
        spec,
        _parse_ints(args.n_list),
        _parse_floats(args.t_grid),
        args.reps,
        args.seed,
        workers=args.workers,
    )
    if args.format == "json":
        _emit(
            args,
            _json_dumps(
                {
                    "cells": [vars(c) for c in report.cells],
                    "ks_improved": {_fmt(t): ok for t, ok in sorted(report.ks_improved.items())},
                }
            ),
        )
        return
    lines = ["n,t,reps,mean,variance,ks,ks_crit,limit_mean,limit_variance"]
    for c in report.cells:
        lines.append(
            f"{c.n},{_fmt(c.t)},{c.reps},{_fmt(c.mean)},{_fmt(c.variance)},"
            f"{_fmt(c.ks)},{_fmt(c.ks_crit)},{_fmt(c.limit_mean)},{_fmt(c.limit_variance)}"
        )
    _emit(args, "\n".join(lines))


def _cmd_boston(args) -> None:
    series = harness.load_counts(args.data) if args.data else harness.load_boston()
    report = harness.boston_report(series)
    if args.format == "json":
        _emit(
            args,
            _json_dumps(
                {
                    "cls": _fit_record(report.cls),
                    "wcls": _fit_record(report.wcls),
                    "reference": report.reference,
                }
            ),
        )
    elif args.format == "csv":
        _emit(args, _fit_csv([report.cls, report.wcls]))
    else:
        _emit(args, report.table)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inarlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="regime, Perron root and eigenstructure of a spec")
    p.add_argument("--spec", required=True, help="spec JSON text or a path to a JSON file")
    _common_flags(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("moments", help="exact mean/variance/martingale-moment table")
    p.add_argument("--spec", required=True)
    p.add_argument("--horizon", type=int, required=True)
    _common_flags(p)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("simulate", help="simulate integer paths")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, default=None, help="scale; defaults the horizon to n steps")
    p.add_argument("--horizon", type=int, default=None, help="path length in steps")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--mdiffs", action="store_true", help="record martingale differences")
    p.add_argument("--workers", type=int, default=1)
    _common_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("cir", help="simulate or sample the limit diffusion")
    p.add_argument("--spec", default=None)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b2", type=float, default=None)
    p.add_argument("--t-grid", dest="t_grid", default="1.0")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--dt", type=float, default=1e-4)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true", default=True, help="draw from the exact marginal (default)")
    group.add_argument("--euler", dest="euler", action="store_true", help="full-truncation Euler paths")
    _common_flags(p)
    p.set_defaults(func=_cmd_cir, euler=False)

    p = sub.add_parser("fit", help="CLS/WCLS subset-model fit of a count series")
    p.add_argument("--data", required=True, help="path to a counts file")
    p.add_argument("--lags", required=True, help="comma-separated positive lags, e.g. 1,12")
    p.add_argument("--method", choices=["cls", "wcls"], default="cls")
    _common_flags(p)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("mc-converge", help="KS distances of scaled-path marginals to the limit law")
    p.add_argument("--spec", required=True)
    p.add_argument("--n-list", dest="n_list", required=True, help="comma-separated scales")
    p.add_argument("--t-grid", dest="t_grid", required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    _common_flags(p)
    p.set_defaults(func=_cmd_mc_converge)

    p = sub.add_parser("boston", help="reproduce the bundled Boston robbery-series fits")
    p.add_argument("--data", default=None, help="alternative counts file")
    _common_flags(p)
    p.set_defaults(func=_cmd_boston)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (SpecificationError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
