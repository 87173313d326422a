"""Command-line frontend for reproducible batch runs.

Subcommands: decompose, spectrum, luders-demo, optimize, study,
pseudospectrum.  Exit codes: 0 success, 1 input/usage error, 2 mathematical
obstruction certificate.  Every command is a pure function of its input
files, flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import serialize
from .core import positivity_certificate
from .decompose import (
    DecompConfig,
    DecompositionResult,
    FourSummandParams,
    ObstructionCertificate,
    four_summands,
    three_summands,
    two_summands,
)
from .elementary import (
    ElementaryOperator,
    GridSpec,
    UnattainableEigenvalueError,
    plant_luders_eigenvalue,
    pseudospectrum,
)
from .lab import (
    OptimizationConfig,
    condition_study,
    optimize_sum_of_products,
    study_to_csv,
    trace_to_csv,
)
from .randmat import scalar_product_pairs

__all__ = ["main", "run"]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_OBSTRUCTION = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad flags; remap to the usage exit code."""

    def error(self, message):
        raise UsageError(message)


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"cannot parse complex number {text!r}") from exc


def _parse_grid(text: str) -> GridSpec:
    parts = text.split(",")
    if len(parts) != 5:
        raise UsageError("--grid expects re0,re1,im0,im1,steps")
    try:
        re0, re1, im0, im1 = (float(p) for p in parts[:4])
        steps = int(parts[4])
    except ValueError as exc:
        raise UsageError(f"cannot parse grid {text!r}") from exc
    return GridSpec(re0, re1, im0, im1, steps)


def _complex_to_pair(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def _certificate_dict(cert: ObstructionCertificate) -> dict:
    return {"obstruction": {
        "reason": cert.reason,
        "trace": _complex_to_pair(cert.trace_value),
        "explanation": cert.explanation,
    }}


def _result_dict(result: DecompositionResult) -> dict:
    certificates = []
    for s in result.summands:
        c = positivity_certificate(s.value, tol=1e-8)
        certificates.append({
            "kind": c.kind,
            "min_eigenvalue": float(c.min_eigenvalue),
            "condition_number": float(s.condition_number),
        })
    return {
        "method": result.method,
        "reconstruction_residual": float(result.reconstruction_residual),
        "spectra_point_counts": list(result.spectra_point_counts),
        "pairwise_spectra_gap": float(result.pairwise_spectra_gap)
        if np.isfinite(result.pairwise_spectra_gap) else None,
        "summands": [
            {"S": serialize.matrix_to_dict(s.S), "P": serialize.matrix_to_dict(s.P)}
            for s in result.summands],
        "product_form": [
            {"A": serialize.matrix_to_dict(a), "B": serialize.matrix_to_dict(b)}
            for a, b in result.product_form],
        "certificates": certificates,
    }


def _cmd_decompose(args) -> int:
    T = serialize.load_matrix(args.input)
    if args.summands == 4:
        result = four_summands(T, FourSummandParams())
    else:
        config = DecompConfig(
            seed=args.seed,
            search=OptimizationConfig(
                m=args.summands, seed=args.seed,
                max_iterations=args.iterations, restarts=args.restarts,
                target_residual=args.tol if args.tol is not None else 1e-8))
        result = three_summands(T, config) if args.summands == 3 else two_summands(T, config)
    if isinstance(result, ObstructionCertificate):
        serialize.dump_json(_certificate_dict(result), args.output)
        print(f"obstruction: {result.reason}", file=sys.stderr)
        return EXIT_OBSTRUCTION
    serialize.dump_json(_result_dict(result), args.output)
    print(f"decomposed into {len(result.summands)} summands "
          f"(method {result.method}, residual {result.reconstruction_residual:.3e})")
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    pairs = serialize.load_pairs(args.input)
    op = ElementaryOperator.build(pairs)
    tol = args.tol if args.tol is not None else 1e-9
    report = op.spectrum(tol)
    serialize.dump_json({
        "eigenvalues": [_complex_to_pair(z) for z in report.eigenvalues],
        "max_dist_to_rplus": report.max_dist_to_rplus,
        "is_real_nonnegative": report.is_real_nonnegative,
        "is_luders": op.is_luders,
        "tolerance": tol,
    }, args.output)
    verdict = "contained in [0, inf)" if report.is_real_nonnegative else \
        f"leaves [0, inf) by {report.max_dist_to_rplus:.3e}"
    print(f"spectrum of length-{op.length} operator on dim {op.dim}: {verdict}")
    return EXIT_OK


def _cmd_luders_demo(args) -> int:
    lam = args.lam
    if args.input:
        pairs = serialize.load_pairs(args.input)
    else:
        if lam.real < 0 or lam.imag != 0:
            # let the construction reject with the analytic bound
            pairs = scalar_product_pairs(max(lam.real, 0.0), args.k, args.m)
        else:
            rng = np.random.default_rng(args.seed)
            pairs = scalar_product_pairs(lam.real, args.k, args.m, rng=rng)
    demo = plant_luders_eigenvalue(lam, pairs)
    serialize.dump_json({
        "lambda": _complex_to_pair(demo.lam),
        "eigen_residual": demo.eigen_residual,
        "block_coefficients": [serialize.matrix_to_dict(t) for t in demo.block_coefficients],
        "eigenvector": serialize.matrix_to_dict(demo.eigenvector),
    }, args.output)
    print(f"planted eigenvalue {demo.lam:g} with residual {demo.eigen_residual:.3e}")
    return EXIT_OK


def _cmd_optimize(args) -> int:
    T = serialize.load_matrix(args.input)
    config = OptimizationConfig(
        m=args.m, seed=args.seed,
        max_iterations=args.iterations, restarts=args.restarts,
        target_residual=args.tol if args.tol is not None else 1e-8)
    trace = optimize_sum_of_products(T, config)
    trace_to_csv(trace, args.output)
    summary = {
        "best_residual": trace.best_residual,
        "bound_floor": trace.bound_floor,
        "iterations_recorded": int(len(trace.residual_history)),
        "factors": [
            {"A": serialize.matrix_to_dict(a), "B": serialize.matrix_to_dict(b)}
            for a, b in trace.final_factors],
    }
    serialize.dump_json(summary, args.output + ".json")
    print(f"best residual {trace.best_residual:.6e} (floor {trace.bound_floor:g})")
    return EXIT_OK


def _cmd_study(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    margins = [float(s) for s in args.margins.split(",")]
    records = condition_study(sizes, margins, args.trials, args.seed)
    study_to_csv(records, args.output)
    ok = sum(1 for r in records if r.success)
    print(f"study wrote {len(records)} records ({ok} successful decompositions)")
    return EXIT_OK


def _cmd_pseudospectrum(args) -> int:
    pairs = serialize.load_pairs(args.input)
    op = ElementaryOperator.build(pairs)
    grid = pseudospectrum(op, args.grid)
    with open(args.output, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["re", "im", "sigma_min"])
        for re, im, smin in grid.rows():
            writer.writerow([repr(re), repr(im), repr(smin)])
    print(f"pseudospectrum grid {args.grid.steps}x{args.grid.steps} written")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="opsum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="split a matrix into summands similar to positive")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--summands", type=int, choices=(2, 3, 4), default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--iterations", type=int, default=2000)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("spectrum", help="spectrum of an elementary operator")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("luders-demo", help="plant an eigenvalue in a block Lüders operation")
    p.add_argument("--lambda", dest="lam", type=_parse_complex, required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--input", default=None, help="optional coefficient pairs file")
    p.add_argument("--k", type=int, default=2, help="half-space dimension")
    p.add_argument("--m", type=int, default=3, help="number of coefficient pairs")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_luders_demo)

    p = sub.add_parser("optimize", help="PSD product-sum search toward a target matrix")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="residual history CSV; summary JSON at <output>.json")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--iterations", type=int, default=2000)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("study", help="conditioning study of the four-summand pipeline")
    p.add_argument("--output", required=True)
    p.add_argument("--sizes", default="2,4")
    p.add_argument("--margins", default="1,0.1,0.01")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_study)

    p = sub.add_parser("pseudospectrum", help="sigma_min grid of a vectorized elementary operator")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--grid", type=_parse_grid, required=True,
                   help="re0,re1,im0,im1,steps")
    p.set_defaults(func=_cmd_pseudospectrum)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnattainableEigenvalueError as exc:
        print(f"obstruction: {exc} [lower bound {exc.bound:g}]", file=sys.stderr)
        return EXIT_OBSTRUCTION
    except (serialize.SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run():  # console entry point
    raise SystemExit(main())
