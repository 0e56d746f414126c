"""Command-line front end.

Every subcommand prints JSON (default) or CSV reports, one per parameter
combination. Exit codes: 0 success, 1 a checked inequality or identity
failed, 2 invalid input, 3 resource cap.
"""

from __future__ import annotations

import argparse
import itertools
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .duality import dual_constant, forward_constant, random_complex_matrix
from .errors import InvariantViolation, ResourceCapError
from .experiments import (
    ExperimentReport,
    counterexample_report,
    kernel_identity_check,
    run_ratio_experiment,
    slope_fit,
)
from .expsums import COEFF_KINDS, SEED_MASK
from .kernel import kernel_eval
from .report import emit
from .spacing import lemma2_bound, m_of, min_spacing
from .torus import KINDS, enumerate_set

logger = logging.getLogger("largesieve")

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
SET_KINDS = [k for k in KINDS if k != "custom"]


def real_arg(text: str):
    """``"1/8"`` becomes an exact Fraction, anything else a float."""
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def geometric_grid(start: int, stop: int, factor: float) -> list[int]:
    if start < 1 or stop < start or factor <= 1:
        raise ValueError("grid needs 1 <= from <= to and factor > 1")
    out, x = [], float(start)
    while round(x) <= stop:
        if not out or round(x) != out[-1]:
            out.append(round(x))
        x *= factor
    return out


# --- subcommands ------------------------------------------------------------


def cmd_enumerate(args) -> list[ExperimentReport]:
    reports = []
    for n, X in itertools.product(args.n, args.X):
        pts = enumerate_set(args.set, n, X, args.cap)
        if len(pts) == 0:
            logger.warning("%s(n=%d, X=%d) is empty", args.set, n, X)
        extra = {"count": len(pts), "min_spacing": min_spacing(pts) if len(pts) >= 2 else None}
        if args.list:
            extra["points"] = [str(p) for p in pts]
        reports.append(ExperimentReport("enumerate", {"n": n, "X": X, "set": args.set}, extra=extra))
    return reports


def cmd_ratio(args) -> list[ExperimentReport]:
    return [
        run_ratio_experiment(n, X, N, args.set, args.coeff, args.seed, args.cap, args.coeff_file)
        for n, X, N in itertools.product(args.n, args.X, args.N)
    ]


def _spacing_report(n: int, X: int, Y, kind: str, cap, method: str) -> ExperimentReport:
    pts = enumerate_set(kind, n, X, cap)
    rep = m_of(pts, Y, method)
    return ExperimentReport(
        "spacing",
        {"n": n, "X": X, "Y": float(Y), "set": kind, "self_counted": True},
        ratio=rep.ratio,
        majorants={"lemma2": rep.bound_value},
        extra={"m_value": rep.m_value, "argmax": str(rep.argmax_point), "point_count": len(pts)},
    )


def cmd_spacing(args) -> list[ExperimentReport]:
    for Y in args.Y:
        if not Y > 0:
            raise ValueError("Y must be positive")
    return [
        _spacing_report(n, X, Y, args.set, args.cap, args.method)
        for n, X, Y in itertools.product(args.n, args.X, args.Y)
    ]


def cmd_kernel(args) -> list[ExperimentReport]:
    reports = []
    if args.identity:
        rng = np.random.default_rng(args.seed & SEED_MASK)
        for n, X, N in itertools.product(args.n, args.X, args.N):
            pts = enumerate_set(args.set, n, X, args.cap)
            for t in range(args.trials):
                b = rng.uniform(-1, 1, len(pts)) + 1j * rng.uniform(-1, 1, len(pts))
                r = kernel_identity_check(pts, b, N, args.K_ext)
                reports.append(
                    ExperimentReport(
                        "kernel_identity",
                        {"n": n, "X": X, "N": N, "set": args.set, "trial": t, "K_ext": r.K_ext, "seed": args.seed},
                        checks={"identity": r.identity_ok, "positivity": r.positivity_ok},
                        extra={
                            "pair_sum": r.pair_sum,
                            "alpha_sum": r.alpha_sum,
                            "box_sum": r.box_sum,
                            "tail_budget": r.tail_budget,
                        },
                    )
                )
        return reports
    for N in args.N:
        ys = args.y or [0, Fraction(1, 8 * N), Fraction(1, 4 * N), Fraction(7, 16 * N), 0.4]
        K = args.K if args.K is not None else math.ceil(4 * N * N / 1e-4)
        for y in ys:
            ev = kernel_eval(y, N, K)
            bound = 4 * N * N / K + 1e-8
            reports.append(
                ExperimentReport(
                    "kernel",
                    {"N": N, "y": float(y), "K": K},
                    checks={"oracle": ev.error <= bound, "even": ev.imag_residual < 1e-10},
                    extra={
                        "closed": ev.closed_value,
                        "truncated": ev.truncated_value,
                        "error": ev.error,
                        "imag_residual": ev.imag_residual,
                    },
                )
            )
    return reports


def cmd_duality(args) -> list[ExperimentReport]:
    rng = np.random.default_rng(args.seed & SEED_MASK)
    gaps = []
    for _ in range(args.trials):
        rows, cols = (int(v) for v in rng.integers(1, args.size + 1, size=2))
        T = random_complex_matrix(rows, cols, rng)
        f = forward_constant(T, args.tol)
        d = dual_constant(T, args.tol)
        gaps.append(abs(f - d) / max(f, 1e-300))
    worst = max(gaps) if gaps else 0.0
    return [
        ExperimentReport(
            "duality",
            {"size": args.size, "trials": args.trials, "seed": args.seed, "tol": args.tol},
            checks={"gap": worst <= args.gap},
            extra={"max_gap": worst, "mean_gap": float(np.mean(gaps)) if gaps else 0.0},
        )
    ]


def cmd_counterexample(args) -> list[ExperimentReport]:
    return [counterexample_report(n, X, N) for n, X, N in itertools.product(args.n, args.X, args.N)]


def cmd_sweep(args) -> list[ExperimentReport]:
    grid = geometric_grid(args.start, args.stop, args.factor)
    if len(grid) < 2:
        raise ValueError("a sweep needs at least two grid points to fit a slope")
    reports, ys = [], []
    for X in grid:
        if args.quantity == "count":
            y = len(enumerate_set(args.set, args.n, X, args.cap))
        elif args.quantity == "lemma2_bound":
            y = lemma2_bound(args.n, X, float(args.Y))
        elif args.quantity == "m_value":
            y = m_of(enumerate_set(args.set, args.n, X, args.cap), args.Y).m_value
        else:
            y = run_ratio_experiment(args.n, X, args.N, args.set, args.coeff, args.seed, args.cap).ratio
        ys.append(y)
        reports.append(
            ExperimentReport("sweep", {"quantity": args.quantity, "n": args.n, "X": X, "set": args.set}, extra={"value": y})
        )
    reports.append(
        ExperimentReport(
            "sweep_fit",
            {"quantity": args.quantity, "n": args.n, "set": args.set, "X": grid},
            slope=slope_fit(grid, ys),
        )
    )
    return reports


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for all randomness")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", type=Path, help="output file (default stdout)")
    common.add_argument("--cap", type=positive_int, default=None, help="max enumerated points")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="largesieve", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", parents=[common], help="enumerate a point family")
    s.add_argument("--n", type=positive_int, nargs="+", required=True)
    s.add_argument("--X", type=nonneg_int, nargs="+", required=True)
    s.add_argument("--set", choices=SET_KINDS, default="order_ball")
    s.add_argument("--list", action="store_true", help="include every point as a1/q1,...,an/qn")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("ratio", parents=[common], help="LHS / l2 against every majorant")
    s.add_argument("--n", type=positive_int, nargs="+", required=True)
    s.add_argument("--X", type=positive_int, nargs="+", required=True)
    s.add_argument("--N", type=nonneg_int, nargs="+", required=True)
    s.add_argument("--set", choices=SET_KINDS, default="order_ball")
    s.add_argument("--coeff", choices=COEFF_KINDS, default="ones")
    s.add_argument("--coeff-file", type=Path)
    s.set_defaults(func=cmd_ratio)

    s = sub.add_parser("spacing", parents=[common], help="maximal neighbour count M(X, Y)")
    s.add_argument("--n", type=positive_int, nargs="+", required=True)
    s.add_argument("--X", type=positive_int, nargs="+", required=True)
    s.add_argument("--Y", type=real_arg, nargs="+", required=True)
    s.add_argument("--set", choices=SET_KINDS, default="S")
    s.add_argument("--method", choices=["brute", "grid"], default="brute")
    s.set_defaults(func=cmd_spacing)

    s = sub.add_parser("kernel", parents=[common], help="closed form of V(y) against its truncated series")
    s.add_argument("--N", type=positive_int, nargs="+", required=True)
    s.add_argument("--y", type=real_arg, nargs="+")
    s.add_argument("--K", type=positive_int)
    s.add_argument("--identity", action="store_true", help="check the pair-sum / alpha-sum identity instead")
    s.add_argument("--n", type=positive_int, nargs="+", default=[1])
    s.add_argument("--X", type=positive_int, nargs="+", default=[4])
    s.add_argument("--set", choices=SET_KINDS, default="S")
    s.add_argument("--trials", type=positive_int, default=5)
    s.add_argument("--K-ext", type=positive_int, dest="K_ext")
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("duality", parents=[common], help="forward vs dual constants of random matrices")
    s.add_argument("--size", type=positive_int, default=20)
    s.add_argument("--trials", type=positive_int, default=100)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--gap", type=float, default=1e-8, help="largest acceptable relative gap")
    s.set_defaults(func=cmd_duality)

    s = sub.add_parser("counterexample", parents=[common], help="exact LHS over the prime-line set")
    s.add_argument("--n", type=positive_int, nargs="+", required=True)
    s.add_argument("--X", type=positive_int, nargs="+", required=True)
    s.add_argument("--N", type=nonneg_int, nargs="+", required=True)
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("sweep", parents=[common], help="quantity over a geometric X grid, with log-log slope")
    s.add_argument("--quantity", choices=["count", "lemma2_bound", "m_value", "ratio"], default="count")
    s.add_argument("--n", type=positive_int, default=1)
    s.add_argument("--from", dest="start", type=positive_int, required=True)
    s.add_argument("--to", dest="stop", type=positive_int, required=True)
    s.add_argument("--factor", type=float, default=2.0)
    s.add_argument("--set", choices=SET_KINDS, default="S")
    s.add_argument("--Y", type=real_arg, default=0.25)
    s.add_argument("--N", type=nonneg_int, default=4)
    s.add_argument("--coeff", choices=COEFF_KINDS, default="ones")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        reports = args.func(args)
    except ResourceCapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    text = emit(reports, args.format)
    if args.out is not None:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in reports if not r.ok]
    for r in failed:
        print(f"check failed: {r.experiment} {r.params} {r.checks}", file=sys.stderr)
    return EXIT_INVARIANT if failed else EXIT_OK
