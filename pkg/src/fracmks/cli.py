"""Command-line interface.

Exit codes: 0 on success, 1 on evaluation failures, 2 on usage errors and
3 when a verification (``verify``, ``invariance``) fails.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from fracmks.fractional_calculus import FractionalOrder, TimeGrid
from fracmks.invariant_subspace import MKSParams, invariance_check
from fracmks.mks_solution import (
    C1Mode,
    SolutionParams,
    coeff_c1_quadrature,
    composition_gap,
    pde_residual,
    solution_grid,
)
from fracmks.special_functions import (
    MittagLefflerConvergenceError,
    MLMethod,
    MLParams,
    mittag_leffler,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_VERIFY_FAILED = 3

#: Figure presets as ``(alpha, m)``, with ``lambda = 1 / m``.
PRESETS = {
    "fig1": (1.0, 3),
    "fig2": (1.0, 4),
    "fig3": (0.5, 3),
    "fig4": (0.5, 4),
    "fig5": (1.0, 2),
    "fig6": (0.5, 2),
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None
    precision: int = 12

    def __post_init__(self) -> None:
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format: '{self.format}'")

        if not 1 <= self.precision <= 17:
            raise UsageError(f"precision must be in [1, 17]: {self.precision}")

    def number(self, v: float) -> float:
        """Round to :attr:`precision` significant digits."""
        return float(f"{float(v):.{self.precision}g}")

    def fmt(self, v: float) -> str:
        return repr(self.number(v))


@dataclass(frozen=True)
class GridSpec:
    t_max: float = 2.0
    n_t: int = 40
    x_min: float = 0.0
    x_max: float | None = None
    n_x: int = 65

    def __post_init__(self) -> None:
        if self.n_t < 1:
            raise UsageError(f"n_t must be at least 1: {self.n_t}")
        if self.n_x < 2:
            raise UsageError(f"n_x must be at least 2: {self.n_x}")
        if not self.t_max > 0:
            raise UsageError(f"t_max must be positive: {self.t_max}")
        if self.x_max is not None and not self.x_max > self.x_min:
            raise UsageError(f"x_max must exceed x_min: {self.x_max} <= {self.x_min}")

    def t_nodes(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_t + 1)

    def x_nodes(self, period: float) -> np.ndarray:
        x_max = self.x_min + period if self.x_max is None else self.x_max
        return np.linspace(self.x_min, x_max, self.n_x)

    def as_dict(self, period: float) -> dict[str, Any]:
        x_max = self.x_min + period if self.x_max is None else self.x_max
        return {
            "t_max": self.t_max,
            "n_t": self.n_t,
            "x_min": self.x_min,
            "x_max": x_max,
            "n_x": self.n_x,
        }


# {{{ argument helpers


def _float_list(value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: '{value}'") from None


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--output", default=None, help="output file (default: stdout)")
    parser.add_argument("--precision", type=int, default=12, help="significant digits")


def _add_lambda_args(parser: argparse.ArgumentParser, *, required: bool = False) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--lambda", dest="lam", type=float, help="nonlinearity weight in (0, 1)")
    group.add_argument("--m", type=int, help="use lambda = 1 / m")


def _add_solution_args(parser: argparse.ArgumentParser) -> None:
    _add_lambda_args(parser)
    parser.add_argument("--alpha", type=float, help="fractional order in (0, 1]")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="figure parameter set")
    parser.add_argument("--c1-mode", choices=[m.value for m in C1Mode], default="paper")
    parser.add_argument("--t-max", type=float, default=2.0)
    parser.add_argument("--n-t", type=int, default=40)
    parser.add_argument("--x-min", type=float, default=0.0)
    parser.add_argument("--x-max", type=float, default=None, help="default: one period")
    parser.add_argument("--n-x", type=int, default=65)
    parser.add_argument("--t", type=_float_list, default=None, help="explicit time nodes")
    parser.add_argument("--x", type=_float_list, default=None, help="explicit space nodes")
    parser.add_argument(
        "--quad-steps", type=int, default=2000, help="time steps for quadrature mode"
    )


def _lambda_from(args: argparse.Namespace) -> float | None:
    if args.m is not None:
        if args.m < 2:
            raise UsageError(f"m must be at least 2: {args.m}")
        return 1.0 / args.m
    return args.lam


def _solution_params(args: argparse.Namespace) -> SolutionParams:
    lam = _lambda_from(args)
    alpha = args.alpha
    if args.preset is not None:
        if lam is not None or alpha is not None:
            raise UsageError("--preset cannot be combined with --lambda, --m or --alpha")
        alpha, m = PRESETS[args.preset]
        lam = 1.0 / m

    if lam is None or alpha is None:
        raise UsageError("either --preset or both --alpha and --lambda/--m are required")

    try:
        return SolutionParams.create(lam, alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _nodes(args: argparse.Namespace, p: SolutionParams) -> tuple[np.ndarray, np.ndarray, dict]:
    grid = GridSpec(args.t_max, args.n_t, args.x_min, args.x_max, args.n_x)
    period = p.mks.period
    t = np.asarray(args.t, dtype=float) if args.t is not None else grid.t_nodes()
    x = np.asarray(args.x, dtype=float) if args.x is not None else grid.x_nodes(period)

    if t.size == 0 or x.size == 0:
        raise UsageError("empty node list")
    if np.any(t < 0) or not np.all(np.isfinite(t)) or not np.all(np.isfinite(x)):
        raise UsageError("time nodes must be finite and non-negative")

    info = grid.as_dict(period)
    if args.t is not None:
        info["t"] = t.tolist()
    if args.x is not None:
        info["x"] = x.tolist()

    return t, x, info


def _params_dict(p: SolutionParams, mode: C1Mode) -> dict[str, Any]:
    return {
        "lambda": p.mks.lam,
        "alpha": p.alpha,
        "gamma": p.mks.gamma,
        "theta": p.mks.theta,
        "c1_mode": mode.value,
    }


# }}}


# {{{ output


def _emit(out: OutputSpec, text: str) -> None:
    if out.path is None:
        sys.stdout.write(text)
    else:
        with open(out.path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _json(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def _report_csv(out: OutputSpec, report: dict[str, Any]) -> str:
    rows = []
    for key, value in report.items():
        if isinstance(value, bool):
            rows.append((key, "true" if value else "false"))
        elif isinstance(value, float):
            rows.append((key, out.fmt(value)))
        else:
            rows.append((key, str(value)))
    return _csv(("key", "value"), rows)


# }}}


# {{{ commands


def cmd_ml(args: argparse.Namespace, out: OutputSpec) -> int:
    try:
        params = MLParams(args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    if not math.isfinite(args.z):
        raise UsageError(f"z must be finite: {args.z}")

    method = None if args.method == "auto" else MLMethod(args.method)
    result = mittag_leffler(params, args.z, method)

    if out.format == "json":
        _emit(
            out,
            _json({
                "params": {"alpha": params.alpha, "beta": params.beta, "z": args.z},
                "values": {
                    "value": out.number(result.value),
                    "abs_error_estimate": out.number(result.abs_error_estimate),
                    "method": result.method.value,
                },
            }),
        )
    else:
        _emit(
            out,
            _csv(
                ("alpha", "beta", "z", "value", "abs_error_estimate", "method"),
                [(
                    out.fmt(params.alpha),
                    out.fmt(params.beta),
                    out.fmt(args.z),
                    out.fmt(result.value),
                    out.fmt(result.abs_error_estimate),
                    result.method.value,
                )],
            ),
        )

    return EXIT_OK


def _solve_values(
    p: SolutionParams, mode: C1Mode, t: np.ndarray, x: np.ndarray, args: argparse.Namespace
) -> np.ndarray:
    if mode is C1Mode.PAPER_CLOSED_FORM:
        return solution_grid(p, t, x, mode)

    if args.quad_steps < 2:
        raise UsageError(f"--quad-steps must be at least 2: {args.quad_steps}")

    # regular grids share one quadrature grid, explicit nodes get their own
    if args.t is None and t.size > 1:
        n_t = t.size - 1
        steps = n_t * math.ceil(args.quad_steps / n_t)
        c1 = coeff_c1_quadrature(TimeGrid(float(t[-1]), steps), p)
        return solution_grid(p, t, x, mode, c1)

    rows = []
    for ti in t:
        if ti == 0:
            rows.append(solution_grid(p, [0.0], x, C1Mode.PAPER_CLOSED_FORM)[0])
            continue
        c1 = coeff_c1_quadrature(TimeGrid(float(ti), args.quad_steps), p)
        rows.append(solution_grid(p, [ti], x, mode, c1)[0])
    return np.array(rows)


def cmd_solve(args: argparse.Namespace, out: OutputSpec) -> int:
    p = _solution_params(args)
    mode = C1Mode(args.c1_mode)
    t, x, grid_info = _nodes(args, p)
    u = _solve_values(p, mode, t, x, args)

    if out.format == "json":
        _emit(
            out,
            _json({
                "params": _params_dict(p, mode),
                "grid": grid_info,
                "values": {
                    "t": [out.number(v) for v in t],
                    "x": [out.number(v) for v in x],
                    "u": [[out.number(v) for v in row] for row in u],
                },
            }),
        )
    else:
        rows = [
            (out.fmt(ti), out.fmt(xj), out.fmt(u[i, j]))
            for i, ti in enumerate(t)
            for j, xj in enumerate(x)
        ]
        _emit(out, _csv(("t", "x", "u"), rows))

    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: OutputSpec) -> int:
    p = _solution_params(args)
    mode = C1Mode(args.c1_mode)
    t, x, grid_info = _nodes(args, p)
    if not args.tol > 0:
        raise UsageError(f"--tol must be positive: {args.tol}")

    # the Caputo derivative is only defined for t > 0
    t = t[t > 0]
    if t.size == 0:
        raise UsageError("no time nodes with t > 0")

    result = pde_residual(p, t, x, mode)
    t_max, x_max = result.argmax
    passed = result.max_abs_residual <= args.tol
    report = {
        "max_abs_residual": result.max_abs_residual,
        "t_at_max": t_max,
        "x_at_max": x_max,
        "tol": args.tol,
        "passed": passed,
    }

    if out.format == "json":
        _emit(
            out,
            _json({
                "params": _params_dict(p, mode),
                "grid": grid_info,
                "values": {
                    "t": [out.number(v) for v in t],
                    "x": [out.number(v) for v in x],
                    "residual": [[out.number(v) for v in row] for row in result.residual_field],
                },
                "report": {k: out.number(v) if isinstance(v, float) else v for k, v in report.items()},
            }),
        )
    else:
        _emit(out, _report_csv(out, report))

    return EXIT_OK if passed else EXIT_VERIFY_FAILED


def cmd_gap(args: argparse.Namespace, out: OutputSpec) -> int:
    try:
        order = FractionalOrder(args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    t = np.asarray(args.t, dtype=float)
    if t.size == 0 or np.any(t < 0) or not np.all(np.isfinite(t)):
        raise UsageError("--t must list finite non-negative times")

    method = None if args.method == "auto" else MLMethod(args.method)
    report = composition_gap(order, args.theta, t, method)

    if out.format == "json":
        _emit(
            out,
            _json({
                "params": {"alpha": order.alpha, "theta": args.theta},
                "values": {
                    "t": [out.number(v) for v in t],
                    "gap": [out.number(v) for v in report.gaps],
                    "max_abs_gap": out.number(report.max_abs_gap),
                },
            }),
        )
    else:
        rows = [(out.fmt(ti), out.fmt(gi)) for ti, gi in zip(t, report.gaps)]
        _emit(out, _csv(("t", "gap"), rows))

    return EXIT_OK


def cmd_invariance(args: argparse.Namespace, out: OutputSpec) -> int:
    lam = _lambda_from(args)
    try:
        params = MKSParams(lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    if args.trials < 1:
        raise UsageError(f"--trials must be positive: {args.trials}")
    if not args.tol > 0:
        raise UsageError(f"--tol must be positive: {args.tol}")

    result = invariance_check(params, args.trials, args.seed, args.tol)
    report = {
        "trials": result.trials,
        "max_fit_residual": result.max_fit_residual,
        "tolerance": result.tolerance,
        "passed": result.passed,
    }

    if out.format == "json":
        _emit(
            out,
            _json({
                "params": {"lambda": lam, "seed": args.seed},
                "report": {k: out.number(v) if isinstance(v, float) else v for k, v in report.items()},
            }),
        )
    else:
        _emit(out, _report_csv(out, report))

    return EXIT_OK if result.passed else EXIT_VERIFY_FAILED


# }}}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracmks",
        description="Mittag-Leffler evaluation and exact solutions of the "
        "time-fractional modified Kuramoto-Sivashinsky equation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml", help="evaluate the Mittag-Leffler function")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--z", type=float, required=True)
    p.add_argument(
        "--method", choices=["auto"] + [m.value for m in MLMethod], default="auto"
    )
    _add_output_args(p)
    p.set_defaults(func=cmd_ml)

    p = sub.add_parser("solve", help="evaluate the exact solution on a grid")
    _add_solution_args(p)
    _add_output_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="residual of the exact solution")
    _add_solution_args(p)
    p.add_argument("--tol", type=float, default=1.0e-8)
    _add_output_args(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gap", help="failure of the product rule for E_alpha")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--t", type=_float_list, default=[1.0])
    p.add_argument(
        "--method", choices=["auto"] + [m.value for m in MLMethod], default="auto"
    )
    _add_output_args(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("invariance", help="check invariance of the subspace")
    _add_lambda_args(p, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=1.0e-10)
    _add_output_args(p)
    p.set_defaults(func=cmd_invariance)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        out = OutputSpec(args.format, args.output, args.precision)
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MittagLefflerConvergenceError, ArithmeticError, ValueError, OSError) as exc:
        print(f"{parser.prog}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
