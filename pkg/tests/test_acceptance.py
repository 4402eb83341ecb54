"""Exit criteria, one test per criterion.

Every test prints a single ``PASS`` or ``FAIL`` line with the measured
quantity. Run ``python tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import math
import pathlib
import subprocess
import sys
from collections.abc import Callable

import numpy as np
import pytest

from fracmks.fractional_calculus import (
    FractionalOrder,
    SampledFunction,
    TimeGrid,
    caputo_l1,
    caputo_power,
    laplace_numeric,
    rl_integral,
    verify_inversion,
)
from fracmks.invariant_subspace import (
    MKSParams,
    SubspaceElement,
    annihilator_residual,
    invariance_check,
)
from fracmks.mks_solution import (
    C1Mode,
    SolutionParams,
    coeff_c1_quadrature,
    coeff_c2_c3,
    composition_gap,
    pde_residual,
    reduced_system_numeric,
)
from fracmks.special_functions import MLMethod, erf, ml

GOLDEN = pathlib.Path(__file__).parent / "data" / "fig1.csv"

T_NODES = np.round(np.arange(1, 21) * 0.1, 12)

Outcome = tuple[bool, str]


def _x_nodes(mks: MKSParams) -> np.ndarray:
    return np.linspace(0.0, mks.period, 64, endpoint=False)


# {{{ criteria


def criterion_1() -> Outcome:
    z = np.linspace(-20.0, 20.0, 401)
    err = max(abs(ml(zi, 1.0) - math.exp(zi)) / max(1.0, math.exp(zi)) for zi in z)
    return err <= 1e-12, f"max relative error {err:.2e} (tol 1e-12)"


def criterion_2() -> Outcome:
    z = np.linspace(-3.0, 3.0, 301)
    err = max(abs(ml(zi, 0.5) - math.exp(zi * zi) * (1 + erf(zi))) for zi in z)
    return err <= 1e-10, f"max abs error {err:.2e} (tol 1e-10)"


def criterion_3() -> Outcome:
    err = 0.0
    for alpha in (0.25, 0.5, 0.75, 1.0):
        for beta in (1.0, alpha + 1):
            for z in (-10.0, -2.0, -0.5, 0.0, 0.5, 2.0):
                lhs = ml(z, alpha, beta)
                rhs = 1 / math.gamma(beta) + z * ml(z, alpha, alpha + beta)
                err = max(err, abs(lhs - rhs))
    return err <= 1e-10, f"max abs defect {err:.2e} (tol 1e-10)"


def criterion_4() -> Outcome:
    ns = (250, 500, 1000, 2000)
    ok = True
    parts = []
    for gamma_exp in (1, 2, 3):
        for alpha in (0.25, 0.5, 0.75):
            order = FractionalOrder(alpha)
            errors = []
            for n in ns:
                f = SampledFunction.from_callable(TimeGrid(1.0, n), lambda t: t**gamma_exp)
                d = caputo_l1(f, order).values[1:]
                exact = np.array([caputo_power(gamma_exp, order, t) for t in f.grid.nodes[1:]])
                errors.append(float(np.max(np.abs(d - exact))))

            if max(errors) <= 1e-12:
                # the scheme reproduces piecewise linear data exactly
                parts.append(f"g={gamma_exp},a={alpha}: exact ({max(errors):.0e})")
                continue

            rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
            good = bool(np.all(np.abs(rates - (2 - alpha)) <= 0.15))
            ok = ok and good
            parts.append(f"g={gamma_exp},a={alpha}: {rates.min():.3f}..{rates.max():.3f}")
    return ok, "orders " + "; ".join(parts)


def criterion_5() -> Outcome:
    order = FractionalOrder(0.5)
    errs = [
        verify_inversion(SampledFunction.from_callable(TimeGrid(1.0, n), lambda t: t**3), order)
        for n in (250, 500, 1000, 2000, 4000)
    ]
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    return errs[3] <= 5e-3 and decreasing, (
        f"n=2000: {errs[3]:.2e} (tol 5e-3), refinement "
        + " > ".join(f"{e:.1e}" for e in errs)
    )


def criterion_6() -> Outcome:
    err = 0.0
    for alpha, theta, s in ((0.5, -2.0, 2.0), (0.75, -2.0, 3.0)):
        r = laplace_numeric(lambda t, a=alpha, th=theta: ml(th * t**a, a), s)
        err = max(err, abs(r.value - s ** (alpha - 1) / (s**alpha - theta)))
    return err <= 1e-4, f"max abs error {err:.2e} (tol 1e-4)"


def criterion_7() -> Outcome:
    alpha, theta = 0.5, -2.0
    grid = TimeGrid(1.0, 2000)
    f = SampledFunction.from_callable(
        grid, lambda t: np.array([ml(theta * (2 * ti) ** alpha, alpha) for ti in t])
    )
    j = rl_integral(f, FractionalOrder(alpha)).at(1.0)
    exact = ml(theta * 2**alpha, alpha, alpha + 1)
    err = abs(j - exact)
    return err <= 5e-3, f"abs error {err:.2e} (tol 5e-3)"


def criterion_8() -> Outcome:
    worst_fit = 0.0
    worst_ann = 0.0
    ok = True
    for seed, lam in enumerate((0.1, 0.3, 0.5, 0.7, 0.9)):
        mks = MKSParams(lam)
        report = invariance_check(mks, trials=100, seed=seed, tol=1e-10)
        ok = ok and report.passed
        worst_fit = max(worst_fit, report.max_fit_residual)

        # same draws as inside invariance_check
        x = _x_nodes(mks)
        for c in np.random.default_rng(seed).uniform(-2.0, 2.0, size=(100, 3)):
            worst_ann = max(worst_ann, annihilator_residual(SubspaceElement(*c), mks, x))
    ok = ok and worst_ann <= 1e-12
    return ok, f"fit {worst_fit:.2e} (tol 1e-10), annihilator {worst_ann:.2e} (tol 1e-12)"


def criterion_9() -> Outcome:
    worst = 0.0
    for alpha in (0.25, 0.5, 0.75, 1.0):
        p = SolutionParams.create(0.5, alpha)
        worst = max(worst, pde_residual(p, T_NODES, _x_nodes(p.mks)).max_abs_residual)
    return worst <= 1e-12, f"max residual {worst:.2e} (tol 1e-12)"


def criterion_10() -> Outcome:
    worst = 0.0
    for m in (3, 4):
        p = SolutionParams(MKSParams.from_m(m), FractionalOrder(1.0))
        report = pde_residual(p, T_NODES, _x_nodes(p.mks), C1Mode.PAPER_CLOSED_FORM)
        worst = max(worst, report.max_abs_residual)
    return worst <= 1e-9, f"max residual {worst:.2e} (tol 1e-9)"


def criterion_11() -> Outcome:
    t = np.linspace(0.0, 3.0, 31)
    exp_gap = composition_gap(FractionalOrder(1.0), -2.0, t).max_abs_gap

    half = FractionalOrder(0.5)
    closed = composition_gap(half, -2.0, [1.0], MLMethod.CLOSED_FORM).gaps[0]
    series = composition_gap(half, -2.0, [1.0], MLMethod.SERIES).gaps[0]
    agree = abs(closed - series) <= 1e-6
    inside = agree and 0.10 <= closed <= 0.15
    return exp_gap <= 1e-12 and inside, (
        f"alpha=1 max gap {exp_gap:.2e} (tol 1e-12); g(1) = {closed:.6f} closed form, "
        f"{series:.6f} series, routes differ by {abs(closed - series):.1e}"
    )


def criterion_12() -> Outcome:
    p = SolutionParams.create(1 / 3, 0.5)
    field = pde_residual(p, T_NODES, _x_nodes(p.mks), C1Mode.PAPER_CLOSED_FORM).residual_field
    spread = float(np.max(np.ptp(field, axis=1)))
    gaps = composition_gap(p.order, p.mks.theta, T_NODES).gaps
    mismatch = float(np.max(np.abs(field - p.c1_amplitude * gaps[:, None])))
    return spread <= 1e-10 and mismatch <= 1e-10, (
        f"column spread {spread:.2e}, |R - 2(1-l)g^2 gap| {mismatch:.2e} (tol 1e-10)"
    )


def criterion_13() -> Outcome:
    grid = TimeGrid(1.0, 4096)
    worst = 0.0
    for alpha in (0.5, 1.0):
        for lam in (1 / 3, 1 / 2):
            p = SolutionParams.create(lam, alpha)
            c1, c2, c3 = reduced_system_numeric(p, grid)
            shape = coeff_c2_c3(1.0, p)
            worst = max(
                worst,
                abs(c2.at(1.0) - shape),
                abs(c3.at(1.0) - shape),
                abs(c1.at(1.0) - coeff_c1_quadrature(grid, p).at(1.0)),
            )
    return worst <= 1e-3, f"max abs error at t=1 {worst:.2e} (tol 1e-3)"


def criterion_14() -> Outcome:
    cmd = [sys.executable, "-m", "fracmks", "solve", "--preset", "fig1"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    identical = first == second
    golden = first == GOLDEN.read_bytes()
    return identical and golden, (
        f"{len(first)} bytes, runs identical: {identical}, matches golden file: {golden}"
    )


CRITERIA: dict[int, Callable[[], Outcome]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
    13: criterion_13,
    14: criterion_14,
}

# }}}


def _line(number: int, outcome: Outcome) -> str:
    passed, detail = outcome
    return f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"


@pytest.mark.acceptance
@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number: int, capsys) -> None:
    outcome = CRITERIA[number]()
    with capsys.disabled():
        print("\n" + _line(number, outcome))
    assert outcome[0], outcome[1]


if __name__ == "__main__":
    results = {n: f() for n, f in CRITERIA.items()}
    for n, outcome in results.items():
        print(_line(n, outcome))
    sys.exit(0 if all(ok for ok, _ in results.values()) else 1)
