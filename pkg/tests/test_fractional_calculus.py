from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracmks.fractional_calculus import (
    FractionalOrder,
    LaplaceConvergenceError,
    SampledFunction,
    TimeGrid,
    caputo_l1,
    caputo_power,
    laplace_numeric,
    rl_integral,
    rl_integral_power,
    verify_inversion,
)
from fracmks.special_functions import ml

INV_GAMMA_1_5 = 1.1283791670955126  # 2 / sqrt(pi)


def sample(n: int, f, t_max: float = 1.0) -> SampledFunction:
    return SampledFunction.from_callable(TimeGrid(t_max, n), f)


# {{{ types


def test_order_validation() -> None:
    for alpha in (0.0, -0.5, 1.5, math.nan):
        with pytest.raises(ValueError):
            FractionalOrder(alpha)
    assert FractionalOrder(1.0).alpha == 1.0


def test_grid() -> None:
    grid = TimeGrid(2.0, 4)
    np.testing.assert_array_equal(grid.nodes, [0.0, 0.5, 1.0, 1.5, 2.0])
    assert grid.index_of(1.5) == 3
    with pytest.raises(ValueError):
        grid.index_of(1.2)
    with pytest.raises(ValueError):
        grid.index_of(2.5)
    with pytest.raises(ValueError):
        TimeGrid(1.0, 1)
    with pytest.raises(ValueError):
        TimeGrid(0.0, 10)


def test_sampled_function_shape_and_immutability() -> None:
    grid = TimeGrid(1.0, 4)
    with pytest.raises(ValueError):
        SampledFunction(grid, [1.0, 2.0])

    f = SampledFunction.from_callable(grid, lambda t: 3.0 + 0 * t)
    assert f.at(0.75) == 3.0
    with pytest.raises(ValueError):
        f.values[0] = 1.0


# }}}


# {{{ discrete operators


def test_rl_integral_examples() -> None:
    half = FractionalOrder(0.5)
    one = FractionalOrder(1.0)

    ones = sample(1000, lambda t: np.ones_like(t))
    assert abs(rl_integral(ones, half).at(1.0) - INV_GAMMA_1_5) <= 2e-3

    zeros = sample(1000, lambda t: np.zeros_like(t))
    assert np.all(rl_integral(zeros, half).values == 0.0)

    assert abs(rl_integral(sample(1000, lambda t: t), one).at(1.0) - 0.5) <= 1e-6


def test_caputo_l1_examples() -> None:
    half = FractionalOrder(0.5)

    assert abs(caputo_l1(sample(1000, lambda t: t), half).at(1.0) - INV_GAMMA_1_5) <= 2e-3
    assert abs(caputo_l1(sample(1000, lambda t: t**2), half).at(1.0) - 1.504505556) <= 5e-3

    const = caputo_l1(sample(1000, lambda t: np.full_like(t, 4.2)), half)
    assert np.all(const.values == 0.0)


def test_caputo_l1_classical_limit() -> None:
    f = sample(100, lambda t: t**2)
    d = caputo_l1(f, FractionalOrder(1.0))
    h = f.grid.h
    # backward differences of t^2 are 2 t - h
    np.testing.assert_allclose(d.values[1:], 2 * f.grid.nodes[1:] - h, rtol=1e-12)
    assert d.values[0] == pytest.approx(-h, abs=1e-12)


@pytest.mark.parametrize("gamma_exp", [2, 3])
@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_caputo_l1_convergence_order(gamma_exp: int, alpha: float) -> None:
    order = FractionalOrder(alpha)
    errors = []
    for n in (250, 500, 1000, 2000):
        d = caputo_l1(sample(n, lambda t: t**gamma_exp), order)
        errors.append(abs(d.at(1.0) - caputo_power(gamma_exp, order, 1.0)))

    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(np.abs(rates - (2 - alpha)) <= 0.15), rates


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_caputo_l1_exact_for_linear(alpha: float) -> None:
    # piecewise linear interpolation of t is t itself
    order = FractionalOrder(alpha)
    d = caputo_l1(sample(500, lambda t: t), order)
    exact = [caputo_power(1, order, t) for t in d.grid.nodes[1:]]
    np.testing.assert_allclose(d.values[1:], exact, rtol=1e-12)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_rl_integral_convergence_order(alpha: float) -> None:
    order = FractionalOrder(alpha)
    errors = []
    for n in (100, 200, 400, 800):
        j = rl_integral(sample(n, lambda t: t**2), order)
        errors.append(abs(j.at(1.0) - rl_integral_power(2, order, 1.0)))

    rates = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    assert np.all(rates > 1.8), rates


@settings(deadline=None, max_examples=30)
@given(
    st.floats(0.1, 1.0),
    st.floats(-3.0, 3.0),
    st.floats(-3.0, 3.0),
    st.integers(0, 2**32 - 1),
)
def test_linearity(alpha: float, a: float, b: float, seed: int) -> None:
    rng = np.random.default_rng(seed)
    grid = TimeGrid(1.0, 64)
    f = SampledFunction(grid, rng.normal(size=65))
    g = SampledFunction(grid, rng.normal(size=65))
    combo = SampledFunction(grid, a * f.values + b * g.values)
    order = FractionalOrder(alpha)

    for op in (rl_integral, caputo_l1):
        lhs = op(combo, order).values
        rhs = a * op(f, order).values + b * op(g, order).values
        scale = 1 + np.max(np.abs(op(f, order).values)) + np.max(np.abs(op(g, order).values))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale * (1 + abs(a) + abs(b))


def test_semigroup() -> None:
    f = sample(2000, lambda t: t)
    j = rl_integral(rl_integral(f, FractionalOrder(0.3)), FractionalOrder(0.4))
    assert abs(j.at(1.0) - rl_integral_power(1, FractionalOrder(0.7), 1.0)) <= 1e-4


# }}}


# {{{ inversion


def test_verify_inversion_examples() -> None:
    half = FractionalOrder(0.5)
    assert verify_inversion(sample(2000, lambda t: t**3), half) <= 5e-3
    assert verify_inversion(sample(100, lambda t: np.full_like(t, -1.5)), half) == 0.0
    assert verify_inversion(sample(1000, lambda t: t), FractionalOrder(1.0)) <= 1e-6


def test_verify_inversion_refinement() -> None:
    half = FractionalOrder(0.5)
    errs = [verify_inversion(sample(n, lambda t: t**3), half) for n in (250, 500, 1000, 2000)]
    assert all(e1 < e0 for e0, e1 in zip(errs, errs[1:])), errs


# }}}


# {{{ power laws


def test_power_law_examples() -> None:
    half = FractionalOrder(0.5)
    assert caputo_power(1, half, 1.0) == pytest.approx(INV_GAMMA_1_5, rel=1e-14)
    assert caputo_power(0, half, 1.0) == 0.0
    for alpha in (0.2, 0.5, 0.9):
        order = FractionalOrder(alpha)
        assert caputo_power(alpha, order, 1.0) == pytest.approx(math.gamma(alpha + 1), rel=1e-14)

    assert rl_integral_power(0, half, 1.0) == pytest.approx(INV_GAMMA_1_5, rel=1e-14)
    assert rl_integral_power(0, FractionalOrder(1.0), 2.0) == pytest.approx(2.0, rel=1e-15)
    assert rl_integral_power(1, FractionalOrder(1.0), 1.0) == pytest.approx(0.5, rel=1e-15)


def test_power_law_domain() -> None:
    half = FractionalOrder(0.5)
    for op in (caputo_power, rl_integral_power):
        with pytest.raises(ValueError):
            op(-1.0, half, 1.0)
        with pytest.raises(ValueError):
            op(1.0, half, 0.0)


@given(st.floats(-0.9, 4.0), st.floats(0.05, 1.0), st.floats(0.1, 5.0))
def test_power_law_inverse(gamma_exp: float, alpha: float, t: float) -> None:
    order = FractionalOrder(alpha)
    # D^a J^a t^g = t^g
    j = rl_integral_power(gamma_exp, order, t)
    coeff = math.gamma(gamma_exp + 1) / math.gamma(gamma_exp + alpha + 1)
    d = caputo_power(gamma_exp + alpha, order, t) * coeff
    assert d == pytest.approx(t**gamma_exp, rel=1e-12)
    assert j > 0


# }}}


# {{{ laplace


def test_laplace_examples() -> None:
    r = laplace_numeric(lambda t: 1.0, 2.0)
    assert abs(r.value - 0.5) <= 1e-8
    assert r.t_cut == 20.0

    r = laplace_numeric(lambda t: math.exp(-t), 1.0)
    assert abs(r.value - 0.5) <= 1e-8
    assert r.abs_error_estimate <= 1e-8


@pytest.mark.parametrize(("alpha", "theta", "s"), [(0.5, -2.0, 2.0), (0.75, -2.0, 3.0)])
def test_laplace_ml_pair(alpha: float, theta: float, s: float) -> None:
    r = laplace_numeric(lambda t: ml(theta * t**alpha, alpha), s)
    exact = s ** (alpha - 1) / (s**alpha - theta)
    assert abs(r.value - exact) <= 1e-4
    # the pair is in fact reproduced to quadrature accuracy
    assert abs(r.value - exact) <= 1e-9


def test_laplace_errors() -> None:
    with pytest.raises(ValueError):
        laplace_numeric(lambda t: 1.0, 0.0)
    with pytest.raises(LaplaceConvergenceError):
        laplace_numeric(lambda t: math.sin(1.0e4 * t), 0.1, limit=5)


# }}}
