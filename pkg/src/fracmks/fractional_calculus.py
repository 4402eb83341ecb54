"""Discrete Caputo derivative and Riemann-Liouville integral on uniform grids.

The discrete operators are

* :func:`caputo_l1`: the L1 scheme, of order :math:`2 - \\alpha` for smooth
  functions;
* :func:`rl_integral`: product trapezoidal quadrature of the weakly singular
  convolution, of order 2 for smooth functions.

Both act on :class:`SampledFunction` values and return a new
:class:`SampledFunction` on the same grid.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from fracmks.special_functions import gamma


@dataclass(frozen=True)
class FractionalOrder:
    """Order :math:`\\alpha \\in (0, 1]` of the time-fractional operators."""

    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"fractional order must be in (0, 1]: {self.alpha}")


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid :math:`t_k = k h` with :math:`h = t_{max} / n`."""

    t_max: float
    n_steps: int

    def __post_init__(self) -> None:
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError(f"'t_max' must be positive: {self.t_max}")

        if self.n_steps < 2:
            raise ValueError(f"'n_steps' must be at least 2: {self.n_steps}")

    @property
    def h(self) -> float:
        return self.t_max / self.n_steps

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(self.n_steps + 1)

    def index_of(self, t: float, *, rtol: float = 1.0e-12) -> int:
        """Index of the node equal to *t*.

        :raises ValueError: if *t* is not a grid node.
        """
        k = round(t / self.h)
        if not (0 <= k <= self.n_steps) or abs(k * self.h - t) > rtol * self.t_max:
            raise ValueError(f"t = {t} is not a node of the grid {self}")

        return k


@dataclass(frozen=True)
class SampledFunction:
    """Values of a function of time on a :class:`TimeGrid`."""

    grid: TimeGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_steps + 1,):
            raise ValueError(
                f"expected {self.grid.n_steps + 1} values, got shape {values.shape}"
            )

        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_callable(
        cls, grid: TimeGrid, f: Callable[[np.ndarray], np.ndarray]
    ) -> SampledFunction:
        return cls(grid, np.broadcast_to(f(grid.nodes), grid.nodes.shape))

    def at(self, t: float) -> float:
        return float(self.values[self.grid.index_of(t)])


# {{{ discrete operators


def rl_weights(n: int, alpha: float) -> np.ndarray:
    """Product trapezoidal weights :math:`a_j` for the interior nodes.

    The integral at node :math:`k` is

    .. math::

        \\frac{h^\\alpha}{\\Gamma(\\alpha + 2)} \\left(
            c_k f_0 + \\sum_{j = 1}^{k - 1} a_{k - j} f_j + f_k
        \\right),

    with :math:`a_m = (m + 1)^{\\alpha + 1} - 2 m^{\\alpha + 1} + (m - 1)^{\\alpha + 1}`
    and :math:`c_k = (k - 1)^{\\alpha + 1} - (k - \\alpha - 1) k^\\alpha`.
    """
    m = np.arange(n + 1, dtype=float)
    a = np.zeros(n + 1)
    a[1:] = (m[1:] + 1) ** (alpha + 1) - 2 * m[1:] ** (alpha + 1) + (m[1:] - 1) ** (alpha + 1)
    return a


def rl_integral(f: SampledFunction, order: FractionalOrder) -> SampledFunction:
    """Riemann-Liouville integral :math:`J^\\alpha f` by product trapezoidal quadrature."""
    alpha = order.alpha
    grid = f.grid
    n = grid.n_steps
    fv = f.values

    k = np.arange(n + 1, dtype=float)
    a = rl_weights(n, alpha)
    c = np.zeros(n + 1)
    c[1:] = (k[1:] - 1) ** (alpha + 1) - (k[1:] - alpha - 1) * k[1:] ** alpha

    # interior sum_{j=1}^{k-1} a_{k-j} f_j is a discrete convolution
    interior = np.zeros(n + 1)
    if n >= 2:
        conv = np.convolve(a, fv[1:])
        interior[2:] = conv[1:n]

    result = c * fv[0] + interior + fv
    result[0] = 0.0
    result *= grid.h**alpha / gamma(alpha + 2)

    return SampledFunction(grid, result)


def l1_weights(n: int, alpha: float) -> np.ndarray:
    """L1 weights :math:`b_j = (j + 1)^{1 - \\alpha} - j^{1 - \\alpha}`, unscaled."""
    j = np.arange(n, dtype=float)
    return (j + 1) ** (1 - alpha) - j ** (1 - alpha)


def caputo_l1(f: SampledFunction, order: FractionalOrder) -> SampledFunction:
    """Caputo derivative :math:`D^\\alpha f` by the L1 scheme.

    For :math:`\\alpha < 1` the value at :math:`t = 0` is the limit zero,
    since :math:`D^\\alpha f(t) \\sim f'(0) t^{1 - \\alpha} / \\Gamma(2 - \\alpha)`.
    For :math:`\\alpha = 1` the scheme reduces to backward differences and the
    value at :math:`t = 0` is extrapolated linearly from the next two nodes.
    """
    alpha = order.alpha
    grid = f.grid
    n = grid.n_steps
    df = np.diff(f.values)

    result = np.zeros(n + 1)
    if alpha == 1.0:
        result[1:] = df / grid.h
        result[0] = 2 * result[1] - result[2]
    else:
        b = l1_weights(n, alpha)
        result[1:] = np.convolve(b, df)[:n] * grid.h**-alpha / gamma(2 - alpha)

    return SampledFunction(grid, result)


def verify_inversion(f: SampledFunction, order: FractionalOrder) -> float:
    """Maximum of :math:`|J^\\alpha D^\\alpha f - (f - f(0))|` over the grid."""
    g = rl_integral(caputo_l1(f, order), order)
    return float(np.max(np.abs(g.values - (f.values - f.values[0]))))


# }}}


# {{{ power laws


def _check_exponent(gamma_exp: float, t: float) -> None:
    if gamma_exp <= -1:
        raise ValueError(f"exponent must be larger than -1: {gamma_exp}")

    if t <= 0:
        raise ValueError(f"'t' must be positive: {t}")


def caputo_power(gamma_exp: float, order: FractionalOrder, t: float) -> float:
    """Caputo derivative of :math:`t^\\gamma`.

    The derivative of the constant :math:`t^0` is zero.
    """
    _check_exponent(gamma_exp, t)
    if gamma_exp == 0:
        return 0.0

    alpha = order.alpha
    return gamma(gamma_exp + 1) / gamma(gamma_exp - alpha + 1) * t ** (gamma_exp - alpha)


def rl_integral_power(gamma_exp: float, order: FractionalOrder, t: float) -> float:
    """Riemann-Liouville integral of :math:`t^\\gamma`."""
    _check_exponent(gamma_exp, t)

    alpha = order.alpha
    return gamma(gamma_exp + 1) / gamma(gamma_exp + alpha + 1) * t ** (gamma_exp + alpha)


# }}}


# {{{ laplace


class LaplaceConvergenceError(ArithmeticError):
    """Raised when adaptive quadrature exceeds its subdivision budget."""


@dataclass(frozen=True)
class LaplaceResult:
    value: float
    #: Quadrature error estimate plus the bound on the truncated tail.
    abs_error_estimate: float
    t_cut: float


def laplace_numeric(
    f: Callable[[float], float],
    s: float,
    t_cut: float | None = None,
    *,
    tol: float = 1.0e-9,
    limit: int = 200,
    n_tail_samples: int = 64,
) -> LaplaceResult:
    """Laplace transform :math:`\\int_0^\\infty e^{-s t} f(t) dt` truncated at *t_cut*.

    The integral on :math:`[0, t_{cut}]` is computed by adaptive Gauss-Kronrod
    quadrature. The tail is bounded by :math:`M e^{-s t_{cut}} / s`, where
    :math:`M` is the largest sampled :math:`|f|` on :math:`[0, t_{cut}]`.

    :arg t_cut: truncation point, defaults to :math:`40 / s`.
    """
    if not s > 0:
        raise ValueError(f"'s' must be positive: {s}")

    if t_cut is None:
        t_cut = 40.0 / s

    with np.errstate(all="ignore"):
        value, err, info = integrate.quad(
            lambda t: math.exp(-s * t) * f(t),
            0.0,
            t_cut,
            epsabs=tol,
            epsrel=tol,
            limit=limit,
            full_output=True,
        )[:3]

    if info["last"] >= limit:
        raise LaplaceConvergenceError(
            f"adaptive quadrature did not converge with {limit} subintervals"
        )

    fmax = max(abs(f(t)) for t in np.linspace(0.0, t_cut, n_tail_samples))
    tail = fmax * math.exp(-s * t_cut) / s

    return LaplaceResult(value=value, abs_error_estimate=err + tail, t_cut=t_cut)


# }}}
