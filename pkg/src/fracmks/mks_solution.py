"""Exact and numerical solutions of the time-fractional mKS equation

.. math::

    D^\\alpha_t u = -u_{xxxx} - u_{xx} + (1 - \\lambda) u_x^2 + \\lambda u_{xx}^2

in the invariant subspace, :math:`u = C_1(t) + C_2(t) \\cos \\gamma x + C_3(t) \\sin \\gamma x`.

The oscillatory coefficients are :math:`C_{2, 3} = C_{2, 3}(0) E_\\alpha(\\theta t^\\alpha)`.
The constant coefficient solves

.. math::

    D^\\alpha C_1 = (1 - \\lambda) \\gamma^2 (C_2^2 + C_3^2),

and is available in two flavours (see :class:`C1Mode`): the closed form that
replaces :math:`E_\\alpha(\\theta t^\\alpha)^2` by :math:`E_\\alpha(\\theta (2 t)^\\alpha)`,
and the direct fractional integral of the right-hand side. The two agree
only for :math:`\\alpha = 1` or :math:`\\theta = 0`; :func:`composition_gap`
measures the difference of the integrands.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from fracmks.fractional_calculus import (
    FractionalOrder,
    SampledFunction,
    TimeGrid,
    rl_integral,
    rl_weights,
)
from fracmks.invariant_subspace import (
    MKSParams,
    SubspaceElement,
    basis_derivative,
    coefficient_map,
)
from fracmks.special_functions import MLMethod, MLParams, gamma, mittag_leffler

# {{{ types


@dataclass(frozen=True)
class SolutionParams:
    mks: MKSParams
    order: FractionalOrder
    c1_0: float = 0.0
    c2_0: float = 1.0
    c3_0: float = 1.0

    @classmethod
    def create(cls, lam: float, alpha: float, **kwargs: float) -> SolutionParams:
        return cls(MKSParams(lam), FractionalOrder(alpha), **kwargs)

    @property
    def alpha(self) -> float:
        return self.order.alpha

    @property
    def c1_amplitude(self) -> float:
        """Constant :math:`(1 - \\lambda) \\gamma^2 (C_2(0)^2 + C_3(0)^2)`."""
        return (1 - self.mks.lam) * self.mks.gamma2 * (self.c2_0**2 + self.c3_0**2)


class C1Mode(enum.Enum):
    #: Closed form that relies on the product rule for :math:`E_\alpha`.
    PAPER_CLOSED_FORM = "paper"
    #: Product trapezoidal fractional integral of the exact right-hand side.
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class ResidualReport:
    t_nodes: np.ndarray = field(repr=False)
    x_nodes: np.ndarray = field(repr=False)
    #: Residual indexed as ``(t, x)``.
    residual_field: np.ndarray = field(repr=False)
    c1_mode: C1Mode

    @property
    def max_abs_residual(self) -> float:
        return float(np.max(np.abs(self.residual_field)))

    @property
    def argmax(self) -> tuple[float, float]:
        """Location ``(t, x)`` of the largest residual."""
        i, j = np.unravel_index(np.argmax(np.abs(self.residual_field)), self.residual_field.shape)
        return float(self.t_nodes[i]), float(self.x_nodes[j])


@dataclass(frozen=True)
class GapReport:
    alpha: float
    theta: float
    t_samples: np.ndarray = field(repr=False)
    gaps: np.ndarray = field(repr=False)

    @property
    def max_abs_gap(self) -> float:
        return float(np.max(np.abs(self.gaps))) if self.gaps.size else 0.0


# }}}


# {{{ coefficients


def _ml(alpha: float, beta: float, z: float, method: MLMethod | None = None) -> float:
    return mittag_leffler(MLParams(alpha, beta), z, method).value


def coeff_c2_c3(t: float, p: SolutionParams) -> float:
    """Shape :math:`E_\\alpha(\\theta t^\\alpha)` shared by :math:`C_2 / C_2(0)` and
    :math:`C_3 / C_3(0)`."""
    if t < 0:
        raise ValueError(f"'t' must be non-negative: {t}")

    if t == 0:
        return 1.0

    return _ml(p.alpha, 1.0, p.mks.theta * t**p.alpha)


def c1_forcing(t: float, p: SolutionParams) -> float:
    """Right-hand side :math:`(1 - \\lambda) \\gamma^2 (C_2^2 + C_3^2)` of the :math:`C_1` equation."""
    return p.c1_amplitude * coeff_c2_c3(t, p) ** 2


def c1_forcing_paper(t: float, p: SolutionParams) -> float:
    """Right-hand side after the product rule, with :math:`E_\\alpha(\\theta (2 t)^\\alpha)`."""
    if t < 0:
        raise ValueError(f"'t' must be non-negative: {t}")

    return p.c1_amplitude * _ml(p.alpha, 1.0, p.mks.theta * (2 * t) ** p.alpha)


def coeff_c1_paper(t: float, p: SolutionParams) -> float:
    """Closed form :math:`A t^\\alpha E_{\\alpha, \\alpha + 1}(\\theta (2 t)^\\alpha) + C_1(0)`."""
    if t < 0:
        raise ValueError(f"'t' must be non-negative: {t}")

    if t == 0:
        return p.c1_0

    alpha = p.alpha
    z = p.mks.theta * (2 * t) ** alpha
    return p.c1_amplitude * t**alpha * _ml(alpha, alpha + 1, z) + p.c1_0


def coeff_c1_quadrature(t_grid: TimeGrid, p: SolutionParams) -> SampledFunction:
    """:math:`C_1` as the fractional integral of the exact right-hand side."""
    forcing = SampledFunction(t_grid, [c1_forcing(t, p) for t in t_grid.nodes])
    c1 = rl_integral(forcing, p.order)
    return SampledFunction(t_grid, c1.values + p.c1_0)


def c1_at(t: float, p: SolutionParams, mode: C1Mode, c1: SampledFunction | None = None) -> float:
    if mode is C1Mode.PAPER_CLOSED_FORM:
        return coeff_c1_paper(t, p)

    if c1 is None:
        raise ValueError("quadrature mode requires precomputed samples of C1")

    return c1.at(t)


def evaluate_solution(
    t: float,
    x,
    p: SolutionParams,
    mode: C1Mode = C1Mode.PAPER_CLOSED_FORM,
    c1: SampledFunction | None = None,
):
    """Evaluate :math:`u(t, x)`; *x* may be an array.

    :arg c1: samples from :func:`coeff_c1_quadrature`, required in
        quadrature mode. *t* must then be one of the grid nodes.
    """
    shape = coeff_c2_c3(t, p)
    elem = SubspaceElement(c1_at(t, p, mode, c1), p.c2_0 * shape, p.c3_0 * shape)
    return basis_derivative(elem, p.mks, x, 0)


def solution_grid(
    p: SolutionParams,
    t_nodes: Sequence[float],
    x_nodes: Sequence[float],
    mode: C1Mode = C1Mode.PAPER_CLOSED_FORM,
    c1: SampledFunction | None = None,
) -> np.ndarray:
    """Evaluate :math:`u` on a tensor grid, indexed as ``(t, x)``."""
    x = np.asarray(x_nodes, dtype=float)
    return np.array([evaluate_solution(t, x, p, mode, c1) for t in t_nodes]).reshape(-1, x.size)


# }}}


# {{{ residuals


def caputo_c1(t: float, p: SolutionParams, mode: C1Mode) -> float:
    """Analytic :math:`D^\\alpha C_1`, since :math:`D^\\alpha J^\\alpha` is the identity."""
    if mode is C1Mode.PAPER_CLOSED_FORM:
        return c1_forcing_paper(t, p)

    return c1_forcing(t, p)


def pde_residual(
    p: SolutionParams,
    t_nodes: Sequence[float],
    x_nodes: Sequence[float],
    mode: C1Mode = C1Mode.PAPER_CLOSED_FORM,
) -> ResidualReport:
    """Residual :math:`D^\\alpha u - F[u]` of the assembled solution.

    The time derivative is analytic: :math:`D^\\alpha C_{2, 3} = \\theta C_{2, 3}`
    and :math:`D^\\alpha C_1` is given by :func:`caputo_c1`. The spatial terms
    are computed from the basis derivatives. :math:`C_1` itself drops out of
    every spatial derivative, so its value is not needed.
    """
    t = np.asarray(t_nodes, dtype=float)
    x = np.asarray(x_nodes, dtype=float)
    if np.any(t <= 0):
        raise ValueError("residuals are only defined for t > 0")

    mks = p.mks
    lam = mks.lam

    out = np.empty((t.size, x.size))
    for i, ti in enumerate(t):
        shape = coeff_c2_c3(ti, p)
        elem = SubspaceElement(0.0, p.c2_0 * shape, p.c3_0 * shape)

        dt_u = caputo_c1(ti, p, mode) + mks.theta * (
            basis_derivative(elem, mks, x, 0)
        )
        u_x = basis_derivative(elem, mks, x, 1)
        u_xx = basis_derivative(elem, mks, x, 2)
        u_xxxx = basis_derivative(elem, mks, x, 4)

        out[i] = dt_u + u_xxxx + u_xx - (1 - lam) * u_x**2 - lam * u_xx**2

    return ResidualReport(t_nodes=t, x_nodes=x, residual_field=out, c1_mode=mode)


def composition_gap(
    order: FractionalOrder,
    theta: float,
    t_samples: Sequence[float],
    method: MLMethod | None = None,
) -> GapReport:
    """Gap :math:`E_\\alpha(\\theta (2 t)^\\alpha) - E_\\alpha(\\theta t^\\alpha)^2`.

    :arg method: passed on to :func:`~fracmks.special_functions.mittag_leffler`,
        e.g. to compare the closed form for :math:`\\alpha = 1/2` against the series.
    """
    alpha = order.alpha
    t = np.asarray(t_samples, dtype=float)
    if np.any(t < 0):
        raise ValueError("'t_samples' must be non-negative")

    gaps = np.zeros_like(t)
    for i, ti in enumerate(t):
        if ti == 0:
            continue

        e2 = _ml(alpha, 1.0, theta * (2 * ti) ** alpha, method)
        e1 = _ml(alpha, 1.0, theta * ti**alpha, method)
        gaps[i] = e2 - e1 * e1

    return GapReport(alpha=alpha, theta=theta, t_samples=t, gaps=gaps)


# }}}


# {{{ particular cases


@dataclass(frozen=True)
class Half:
    """:math:`\\lambda = 1/2`, so that :math:`\\gamma = 1` and :math:`\\theta = 0`."""


@dataclass(frozen=True)
class GeneralM:
    """:math:`\\lambda = 1 / m` with :math:`m > 2` and any order."""

    m: int

    def __post_init__(self) -> None:
        if self.m <= 2:
            raise ValueError(f"'m' must be larger than 2: {self.m}")


@dataclass(frozen=True)
class Alpha1M(GeneralM):
    """:math:`\\lambda = 1 / m` with :math:`\\alpha = 1` (exponentials)."""


@dataclass(frozen=True)
class AlphaHalfM(GeneralM):
    """:math:`\\lambda = 1 / m` with :math:`\\alpha = 1/2` (error functions).

    .. attribute:: printed

        If *True*, the oscillatory part uses :math:`e^{\\theta t}`, a variant
        that does not solve the equation. By default it uses
        :math:`E_{1/2}(\\theta \\sqrt{t})`, which is what the general case
        reduces to.
    """

    printed: bool = False


ParticularCase = Half | GeneralM


def particular_case(t: float, x, order: FractionalOrder, case: ParticularCase):
    """Closed-form particular solutions for :math:`\\lambda = 1/m`."""
    alpha = order.alpha
    x = np.asarray(x, dtype=float)

    if isinstance(case, Half):
        return t**alpha / gamma(alpha + 1) + np.cos(x) + np.sin(x)

    m = case.m
    theta = (m - 1) * (2 - m)
    k = math.sqrt(m - 1)
    prefactor = (m - 1) / (m * (2 - m))
    waves = np.cos(k * x) + np.sin(k * x)

    if isinstance(case, Alpha1M):
        if alpha != 1:
            raise ValueError(f"case {case} requires alpha = 1: {alpha}")

        return prefactor * math.expm1(2 * theta * t) + math.exp(theta * t) * waves

    if isinstance(case, AlphaHalfM):
        if alpha != 0.5:
            raise ValueError(f"case {case} requires alpha = 1/2: {alpha}")

        e2 = _ml(0.5, 1.0, math.sqrt(2) * theta * math.sqrt(t), MLMethod.CLOSED_FORM)
        if case.printed:
            e1 = math.exp(theta * t)
        else:
            e1 = _ml(0.5, 1.0, theta * math.sqrt(t), MLMethod.CLOSED_FORM)

        return math.sqrt(2) * prefactor * (e2 - 1) + e1 * waves

    e2 = _ml(alpha, 1.0, theta * 2**alpha * t**alpha)
    e1 = _ml(alpha, 1.0, theta * t**alpha)
    return 2 ** (1 - alpha) * prefactor * (e2 - 1) + e1 * waves


# }}}


# {{{ predictor-corrector


def reduced_system_numeric(
    p: SolutionParams, grid: TimeGrid
) -> tuple[SampledFunction, SampledFunction, SampledFunction]:
    """Solve the reduced system for :math:`(C_1, C_2, C_3)` numerically.

    Uses the fractional Adams-Bashforth-Moulton scheme: a product rectangle
    predictor followed by a single product trapezoidal corrector. No
    Mittag-Leffler evaluations are involved.
    """
    alpha = p.alpha
    n = grid.n_steps
    h = grid.h

    def rhs(y: np.ndarray) -> np.ndarray:
        return coefficient_map(SubspaceElement(*y), p.mks).as_array()

    m = np.arange(n + 1, dtype=float)
    # predictor weights (m + 1)^alpha - m^alpha, m = k - j
    b = (m + 1) ** alpha - m**alpha
    # corrector weights for the interior and the first node
    a = rl_weights(n, alpha)
    c0 = np.zeros(n + 1)
    c0[1:] = (m[1:] - 1) ** (alpha + 1) - (m[1:] - alpha - 1) * m[1:] ** alpha

    pred_scale = h**alpha / gamma(alpha + 1)
    corr_scale = h**alpha / gamma(alpha + 2)

    y = np.empty((n + 1, 3))
    f = np.empty((n + 1, 3))
    y[0] = (p.c1_0, p.c2_0, p.c3_0)
    f[0] = rhs(y[0])

    for k in range(n):
        # predictor: y0 + h^a / G(a + 1) sum_{j=0}^{k} b_{k-j} f_j
        y_pred = y[0] + pred_scale * (b[k::-1] @ f[: k + 1])

        # corrector at node k + 1
        history = c0[k + 1] * f[0]
        if k >= 1:
            history = history + a[k:0:-1] @ f[1 : k + 1]

        y[k + 1] = y[0] + corr_scale * (history + rhs(y_pred))
        f[k + 1] = rhs(y[k + 1])

    return tuple(SampledFunction(grid, y[:, i]) for i in range(3))


# }}}
