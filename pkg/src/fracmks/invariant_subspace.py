"""The invariant subspace :math:`W_3 = \\langle 1, \\cos \\gamma x, \\sin \\gamma x \\rangle`
of the modified Kuramoto-Sivashinsky operator

.. math::

    F[u] = -u_{xxxx} - u_{xx} + (1 - \\lambda) u_x^2 + \\lambda u_{xx}^2.

All spatial derivatives are taken analytically on the basis functions.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

# {{{ types


@dataclass(frozen=True)
class MKSParams:
    """Nonlinearity weight :math:`\\lambda` and the derived constants.

    .. attribute:: gamma

        Wavenumber :math:`\\gamma = \\sqrt{(1 - \\lambda) / \\lambda}`.

    .. attribute:: theta

        Growth rate :math:`\\theta = \\gamma^2 (1 - \\gamma^2)` of the
        oscillatory modes.
    """

    lam: float

    def __post_init__(self) -> None:
        if not (0.0 < self.lam < 1.0):
            raise ValueError(f"'lambda' must be in (0, 1): {self.lam}")

    @classmethod
    def from_m(cls, m: int) -> MKSParams:
        """Parameters for :math:`\\lambda = 1 / m`."""
        if m < 2:
            raise ValueError(f"'m' must be at least 2: {m}")
        return cls(1.0 / m)

    @property
    def gamma2(self) -> float:
        return (1.0 - self.lam) / self.lam

    @property
    def gamma(self) -> float:
        return math.sqrt(self.gamma2)

    @property
    def theta(self) -> float:
        g2 = self.gamma2
        return g2 * (1.0 - g2)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.gamma


@dataclass(frozen=True)
class SubspaceElement:
    """Coefficients of :math:`c_1 + c_2 \\cos \\gamma x + c_3 \\sin \\gamma x`."""

    c1: float
    c2: float
    c3: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(c) for c in (self.c1, self.c2, self.c3)):
            raise ValueError(f"coefficients must be finite: {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3])


@dataclass(frozen=True)
class InvarianceReport:
    trials: int
    #: Largest pointwise least squares residual or coefficient mismatch.
    max_fit_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_fit_residual <= self.tolerance


# }}}


# {{{ operator

_QUARTER_TURNS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def basis_derivative(elem: SubspaceElement, params: MKSParams, x, order: int):
    """Analytic *order*-th derivative of the element in :math:`x`."""
    g = params.gamma
    x = np.asarray(x, dtype=float)
    # d^n/dx^n of (c2 cos + c3 sin) rotates the phase by n pi / 2
    cos_n, sin_n = _QUARTER_TURNS[order % 4]
    a = cos_n * elem.c2 + sin_n * elem.c3
    b = cos_n * elem.c3 - sin_n * elem.c2
    result = g**order * (a * np.cos(g * x) + b * np.sin(g * x))
    if order == 0:
        result = result + elem.c1

    return result


def evaluate_element(elem: SubspaceElement, params: MKSParams, x):
    """Value :math:`c_1 + c_2 \\cos \\gamma x + c_3 \\sin \\gamma x`."""
    g = params.gamma
    x = np.asarray(x, dtype=float)
    return elem.c1 + elem.c2 * np.cos(g * x) + elem.c3 * np.sin(g * x)


def apply_operator_pointwise(elem: SubspaceElement, params: MKSParams, x):
    """Evaluate :math:`F[h](x)` from the analytic derivatives of *elem*."""
    lam = params.lam
    u_x = basis_derivative(elem, params, x, 1)
    u_xx = basis_derivative(elem, params, x, 2)
    u_xxxx = basis_derivative(elem, params, x, 4)

    return -u_xxxx - u_xx + (1 - lam) * u_x**2 + lam * u_xx**2


def coefficient_map(elem: SubspaceElement, params: MKSParams) -> SubspaceElement:
    """Coefficients of :math:`F[h]` in the basis, i.e. the reduced right-hand side."""
    g2 = params.gamma2
    theta = params.theta
    return SubspaceElement(
        (1 - params.lam) * g2 * (elem.c2**2 + elem.c3**2),
        theta * elem.c2,
        theta * elem.c3,
    )


# }}}


# {{{ invariance checks


def fit_basis(y: np.ndarray, params: MKSParams, x: np.ndarray) -> tuple[np.ndarray, float]:
    """Least squares fit of samples *y* onto the basis by the normal equations.

    :returns: a tuple ``(coefficients, max pointwise residual)``.
    """
    g = params.gamma
    A = np.column_stack([np.ones_like(x), np.cos(g * x), np.sin(g * x)])
    coeffs = np.linalg.solve(A.T @ A, A.T @ y)
    return coeffs, float(np.max(np.abs(A @ coeffs - y)))


def invariance_check(
    params: MKSParams,
    trials: int,
    seed: int,
    tol: float,
    *,
    n_nodes: int = 64,
) -> InvarianceReport:
    """Check that :math:`F` maps random elements of :math:`W_3` back into :math:`W_3`.

    For each trial, coefficients are drawn uniformly in :math:`[-2, 2]`,
    :math:`F[h]` is sampled on *n_nodes* equispaced nodes covering one period
    and fitted onto the basis. Both the fit residual and the mismatch between
    the fitted coefficients and :func:`coefficient_map` must be below *tol*.
    """
    if trials < 1:
        raise ValueError(f"'trials' must be positive: {trials}")

    if not tol > 0:
        raise ValueError(f"'tol' must be positive: {tol}")

    rng = np.random.default_rng(seed)
    x = np.linspace(0.0, params.period, n_nodes, endpoint=False)

    worst = 0.0
    for c in rng.uniform(-2.0, 2.0, size=(trials, 3)):
        elem = SubspaceElement(*c)
        y = apply_operator_pointwise(elem, params, x)

        coeffs, residual = fit_basis(y, params, x)
        mismatch = np.max(np.abs(coeffs - coefficient_map(elem, params).as_array()))
        worst = max(worst, residual, float(mismatch))

    return InvarianceReport(trials=trials, max_fit_residual=worst, tolerance=tol)


def harmonic_coefficients(elem: SubspaceElement, params: MKSParams) -> np.ndarray:
    """Fourier coefficients of :math:`F[h]` in harmonics of :math:`\\gamma x`.

    The squares of :math:`u_x` and :math:`u_{xx}` are expanded with the double
    angle formulas, so the result is an array of shape ``(3, 2)`` with rows
    ``(a_n, b_n)`` for :math:`a_n \\cos n \\gamma x + b_n \\sin n \\gamma x`,
    :math:`n = 0, 1, 2`. Nothing here assumes that the second harmonic
    vanishes.
    """
    lam = params.lam
    g2 = params.gamma2
    c2, c3 = elem.c2, elem.c3

    mean = 0.5 * (c2**2 + c3**2)
    half_diff = 0.5 * (c2**2 - c3**2)
    cross = c2 * c3

    # u_x^2 = g^2 (mean - half_diff cos 2 - cross sin 2)
    # u_xx^2 = g^4 (mean + half_diff cos 2 + cross sin 2)
    w1 = (1 - lam) * g2
    w2 = lam * g2 * g2

    out = np.empty((3, 2))
    out[0] = ((w1 + w2) * mean, 0.0)
    out[1] = ((g2 - g2 * g2) * c2, (g2 - g2 * g2) * c3)
    out[2] = ((w2 - w1) * half_diff, (w2 - w1) * cross)
    return out


def annihilator_residual(
    elem: SubspaceElement, params: MKSParams, x_nodes: Sequence[float]
) -> float:
    """Maximum of :math:`|L[F[h]]|` with :math:`L[y] = y''' + \\gamma^2 y'`.

    The solutions of :math:`L[y] = 0` are exactly :math:`1, \\cos \\gamma x,
    \\sin \\gamma x`. On a harmonic :math:`n`, :math:`L` acts as multiplication
    by :math:`\\gamma^3 n (n^2 - 1)` with a quarter-period phase shift, which is
    applied here to the harmonics of :math:`F[h]`.
    """
    x = np.asarray(x_nodes, dtype=float)
    if x.size == 0:
        raise ValueError("need at least one node")

    g = params.gamma
    coeffs = harmonic_coefficients(elem, params)

    result = np.zeros_like(x)
    for n, (a, b) in enumerate(coeffs):
        factor = g**3 * n * (n * n - 1)
        result += factor * (a * np.sin(n * g * x) - b * np.cos(n * g * x))

    return float(np.max(np.abs(result)))


def annihilator_kills_basis(params: MKSParams, x_nodes: Sequence[float]) -> float:
    """Largest :math:`|L[f]|` over the basis functions, from their derivatives."""
    worst = 0.0
    for elem in (SubspaceElement(1, 0, 0), SubspaceElement(0, 1, 0), SubspaceElement(0, 0, 1)):
        d1 = basis_derivative(elem, params, x_nodes, 1)
        d3 = basis_derivative(elem, params, x_nodes, 3)
        worst = max(worst, float(np.max(np.abs(d3 + params.gamma2 * d1))))

    return worst


# }}}
