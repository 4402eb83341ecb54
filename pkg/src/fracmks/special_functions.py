"""Gamma, error function and the two-parameter Mittag-Leffler function.

Only real arguments are supported. The Mittag-Leffler function

.. math::

    E_{\\alpha, \\beta}(z) = \\sum_{i = 0}^\\infty \\frac{z^i}{\\Gamma(\\alpha i + \\beta)}

is evaluated by one of three routes, recorded in :attr:`MLResult.method`:

* ``SERIES``: the power series. Terms are summed exactly with :func:`math.fsum`
  when they do not cancel; otherwise the series is re-evaluated in extended
  precision, with enough digits to absorb the cancellation.
* ``ASYMPTOTIC``: the algebraic expansion for large negative ``z``, truncated
  at its smallest term. Only used when its error estimate is negligible.
* ``CLOSED_FORM``: elementary closed forms for ``(1, 1)``, ``(1, 2)`` and
  ``(1/2, 1)``. Never picked automatically, so that the closed forms remain
  an independent check on the other two routes.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.special import erfcx

#: Arguments below ``-Z_SWITCH`` try the asymptotic expansion first.
Z_SWITCH = 10.0
#: Maximum number of series terms before giving up.
TERM_CAP = 10_000
#: Relative size of a term, compared to the partial sum, that stops the series.
SERIES_RTOL = 1.0e-16
#: Number of consecutive small terms required to stop the series.
SERIES_PATIENCE = 3
#: Largest cancellation ratio ``sum |t_i| / |sum t_i|`` accepted in double precision.
MAX_CANCELLATION = 1024.0
#: Largest error estimate accepted from the asymptotic expansion.
ASYMPTOTIC_ATOL = 1.0e-15
#: Series whose largest term exceeds ``exp(SERIES_LOG_PEAK)`` try the expansion first.
SERIES_LOG_PEAK = 40.0


_EPS = float(np.finfo(float).eps)


class GammaPoleError(ValueError):
    """Raised when the Gamma function is evaluated at a pole."""


class MittagLefflerConvergenceError(ArithmeticError):
    """Raised when the series does not meet its stopping criterion."""


# {{{ gamma / erf


def gamma(x: float) -> float:
    """Euler Gamma function for real *x*.

    :raises GammaPoleError: if *x* is zero or a negative integer.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise GammaPoleError(f"Gamma function has a pole at x = {x}")

    return math.gamma(x)


def rgamma(x: float) -> float:
    """Reciprocal Gamma function ``1 / Gamma(x)``, an entire function.

    Returns exactly zero at the poles of Gamma and does not overflow for
    large negative non-integer arguments.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        return 0.0

    if 0 < x < 171.0:
        return 1.0 / math.gamma(x)

    if x > 0:
        return math.exp(-math.lgamma(x))

    # reflection: 1 / Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    s = math.sin(math.pi * x) / math.pi
    if 1.0 - x < 171.0:
        return s * math.gamma(1.0 - x)

    log_abs = math.lgamma(1.0 - x) + math.log(abs(s))
    return math.copysign(math.exp(log_abs) if log_abs < 709.0 else math.inf, s)


def erf(x: float) -> float:
    """Error function ``2 / sqrt(pi) int_0^x exp(-y^2) dy``."""
    return math.erf(float(x))


# }}}


# {{{ types


class MLMethod(enum.Enum):
    SERIES = "series"
    ASYMPTOTIC = "asymptotic"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class MLParams:
    """Parameters :math:`(\\alpha, \\beta)` of the Mittag-Leffler function."""

    alpha: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"'alpha' must be positive: {self.alpha}")

        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"'beta' must be positive: {self.beta}")


@dataclass(frozen=True)
class MLResult:
    #: Value of :math:`E_{\alpha, \beta}(z)`.
    value: float
    #: Estimated bound on the absolute error of :attr:`value`.
    abs_error_estimate: float
    #: Evaluation route that produced the value.
    method: MLMethod

    def __float__(self) -> float:
        return self.value


# }}}


# {{{ series


def _log_abs_term(alpha: float, beta: float, logz: float, i: int) -> float:
    return i * logz - math.lgamma(alpha * i + beta)


def _float_term(alpha: float, beta: float, z: float, i: int) -> float:
    g = alpha * i + beta
    if g < 170.0:
        try:
            return z**i / math.gamma(g)
        except OverflowError:
            pass

    logz = math.log(abs(z))
    sign = -1.0 if (z < 0 and i % 2 == 1) else 1.0
    return sign * math.exp(_log_abs_term(alpha, beta, logz, i))


def _series_length(alpha: float, beta: float, z: float, drop: float) -> tuple[int, float]:
    """Find the number of terms needed once terms are below ``max_term * drop``.

    :returns: a tuple ``(n, log_max_term)``.
    """
    if z == 0.0:
        return 1, -math.lgamma(beta)

    logz = math.log(abs(z))
    logdrop = math.log(drop)

    log_max = -math.inf
    prev = math.inf
    small = 0
    for i in range(TERM_CAP + 1):
        t = _log_abs_term(alpha, beta, logz, i)
        log_max = max(log_max, t)
        if t <= prev and t < log_max + logdrop:
            small += 1
            if small >= SERIES_PATIENCE:
                return i + 1, log_max
        else:
            small = 0
        prev = t

    raise MittagLefflerConvergenceError(
        f"series for E_({alpha}, {beta})({z}) did not converge in {TERM_CAP} terms"
    )


def _series_double(alpha: float, beta: float, z: float) -> tuple[float, float, float]:
    """Sum the series in double precision.

    :returns: a tuple ``(value, sum of |terms|, last term)``.
    """
    terms = []
    partial = 0.0
    small = 0
    prev = math.inf
    for i in range(TERM_CAP + 1):
        try:
            t = _float_term(alpha, beta, z, i)
        except OverflowError:
            raise MittagLefflerConvergenceError(
                f"series for E_({alpha}, {beta})({z}) overflows"
            ) from None
        terms.append(t)
        partial += t

        # only stop once terms are decreasing, past the peak
        if abs(t) <= prev and abs(t) <= SERIES_RTOL * abs(partial):
            small += 1
            if small >= SERIES_PATIENCE:
                break
        else:
            small = 0
        prev = abs(t)
    else:
        raise MittagLefflerConvergenceError(
            f"series for E_({alpha}, {beta})({z}) did not converge in {TERM_CAP} terms"
        )

    return math.fsum(terms), math.fsum(abs(t) for t in terms), terms[-1]


@functools.lru_cache(maxsize=256)
def _rgamma_table(alpha: float, beta: float, n: int, dps: int) -> tuple[mpmath.mpf, ...]:
    with mpmath.workdps(dps):
        a = mpmath.mpf(alpha)
        b = mpmath.mpf(beta)
        return tuple(mpmath.rgamma(a * i + b) for i in range(n))


def _series_extended(alpha: float, beta: float, z: float) -> tuple[float, float]:
    """Sum the series in extended precision to absorb cancellation.

    :returns: a tuple ``(value, abs_error_estimate)``.
    """
    # digits lost to cancellation are unknown until the sum is known, so
    # start with the size of the largest term and increase if needed
    extra = 20
    for _ in range(8):
        _, log_max = _series_length(alpha, beta, z, 1.0)
        digits_max = max(0, math.ceil(log_max / math.log(10)))
        dps = 10 * math.ceil((digits_max + extra) / 10)

        n, _ = _series_length(alpha, beta, z, 10.0 ** -(dps + 1))
        n = 64 * math.ceil(n / 64)
        coeffs = _rgamma_table(alpha, beta, n, dps)

        with mpmath.workdps(dps):
            zz = mpmath.mpf(z)
            value = mpmath.polyval(coeffs[::-1], zz)
            max_term = mpmath.mpf(10) ** digits_max
            rounding = max_term * mpmath.mpf(10) ** (-dps + 1)

            if value != 0 and rounding < abs(value) * mpmath.mpf(10) ** -17:
                result = float(value)
                err = float(rounding) + 0.5 * math.ulp(result)
                return result, err

            # not enough digits left after cancellation
            if value == 0:
                extra += 40
            else:
                lost = float(mpmath.log10(max_term / abs(value)))
                extra = max(extra + 20, math.ceil(lost) + 20)

    raise MittagLefflerConvergenceError(
        f"could not resolve cancellation in the series for E_({alpha}, {beta})({z})"
    )


def _mittag_leffler_series(alpha: float, beta: float, z: float) -> MLResult:
    value, abs_sum, last = _series_double(alpha, beta, z)

    if abs_sum <= MAX_CANCELLATION * abs(value):
        # fsum is exact on the rounded terms, which carry the error of
        # math.gamma (a few ulps) or of the lgamma route for large terms
        err = 32.0 * _EPS * abs_sum + abs(last) * SERIES_PATIENCE
        return MLResult(value, err, MLMethod.SERIES)

    value, err = _series_extended(alpha, beta, z)
    return MLResult(value, err, MLMethod.SERIES)


# }}}


# {{{ asymptotic


def _log_rgamma_envelope(x: float) -> float:
    # bound on log |1 / Gamma(x)| that ignores the zeros at the poles of
    # Gamma, continuous at x = 1/2 where |sin(pi x)| = 1
    if x > 0.5:
        return -math.lgamma(x)
    return math.lgamma(1.0 - x) - math.log(math.pi)


def _mittag_leffler_asymptotic(alpha: float, beta: float, z: float) -> MLResult:
    """Algebraic expansion for real ``z < 0`` and ``0 < alpha < 2``."""
    assert z < 0

    logz = math.log(-z)
    terms = []
    err = math.inf
    prev_env = math.inf
    for k in range(1, TERM_CAP + 1):
        x = beta - alpha * k
        log_env = -k * logz + _log_rgamma_envelope(x)
        env = math.exp(log_env) if log_env < 700 else math.inf
        if env > prev_env:
            # smallest term passed, the expansion starts diverging
            err = prev_env
            break

        partial = math.fsum(terms)
        if terms and env <= SERIES_RTOL * abs(partial):
            err = env
            break

        terms.append(-(z**-k) * rgamma(x) if log_env > -700 else 0.0)
        prev_env = env

    value = math.fsum(terms)

    # exponentially small contributions are not captured by the expansion
    if alpha > 2.0 / 3.0:
        err += math.exp(abs(z) ** (1.0 / alpha) * math.cos(math.pi / alpha))

    return MLResult(value, err + 0.5 * math.ulp(value), MLMethod.ASYMPTOTIC)


# }}}


# {{{ closed forms


def _mittag_leffler_closed_form(alpha: float, beta: float, z: float) -> MLResult:
    if alpha == 1.0 and beta == 1.0:
        value = math.exp(z)
    elif alpha == 1.0 and beta == 2.0:
        value = math.expm1(z) / z if z != 0.0 else 1.0
    elif alpha == 0.5 and beta == 1.0:
        # E_{1/2}(z) = exp(z^2) erfc(-z)
        value = float(erfcx(-z))
    else:
        raise ValueError(f"no closed form available for (alpha, beta) = ({alpha}, {beta})")

    return MLResult(value, 8.0 * _EPS * max(1.0, abs(value)), MLMethod.CLOSED_FORM)


# }}}


def mittag_leffler(
    params: MLParams,
    z: float,
    method: MLMethod | None = None,
    *,
    z_switch: float = Z_SWITCH,
) -> MLResult:
    """Evaluate :math:`E_{\\alpha, \\beta}(z)` for real *z*.

    :arg method: force an evaluation route. By default, the asymptotic
        expansion is tried for ``z < -z_switch`` (or whenever the series
        terms would grow beyond ``exp(SERIES_LOG_PEAK)`` before decaying) and
        the series is used everywhere else, or when the expansion is not
        accurate enough.
    :raises MittagLefflerConvergenceError: if the series does not converge
        within :data:`TERM_CAP` terms.
    """
    if isinstance(z, (complex, np.complexfloating)):
        raise TypeError("only real arguments are supported")

    z = float(z)
    if not math.isfinite(z):
        raise ValueError(f"argument must be finite: {z}")

    alpha, beta = params.alpha, params.beta
    if method is MLMethod.CLOSED_FORM:
        return _mittag_leffler_closed_form(alpha, beta, z)

    if method is MLMethod.ASYMPTOTIC:
        if z >= 0 or alpha >= 2:
            raise ValueError("asymptotic expansion requires z < 0 and alpha < 2")
        return _mittag_leffler_asymptotic(alpha, beta, z)

    if z == 0.0:
        return MLResult(rgamma(beta), 0.5 * math.ulp(rgamma(beta)), MLMethod.SERIES)

    # the peak term of the series is roughly exp(|z|^(1 / alpha))
    expensive = abs(z) ** (1.0 / alpha) > SERIES_LOG_PEAK if alpha >= 0.05 else True
    if method is None and z < 0 and alpha < 2 and (z < -z_switch or expensive):
        result = _mittag_leffler_asymptotic(alpha, beta, z)
        if result.abs_error_estimate <= ASYMPTOTIC_ATOL * max(1.0, abs(result.value)):
            return result

    return _mittag_leffler_series(alpha, beta, z)


def ml(z: float, alpha: float, beta: float = 1.0) -> float:
    """Shorthand for ``mittag_leffler(MLParams(alpha, beta), z).value``."""
    return mittag_leffler(MLParams(alpha, beta), z).value


def ml_array(z: np.ndarray, alpha: float, beta: float = 1.0) -> np.ndarray:
    """Evaluate the Mittag-Leffler function elementwise on a real array."""
    params = MLParams(alpha, beta)
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    for idx, zi in np.ndenumerate(z):
        out[idx] = mittag_leffler(params, zi).value

    return out
