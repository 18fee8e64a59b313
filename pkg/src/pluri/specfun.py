"""Log-gamma, gamma, beta and digamma for positive real arguments.

All routines shift the argument up to ``x >= 10`` with the recurrences

    lnGamma(x) = lnGamma(x + N) - log(x (x+1) ... (x+N-1))
    psi(x)     = psi(x + N) - sum_{i<N} 1/(x+i)

and then sum the Stirling / de Moivre asymptotic series.  Results are
``SpecialValue`` floats that also carry a rigorous-ish bound on the absolute
error (rounding plus series truncation).
"""

from __future__ import annotations

import math

__all__ = [
    "SpecialValue",
    "lngamma",
    "gamma",
    "lnbeta",
    "beta",
    "digamma",
]

_EPS = 2.220446049250313e-16
_HALF_LOG_2PI = 0.9189385332046727418
_SHIFT = 10.0
# Largest x with Gamma(x) representable as a double.
_GAMMA_MAX = 171.6243769563027

# B_{2k} / (2k (2k-1)), Stirling series for lnGamma.
_LNGAMMA_SERIES = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
# B_{2k} / (2k), asymptotic series for psi.
_DIGAMMA_SERIES = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


class SpecialValue(float):
    """A float that remembers an absolute error bound.

    Behaves exactly like ``float`` in arithmetic; the bound is available as
    ``abs_error_bound`` and the plain value as ``value``.
    """

    abs_error_bound: float

    def __new__(cls, value: float, abs_error_bound: float = 0.0) -> "SpecialValue":
        obj = super().__new__(cls, value)
        obj.abs_error_bound = abs(float(abs_error_bound))
        return obj

    @property
    def value(self) -> float:
        return float(self)

    def __repr__(self) -> str:
        return f"SpecialValue({float(self)!r}, abs_error_bound={self.abs_error_bound:.3g})"


def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not x > 0.0 or math.isinf(x):
        raise ValueError(f"{name} requires a finite argument > 0, got {x!r}")
    return x


def _stirling_correction(y: float) -> float:
    # lnGamma(y) - [(y - 1/2) log y - y + log(2 pi)/2], valid for y >= 10
    inv = 1.0 / y
    inv2 = inv * inv
    acc = 0.0
    for coeff in reversed(_LNGAMMA_SERIES):
        acc = acc * inv2 + coeff
    return acc * inv


def _shift(x: float) -> tuple[float, float, int]:
    """Return (y, log_prod, N) with y = x + N >= 10, log_prod = log prod_{i<N} (x+i)."""
    if x >= _SHIFT:
        return x, 0.0, 0
    n_steps = int(math.ceil(_SHIFT - x))
    prod = 1.0
    for i in range(n_steps):
        prod *= x + i
    return x + n_steps, math.log(prod), n_steps


def _lngamma_large(y: float) -> float:
    return (y - 0.5) * math.log(y) - y + _HALF_LOG_2PI + _stirling_correction(y)


def lngamma(x: float) -> SpecialValue:
    """Natural log of the gamma function for ``x > 0``."""
    x = _check_positive("lngamma", x)
    if x == 1.0 or x == 2.0:
        return SpecialValue(0.0, 0.0)
    y, log_prod, n_steps = _shift(x)
    big = _lngamma_large(y)
    value = big - log_prod
    # rounding in the two large terms dominates; the series tail is < 1e-16
    err = 4.0 * _EPS * (abs(big) + abs(log_prod) + (n_steps + 1) * 1.0) + 1e-17
    return SpecialValue(value, err)


def gamma(x: float) -> SpecialValue:
    """Gamma function for ``0 < x < 171.62``; larger arguments overflow."""
    x = _check_positive("gamma", x)
    if x > _GAMMA_MAX:
        raise OverflowError(f"gamma({x!r}) overflows a double; use lngamma")
    lg = lngamma(x)
    value = math.exp(lg)
    return SpecialValue(value, value * (lg.abs_error_bound + _EPS))


def _lngamma_ratio(b: float, a: float) -> float:
    # lnGamma(b) - lnGamma(a + b) for b >= 10, without cancelling two large logs
    return (
        -(b - 0.5) * math.log1p(a / b)
        - a * math.log(a + b)
        + a
        + _stirling_correction(b)
        - _stirling_correction(a + b)
    )


def lnbeta(x: float, y: float) -> SpecialValue:
    """log B(x, y) for ``x, y > 0``; symmetric in its arguments by construction."""
    x = _check_positive("beta", x)
    y = _check_positive("beta", y)
    a, b = (x, y) if x <= y else (y, x)
    if b < _SHIFT:
        la, lb, lab = lngamma(a), lngamma(b), lngamma(a + b)
        value = la + lb - lab
        err = la.abs_error_bound + lb.abs_error_bound + lab.abs_error_bound
    else:
        la = lngamma(a)
        ratio = _lngamma_ratio(b, a)
        value = la + ratio
        err = la.abs_error_bound + 8.0 * _EPS * (abs(ratio) + a * abs(math.log(a + b)) + 1.0)
    return SpecialValue(value, err)


def beta(x: float, y: float) -> SpecialValue:
    """Euler beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y)."""
    lb = lnbeta(x, y)
    value = math.exp(lb)
    return SpecialValue(value, value * (lb.abs_error_bound + _EPS))


def digamma(x: float) -> SpecialValue:
    """Digamma psi(x) = d/dx lnGamma(x) for ``x > 0``."""
    x = _check_positive("digamma", x)
    shift_sum = 0.0
    y = x
    while y < _SHIFT:
        shift_sum += 1.0 / y
        y += 1.0
    inv2 = 1.0 / (y * y)
    acc = 0.0
    for coeff in reversed(_DIGAMMA_SERIES):
        acc = acc * inv2 + coeff
    asym = math.log(y) - 0.5 / y - acc * inv2
    value = asym - shift_sum
    err = 4.0 * _EPS * (abs(asym) + abs(shift_sum) + 1.0) + 1e-17
    return SpecialValue(value, err)
