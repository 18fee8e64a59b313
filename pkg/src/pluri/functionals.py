"""Integral functionals of radial plurisubharmonic functions on the unit ball.

Every 2n-dimensional integral is reduced to one dimension by radial symmetry:

* energies integrate against the Monge-Ampere mass function ``F`` of
  ``radial.ma_distribution`` (a Stieltjes integral, times ``(2 pi)^n``);
* volume integrals use ``d lambda = (2 pi^n / (n-1)!) t^(2n-1) dt``.

Divergent integrals come back as reports with ``divergent=True`` and an
infinite value; they never raise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import constants
from .quadrature import QuadratureResult, integrate, stieltjes
from .radial import (
    RadialProfile,
    TruncatedLog,
    Power,
    QuadraticBall,
    ScaledProfile,
    ma_distribution,
    mixed_mass_function,
)
from .specfun import beta as _beta

__all__ = [
    "EnergyReport",
    "ball_volume",
    "sphere_factor",
    "energy_p",
    "energy_p_smooth",
    "energy_p_closed_form",
    "energy_chi",
    "mixed_energy",
    "lq_norm",
    "lq_norm_closed_form",
    "sup_norm",
    "exp_integral",
    "exp_integral_truncated_log",
    "exp_alpha_integral",
]


@dataclass(frozen=True)
class EnergyReport:
    """Value of an integral functional.

    ``value`` is ``+inf`` with ``divergent=True`` when the integral diverges.
    ``log_value`` is filled in by functionals whose values can overflow.
    ``cross_check_delta`` is the relative gap to an independent evaluation
    (smooth formula or closed form) when one was available.
    """

    value: float
    method: str
    abs_error_estimate: float
    divergent: bool = False
    log_value: float | None = None
    cross_check_delta: float | None = None
    notes: tuple[str, ...] = ()

    def __float__(self) -> float:
        return float(self.value)

    @property
    def finite(self) -> bool:
        return not self.divergent and math.isfinite(self.value)


def _check_n(n) -> int:
    if int(n) != n or n < 2:
        raise ValueError(f"dimension n must be an integer >= 2, got {n!r}")
    return int(n)


def ball_volume(n: int) -> float:
    """Lebesgue measure of the unit ball in C^n."""
    return math.pi**n / math.factorial(n)


def sphere_factor(n: int) -> float:
    """``2 pi^n / (n-1)!``, so that ``d lambda = sphere_factor(n) t^(2n-1) dt`` for radial integrands."""
    return 2.0 * math.pi**n / math.factorial(n - 1)


def _from_quad(res: QuadratureResult, scale: float, method: str, notes=()) -> EnergyReport:
    if res.divergent:
        return EnergyReport(math.inf, method, math.inf, True, math.inf, None, tuple(notes))
    notes = tuple(notes)
    if not res.converged:
        notes += ("tolerance not reached",)
    value = scale * res.value
    log_value = math.log(value) if value > 0 else (-math.inf if value == 0 else None)
    return EnergyReport(value, method, scale * res.abs_error_estimate, False, log_value, None, notes)


def _neg_pow(u: RadialProfile, p: float) -> Callable:
    def g(t):
        with np.errstate(all="ignore"):
            return np.maximum(-u.eval(np.minimum(t, 1.0)), 0.0) ** p
    return g


def _underlying(u: RadialProfile) -> tuple[RadialProfile, float]:
    c = 1.0
    while isinstance(u, ScaledProfile):
        c *= u.c
        u = u.base
    return u, c


def energy_p_closed_form(u: RadialProfile, p: float, n: int) -> float | None:
    """Closed-form ``e_p`` for the Power, QuadraticBall and TruncatedLog families, else ``None``."""
    n = _check_n(n)
    base, c = _underlying(u)
    if isinstance(base, QuadraticBall):
        base = base.as_power()
    if isinstance(base, Power):
        k, a = base.k, base.alpha
        return c ** (n + p) * k ** (n + p) * n * (4 * math.pi) ** n * a**n * float(_beta(p + 1, n))
    if isinstance(base, TruncatedLog):
        cc = c * base.c
        return (2 * math.pi) ** n * cc**n * (-cc * base.beta) ** p
    return None


def energy_p_smooth(u: RadialProfile, p: float, n: int, tol: float | None = None) -> EnergyReport:
    """``(2 pi)^n p int (-U)^(p-1) (t U')^(n+1) dt / t``, valid for differentiable profiles."""
    n = _check_n(n)
    if not p > 0:
        raise ValueError("p must be positive")

    def f(t):
        with np.errstate(all="ignore"):
            sig = u.log_slope(t)
            val = np.where(sig > 0, p * (-u.eval(t)) ** (p - 1) * sig ** (n + 1) / t, 0.0)
        return val

    res = integrate(f, tol=tol, relative=True)
    return _from_quad(res, (2 * math.pi) ** n, "smooth_formula")


def energy_p(u: RadialProfile, p: float, n: int, tol: float | None = None,
             cross_check: bool = True) -> EnergyReport:
    """Pluricomplex p-energy ``int (-u)^p (dd^c u)^n`` over the unit ball.

    The value is the Stieltjes integral of ``(-U)^p`` against the mass
    function.  For smooth profiles the derivative formula is evaluated as
    well and the relative gap stored in ``cross_check_delta``.
    """
    n = _check_n(n)
    if not p > 0:
        raise ValueError(f"p must be positive, got {p!r}")
    dist = ma_distribution(u, n)
    res = stieltjes(_neg_pow(u, p), dist.F, tol=tol, relative=True)
    report = _from_quad(res, (2 * math.pi) ** n, "stieltjes")
    if cross_check and u.smooth and report.finite:
        other = energy_p_smooth(u, p, n, tol=tol)
        if other.finite:
            delta = abs(other.value - report.value) / max(abs(report.value), 1e-300)
            report = EnergyReport(report.value, report.method, report.abs_error_estimate, False,
                                  report.log_value, delta, report.notes)
    return report


def energy_chi(u: RadialProfile, chi: Callable, n: int, tol: float | None = None) -> EnergyReport:
    """``int -chi(u) (dd^c u)^n`` for a nondecreasing ``chi: (-inf, 0] -> (-inf, 0]``."""
    n = _check_n(n)
    notes = []
    chi0 = float(np.asarray(chi(np.array([0.0])), dtype=float)[0])
    if chi0 != 0.0:
        notes.append(f"chi(0) = {chi0:g} is not zero")
    dist = ma_distribution(u, n)

    def g(t):
        with np.errstate(all="ignore"):
            return -np.asarray(chi(u.eval(np.minimum(t, 1.0))), dtype=float)

    res = stieltjes(g, dist.F, tol=tol, relative=True)
    return _from_quad(res, (2 * math.pi) ** n, "stieltjes", notes)


def mixed_energy(v: RadialProfile, u_list: Sequence[RadialProfile], p: float, n: int,
                 tol: float | None = None) -> EnergyReport:
    """``int (-v)^p dd^c u_1 ^ ... ^ dd^c u_n`` for radial profiles."""
    n = _check_n(n)
    u_list = tuple(u_list)
    if len(u_list) != n:
        raise ValueError(f"need exactly n={n} profiles, got {len(u_list)}")
    if not p >= 0:
        raise ValueError("p must be nonnegative")
    F = mixed_mass_function(u_list)
    res = stieltjes(_neg_pow(v, p), F, tol=tol, relative=True)
    return _from_quad(res, (2 * math.pi) ** n, "stieltjes")


def lq_norm_closed_form(u: RadialProfile, q: float, n: int) -> float | None:
    """``||u||_q^q`` in closed form for the Power and QuadraticBall families."""
    base, c = _underlying(u)
    if isinstance(base, QuadraticBall):
        base = base.as_power()
    if isinstance(base, Power):
        k = c * base.k
        return math.pi**n * k**q * float(_beta(q + 1, n / base.alpha)) / (math.factorial(n - 1) * base.alpha)
    return None


def lq_norm(u: RadialProfile, q: float, n: int, tol: float | None = None) -> EnergyReport:
    """``L^q`` norm over the unit ball; the q-th power is ``value ** q``."""
    n = _check_n(n)
    if not q > 0:
        raise ValueError("q must be positive")
    g = _neg_pow(u, q)
    res = integrate(lambda t: g(t) * t ** (2 * n - 1), tol=tol,
                    breakpoints=[k for k in u.kinks if 0 < k < 1], relative=True)
    power = _from_quad(res, sphere_factor(n), "quadrature")
    if power.divergent:
        return power
    value = max(power.value, 0.0) ** (1.0 / q)
    err = value * power.abs_error_estimate / (q * power.value) if power.value > 0 else 0.0
    log_value = math.log(value) if value > 0 else -math.inf
    return EnergyReport(value, "quadrature", err, False, log_value, None, power.notes)


def sup_norm(u: RadialProfile) -> float:
    """``-U(0)``, possibly ``+inf``."""
    return -float(u.value_at_zero)


def exp_integral_truncated_log(c: float, beta: float, n: int) -> tuple[float, float]:
    """``(value, log value)`` of ``int_B exp(-c max(log|z|, beta))`` in closed form.

    The log is computed directly so that very negative ``beta`` does not
    overflow.
    """
    A = ball_volume(n)
    B = sphere_factor(n)
    x = 2 * n - c
    if x == 0:
        val = A - B * beta
        return val, math.log(val)
    if x > 0:
        val = A * math.exp(x * beta) - B * math.expm1(x * beta) / x
        return val, math.log(val)
    y = -x
    inner = A + B / y - (B / y) * math.exp(-x * beta)
    log_val = x * beta + math.log(inner)
    return (math.exp(log_val) if log_val < 700 else math.inf), log_val


def _log_shifted_ball_integral(logf: Callable, n: int, breakpoints, tol) -> EnergyReport:
    """``int_B exp(logf(|z|))`` with the integrand rescaled by its largest sampled value."""
    sample = np.concatenate([np.geomspace(1e-12, 1.0, 241), np.asarray(breakpoints, dtype=float)])
    sample = sample[(sample > 0) & (sample <= 1)]
    with np.errstate(all="ignore"):
        logs = np.asarray(logf(sample), dtype=float) + (2 * n - 1) * np.log(sample)
    finite = logs[np.isfinite(logs)]
    shift = float(np.max(finite)) if finite.size else 0.0

    def f(t):
        with np.errstate(all="ignore"):
            return np.exp(np.asarray(logf(t), dtype=float) + (2 * n - 1) * np.log(t) - shift)

    res = integrate(f, tol=tol, breakpoints=[b for b in breakpoints if 0 < b < 1], relative=True)
    if res.divergent:
        return EnergyReport(math.inf, "quadrature", math.inf, True, math.inf)
    log_value = math.log(sphere_factor(n)) + shift + math.log(res.value) if res.value > 0 else -math.inf
    value = math.exp(log_value) if log_value < 700 else math.inf
    err = value * res.abs_error_estimate / res.value if res.value > 0 else 0.0
    notes = () if res.converged else ("tolerance not reached",)
    return EnergyReport(value, "quadrature", err, False, log_value, None, notes)


def exp_integral(u: RadialProfile, n: int, tol: float | None = None) -> EnergyReport:
    """``int_B e^{-u} d lambda``; closed form for TruncatedLog, quadrature otherwise."""
    n = _check_n(n)
    base, c = _underlying(u)
    if isinstance(base, TruncatedLog):
        value, log_value = exp_integral_truncated_log(c * base.c, base.beta, n)
        return EnergyReport(value, "closed_form", 4e-16 * value, False, log_value)
    return _log_shifted_ball_integral(lambda t: -u.eval(np.minimum(t, 1.0)), n, u.kinks, tol)


def exp_alpha_integral(u: RadialProfile, p: float, n: int, tol: float | None = None,
                       energy: float | None = None) -> EnergyReport:
    """``int_B exp(alpha(p, n) (-u)^((n+p)/n) e_p(u)^(-1/n)) d lambda``."""
    n = _check_n(n)
    if energy is None:
        rep = energy_p(u, p, n, tol=tol, cross_check=False)
        energy = math.inf if rep.divergent else rep.value
    if not (math.isfinite(energy) and energy > 0):
        raise ValueError(f"the p-energy must be finite and positive, got {energy!r}")
    alpha = constants.alpha_exponent(p, n)
    scale = alpha * energy ** (-1.0 / n)
    expo = (n + p) / n

    def logf(t):
        return scale * np.maximum(-u.eval(np.minimum(t, 1.0)), 0.0) ** expo

    return _log_shifted_ball_integral(logf, n, u.kinks, tol)
