import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate
from scipy.special import gamma as sp_gamma

from pluri.quadrature import (
    DEFAULT_TOL,
    MassFunction,
    QuadratureResult,
    default_tol,
    gauss_kronrod,
    integrate,
    stieltjes,
)


def test_power_rule_converges():
    n, c = 2, 1
    res = integrate(lambda t: t ** (2 * n - 1 - c))
    assert res.converged and not res.divergent
    assert res.value == pytest.approx(1 / 3, rel=1e-12)


def test_critical_power_diverges():
    n = 2
    res = integrate(lambda t: t ** (2 * n - 1 - 2 * n))
    assert res.divergent and not res.converged


def test_truncated_log_exponential_piecewise_closed_form():
    n, c, b = 2, 1.0, -1.0
    f = lambda t: np.exp(-c * np.maximum(np.log(t), b)) * t ** (2 * n - 1)  # noqa: E731
    x = 2 * n - c
    # piecewise antiderivative: flat part below e^b, power part above
    exact = math.exp(x * b) / (2 * n) + (1 - math.exp(x * b)) / x
    res = integrate(f, breakpoints=[math.exp(b)])
    assert res.converged
    assert res.value == pytest.approx(exact, rel=1e-12)


@pytest.mark.parametrize(
    "f,exact",
    [
        (lambda t: 1 / np.sqrt(t * (1 - t)), math.pi),
        (lambda t: 1 / np.sqrt(1 - t), 2.0),
        (lambda t: t ** -0.8, 5.0),
        (lambda t: np.log(t) ** 2, 2.0),
        (lambda t: np.abs(np.log(t)) ** 1.5 * t ** 3, sp_gamma(2.5) / 4 ** 2.5),
        (lambda t: np.cos(7 * t), math.sin(7.0) / 7),
    ],
)
def test_endpoint_singularities(f, exact):
    res = integrate(f, tol=1e-10)
    assert res.converged
    assert res.value == pytest.approx(exact, rel=1e-9)


@pytest.mark.parametrize(
    "f",
    [
        lambda t: 1 / (1 - t),
        lambda t: -np.log(t) / t,
        lambda t: 1 / t ** 1.5,
    ],
)
def test_divergence_flagged(f):
    res = integrate(f)
    assert res.divergent
    assert res.value > 0 and res.abs_error_estimate == math.inf


@pytest.mark.parametrize("tol", [1e-6, 1e-8, 1e-10])
def test_converged_error_within_tolerance(tol):
    res = integrate(lambda t: np.exp(-t) / np.sqrt(t), tol=tol)
    exact = math.sqrt(math.pi) * math.erf(1.0)
    assert res.converged
    assert res.abs_error_estimate <= max(tol, tol * abs(res.value))
    assert abs(res.value - exact) <= 10 * tol


def test_relative_mode_resolves_tiny_integrals():
    scale = 1e-12
    res = integrate(lambda t: scale * t ** 2, tol=1e-10, relative=True)
    assert res.converged
    assert res.value == pytest.approx(scale / 3, rel=1e-10)


def test_interval_and_breakpoints():
    res = integrate(lambda t: np.abs(t - 0.3), a=0.0, b=1.0, breakpoints=[0.3], open_endpoints=False)
    assert res.value == pytest.approx(0.3 ** 2 / 2 + 0.7 ** 2 / 2, rel=1e-14)
    assert integrate(lambda t: t, a=0.5, b=0.5).value == 0.0
    with pytest.raises(ValueError):
        integrate(lambda t: t, a=1.0, b=0.0)
    with pytest.raises(ValueError):
        integrate(lambda t: t, tol=0.0)


def test_scalar_only_integrand():
    res = integrate(lambda t: math.exp(t))
    assert res.value == pytest.approx(math.e - 1, rel=1e-12)


def test_gauss_kronrod_exact_on_polynomials():
    val, err = gauss_kronrod(lambda t: t ** 20, np.array([0.0]), np.array([1.0]))
    assert val[0] == pytest.approx(1 / 21, rel=1e-14)
    assert err[0] >= 0


def test_result_flags_exclusive():
    with pytest.raises(ValueError):
        QuadratureResult(1.0, 0.0, converged=True, divergent=True)
    assert float(QuadratureResult(2.5, 0.0, True)) == 2.5


def test_default_tol_environment(monkeypatch):
    monkeypatch.delenv("PLURI_TOL", raising=False)
    assert default_tol() == DEFAULT_TOL == 1e-10
    monkeypatch.setenv("PLURI_TOL", "1e-6")
    assert default_tol() == 1e-6
    monkeypatch.setenv("PLURI_TOL", "-1")
    with pytest.raises(ValueError):
        default_tol()


coeff = st.floats(min_value=-5, max_value=5, allow_nan=False)


@given(coeff, coeff, st.floats(min_value=-0.9, max_value=3), st.floats(min_value=0.1, max_value=4))
@settings(max_examples=60, deadline=None)
def test_linearity(a, b, power, rate):
    tol = 1e-10
    f = lambda t: t ** power  # noqa: E731
    g = lambda t: np.exp(-rate * t) * np.log1p(t)  # noqa: E731
    combo = integrate(lambda t: a * f(t) + b * g(t), tol=tol).value
    split = a * integrate(f, tol=tol).value + b * integrate(g, tol=tol).value
    scale = max(1.0, abs(a) * integrate(f).value + abs(b) * integrate(g).value)
    assert abs(combo - split) <= 2 * tol * scale


# Riemann-Stieltjes


def test_single_atom_total_mass():
    c, b = 3.0, -2.0
    F = MassFunction(atoms=((math.exp(b), c ** 2),))
    res = stieltjes(lambda t: np.ones_like(t), F)
    assert res.value == pytest.approx(c ** 2, rel=1e-15)
    assert F.total() == pytest.approx(c ** 2)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.7])
@pytest.mark.parametrize("n", [2, 3])
def test_truncated_log_energy_atom(p, n):
    c = 2 * n + 2 * p
    b = -4.0
    F = MassFunction(atoms=((math.exp(b), c ** n),))
    g = lambda t: (-c * np.maximum(np.log(t), b)) ** p  # noqa: E731
    assert stieltjes(g, F).value == pytest.approx((-c * b) ** p * c ** n, rel=1e-14)


@pytest.mark.parametrize("alpha,n", [(0.5, 2), (1.0, 2), (2.0, 3), (3.5, 3)])
def test_smooth_mass_two_paths(alpha, n):
    # F(t) = (alpha t^alpha)^n for u = t^alpha - 1
    F = MassFunction(density=lambda t: n * alpha ** (n + 1) * t ** (n * alpha - 1),
                     cumulative=lambda t: (alpha * t ** alpha) ** n)
    g = lambda t: (1 - t ** alpha) ** 1.5  # noqa: E731
    via_mass = stieltjes(g, F, tol=1e-12).value
    via_density = sp_integrate.quad(lambda t: g(t) * n * alpha ** (n + 1) * t ** (n * alpha - 1),
                                    0, 1, epsabs=0, epsrel=1e-13, limit=200)[0]
    assert via_mass == pytest.approx(via_density, rel=1e-8)


def test_numeric_cumulative_with_atoms():
    F = MassFunction(density=lambda t: 2 * t, atoms=((0.5, 1.0),), origin_mass=0.25)
    got = F(np.array([0.0, 0.25, 0.5, 0.75, 1.0]))
    # left-continuous: the atom at 0.5 is counted strictly after 0.5
    expected = [0.25, 0.25 + 0.0625, 0.25 + 0.25, 0.25 + 1.0 + 0.5625, 0.25 + 1.0 + 1.0]
    assert got == pytest.approx(expected, rel=1e-12)
    assert F(np.array([0.75, 0.25])) == pytest.approx([expected[3], expected[1]])


def test_mass_function_validation():
    with pytest.raises(ValueError):
        MassFunction(atoms=((0.5, -1.0),))
    with pytest.raises(ValueError):
        MassFunction(atoms=((0.6, 1.0), (0.5, 1.0)))
    with pytest.raises(ValueError):
        MassFunction(atoms=((1.5, 1.0),))
    with pytest.raises(ValueError):
        MassFunction(origin_mass=-1.0)


def test_weighted_mass():
    F = MassFunction(density=lambda t: np.ones_like(t), atoms=((0.5, 2.0),), origin_mass=1.0)
    W = F.weighted(lambda t: t + 1)
    assert W.origin_mass == 1.0
    assert W.atoms == ((0.5, 3.0),)
    assert W.total() == pytest.approx(1.0 + 3.0 + 1.5, rel=1e-12)


def test_stieltjes_divergent_against_density():
    F = MassFunction(density=lambda t: np.ones_like(t))
    res = stieltjes(lambda t: 1 / t, F)
    assert res.divergent


def test_stieltjes_infinite_atom_value():
    F = MassFunction(origin_mass=1.0)
    res = stieltjes(lambda t: -np.log(t), F)
    assert res.divergent


# layer-cake cross-check on sampled profiles


def _layer_cake_power(alpha, k, n, p):
    # u = k (t^alpha - 1), F(t) = (k alpha t^alpha)^n; {u <= -s} = {t <= (1 - s/k)^{1/alpha}}
    def mass_below(s):
        r = (1 - s / k) ** (1 / alpha)
        return (k * alpha * r ** alpha) ** n
    return p * sp_integrate.quad(lambda s: s ** (p - 1) * mass_below(s), 0, k,
                                 epsabs=0, epsrel=1e-13, limit=200)[0]


@given(st.floats(min_value=0.2, max_value=4), st.floats(min_value=0.1, max_value=5),
       st.integers(min_value=2, max_value=4), st.floats(min_value=0.5, max_value=4))
@settings(max_examples=40, deadline=None)
def test_layer_cake_power(alpha, k, n, p):
    F = MassFunction(density=lambda t: n * (k * alpha) ** n * alpha * t ** (n * alpha - 1))
    lhs = stieltjes(lambda t: (k * (1 - t ** alpha)) ** p, F, relative=True).value
    assert lhs == pytest.approx(_layer_cake_power(alpha, k, n, p), rel=1e-6)


@given(st.floats(min_value=0.5, max_value=6), st.floats(min_value=-20, max_value=-0.1),
       st.integers(min_value=2, max_value=4), st.floats(min_value=0.5, max_value=4))
@settings(max_examples=40, deadline=None)
def test_layer_cake_truncated_log(c, b, n, p):
    # mass{u <= -s} = c^n for s <= -c b and 0 beyond
    cake = p * sp_integrate.quad(lambda s: s ** (p - 1) * c ** n, 0, -c * b)[0]
    F = MassFunction(atoms=((math.exp(b), c ** n),))
    got = stieltjes(lambda t: (-c * np.maximum(np.log(t), b)) ** p, F).value
    assert got == pytest.approx(cake, rel=1e-6)
