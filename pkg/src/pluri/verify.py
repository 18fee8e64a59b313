"""Inequality checks and campaigns for radial plurisubharmonic functions on the unit ball.

Each ``check_*`` function evaluates one inequality ``lhs <= rhs`` at one
parameter point and returns an :class:`~pluri.reports.InequalityReport`.
Campaign helpers sweep documented stress suites; ``run_points`` maps a
check over parameter points, optionally in worker processes, keeping the
input order.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import constants as K
from .functionals import (
    ball_volume,
    energy_chi,
    energy_p,
    exp_integral,
    exp_integral_truncated_log,
    lq_norm,
    mixed_energy,
    sup_norm,
)
from .radial import Power, QuadraticBall, RadialProfile, TruncatedLog
from .reports import InequalityReport, ScanResult, Trend, classify_trend

__all__ = [
    "example_profile",
    "check_mt",
    "check_rsep",
    "check_sobolev",
    "sublevel_radius",
    "sublevel_volume",
    "tail_exponent_x",
    "check_tail_bound",
    "check_est",
    "check_holder",
    "lemma_l1_constant",
    "check_lemma_l1",
    "scan_counterexamples",
    "ratio_limit",
    "chi_inverse",
    "named_chi",
    "check_chi",
    "run_points",
    "mt_stress_suite",
    "sobolev_stress_suite",
    "est_stress_suite",
    "holder_stress_suite",
    "lemma_l1_suite",
]


def example_profile(which: str, j: float, p: float, n: int) -> TruncatedLog:
    """Members of the three counterexample families, indexed by ``j > 0``.

    * ``ex1``: ``(1/j) max(log t, -j^(1+n/p))``, constant energy, vanishing norms;
    * ``ex2``: ``j^(-p/(n+p)) max(log t, -j)``, constant energy, growing sup norm;
    * ``ex3``: ``j max(log t, -1/j)``, unit sup norm, growing energy.
    """
    if not j > 0:
        raise ValueError("family index j must be positive")
    j = float(j)
    if which == "ex1":
        return TruncatedLog(1.0 / j, -(j ** (1 + n / p)))
    if which == "ex2":
        return TruncatedLog(j ** (-p / (n + p)), -j)
    if which == "ex3":
        return TruncatedLog(j, -1.0 / j)
    raise ValueError(f"unknown example family {which!r}; expected ex1, ex2 or ex3")


def _energy_value(u, p, n, energy=None):
    if energy is not None:
        return float(energy)
    rep = energy_p(u, p, n, cross_check=False)
    return math.inf if rep.divergent else rep.value


def check_mt(u: RadialProfile, p: float, n: int, eps: float = 0.5, beta_n: float = 0.0,
             energy: float | None = None) -> InequalityReport:
    """``log int_B e^-u <= A + B e_p(u)^(1/p)`` on the unit ball.

    ``details['empirical_A']`` is ``lhs - B e_p^(1/p)``: the smallest ``A``
    that would make this point hold.
    """
    A, B = K.mt_constants(p, n, eps, beta_n, 2.0)
    e = _energy_value(u, p, n, energy)
    ei = exp_integral(u, n)
    params = {"p": p, "n": n, "eps": eps, "beta_n": beta_n}
    if ei.divergent or not math.isfinite(e):
        return InequalityReport.from_sides("mt", math.inf, math.inf, params, divergent=True)
    lhs = ei.log_value
    growth = B * e ** (1.0 / p)
    return InequalityReport.from_sides(
        "mt", lhs, A + growth, params,
        details={"energy": e, "A": A, "B": B, "empirical_A": lhs - growth,
                 "ratio": lhs / e ** (1.0 / p) if e > 0 else math.inf},
    )


def check_rsep(u: RadialProfile, p: float, n: int, d: float | None = None,
               energy: float | None = None) -> InequalityReport:
    """Radial bound ``log int e^-u <= d + b_upper(p, n) e_p^(1/p)``; reporting only.

    The additive constant ``d`` is unknown; ``details['d_needed']`` is the
    value this point requires.  With ``d=None`` the report compares against
    ``d_needed`` itself.
    """
    e = _energy_value(u, p, n, energy)
    ei = exp_integral(u, n)
    params = {"p": p, "n": n}
    if ei.divergent or not math.isfinite(e):
        return InequalityReport.from_sides("rsep", math.inf, math.inf, params, divergent=True)
    growth = K.b_upper_ball(p, n) * e ** (1.0 / p)
    needed = ei.log_value - growth
    rhs = (needed if d is None else d) + growth
    return InequalityReport.from_sides("rsep", ei.log_value, rhs, params, informational=True,
                                       details={"d_needed": needed, "energy": e})


def check_sobolev(u: RadialProfile, p: float, q: float, n: int, eps: float = 0.5,
                  beta_n: float = 0.0, form: str = "C",
                  energy: float | None = None) -> InequalityReport:
    """``||u||_q <= C e_p^(1/(n+p))`` (``form='C'``) or ``<= D q^(n/(n+p)) e_p^(1/(n+p))`` (``form='D'``)."""
    A, B = K.mt_constants(p, n, eps, beta_n, 2.0)
    C, D = K.sobolev_constants(p, q, n, A, B)
    e = _energy_value(u, p, n, energy)
    norm = lq_norm(u, q, n)
    params = {"p": p, "q": q, "n": n, "eps": eps, "beta_n": beta_n, "form": form}
    if norm.divergent or not math.isfinite(e):
        return InequalityReport.from_sides("sobolev", math.inf, math.inf, params, divergent=True)
    if form == "C":
        const = C
    elif form == "D":
        if q < 1:
            raise ValueError("the q-explicit form needs q >= 1")
        const = D * q ** (n / (n + p))
    else:
        raise ValueError(f"form must be 'C' or 'D', got {form!r}")
    rhs = const * e ** (1.0 / (n + p))
    return InequalityReport.from_sides("sobolev", norm.value, rhs, params,
                                       details={"energy": e, "constant": const})


def sublevel_radius(u: RadialProfile, s: float) -> float:
    """Radius ``r`` with ``{U < -s} = [0, r)``; 0 when the set is empty."""
    if isinstance(u, TruncatedLog):
        if s >= -u.c * u.beta:
            return 0.0
        return math.exp(-s / u.c)
    if isinstance(u, (Power, QuadraticBall)):
        pw = u.as_power() if isinstance(u, QuadraticBall) else u
        if s >= pw.k:
            return 0.0
        return (1.0 - s / pw.k) ** (1.0 / (2 * pw.alpha))
    if not u.value_at_zero < -s:
        return 0.0
    if float(u.eval(1.0)) < -s:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if float(u.eval(mid)) < -s:
            lo = mid
        else:
            hi = mid
    return lo


def sublevel_volume(u: RadialProfile, s: float, n: int) -> float:
    """``lambda_2n({u < -s})``."""
    return ball_volume(n) * sublevel_radius(u, s) ** (2 * n)


def tail_exponent_x(p: float, n: int, B: float, energy: float) -> float:
    """Rate ``x`` in the tail bound ``lambda(s) <= e^A exp(-x s^((n+p)/n))``."""
    return n * p ** (p / n) / (n + p) ** (1 + p / n) * B ** (-p / n) * energy ** (-1.0 / n)


def check_tail_bound(u: RadialProfile, p: float, n: int, s_values: Iterable[float],
                     eps: float = 0.5, beta_n: float = 0.0,
                     energy: float | None = None) -> list[InequalityReport]:
    """Distribution-function bound ``lambda(s) <= e^A exp(-x s^((n+p)/n))``."""
    A, B = K.mt_constants(p, n, eps, beta_n, 2.0)
    e = _energy_value(u, p, n, energy)
    out = []
    for s in s_values:
        params = {"p": p, "n": n, "s": s, "eps": eps, "beta_n": beta_n}
        if not math.isfinite(e) or e <= 0:
            lam = sublevel_volume(u, s, n)
            out.append(InequalityReport.from_sides("tail", lam, math.inf if e == 0 else math.nan,
                                                   params, divergent=True))
            continue
        x = tail_exponent_x(p, n, B, e)
        lam = sublevel_volume(u, s, n)
        rhs = math.exp(A - x * s ** ((n + p) / n))
        out.append(InequalityReport.from_sides("tail", lam, rhs, params,
                                               details={"x": x, "energy": e}))
    return out


def check_est(u: RadialProfile, v: RadialProfile, p: float, k: int, n: int) -> InequalityReport:
    """``int (-v)^(p+k) (dd^c u)^n <= (p+1)...(p+k) ||u||_inf^k int (-v)^p (dd^c v)^k ^ (dd^c u)^(n-k)``."""
    if int(k) != k or not 1 <= k <= n:
        raise ValueError(f"k must be an integer in [1, n], got {k!r}")
    k = int(k)
    sup = sup_norm(u)
    params = {"p": p, "k": k, "n": n}
    if not math.isfinite(sup):
        raise ValueError("u must be bounded")
    lhs = mixed_energy(v, [u] * n, p + k, n)
    mixed = mixed_energy(v, [v] * k + [u] * (n - k), p, n)
    if lhs.divergent or mixed.divergent:
        return InequalityReport.from_sides("est", math.inf, math.inf, params, divergent=True)
    factor = math.prod(p + i for i in range(1, k + 1)) * sup**k
    return InequalityReport.from_sides("est", lhs.value, factor * mixed.value, params,
                                       details={"sup_norm": sup, "mixed": mixed.value})


def check_holder(u0: RadialProfile, u_list: Sequence[RadialProfile], p: float,
                 n: int) -> InequalityReport:
    """``int (-u0)^p dd^c u1 ^ ... ^ dd^c un <= d e_p(u0)^(p/(p+n)) prod e_p(uj)^(1/(p+n))``."""
    params = {"p": p, "n": n}
    lhs = mixed_energy(u0, u_list, p, n)
    energies = [_energy_value(w, p, n) for w in (u0, *u_list)]
    if lhs.divergent or not all(math.isfinite(e) for e in energies):
        return InequalityReport.from_sides("holder", math.inf, math.inf, params, divergent=True)
    d = K.holder_d(p, n)
    rhs = d * energies[0] ** (p / (p + n)) * math.prod(e ** (1 / (p + n)) for e in energies[1:])
    return InequalityReport.from_sides("holder", lhs.value, rhs, params, details={"d": d})


def lemma_l1_constant(A: float, alpha: float) -> float:
    """Smallest ``B`` with ``A t^alpha + B >= t`` for all ``t >= 0``."""
    if not A > 0 or not alpha > 1:
        raise ValueError("need A > 0 and alpha > 1")
    return (alpha - 1) / alpha * (alpha * A) ** (1 / (1 - alpha))


def check_lemma_l1(A: float, alpha: float, points: int = 2001) -> InequalityReport:
    """Minimise ``A t^alpha + B - t`` on a grid around the analytic minimiser."""
    B = lemma_l1_constant(A, alpha)
    t0 = (alpha * A) ** (1 / (1 - alpha))
    t = np.unique(np.concatenate([np.linspace(0.0, 10 * t0, points), [t0]]))
    gap = A * t**alpha + B - t
    i = int(np.argmin(gap))
    return InequalityReport.from_sides(
        "lemma_l1", float(t[i]), float(A * t[i] ** alpha + B), {"A": A, "alpha": alpha},
        details={"B": B, "t0": t0, "argmin": float(t[i]), "min_gap": float(gap[i])},
    )


def scan_counterexamples(which: str, p: float, q: float, n: int,
                         j_values: Sequence[float]) -> ScanResult:
    """Ratios of the three forbidden inequalities along the example families.

    * ``ex1``: ``e_p^(1/(n+p)) / ||u_j||_q``;
    * ``ex2``: ``||u_j||_inf / e_p^(1/(n+p))``;
    * ``ex3``: ``e_p^(1/(n+p)) / ||u_j||_inf``.
    """
    js = [float(j) for j in j_values]
    if any(b <= a for a, b in zip(js, js[1:])):
        raise ValueError("j_values must be increasing")
    energies, norms, ratios = [], [], []
    for j in js:
        u = example_profile(which, j, p, n)
        e = energy_p(u, p, n, cross_check=False).value
        if which == "ex1":
            norm = lq_norm(u, q, n).value
            ratio = e ** (1 / (n + p)) / norm
        elif which == "ex2":
            norm = sup_norm(u)
            ratio = norm / e ** (1 / (n + p))
        else:
            norm = sup_norm(u)
            ratio = e ** (1 / (n + p)) / norm
        energies.append(e)
        norms.append(norm)
        ratios.append(ratio)
    trend, limit = classify_trend(js, ratios)
    norm_name = "lq_norm" if which == "ex1" else "sup_norm"
    return ScanResult(tuple(js), tuple(ratios), trend, limit,
                      columns={"energy": tuple(energies), norm_name: tuple(norms)},
                      name=which, params={"which": which, "p": p, "q": q, "n": n})


def ratio_limit(p: float, n: int, beta_values: Sequence[float]) -> ScanResult:
    """``log int e^-u / e_p(u)^(1/p)`` for ``u = (2n+2p) max(log t, beta)`` as ``beta -> -inf``.

    Both the energy and the exponential integral are evaluated in closed form.
    """
    c = 2 * n + 2 * p
    logs, energies, ratios = [], [], []
    for beta in beta_values:
        _, log_int = exp_integral_truncated_log(c, beta, n)
        e_root = (2 * math.pi) ** (n / p) * c ** ((n + p) / p) * (-beta)
        logs.append(log_int)
        energies.append((2 * math.pi) ** n * c ** (n + p) * (-beta) ** p)
        ratios.append(log_int / e_root)
    limit = K.b_lower(p, n)
    trend, _ = classify_trend(beta_values, ratios, limit_hint=limit)
    return ScanResult(tuple(float(b) for b in beta_values), tuple(ratios), trend,
                      limit if trend is Trend.CONVERGES else None,
                      columns={"log_exp_integral": tuple(logs), "energy": tuple(energies),
                               "rel_error": tuple(abs(r - limit) / limit for r in ratios)},
                      name="ratio_limit", params={"p": p, "n": n, "b_lower": limit})


def chi_inverse(chi: Callable, y: float) -> float:
    """``x <= 0`` with ``chi(x) = y``, for nondecreasing continuous ``chi``."""
    f = lambda x: float(np.asarray(chi(np.array([x])), dtype=float)[0])  # noqa: E731
    top = f(0.0)
    if y > top:
        raise ValueError(f"chi is not invertible at {y!r}: chi(0) = {top!r}")
    if y == top:
        return 0.0
    lo = -1.0
    while f(lo) > y:
        lo *= 2.0
        if lo < -1e300:
            raise ValueError(f"chi does not reach {y!r} on (-inf, 0]")
    hi = 0.0
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        if f(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def named_chi(spec: str) -> Callable:
    """``power:p=2`` gives ``-(-t)^p``; ``linear`` gives ``t``; ``log1p`` gives ``-log(1-t)``."""
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "power":
        key, _, val = body.partition("=")
        if key.strip() != "p":
            raise ValueError(f"chi spec {spec!r} needs p=<value>")
        p = float(val)
        if not p > 0:
            raise ValueError("chi exponent must be positive")
        return lambda t: -np.abs(np.minimum(t, 0.0)) ** p
    if kind == "linear":
        return lambda t: np.minimum(np.asarray(t, dtype=float), 0.0)
    if kind == "log1p":
        return lambda t: -np.log1p(-np.minimum(np.asarray(t, dtype=float), 0.0))
    raise ValueError(f"unknown chi family {kind!r}")


def _inf_over_s(q: float, n: int, E: float, chi: Callable) -> float:
    """``log inf_{s>0} s^-q exp(-E^(-1/n) s chi^{-1}(-s^n))``, minimised over ``log s``."""
    scale = E ** (-1.0 / n)

    def objective(x):
        s = math.exp(x)
        return -q * x - scale * s * chi_inverse(chi, -(s**n))

    grid = np.linspace(-30.0, 30.0, 241)
    vals = np.array([objective(x) for x in grid])
    i = int(np.argmin(vals))
    if i in (0, grid.size - 1):
        return float(vals[i])
    res = minimize_scalar(objective, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden")
    return float(min(res.fun, vals[i]))


def check_chi(u: RadialProfile, chi: Callable, n: int, eps: float = 0.5, beta_n: float = 0.0,
              form: str = "mt", q: float | None = None, G: float | None = None) -> InequalityReport:
    """Energy-class corollaries for a general weight ``chi``.

    ``form='mt'``: ``log int e^-u <= A - chi^{-1}(-e_chi(u) / (2 eps n)^n)``.

    ``form='sobolev'``: ``||u||_q <= G^(1/q) Gamma(q+1)^(1/q) E^(1/n)
    (inf_s s^-q exp(-E^(-1/n) s chi^{-1}(-s^n)))^(1/q)`` with
    ``E = e_chi(u) / (2 eps n)^n``.  ``G`` is not known explicitly; it
    defaults to ``e^A`` and the verdict is informational.
    """
    A, _ = K.mt_constants(1.0, n, eps, beta_n, 2.0)
    e_chi = energy_chi(u, chi, n)
    params = {"form": form, "n": n, "eps": eps, "beta_n": beta_n}
    if e_chi.divergent:
        return InequalityReport.from_sides(f"chi_{form}", math.inf, math.inf, params, divergent=True)
    E = e_chi.value / (2 * eps * n) ** n
    if form == "mt":
        ei = exp_integral(u, n)
        if ei.divergent:
            return InequalityReport.from_sides("chi_mt", math.inf, math.inf, params, divergent=True)
        rhs = A - chi_inverse(chi, -E)
        return InequalityReport.from_sides("chi_mt", ei.log_value, rhs, params,
                                           details={"e_chi": e_chi.value})
    if form == "sobolev":
        if q is None or not q > 0:
            raise ValueError("the Sobolev form needs q > 0")
        params["q"] = q
        G = math.exp(A) if G is None else G
        norm = lq_norm(u, q, n)
        if norm.divergent:
            return InequalityReport.from_sides("chi_sobolev", math.inf, math.inf, params,
                                               divergent=True)
        if E == 0:
            rhs = 0.0
        else:
            log_inf = _inf_over_s(q, n, E, chi)
            rhs = math.exp((math.log(G) + math.lgamma(q + 1) + log_inf) / q + math.log(E) / n)
        return InequalityReport.from_sides("chi_sobolev", norm.value, rhs, params,
                                           informational=True,
                                           details={"e_chi": e_chi.value, "G": G})
    raise ValueError(f"form must be 'mt' or 'sobolev', got {form!r}")


def _apply(args):
    fn, a, kw = args
    return fn(*a, **kw)


def run_points(fn: Callable, points: Sequence[tuple], jobs: int = 1,
               kwargs: dict | None = None) -> list:
    """``[fn(*pt, **kwargs) for pt in points]``, in worker processes when ``jobs > 1``."""
    kwargs = kwargs or {}
    tasks = [(fn, tuple(pt), kwargs) for pt in points]
    if jobs <= 1 or len(tasks) < 2:
        return [_apply(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_apply, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


# ---- stress suites -------------------------------------------------------------------

def _power_grid(m: int = 5) -> list[Power]:
    return [Power(float(a), float(k)) for a, k in
            itertools.product(np.linspace(0.5, 4.0, m), np.linspace(0.5, 8.0, m))]


def mt_stress_suite(p: float = 1.0, n: int = 2) -> list[tuple]:
    """Points ``(u, p, n)``: the power grid, the extremal log family and the Lebesgue potential."""
    profiles = _power_grid(5)
    profiles += [TruncatedLog(2 * n + 2 * p, -float(b)) for b in (1, 3, 10, 30, 100, 1e3, 1e4)]
    profiles += [TruncatedLog(c, -2.0) for c in (0.5, 1.0, float(n), 2.0 * n, 3.0 * n)]
    profiles.append(QuadraticBall.phi0(n))
    return [(u, p, n) for u in profiles]


def sobolev_stress_suite() -> list[tuple]:
    """Points ``(u, p, q, n)``."""
    out = []
    for n, p in itertools.product((2, 3), (0.5, 1.0, 2.0)):
        profiles = _power_grid(2) + [TruncatedLog(1.0, -1.0), TruncatedLog(2 * n + 2 * p, -5.0),
                                     QuadraticBall.phi0(n)]
        for u, q in itertools.product(profiles, (1.0, 2.0, 3.5, 6.0)):
            out.append((u, p, q, n))
    return out


def _est_profiles(n: int) -> tuple[list, list]:
    bounded = [QuadraticBall.phi0(n), Power(1.0, 1.0), Power(2.0, 0.5), TruncatedLog(1.0, -1.0)]
    tests = [Power(1.0, 1.0), Power(0.5, 2.0), TruncatedLog(2.0, -1.5), QuadraticBall.phi0(n)]
    return bounded, tests


def est_stress_suite() -> list[tuple]:
    """Points ``(u, v, p, k, n)``."""
    out = []
    for n in (2, 3):
        bounded, tests = _est_profiles(n)
        for u, v, p in itertools.product(bounded, tests, (0.5, 1.0, 2.0)):
            for k in range(1, n + 1):
                out.append((u, v, p, k, n))
    return out


def holder_stress_suite(seed: int = 7, per_case: int = 8) -> list[tuple]:
    """Points ``(u0, u_list, p, n)`` drawn from a fixed family pool with a seeded RNG."""
    rng = np.random.default_rng(seed)
    out = []
    for n, p in itertools.product((2, 3), (0.5, 1.0, 2.0)):
        pool = [Power(1.0, 1.0), Power(0.5, 2.0), Power(3.0, 0.7), TruncatedLog(1.0, -1.0),
                TruncatedLog(3.0, -0.5), QuadraticBall.phi0(n)]
        for _ in range(per_case):
            idx = rng.integers(0, len(pool), size=n + 1)
            out.append((pool[idx[0]], tuple(pool[i] for i in idx[1:]), p, n))
    return out


def lemma_l1_suite() -> list[tuple]:
    """Points ``(A, alpha)``."""
    return [(float(A), float(a)) for A, a in
            itertools.product(np.geomspace(0.01, 100.0, 7), (1.1, 1.5, 2.0, 3.0, 5.0))]
