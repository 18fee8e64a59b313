"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a single PASS/FAIL line; the lines are repeated in the
terminal summary under "acceptance criteria".
"""

import math
import time
from math import comb

import mpmath
import numpy as np
from scipy.special import beta as sp_beta, gamma as sp_gamma

from pluri import specfun
from pluri.constants import b_lower, b_upper_ball, ball_lower_C, ball_upper_C, optimal_C11
from pluri.functionals import energy_p, mixed_energy, sphere_factor
from pluri.radial import (
    Power,
    QuadraticBall,
    TruncatedLog,
    comparison_check,
    ma_distribution,
    mixed_mass_function,
    solve_radial_ma,
)
from pluri.reports import Trend
from pluri.verify import (
    check_est,
    check_holder,
    check_lemma_l1,
    check_mt,
    check_sobolev,
    est_stress_suite,
    example_profile,
    holder_stress_suite,
    lemma_l1_suite,
    ratio_limit,
    run_points,
    scan_counterexamples,
    sobolev_stress_suite,
)


def rel(a, b):
    return abs(a - b) / abs(b)


def test_criterion_01_power_energy_closed_form(acceptance):
    start = time.perf_counter()
    worst = 0.0
    points = 0
    for alpha in np.geomspace(0.25, 4.0, 5):
        for k in np.geomspace(0.5, 8.0, 5):
            for p in (0.5, 1.0, 2.0):
                for n in (2, 3):
                    got = energy_p(Power(alpha, k), p, n).value
                    ref = k ** (n + p) * n * (4 * math.pi) ** n * alpha ** n * sp_beta(p + 1, n)
                    worst = max(worst, rel(got, ref))
                    points += 1
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 5.0 and points == 150
    assert acceptance(1, ok, f"{points} points, worst rel err {worst:.2e} (<= 1e-8), {elapsed:.2f} s (< 5 s)")


def test_criterion_02_ex1_energy_invariance(acceptance):
    worst = 0.0
    for j in range(1, 51):
        for p in (0.5, 1.0, 2.0):
            for n in (2, 3):
                got = energy_p(example_profile("ex1", j, p, n), p, n).value
                worst = max(worst, rel(got, (2 * math.pi) ** n))
    assert acceptance(2, worst <= 1e-10, f"300 points, worst rel err {worst:.2e} (<= 1e-10)")


def test_criterion_03_squeeze(acceptance):
    worst = 0.0
    for n in range(2, 7):
        c = optimal_C11(n)
        worst = max(worst, rel(ball_upper_C(1, 1, n), c), rel(ball_lower_C(1, 1, n), c))
    assert acceptance(3, worst <= 1e-12, f"n=2..6, worst rel gap {worst:.2e} (<= 1e-12)")


def test_criterion_04_p1_collapse(acceptance):
    worst = max(rel(b_lower(1, n), b_upper_ball(1, n)) for n in range(2, 9))
    assert acceptance(4, worst <= 1e-13, f"n=2..8, worst rel gap {worst:.2e} (<= 1e-13)")


def test_criterion_05_ratio_limit(acceptance):
    start = time.perf_counter()
    p, n = 1.0, 2
    betas = [-10.0, -1e2, -1e3, -1e4]
    ratios = []
    for b in betas:
        rep = check_mt(TruncatedLog(2 * n + 2 * p, b), p, n)
        ratios.append(rep.lhs / rep.details["energy"] ** (1 / p))
    elapsed = time.perf_counter() - start
    limit = b_lower(p, n)
    errs = [rel(r, limit) for r in ratios]
    monotone = all(b < a for a, b in zip(errs, errs[1:])) and all(
        (b - a) * (ratios[1] - ratios[0]) > 0 for a, b in zip(ratios, ratios[1:]))
    scan = ratio_limit(p, n, betas)
    agree = max(rel(a, b) for a, b in zip(ratios, scan.ratios))
    ok = monotone and errs[-1] <= 1e-3 and elapsed < 1.0 and scan.trend is Trend.CONVERGES and agree <= 1e-10
    assert acceptance(5, ok, f"monotone={monotone}, final rel err {errs[-1]:.3e} (<= 1e-3), "
                             f"{elapsed * 1e3:.1f} ms (< 1 s), scan agreement {agree:.1e}")


def test_criterion_06_monge_ampere_round_trip(acceptance):
    n = 2
    profiles = [Power(1.0, 1.0), Power(0.5, 2.0), Power(2.0, 0.3),
                TruncatedLog(1.0, -1.0), TruncatedLog(6.0, -2.0), TruncatedLog(0.5, -10.0)]
    worst_err = 0.0
    worst_slack = math.inf
    for u in profiles:
        w = solve_radial_ma(ma_distribution(u, n), n)
        worst_err = max(worst_err, float(np.max(np.abs(w.values - u.eval(w.knots)))))
        for rep in comparison_check(u, 1.0, n, [0.1, 1.0, 10.0]):
            worst_slack = min(worst_slack, rep.slack)
    ok = worst_err <= 1e-6 and worst_slack >= -1e-9
    assert acceptance(6, ok, f"sup err {worst_err:.2e} (<= 1e-6), min comparison slack {worst_slack:.3e} (>= -1e-9)")


def test_criterion_07_campaigns(acceptance):
    start = time.perf_counter()
    suites = [
        ("sobolev", check_sobolev, sobolev_stress_suite()),
        ("est", check_est, est_stress_suite()),
        ("holder", check_holder, holder_stress_suite()),
        ("lemma_l1", check_lemma_l1, lemma_l1_suite()),
    ]
    total = 0
    failures = []
    for name, fn, pts in suites:
        for rep in run_points(fn, pts):
            total += 1
            if not rep.slack >= -1e-9 * max(1.0, abs(rep.rhs)):
                failures.append((name, rep.params, rep.slack))
    elapsed = time.perf_counter() - start
    ok = not failures and total >= 200 and elapsed < 60.0
    assert acceptance(7, ok, f"{total} points (>= 200), {len(failures)} failures, {elapsed:.1f} s (< 60 s)")


def _random_profile(rng):
    kind = rng.integers(0, 3)
    if kind == 0:
        return Power(float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.1, 5.0)))
    if kind == 1:
        return TruncatedLog(float(rng.uniform(0.2, 6.0)), float(-rng.uniform(0.1, 8.0)))
    return QuadraticBall(float(rng.uniform(0.1, 4.0)))


def test_criterion_08_polarization(acceptance):
    rng = np.random.default_rng(20240601)
    worst = 0.0
    t = np.geomspace(1e-4, 1.0, 25)
    for _ in range(20):
        u, v = _random_profile(rng), _random_profile(rng)
        n = int(rng.integers(2, 4))
        p = float(rng.uniform(0.5, 3.0))
        s = u + v
        lhs_F = ma_distribution(s, n).F(t)
        rhs_F = sum(comb(n, k) * mixed_mass_function([u] * k + [v] * (n - k))(t) for k in range(n + 1))
        mask = lhs_F > 0
        worst = max(worst, float(np.max(np.abs(lhs_F[mask] - rhs_F[mask]) / lhs_F[mask])))
        lhs_e = energy_p(s, p, n).value
        rhs_e = sum(comb(n, k) * mixed_energy(s, [u] * k + [v] * (n - k), p, n).value for k in range(n + 1))
        worst = max(worst, rel(rhs_e, lhs_e))
    assert acceptance(8, worst <= 1e-8, f"20 random pairs, worst rel err {worst:.2e} (<= 1e-8)")


def test_criterion_09_counterexample_scans(acceptance):
    p, q, n = 1.0, 2.0, 2
    scans = {
        "ex1": scan_counterexamples("ex1", p, q, n, np.geomspace(1, 1e3, 13)),
        "ex2": scan_counterexamples("ex2", p, q, n, np.geomspace(1, 1e6, 13)),
        "ex3": scan_counterexamples("ex3", p, q, n, np.geomspace(1, 1e4, 13)),
    }
    # ex1 norm at the last j against its closed form (kink below double range)
    j = 1e3
    norm_ref = (sphere_factor(n) * j ** -q * sp_gamma(q + 1) / (2 * n) ** (q + 1)) ** (1 / q)
    norm_ok = rel(scans["ex1"].columns["lq_norm"][-1], norm_ref) <= 1e-8
    peaks = {k: max(r.ratios) for k, r in scans.items()}
    ok = all(v > 1e3 for v in peaks.values()) and all(r.trend is Trend.DIVERGES for r in scans.values()) and norm_ok
    detail = ", ".join(f"{k} max ratio {v:.4g}" for k, v in peaks.items())
    assert acceptance(9, ok, f"{detail} (> 1e3), ex1 norm oracle ok={norm_ok}")


def test_criterion_10_special_functions(acceptance):
    checks = {}
    xs = np.geomspace(1e-2, 1e4, 241)
    worst = 0.0
    for x in xs:
        if x + 1 < 171:
            worst = max(worst, rel(specfun.gamma(x + 1), x * specfun.gamma(x)))
        else:
            lhs = specfun.lngamma(x + 1)
            worst = max(worst, abs(lhs - math.log(x) - specfun.lngamma(x)) / abs(lhs))
    checks["gamma recurrence"] = (worst, 1e-12)

    rng = np.random.default_rng(11)
    pairs = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), size=(200, 2)))
    worst_b = max(rel(specfun.beta(x + 1, y), x / (x + y) * specfun.beta(x, y)) for x, y in pairs)
    worst_b = max(worst_b, max(rel(specfun.beta(1.0, y), 1.0 / y) for y in pairs[:, 1]),
                  rel(specfun.beta(2.0, 2.0), 1.0 / 6.0))
    checks["beta identities"] = (worst_b, 1e-12)
    checks["beta symmetry"] = (max(rel(specfun.beta(x, y), specfun.beta(y, x)) for x, y in pairs), 1e-13)

    worst_d = 0.0
    for b in np.geomspace(1e-2, 1e3, 40):
        for q in range(0, 11):
            got = specfun.digamma(b) - specfun.digamma(b + q + 1)
            ref = -sum(1.0 / (b + q - j) for j in range(q + 1))
            worst_d = max(worst_d, abs(got - ref) / max(1.0, abs(ref)))
    checks["digamma finite sum"] = (worst_d, 1e-11)
    with mpmath.workdps(30):
        worst_m = max(abs(specfun.digamma(x) - float(mpmath.digamma(x))) / max(1.0, abs(float(mpmath.digamma(x))))
                      for x in np.geomspace(1e-3, 1e6, 91))
    checks["digamma accuracy"] = (worst_m, 1e-11)

    ys = np.linspace(1.0, 50.0, 491)
    margin = min(math.log(2.0) + y * math.log(y) - specfun.lngamma(y + 1) for y in ys)
    ok = all(err <= tol for err, tol in checks.values()) and margin >= 0
    detail = ", ".join(f"{k} {err:.1e} (<= {tol:.0e})" for k, (err, tol) in checks.items())
    assert acceptance(10, ok, f"{detail}, Gamma(y+1) <= 2y^y min log margin {margin:.3f}")
