"""Closed-form constants of the Moser-Trudinger and Sobolev inequalities, and the ball optimizers.

Notation: ``p`` is the energy exponent, ``q`` the Lebesgue exponent, ``n``
the complex dimension, ``eps`` in (0, 1) the free parameter of the
Moser-Trudinger constants and ``beta_n`` the dimensional constant entering
``A`` (not known in closed form; it defaults to 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .specfun import beta as _beta, digamma, lnbeta, lngamma

__all__ = [
    "BETA_N_NOTE",
    "ConstantSet",
    "mt_constants",
    "b_lower",
    "b_upper_ball",
    "sobolev_constants",
    "holder_d",
    "holder_alpha",
    "alpha_exponent",
    "ceil_natural",
    "ball_upper_C",
    "family_f",
    "family_f_prime",
    "sol_lhs",
    "solve_sol",
    "maximize_family_f",
    "LowerBound",
    "ball_lower_C",
    "ball_lower_C_report",
    "ball_lower_C_q1",
    "optimal_C11",
    "constant_set",
]

BETA_N_NOTE = (
    "beta_n has no known closed form; the default 0 makes A a lower bound for the true constant"
)


def _check_pn(p, n):
    if not p > 0:
        raise ValueError(f"p must be positive, got {p!r}")
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    return float(p), int(n)


def mt_constants(p: float, n: int, eps: float = 0.5, beta_n: float = 0.0,
                 diam: float = 2.0) -> tuple[float, float]:
    """``(A, B)`` of the Moser-Trudinger inequality ``log int e^-u <= A + B e_p(u)^(1/p)``."""
    p, n = _check_pn(p, n)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    if not beta_n >= 0:
        raise ValueError(f"beta_n must be nonnegative, got {beta_n!r}")
    if not diam > 0:
        raise ValueError(f"diam must be positive, got {diam!r}")
    correction = beta_n * eps * n / (n - eps * n) ** n
    A = math.log(math.pi**n + correction) + 2 * n * math.log(diam)
    B = (2 * eps * n) ** (-n / p)
    return A, B


def b_lower(p: float, n: int) -> float:
    """Lower bound ``p / ((4 pi)^(n/p) (n+p)^(1+n/p))`` for any admissible ``B``."""
    p, n = _check_pn(p, n)
    return p / ((4 * math.pi) ** (n / p) * (n + p) ** (1 + n / p))


def b_upper_ball(p: float, n: int) -> float:
    """Upper bound for the optimal ``B`` on the unit ball."""
    p, n = _check_pn(p, n)
    log_val = ((p - 1) * math.log(p) - n * math.log(4 * math.pi) - (n + 1) * math.log(n + 1)
               - (p - 1) * math.log(n + p)) / p
    return math.exp(log_val)


def sobolev_constants(p: float, q: float, n: int, A: float, B: float) -> tuple[float, float]:
    """``(C, D)`` with ``||u||_q <= C e_p^(1/(n+p))`` and ``||u||_q <= D q^(n/(n+p)) e_p^(1/(n+p))``."""
    p, n = _check_pn(p, n)
    if not q > 0 or not B > 0:
        raise ValueError("q and B must be positive")
    r = p / (n + p)
    log_C = (A / q + math.log(n + p) + r * math.log(B) - (n / (n + p)) * math.log(n)
             - r * math.log(p) + float(lngamma(n * q / (n + p) + 1)) / q)
    D = 2 * math.exp(A) * ((n + p) * B / p) ** r
    return math.exp(log_C), D


def holder_alpha(p: float, n: int) -> float:
    return (p + 2) * ((p + 1) / p) ** (n - 1) - (p + 1)


def holder_d(p: float, n: int) -> float:
    """Constant of the mixed-energy Hoelder inequality (three regimes in ``p``)."""
    p, n = _check_pn(p, n)
    if p < 1:
        return (1 / p) ** (n / (n - p))
    if p == 1:
        return 1.0
    return p ** (p * holder_alpha(p, n) / (p - 1))


def alpha_exponent(p: float, n: int) -> float:
    """``alpha(p, n) = 4 pi n p^(1/n) ((n+1)/(n+p))^((n+1)/n)``."""
    p, n = _check_pn(p, n)
    return 4 * math.pi * n * p ** (1 / n) * ((n + 1) / (n + p)) ** ((n + 1) / n)


def ceil_natural(x: float) -> int:
    """Smallest natural number (0 included) that is ``>= x``."""
    return max(0, math.ceil(x - 1e-12))


def ball_upper_C(p: float, q: float, n: int) -> float:
    """Upper bound for ``C(p, q, n, ball)`` from comparison with the Lebesgue potential; needs ``q <= n + p``."""
    p, n = _check_pn(p, n)
    if not 0 < q <= n + p:
        raise ValueError(f"need 0 < q <= n + p, got q={q!r}")
    m = ceil_natural(q - p)
    pm = p + m
    log_val = (
        n * (p + n - q) / (q * (n + p)) * math.log(math.pi)
        - n / (n + p) * math.log(4)
        - math.lgamma(n + 1) / q
        + math.log(holder_d(p, n)) / pm
        + (n - m) / ((n + p) * pm) * math.log(n * float(_beta(p + 1, n)))
        + sum(math.log(p + i) for i in range(1, m + 1)) / pm
    )
    return math.exp(log_val)


def family_f(beta: float, q: float, s: float) -> float:
    """``f(beta) = B(q+1, beta) beta^(1+qs)``."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    return math.exp(float(lnbeta(q + 1, beta)) + (1 + q * s) * math.log(beta))


def family_f_prime(beta: float, q: float, s: float) -> float:
    """Derivative of ``family_f`` in ``beta``, via the digamma function."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    bracket = beta * (float(digamma(beta)) - float(digamma(beta + q + 1))) + 1 + s * q
    return math.exp(float(lnbeta(q + 1, beta)) + s * q * math.log(beta)) * bracket


def sol_lhs(beta: float, q: int) -> float:
    """``sum_{j=0}^{q} beta / (beta + q - j)``; increases from 1 to ``q + 1``."""
    return sum(beta / (beta + (q - j)) for j in range(q + 1))


def _bisect(fun, lo: float, hi: float, tol: float = 0.0, max_iter: int = 2000) -> float:
    """Root of a function that is positive at ``lo`` and negative at ``hi``.

    With the default ``tol`` the bracket is halved until it cannot shrink.
    """
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * max(1.0, mid) or not lo < mid < hi:
            break
        if fun(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bracket(fun, start: float = 1.0) -> tuple[float, float]:
    lo, hi = start, start
    while fun(lo) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise ArithmeticError("could not bracket the root from below")
    while fun(hi) > 0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("could not bracket the root from above")
    return lo, hi


def solve_sol(q: int, s: float) -> float:
    """Unique ``beta > 0`` with ``sol_lhs(beta, q) = 1 + q s``, for integer ``q >= 1``."""
    if int(q) != q or q < 1:
        raise ValueError(f"q must be a positive integer, got {q!r}")
    if not 0 < s < 1:
        raise ValueError(f"s must lie in (0, 1), got {s!r}")
    q = int(q)
    target = 1 + q * s
    residual = lambda b: target - sol_lhs(b, q)  # noqa: E731
    lo, hi = _bracket(residual)
    root = _bisect(residual, lo, hi)
    # f' changes sign from + to - across the root
    h = max(1e-9 * root, 1e-12)
    if not (family_f_prime(root - h, q, s) > 0 > family_f_prime(root + h, q, s)):
        raise ArithmeticError("f' does not change sign at the computed root")
    return root


def maximize_family_f(q: float, s: float) -> float:
    """Maximiser of ``family_f(., q, s)`` on ``(0, inf)`` for real ``q > 0``."""
    if int(q) == q and q >= 1:
        return solve_sol(int(q), s)

    def bracket_term(b):
        return b * (float(digamma(b)) - float(digamma(b + q + 1))) + 1 + s * q

    lo, hi = _bracket(bracket_term)
    return _bisect(bracket_term, lo, hi)


def _lower_prefactor(p: float, q: float, n: int) -> float:
    """``||u_(alpha,k)||_q / e_p^(1/(n+p)) = prefactor * f(n/alpha)^(1/q)``."""
    s = n / (n + p)
    log_val = (
        (n / q - s) * math.log(math.pi)
        - math.lgamma(n + 1) / q
        - (n + 1) / (n + p) * math.log(n)
        - s * math.log(4)
        - float(lnbeta(p + 1, n)) / (n + p)
    )
    return math.exp(log_val)


def ball_lower_C(p: float, q: float, n: int) -> float:
    """Lower bound for ``C(p, q, n, ball)``: best ratio over the power family."""
    return ball_lower_C_report(p, q, n).exact


@dataclass(frozen=True)
class LowerBound:
    """Power-family lower bounds for ``C(p, q, n, ball)``.

    ``exact`` uses the true maximiser ``beta_exact``; ``approx`` evaluates the
    same ratio at ``beta_approx = (floor(q)+1) n / (2p)``.  ``approx_printed``
    is the printed closed form for integer ``q >= 2``, which carries the power
    ``beta^(1+s)`` instead of ``beta^(1+qs)``.
    """

    p: float
    q: float
    n: int
    beta_exact: float
    exact: float
    beta_approx: float
    approx: float
    approx_printed: float | None

    def as_dict(self):
        return asdict(self)


def _ineq7_printed(p: float, q: int, n: int) -> float:
    e = (2 * n + p) / (q * (n + p))
    log_val = (
        n * (n + p - q) / (q * (n + p)) * math.log(math.pi)
        + (2 * n + p - n * q) / (q * (n + p)) * math.log(n)
        + e * math.log(q + 1)
        - n / (n + p) * math.log(4)
        - e * math.log(2 * p)
        - math.lgamma(n + 1) / q
        - math.log(n * float(_beta(p + 1, n))) / (n + p)
        + float(lnbeta(q + 1, (q + 1) * n / (2 * p))) / q
    )
    return math.exp(log_val)


def ball_lower_C_report(p: float, q: float, n: int) -> LowerBound:
    p, n = _check_pn(p, n)
    if not q >= 1:
        raise ValueError(f"q must be >= 1, got {q!r}")
    s = n / (n + p)
    pref = _lower_prefactor(p, q, n)
    b_exact = maximize_family_f(q, s)
    exact = pref * family_f(b_exact, q, s) ** (1 / q)
    b_approx = (math.floor(q) + 1) * n / (2 * p)
    approx = pref * family_f(b_approx, q, s) ** (1 / q)
    printed = _ineq7_printed(p, int(q), n) if int(q) == q and q >= 2 else None
    return LowerBound(p, float(q), n, b_exact, exact, b_approx, approx, printed)


def ball_lower_C_q1(p: float, n: int) -> float:
    """Closed form of the power-family lower bound at ``q = 1``."""
    p, n = _check_pn(p, n)
    log_val = (
        n * (n + p - 1) / (n + p) * math.log(math.pi)
        + p / (n + p) * math.log(p)
        - n / (n + p) * math.log(4)
        - math.lgamma(n + 1)
        - math.log(n + p)
        - math.log(n * float(_beta(p + 1, n))) / (n + p)
    )
    return math.exp(log_val)


def optimal_C11(n: int) -> float:
    """The sharp constant ``C(1, 1, n, ball)``."""
    _, n = _check_pn(1.0, n)
    log_val = (n * n / (n + 1) * math.log(math.pi) - n / (n + 1) * math.log(4)
               - math.lgamma(n + 1) - n / (n + 1) * math.log(n + 1))
    return math.exp(log_val)


@dataclass(frozen=True)
class ConstantSet:
    A: float
    B: float
    B_lower: float
    B_upper_ball: float | None
    C_sobolev: float
    D_sobolev: float
    d_holder: float
    alpha_exp: float
    p: float
    q: float
    n: int
    eps: float
    beta_n: float
    diam: float

    def as_dict(self):
        return asdict(self)


def constant_set(p: float, q: float, n: int, eps: float = 0.5, beta_n: float = 0.0,
                 diam: float = 2.0) -> ConstantSet:
    """All constants for one parameter point; the ball bound only applies when ``diam == 2``."""
    A, B = mt_constants(p, n, eps, beta_n, diam)
    C, D = sobolev_constants(p, q, n, A, B)
    upper = b_upper_ball(p, n) if diam == 2 else None
    return ConstantSet(A, B, b_lower(p, n), upper, C, D, holder_d(p, n), alpha_exponent(p, n),
                       float(p), float(q), int(n), float(eps), float(beta_n), float(diam))
