"""Adaptive 1-D quadrature on [0, 1] and Stieltjes integration against mass functions.

The workhorse is a vectorised 21-point Gauss-Kronrod rule.  Pieces that touch
an endpoint are cut into dyadic shells that shrink geometrically toward the
endpoint; the sequence of shell contributions is used both to extrapolate the
remaining tail and to detect divergence.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "QuadratureResult",
    "MassFunction",
    "default_tol",
    "integrate",
    "stieltjes",
    "gauss_kronrod",
]

DEFAULT_TOL = 1e-10

# divergence rule: the last K shells each carry more than FRACTION of the previous one
DIVERGENCE_SHELLS = 8
DIVERGENCE_FRACTION = 0.9
# shells closer than this never trigger the divergence rule (log factors settle first)
_MIN_DIVERGENCE_DEPTH = 24
_MIN_SHELLS = 6
_MAX_SHELLS_LEFT = 1000
# relative width below which a shell next to a nonzero endpoint is unresolvable
_RIGHT_RESOLUTION = 2.0**-40
_MAX_PANELS = 200_000
_TINY = 1e-300

# 21-point Kronrod nodes (non-negative half) and weights; Gauss nodes are the odd entries.
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525216625,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_W_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_W_GAUSS = np.zeros(21)
_W_GAUSS[1:10:2] = _WG
_W_GAUSS[11:20:2] = _WG[::-1]


def default_tol() -> float:
    """Default tolerance, overridable through the ``PLURI_TOL`` environment variable."""
    raw = os.environ.get("PLURI_TOL")
    if raw:
        value = float(raw)
        if not value > 0:
            raise ValueError(f"PLURI_TOL must be positive, got {raw!r}")
        return value
    return DEFAULT_TOL


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    converged: bool
    divergent: bool = False

    def __post_init__(self):
        if self.converged and self.divergent:
            raise ValueError("a result cannot be both converged and divergent")

    def __float__(self) -> float:
        return float(self.value)


def _call(f: Callable, x: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        try:
            y = np.asarray(f(x), dtype=float)
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.array([float(f(float(xi))) for xi in x.ravel()]).reshape(x.shape)


def gauss_kronrod(f: Callable, a, b) -> tuple[np.ndarray, np.ndarray]:
    """Apply G10/K21 on each panel ``[a_i, b_i]``.

    Returns the Kronrod estimates and ``|K - G|`` per panel.  ``f`` must
    accept a 2-D array of abscissae.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    y = _call(f, x)
    kron = half * (y @ _W_KRONROD)
    gauss = half * (y @ _W_GAUSS)
    return kron, np.abs(kron - gauss)


def _adaptive(f, a, b, abs_tol: float, span: float):
    """Bisect panels until each meets its share ``abs_tol * width / span``."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    total = 0.0
    err = 0.0
    ok_all = True
    used = 0
    while a.size:
        kron, e = gauss_kronrod(f, a, b)
        used += a.size
        if not np.all(np.isfinite(kron)):
            return float(np.sum(kron)), math.inf, False
        allowed = abs_tol * (b - a) / span
        # abscissae near a nonzero endpoint carry rounding of relative size eps*|x|/width
        cond = np.maximum(1.0, np.maximum(np.abs(a), np.abs(b)) / (b - a))
        good = (e <= allowed) | (e <= 50 * np.finfo(float).eps * cond * np.abs(kron))
        # panels too narrow to split are accepted as they are
        tiny = (b - a) <= 4 * np.finfo(float).eps * np.maximum(np.abs(a), np.abs(b))
        done = good | tiny
        if used > _MAX_PANELS:
            done[:] = True
            ok_all = False
        if np.any(tiny & ~good):
            ok_all = False
        total += float(np.sum(kron[done]))
        err += float(np.sum(e[done]))
        a, b = a[~done], b[~done]
        if a.size:
            m = 0.5 * (a + b)
            a, b = np.concatenate([a, m]), np.concatenate([m, b])
    return total, err, ok_all


@dataclass
class _ShellOutcome:
    value: float
    error: float
    converged: bool
    divergent: bool


def _looks_divergent(contributions: list[float], depth: int) -> bool:
    """Apply the K-shell ratio rule to the limiting shell ratio.

    Shell ratios of ``t**g * |log t|**q`` behave like ``r * (1 + 1/k)**q``; the
    limit ``r`` is estimated by a least-squares fit on the last K ratios so
    that slowly settling log factors do not trip the rule prematurely.
    """
    if len(contributions) <= DIVERGENCE_SHELLS:
        return False
    recent = np.abs(np.array(contributions[-(DIVERGENCE_SHELLS + 1):]))
    if np.any(recent == 0):
        return False
    ratios = recent[1:] / recent[:-1]
    if not np.all(ratios > DIVERGENCE_FRACTION):
        return False
    k = np.arange(depth - DIVERGENCE_SHELLS, depth, dtype=float)
    x = np.log1p(1.0 / k)
    slope, intercept = np.polyfit(x, np.log(ratios), 1)
    return math.exp(intercept) > DIVERGENCE_FRACTION


def _shells(f, a: float, b: float, toward: str, abs_tol: float, span: float) -> _ShellOutcome:
    """Integrate over [a, b] with dyadic shells accumulating at one endpoint."""
    width = b - a
    anchor = a if toward == "left" else b
    total = 0.0
    err = 0.0
    contributions: list[float] = []
    converged = True
    max_shells = _MAX_SHELLS_LEFT
    if toward == "right" or anchor != 0.0:
        max_shells = int(math.log2(width / (_RIGHT_RESOLUTION * max(abs(anchor), width)))) + 1
        max_shells = max(max_shells, _MIN_SHELLS + 2)
    for k in range(max_shells):
        outer = width * 2.0**-k
        inner = width * 2.0**-(k + 1)
        if toward == "left":
            lo, hi = anchor + inner, anchor + outer
        else:
            lo, hi = anchor - outer, anchor - inner
        if not hi > lo:
            break
        val, e, ok = _adaptive(f, lo, hi, abs_tol, span)
        if not math.isfinite(val):
            return _ShellOutcome(math.copysign(math.inf, val) if not math.isnan(val) else math.nan,
                                 math.inf, False, True)
        converged &= ok
        total += val
        err += e
        contributions.append(val)
        if k + 1 < _MIN_SHELLS:
            continue
        c_prev, c_last = abs(contributions[-2]), abs(contributions[-1])
        if c_last == 0.0 and c_prev == 0.0:
            return _ShellOutcome(total, err, converged, False)
        ratio = c_last / c_prev if c_prev > 0 else math.inf
        if k + 1 >= _MIN_DIVERGENCE_DEPTH and _looks_divergent(contributions, k + 1):
            return _ShellOutcome(total, math.inf, False, True)
        if ratio < 1.0:
            tail = contributions[-1] * ratio / (1.0 - ratio)
            c_pp = abs(contributions[-3])
            prev_ratio = c_prev / c_pp if c_pp > 0 else ratio
            tail_err = abs(tail) * abs(ratio - prev_ratio) / (1.0 - ratio) + 1e-3 * abs(tail)
            if abs(tail) <= 0.25 * abs_tol:
                return _ShellOutcome(total + tail, err + abs(tail), converged, False)
            if ratio <= DIVERGENCE_FRACTION and tail_err <= 0.25 * abs_tol:
                return _ShellOutcome(total + tail, err + tail_err, converged, False)
    # resolution exhausted: extrapolate geometrically if the shells are shrinking
    if len(contributions) >= 3:
        c = [abs(x) for x in contributions[-3:]]
        if c[1] > 0 and c[0] > 0 and c[2] < c[1]:
            ratio, prev_ratio = c[2] / c[1], c[1] / c[0]
            tail = contributions[-1] * ratio / (1.0 - ratio)
            tail_err = abs(tail) * abs(ratio - prev_ratio) / (1.0 - ratio) + 1e-6 * abs(tail)
            return _ShellOutcome(total + tail, err + tail_err, converged, False)
        if c[2] == 0.0:
            return _ShellOutcome(total, err, converged, False)
    return _ShellOutcome(total, err + abs(contributions[-1]) if contributions else err, False, False)


def integrate(
    f: Callable,
    tol: float | None = None,
    open_endpoints: bool = True,
    *,
    a: float = 0.0,
    b: float = 1.0,
    breakpoints: Sequence[float] = (),
    relative: bool = False,
) -> QuadratureResult:
    """Integrate ``f`` over ``(a, b)``.

    ``f`` should be vectorised (it is called with numpy arrays); scalar-only
    callables still work, just slower.  With ``open_endpoints`` the pieces
    adjacent to ``a`` and ``b`` are refined geometrically so that integrable
    endpoint singularities converge and non-integrable ones are flagged
    ``divergent``.  The target accuracy is ``max(tol, tol * |value|)``.
    """
    tol = default_tol() if tol is None else float(tol)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not b > a:
        if a == b:
            return QuadratureResult(0.0, 0.0, True)
        raise ValueError("integration interval must satisfy a <= b")
    inner = sorted({float(x) for x in breakpoints if a < x < b})
    points = [a, *inner, b]
    if open_endpoints and len(points) == 2:
        points = [a, 0.5 * (a + b), b]
    lo = np.array(points[:-1])
    hi = np.array(points[1:])
    span = b - a

    coarse, _ = gauss_kronrod(f, lo, hi)
    scale = float(np.sum(coarse))
    scale = abs(scale) if math.isfinite(scale) else 1.0
    abs_tol = 0.5 * tol * (max(scale, _TINY) if relative else max(1.0, scale))

    total = 0.0
    err = 0.0
    converged = True
    divergent = False
    first = 1 if open_endpoints else 0
    last = len(lo) - 1 if open_endpoints else len(lo)
    if open_endpoints:
        left = _shells(f, lo[0], hi[0], "left", abs_tol, span)
        right = _shells(f, lo[-1], hi[-1], "right", abs_tol, span)
        for part in (left, right):
            total += part.value
            err += part.error
            converged &= part.converged
            divergent |= part.divergent
    if last > first:
        val, e, ok = _adaptive(f, lo[first:last], hi[first:last], abs_tol, span)
        total += val
        err += e
        converged &= ok
        if not math.isfinite(val):
            divergent = True
    if divergent:
        value = total if math.isfinite(total) else math.inf
        return QuadratureResult(value, math.inf, False, True)
    target = tol * abs(total) if relative else max(tol, tol * abs(total))
    return QuadratureResult(total, err, bool(converged and err <= max(target, _TINY)), False)


@dataclass(frozen=True)
class MassFunction:
    """A nondecreasing mass function on [0, 1): atoms plus an absolutely continuous part.

    ``atoms`` holds ``(t, jump)`` pairs with strictly increasing ``t`` in
    ``[0, 1]``; ``origin_mass`` is the mass sitting at the single point
    ``t = 0`` (the origin of the ball).  ``cumulative``, when supplied, must be
    the left-continuous distribution function
    ``F(t) = origin_mass + int_0^t density + sum_{t_i < t} jump_i``.
    """

    density: Callable | None = None
    atoms: tuple[tuple[float, float], ...] = ()
    origin_mass: float = 0.0
    cumulative: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        atoms = tuple((float(t), float(m)) for t, m in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        locs = [t for t, _ in atoms]
        if any(m < 0 for _, m in atoms):
            raise ValueError("atom jumps must be nonnegative")
        if any(not 0.0 <= t <= 1.0 for t in locs):
            raise ValueError("atom locations must lie in [0, 1]")
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise ValueError("atom locations must be strictly increasing")
        if self.origin_mass < 0:
            raise ValueError("origin mass must be nonnegative")

    @property
    def atom_locations(self) -> np.ndarray:
        return np.array([t for t, _ in self.atoms])

    @property
    def atom_jumps(self) -> np.ndarray:
        return np.array([m for _, m in self.atoms])

    def weighted(self, g: Callable) -> "MassFunction":
        """The measure ``g dF`` as a new mass function (``g >= 0`` assumed)."""
        density = None
        if self.density is not None:
            dens = self.density
            density = lambda t: _call(g, np.asarray(t, dtype=float)) * dens(t)  # noqa: E731
        atoms = []
        for t, m in self.atoms:
            if m > 0:
                atoms.append((t, float(_call(g, np.array([t]))[0]) * m))
        origin = 0.0
        if self.origin_mass > 0:
            origin = float(_call(g, np.array([0.0]))[0]) * self.origin_mass
        return MassFunction(density=density, atoms=tuple(atoms), origin_mass=origin)

    def __call__(self, t) -> np.ndarray:
        """Left-continuous distribution function evaluated at ``t``."""
        t_arr = np.asarray(t, dtype=float)
        if self.cumulative is not None:
            with np.errstate(all="ignore"):
                return np.asarray(self.cumulative(t_arr), dtype=float)
        return self._numeric_cumulative(t_arr)

    def total(self) -> float:
        return float(self(np.array([1.0]))[0])

    def _numeric_cumulative(self, t: np.ndarray) -> np.ndarray:
        flat = t.ravel()
        order = np.argsort(flat)
        sorted_t = flat[order]
        out = np.full(sorted_t.shape, self.origin_mass, dtype=float)
        if self.density is not None and sorted_t.size:
            # cumulate the density over consecutive sorted points; atom locations are
            # inserted so that no panel straddles a discontinuity of the density
            locs = self.atom_locations
            grid = np.unique(np.concatenate([sorted_t, locs[(locs > 0) & (locs < 1)]]))
            grid = grid[grid > 0]
            if grid.size:
                head = integrate(self.density, a=0.0, b=float(grid[0])).value
                pieces, _ = gauss_kronrod(self.density, grid[:-1], grid[1:]) if grid.size > 1 else (np.array([]), None)
                cum = np.concatenate([[head], head + np.cumsum(pieces)])
                idx = np.searchsorted(grid, sorted_t)
                pos = sorted_t > 0
                out[pos] += cum[idx[pos]]
        if self.atoms:
            locs = self.atom_locations
            csum = np.concatenate([[0.0], np.cumsum(self.atom_jumps)])
            out += csum[np.searchsorted(locs, sorted_t, side="left")]
        result = np.empty_like(out)
        result[order] = out
        return result.reshape(t.shape)


def stieltjes(g: Callable, F: MassFunction, tol: float | None = None,
              relative: bool = False) -> QuadratureResult:
    """Riemann-Stieltjes integral of ``g`` against ``dF`` over [0, 1).

    Sums the atoms exactly and integrates ``g * density`` adaptively, using
    the atom locations as breakpoints.
    """
    tol = default_tol() if tol is None else float(tol)
    discrete = 0.0
    if F.origin_mass > 0:
        g0 = float(_call(g, np.array([0.0]))[0])
        discrete += g0 * F.origin_mass
    if F.atoms:
        vals = _call(g, F.atom_locations)
        with np.errstate(invalid="ignore"):
            terms = np.where(F.atom_jumps > 0, vals * F.atom_jumps, 0.0)
        discrete += float(np.sum(terms))
    if math.isnan(discrete):
        return QuadratureResult(math.nan, math.inf, False, False)
    if math.isinf(discrete):
        return QuadratureResult(discrete, math.inf, False, True)
    if F.density is None:
        return QuadratureResult(discrete, 4 * np.finfo(float).eps * abs(discrete), True)
    dens = F.density
    cont = integrate(lambda t: _call(g, t) * dens(t), tol=tol,
                     breakpoints=[t for t, _ in F.atoms], relative=relative)
    if cont.divergent:
        return QuadratureResult(math.inf, math.inf, False, True)
    value = cont.value + discrete
    err = cont.abs_error_estimate + 4 * np.finfo(float).eps * abs(discrete)
    target = tol * abs(value) if relative else max(tol, tol * abs(value))
    return QuadratureResult(value, err, bool(cont.converged or err <= target), False)
