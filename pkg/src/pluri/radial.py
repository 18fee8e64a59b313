"""Radial plurisubharmonic profiles on the unit ball and their Monge-Ampere masses.

A radial function ``u(z) = U(|z|)`` is plurisubharmonic iff ``U`` is
nondecreasing and convex in ``log t``.  Everything here is phrased through the
*log-slope* ``sigma(t) = t U'(t)`` (left derivative), which is nondecreasing
for admissible profiles.  The normalised Monge-Ampere mass of the ball of
radius ``t`` is ``F(t) = sigma(t)**n``, and the mixed mass of
``dd^c u_1 ^ ... ^ dd^c u_n`` is ``prod_i sigma_i(t)``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .quadrature import MassFunction, gauss_kronrod, integrate, _adaptive
from .reports import InequalityReport

__all__ = [
    "RadialProfile",
    "TruncatedLog",
    "Power",
    "QuadraticBall",
    "Grid",
    "SumProfile",
    "ScaledProfile",
    "ValidityReport",
    "MaDistribution",
    "zero_profile",
    "eval_profile",
    "left_derivative",
    "is_radial_psh",
    "mixed_mass_function",
    "ma_distribution",
    "solve_radial_ma",
    "comparison_check",
    "parse_profile",
    "DEFAULT_GRID_SIZE",
    "DEFAULT_GRID_TMIN",
]

DEFAULT_GRID_SIZE = 4096
DEFAULT_GRID_TMIN = 1e-12


def _arr(t) -> np.ndarray:
    return np.asarray(t, dtype=float)


def _scalar_out(t, value):
    return float(value) if np.ndim(t) == 0 else value


class RadialProfile:
    """Base class: a radial candidate ``U : [0, 1) -> [-inf, 0]``.

    Subclasses implement the vectorised primitives ``_value``, ``_sigma`` and
    ``_sigma_prime`` plus the ``kinks``/``origin_slope`` metadata.
    """

    smooth: bool = False

    def __call__(self, t):
        return self.eval(t)

    def eval(self, t):
        """Profile value at ``t``; ``t`` must lie in ``[0, 1]``."""
        ta = _arr(t)
        if np.any((ta < 0) | (ta > 1)) or np.any(np.isnan(ta)):
            raise ValueError("radial profiles are defined for t in [0, 1)")
        with np.errstate(divide="ignore", invalid="ignore"):
            return _scalar_out(t, self._value(ta))

    def log_slope(self, t, side: str = "left"):
        """``t * U'(t)`` using the left (default) or right derivative."""
        ta = _arr(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return _scalar_out(t, self._sigma(ta, side))

    def log_slope_derivative(self, t):
        """Derivative of the log-slope in ``t`` away from kinks."""
        ta = _arr(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return _scalar_out(t, self._sigma_prime(ta))

    @property
    def kinks(self) -> tuple[float, ...]:
        return ()

    @property
    def origin_slope(self) -> float:
        """``lim_{t->0+} t U'(t)``; positive means a Monge-Ampere atom at the origin."""
        return 0.0

    @property
    def value_at_zero(self) -> float:
        return float(self._value(np.array([0.0]))[0])

    @property
    def has_continuous_mass(self) -> bool:
        return True

    def scaled(self, c: float) -> "RadialProfile":
        return ScaledProfile(self, float(c))

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        if not isinstance(other, RadialProfile):
            return NotImplemented
        return SumProfile((self, other))

    def __rmul__(self, c: float) -> "RadialProfile":
        return self.scaled(c)

    def _value(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _sigma(self, t: np.ndarray, side: str) -> np.ndarray:
        raise NotImplementedError

    def _sigma_prime(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class TruncatedLog(RadialProfile):
    """``U(t) = c * max(log t, beta)``: the scaled, truncated Green function."""

    c: float
    beta: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"TruncatedLog needs c > 0, got {self.c}")
        if not self.beta < 0:
            raise ValueError(f"TruncatedLog needs beta < 0, got {self.beta}")

    @property
    def kink(self) -> float:
        return math.exp(self.beta)

    @property
    def kinks(self) -> tuple[float, ...]:
        return (self.kink,)

    @property
    def has_continuous_mass(self) -> bool:
        return False

    @property
    def value_at_zero(self) -> float:
        return self.c * self.beta

    def _value(self, t):
        # comparing against the stored kink keeps U(kink) == c*beta exactly
        logt = np.where(t <= self.kink, self.beta, np.log(np.where(t > 0, t, 1.0)))
        return self.c * np.maximum(logt, self.beta)

    def _sigma(self, t, side):
        if side == "left":
            return np.where(t > self.kink, self.c, 0.0)
        return np.where(t >= self.kink, self.c, 0.0)

    def _sigma_prime(self, t):
        return np.zeros_like(t)

    def scaled(self, c):
        return TruncatedLog(self.c * c, self.beta)


@dataclass(frozen=True)
class Power(RadialProfile):
    """``U(t) = k (t**(2 alpha) - 1)``."""

    alpha: float
    k: float
    smooth = True

    def __post_init__(self):
        if not self.alpha > 0 or not self.k > 0:
            raise ValueError(f"Power needs alpha > 0 and k > 0, got {self.alpha}, {self.k}")

    @property
    def value_at_zero(self) -> float:
        return -self.k

    def _value(self, t):
        return self.k * (t ** (2 * self.alpha) - 1.0)

    def _sigma(self, t, side):
        return 2 * self.alpha * self.k * t ** (2 * self.alpha)

    def _sigma_prime(self, t):
        return 4 * self.alpha**2 * self.k * t ** (2 * self.alpha - 1)

    def scaled(self, c):
        return Power(self.alpha, self.k * c)


@dataclass(frozen=True)
class QuadraticBall(RadialProfile):
    """``U(t) = a (t**2 - 1)``; ``QuadraticBall.phi0(n)`` has ``(dd^c u)^n`` equal to Lebesgue measure."""

    a: float
    smooth = True

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"QuadraticBall needs a > 0, got {self.a}")

    @classmethod
    def phi0(cls, n: int) -> "QuadraticBall":
        return cls(1.0 / (4.0 * math.factorial(n) ** (1.0 / n)))

    def as_power(self) -> Power:
        return Power(1.0, self.a)

    @property
    def value_at_zero(self) -> float:
        return -self.a

    def _value(self, t):
        return self.a * (t * t - 1.0)

    def _sigma(self, t, side):
        return 2 * self.a * t * t

    def _sigma_prime(self, t):
        return 4 * self.a * t

    def scaled(self, c):
        return QuadraticBall(self.a * c)


@dataclass(frozen=True, eq=False)
class Grid(RadialProfile):
    """Profile that is piecewise linear in ``log t`` between ``knots``.

    Below the first knot the profile is continued linearly in ``log t`` with
    the first slope when ``value_at_zero`` is ``-inf``; otherwise it is flat at
    ``values[0]`` and ``value_at_zero`` must match it.  Past the last knot it
    is flat.
    """

    knots: Sequence[float]
    values: Sequence[float]
    value_at_zero_: float = field(default=math.nan)

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if knots.ndim != 1 or knots.shape != values.shape or knots.size == 0:
            raise ValueError("knots and values must be 1-D arrays of equal, nonzero length")
        if np.any(knots <= 0) or np.any(knots > 1):
            raise ValueError("grid knots must lie in (0, 1]")
        if np.any(np.diff(knots) <= 0):
            raise ValueError("grid knots must be strictly increasing")
        if np.any(~np.isfinite(values)):
            raise ValueError("grid values must be finite")
        v0 = self.value_at_zero_
        if math.isnan(v0):
            v0 = float(values[0])
        if v0 == -math.inf and knots.size < 2:
            raise ValueError("a grid with value -inf at zero needs at least two knots")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "value_at_zero_", float(v0))
        logk = np.log(knots)
        slopes = np.diff(values) / np.diff(logk) if knots.size > 1 else np.zeros(0)
        object.__setattr__(self, "_logk", logk)
        object.__setattr__(self, "_slopes", slopes)

    @property
    def slopes(self) -> np.ndarray:
        return self._slopes

    @property
    def below_slope(self) -> float:
        return float(self._slopes[0]) if self.value_at_zero_ == -math.inf else 0.0

    @property
    def value_at_zero(self) -> float:
        return self.value_at_zero_

    @property
    def origin_slope(self) -> float:
        return self.below_slope

    @property
    def kinks(self) -> tuple[float, ...]:
        return tuple(float(k) for k in self.knots if k < 1.0)

    @property
    def has_continuous_mass(self) -> bool:
        return False

    def _segment_slopes(self) -> np.ndarray:
        # slope on (-inf, x0), (x0, x1), ..., (x_{m-1}, +inf)
        return np.concatenate([[self.below_slope], self._slopes, [0.0]])

    def _value(self, t):
        out = np.empty_like(t)
        pos = t > 0
        logt = np.log(np.where(pos, t, 1.0))
        inside = np.interp(logt, self._logk, self.values)
        below = logt < self._logk[0]
        if self.value_at_zero_ == -math.inf:
            inside = np.where(below, self.values[0] + self.below_slope * (logt - self._logk[0]), inside)
        out[...] = inside
        out[~pos] = self.value_at_zero_
        return out

    def _sigma(self, t, side):
        logt = np.log(np.where(t > 0, t, self.knots[0] * 0.5))
        seg = self._segment_slopes()
        # segment index: left derivative at a knot uses the segment below it
        idx = np.searchsorted(self._logk, logt, side="left" if side == "left" else "right")
        return seg[idx]

    def _sigma_prime(self, t):
        return np.zeros_like(t)

    def scaled(self, c):
        v0 = self.value_at_zero_ * c if math.isfinite(self.value_at_zero_) else self.value_at_zero_
        return Grid(self.knots, self.values * c, v0)

    def __repr__(self) -> str:
        return f"Grid(<{self.knots.size} knots>, value_at_zero={self.value_at_zero_})"

    def __eq__(self, other):
        return (isinstance(other, Grid) and np.array_equal(self.knots, other.knots)
                and np.array_equal(self.values, other.values)
                and self.value_at_zero_ == other.value_at_zero_)

    __hash__ = None

    @classmethod
    def from_csv(cls, path: str | Path) -> "Grid":
        """Read ``t,value`` rows; a row with ``t = 0`` sets the value at zero."""
        knots, values, v0 = [], [], math.nan
        with open(path, newline="") as handle:
            for row in csv.reader(handle):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    t, v = float(row[0]), float(row[1])
                except ValueError:
                    continue  # header
                if t == 0.0:
                    v0 = v
                else:
                    knots.append(t)
                    values.append(v)
        return cls(knots, values, v0)


@dataclass(frozen=True)
class SumProfile(RadialProfile):
    """Pointwise sum of radial profiles (again plurisubharmonic)."""

    parts: tuple[RadialProfile, ...]

    @property
    def smooth(self) -> bool:  # type: ignore[override]
        return all(p.smooth for p in self.parts)

    @property
    def kinks(self):
        return tuple(sorted({k for p in self.parts for k in p.kinks}))

    @property
    def origin_slope(self):
        return sum(p.origin_slope for p in self.parts)

    @property
    def value_at_zero(self):
        return sum(p.value_at_zero for p in self.parts)

    @property
    def has_continuous_mass(self):
        return any(p.has_continuous_mass for p in self.parts)

    def _value(self, t):
        return sum(p._value(t) for p in self.parts)

    def _sigma(self, t, side):
        return sum(p._sigma(t, side) for p in self.parts)

    def _sigma_prime(self, t):
        return sum(p._sigma_prime(t) for p in self.parts)


@dataclass(frozen=True)
class ScaledProfile(RadialProfile):
    base: RadialProfile
    c: float

    def __post_init__(self):
        if not self.c >= 0:
            raise ValueError("profiles may only be scaled by c >= 0")

    @property
    def smooth(self) -> bool:  # type: ignore[override]
        return self.base.smooth

    @property
    def kinks(self):
        return self.base.kinks

    @property
    def origin_slope(self):
        return self.c * self.base.origin_slope

    @property
    def value_at_zero(self):
        return self.c * self.base.value_at_zero

    @property
    def has_continuous_mass(self):
        return self.base.has_continuous_mass

    def _value(self, t):
        return self.c * self.base._value(t)

    def _sigma(self, t, side):
        return self.c * self.base._sigma(t, side)

    def _sigma_prime(self, t):
        return self.c * self.base._sigma_prime(t)


def zero_profile() -> Grid:
    """The function ``u = 0``."""
    return Grid([1.0], [0.0], 0.0)


def eval_profile(profile: RadialProfile, t):
    return profile.eval(t)


def left_derivative(profile: RadialProfile, t):
    """Left derivative ``U'(t)`` for ``t`` in (0, 1)."""
    ta = _arr(t)
    if np.any((ta <= 0) | (ta >= 1)):
        raise ValueError("left_derivative needs t in (0, 1)")
    return _scalar_out(t, profile._sigma(ta, "left") / ta)


@dataclass(frozen=True)
class ValidityReport:
    nondecreasing: bool
    log_convex: bool
    boundary_zero: bool
    nonpositive: bool
    notes: tuple[str, ...] = ()

    @property
    def admissible(self) -> bool:
        return self.nondecreasing and self.log_convex


def _grid_validity(g: Grid, rtol: float = 1e-9) -> ValidityReport:
    notes = []
    vals = g.values
    scale = max(1.0, float(np.max(np.abs(vals))))
    nondecreasing = bool(np.all(np.diff(vals) >= -rtol * scale))
    v0 = g.value_at_zero_
    if math.isfinite(v0) and v0 > vals[0] + rtol * scale:
        nondecreasing = False
    if not nondecreasing:
        notes.append("values decrease somewhere")
    seg = g._segment_slopes()
    inner = seg[:-1] if g.knots[-1] == 1.0 else seg
    sscale = max(1.0, float(np.max(np.abs(inner)))) if inner.size else 1.0
    log_convex = bool(np.all(np.diff(inner) >= -rtol * sscale))
    if math.isfinite(v0) and abs(v0 - vals[0]) > rtol * scale:
        log_convex = False
        notes.append("value at zero does not continue the first knot")
    if g.value_at_zero_ == -math.inf and g.below_slope <= 0:
        log_convex = False
        notes.append("value -inf at zero needs a positive first slope")
    if not log_convex:
        notes.append("slopes in log t are not nondecreasing")
    boundary_zero = bool(g.knots[-1] == 1.0 and abs(vals[-1]) <= 1e-12 * scale)
    nonpositive = bool(np.all(vals <= rtol * scale))
    return ValidityReport(nondecreasing, log_convex, boundary_zero, nonpositive, tuple(notes))


def is_radial_psh(profile: RadialProfile) -> ValidityReport:
    """Check monotonicity, convexity in ``log t`` and the boundary value."""
    if isinstance(profile, Grid):
        return _grid_validity(profile)
    if isinstance(profile, (TruncatedLog, Power, QuadraticBall)):
        # parameter checks in the constructors already guarantee admissibility
        return ValidityReport(True, True, True, True)
    if isinstance(profile, ScaledProfile):
        base = is_radial_psh(profile.base)
        if profile.c == 0:
            return ValidityReport(True, True, True, True)
        return base
    if isinstance(profile, SumProfile):
        parts = [is_radial_psh(p) for p in profile.parts]
        boundary = abs(float(profile.eval(1.0))) <= 1e-12
        return ValidityReport(
            all(r.nondecreasing for r in parts),
            all(r.log_convex for r in parts),
            boundary,
            all(r.nonpositive for r in parts),
            tuple(n for r in parts for n in r.notes),
        )
    # unknown subclass: sample-based check
    t = np.geomspace(1e-6, 1.0, 2001)
    v = profile.eval(t)
    s = profile.log_slope(t)
    return ValidityReport(
        bool(np.all(np.diff(v) >= -1e-12)),
        bool(np.all(np.diff(s) >= -1e-12)),
        abs(float(profile.eval(1.0))) <= 1e-12,
        bool(np.all(v <= 1e-12)),
        ("sampled check",),
    )


def _require_admissible(profile: RadialProfile) -> None:
    rep = is_radial_psh(profile)
    if not rep.admissible:
        raise ValueError(f"profile is not radial plurisubharmonic: {', '.join(rep.notes) or profile!r}")


def mixed_mass_function(profiles: Sequence[RadialProfile]) -> MassFunction:
    """Mass function of ``dd^c u_1 ^ ... ^ dd^c u_n / (2 pi)^n`` for radial ``u_i``.

    The cumulative function is ``prod_i sigma_i(t)``; atoms sit at the union of
    the kinks and the density is the product-rule derivative.
    """
    profiles = tuple(profiles)
    if not profiles:
        raise ValueError("need at least one profile")
    for p in profiles:
        _require_admissible(p)

    kinks = sorted({k for p in profiles for k in p.kinks})
    atoms = []
    for t in kinks:
        ta = np.array([t])
        right = math.prod(float(p._sigma(ta, "right")[0]) for p in profiles)
        left = math.prod(float(p._sigma(ta, "left")[0]) for p in profiles)
        if t == 0.0:
            left = math.prod(p.origin_slope for p in profiles)
        jump = right - left
        if jump < -1e-12 * max(1.0, abs(right)):
            raise ValueError(f"negative Monge-Ampere jump at t={t}: profiles are not admissible")
        if jump > 0:
            atoms.append((t, jump))
    origin = math.prod(p.origin_slope for p in profiles)
    if kinks and kinks[0] == 0.0:
        origin = 0.0  # an underflowed kink already carries the origin mass as an atom

    density = None
    if any(p.has_continuous_mass for p in profiles):
        def density(t, _ps=profiles):
            t = _arr(t)
            with np.errstate(all="ignore"):
                sig = [p._sigma(t, "left") for p in _ps]
                dsig = [p._sigma_prime(t) for p in _ps]
            total = np.zeros_like(t)
            for i in range(len(_ps)):
                term = dsig[i]
                for j in range(len(_ps)):
                    if j != i:
                        term = term * sig[j]
                total = total + term
            return total

    def cumulative(t, _ps=profiles, _origin=origin):
        t = _arr(t)
        out = np.ones_like(t)
        for p in _ps:
            out = out * p._sigma(t, "left")
        return np.where(t > 0, out, _origin + 0.0 * out)

    return MassFunction(density=density, atoms=tuple(atoms), origin_mass=origin, cumulative=cumulative)


@dataclass(frozen=True)
class MaDistribution:
    """Normalised Monge-Ampere mass function ``F`` (divide by ``(2 pi)^n``) and its total."""

    F: MassFunction
    total_mass: float
    n: int


def ma_distribution(profile: RadialProfile, n: int) -> MaDistribution:
    """``F(t) = (t U'(t))^n`` with atoms at the kinks of ``U``."""
    if int(n) != n or n < 2:
        raise ValueError("dimension n must be an integer >= 2")
    F = mixed_mass_function([profile] * int(n))
    total = float(profile.log_slope(1.0)) ** int(n)
    if math.isfinite(profile.value_at_zero) is False and F.origin_mass == 0 and not math.isfinite(total):
        total = math.inf
    return MaDistribution(F, total, int(n))


def _default_knots(size: int, t_min: float, extra: Sequence[float]) -> np.ndarray:
    knots = np.geomspace(t_min, 1.0, size)
    extra = [t for t in extra if 0.0 < t < 1.0]
    if extra:
        knots = np.unique(np.concatenate([knots, extra]))
    return knots


def solve_radial_ma(
    target: MaDistribution | MassFunction,
    n: int,
    grid_size: int = DEFAULT_GRID_SIZE,
    t_min: float = DEFAULT_GRID_TMIN,
    tol: float = 1e-13,
) -> Grid:
    """Radial ``w`` with ``w = 0`` on the sphere and ``(t w'(t))^n = F(t)``.

    Reconstructs ``w(t) = -int_t^1 F(s)**(1/n) ds / s`` on log-spaced knots
    (atom locations are added as knots so kinks are exact).  When ``F`` has
    mass at the origin, ``w(0) = -inf``.
    """
    F = target.F if isinstance(target, MaDistribution) else target
    n = int(n)
    total = F.total()
    if not math.isfinite(total):
        raise ValueError("target Monge-Ampere mass is infinite")
    if F.origin_mass == 0 and not F.atoms and F.density is None:
        return zero_profile()

    knots = _default_knots(grid_size, t_min, [t for t, _ in F.atoms])
    logk = np.log(knots)

    def root(x):
        x = _arr(x)
        return np.maximum(F(np.exp(x)), 0.0) ** (1.0 / n)

    scale = total ** (1.0 / n) * abs(logk[0])
    pieces = np.empty(knots.size - 1)
    vals, errs = gauss_kronrod(root, logk[:-1], logk[1:])
    bad = errs > tol * max(scale, 1.0) * np.diff(logk) / abs(logk[0])
    pieces[:] = vals
    for i in np.flatnonzero(bad):
        v, _, _ = _adaptive(root, logk[i], logk[i + 1], tol * max(scale, 1.0), 1.0)
        pieces[i] = v
    values = np.concatenate([-np.cumsum(pieces[::-1])[::-1], [0.0]])

    if F.origin_mass > 0:
        v0 = -math.inf
    else:
        v0 = float(values[0])
    return Grid(knots, values, v0)


def comparison_check(
    u: RadialProfile,
    p: float,
    n: int,
    t_values: Sequence[float],
    w: Grid | None = None,
    grid_size: int = DEFAULT_GRID_SIZE,
) -> list[InequalityReport]:
    """Check ``u >= t**(-p/n) w - t`` on the knots of ``w``, one report per ``t``.

    ``w`` solves ``(dd^c w)^n = (-u)^p (dd^c u)^n``; it is computed here unless
    supplied.
    """
    if w is None:
        target = ma_distribution(u, n).F.weighted(lambda s: (-u.eval(s)) ** p)
        w = solve_radial_ma(target, n, grid_size=grid_size)
    s = w.knots
    us = u.eval(s)
    ws = w.eval(s)
    reports = []
    for t in t_values:
        if not t > 0:
            raise ValueError("comparison parameter t must be positive")
        rhs_side = t ** (-p / n) * ws - t
        slack = us - rhs_side
        i = int(np.argmin(slack))
        reports.append(InequalityReport.from_sides(
            "comparison_t11_1",
            lhs=float(rhs_side[i]),
            rhs=float(us[i]),
            params={"p": p, "n": n, "t": t},
            details={"worst_s": float(s[i]), "points": int(s.size)},
        ))
    return reports


def _parse_kv(body: str) -> dict[str, float]:
    out = {}
    for part in filter(None, (x.strip() for x in body.split(","))):
        if "=" not in part:
            raise ValueError(f"expected key=value in profile spec, got {part!r}")
        key, val = part.split("=", 1)
        out[key.strip()] = float(val)
    return out


def parse_profile(text: str, n: int = 2, p: float = 1.0) -> RadialProfile:
    """Parse a profile literal.

    Accepted forms: ``truncated-log:c=6,beta=-2``, ``power:alpha=1,k=3``,
    ``quadratic`` (the Lebesgue-measure potential for dimension ``n``),
    ``quadratic:a=0.5``, ``grid:@file.csv``, ``zero``, and the example
    families ``ex1:j=5``, ``ex2:j=5``, ``ex3:j=5`` (which depend on ``n``
    and ``p``).
    """
    text = text.strip()
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "grid":
            if not body.startswith("@"):
                raise ValueError("grid profiles are given as grid:@file.csv")
            return Grid.from_csv(body[1:])
        kv = _parse_kv(body)
        if kind in ("truncated-log", "trunclog", "green"):
            return TruncatedLog(kv.pop("c"), kv.pop("beta"))
        if kind == "power":
            return Power(kv.pop("alpha"), kv.pop("k"))
        if kind == "quadratic":
            return QuadraticBall(kv["a"]) if "a" in kv else QuadraticBall.phi0(n)
        if kind == "zero":
            return zero_profile()
        if kind in ("ex1", "ex2", "ex3"):
            from .verify import example_profile
            return example_profile(kind, kv.pop("j"), p=p, n=n)
    except KeyError as exc:
        raise ValueError(f"profile spec {text!r} is missing parameter {exc.args[0]!r}") from None
    raise ValueError(f"unknown profile family {kind!r} in {text!r}")
