"""Energy-dependent period, frequency and period-averaged moments of the
conservative orbits, plus tabulation with monotone-cubic interpolation.

The orbit integrals all carry an inverse-square-root singularity at the
turning points.  The radicand 2H - 2U(x) is a cubic in y = x^2 whose active
roots are known exactly, so a sine substitution absorbs the singularity
analytically and leaves a smooth integrand for Gauss-Legendre panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from .potential import (
    DegenerateEnergyError,
    Landscape,
    MotionPattern,
    StiffnessParams,
    classify_landscape,
    energy_roots,
    turning_points,
)
from .quadrature import adaptive_gauss

__all__ = [
    "Orbit",
    "OrbitMoments",
    "GridSpec",
    "BranchTable",
    "EnergyFunctionTable",
    "InvalidGridSpecError",
    "OutsideBranchError",
    "period",
    "frequency",
    "time_average",
    "orbit_data",
    "build_energy_table",
]

_MOMENT_NAMES = ("m_v2", "m_x", "m_x2", "m_v2x", "m_v2x2")


class InvalidGridSpecError(Exception):
    pass


class OutsideBranchError(Exception):
    """Interpolation query outside a branch's validity interval."""


@dataclass(frozen=True)
class OrbitMoments:
    """Period averages over one closed orbit: <v^2>, <x>, <x^2>, <v^2 x>, <v^2 x^2>."""

    m_v2: float
    m_x: float
    m_x2: float
    m_v2x: float
    m_v2x2: float

    def mirrored(self) -> "OrbitMoments":
        """Moments of the mirror-image (left side-well) orbit."""
        return OrbitMoments(self.m_v2, -self.m_x, self.m_x2, -self.m_v2x, self.m_v2x2)


@dataclass(frozen=True)
class Orbit:
    h: float
    pattern: MotionPattern
    turning: np.ndarray
    period: float

    @property
    def freq(self) -> float:
        return 2.0 * math.pi / self.period


def _deflated_quadratic(H: float, p: StiffnessParams, y_root: float):
    """Coefficients (b2, b1, b0) with 2H - 2U = (y_root - y) * -(b2 y^2 + b1 y + b0)."""
    c3, c2, c1 = -p.k3 / 3.0, 0.5 * p.k2, -p.k1
    b2 = c3
    b1 = c2 + c3 * y_root
    b0 = c1 + b1 * y_root
    return b2, b1, b0


def _integrals_inner(H: float, x_t: float, p: StiffnessParams, powers, kinds):
    """Quarter-orbit integrals over [0, x_t] for middle/cross patterns.

    kind 'I': integral of x^n / sqrt(2H-2U) dx;
    kind 'J': integral of x^n * sqrt(2H-2U) dx.
    Substitution x = x_t sin(theta) cancels the turning-point singularity.
    """
    y_t = x_t * x_t
    b2, b1, b0 = _deflated_quadratic(H, p, y_t)
    out = []
    for n, kind in zip(powers, kinds):
        def f(theta, n=n, kind=kind):
            s = np.sin(theta)
            y = y_t * s * s
            q = -((b2 * y + b1) * y + b0)
            q = np.maximum(q, 0.0)
            xn = (x_t * s) ** n if n else 1.0
            if kind == "I":
                return xn / np.sqrt(q)
            c = np.cos(theta)
            return xn * y_t * c * c * np.sqrt(q)
        out.append(adaptive_gauss(f, 0.0, 0.5 * math.pi))
    return out


def _integrals_side(H: float, x_b: float, x_c: float, y1: float,
                    p: StiffnessParams, powers, kinds):
    """Half-orbit integrals over [x_b, x_c] for the right side well.

    Substitution x = m + r sin(theta) absorbs both turning-point roots;
    y1 is the remaining (real) root of the cubic in y = x^2.
    """
    m = 0.5 * (x_b + x_c)
    r = 0.5 * (x_c - x_b)
    k3_3 = p.k3 / 3.0
    out = []
    for n, kind in zip(powers, kinds):
        def f(theta, n=n, kind=kind):
            s = np.sin(theta)
            x = m + r * s
            y = x * x
            g = k3_3 * (y - y1) * (x + x_b) * (x_c + x)
            g = np.maximum(g, 0.0)
            xn = x ** n if n else 1.0
            if kind == "I":
                return xn / np.sqrt(g)
            c = np.cos(theta)
            return xn * r * r * c * c * np.sqrt(g)
        out.append(adaptive_gauss(f, -0.5 * math.pi, 0.5 * math.pi))
    return out


def orbit_data(H: float, pattern: MotionPattern, p: StiffnessParams):
    """(period, OrbitMoments) of the conservative orbit at energy H."""
    if pattern is MotionPattern.SIDE_WELL_LEFT:
        T, mom = orbit_data(H, MotionPattern.SIDE_WELL_RIGHT, p)
        return T, mom.mirrored()

    tp = turning_points(H, pattern, p)
    if pattern is MotionPattern.SIDE_WELL_RIGHT:
        x_b, x_c = tp
        ys = energy_roots(H, p)
        y1 = min(ys)  # third cubic root; real for every side-well energy
        I0, I1, I2, J0, J1, J2 = _integrals_side(
            H, x_b, x_c, y1, p,
            powers=(0, 1, 2, 0, 1, 2), kinds=("I", "I", "I", "J", "J", "J"))
        T = 2.0 * I0
        mom = OrbitMoments(
            m_v2=J0 / I0, m_x=I1 / I0, m_x2=I2 / I0,
            m_v2x=J1 / I0, m_v2x2=J2 / I0)
        return T, mom

    x_t = tp[-1]
    I0, I2, J0, J2 = _integrals_inner(
        H, x_t, p, powers=(0, 2, 0, 2), kinds=("I", "I", "J", "J"))
    T = 4.0 * I0
    # x-symmetric orbit: odd moments vanish identically
    mom = OrbitMoments(m_v2=J0 / I0, m_x=0.0, m_x2=I2 / I0,
                       m_v2x=0.0, m_v2x2=J2 / I0)
    return T, mom


def period(H: float, pattern: MotionPattern, p: StiffnessParams) -> float:
    """Period T(H) of the conservative orbit (quadrature, rel. error <= 1e-8)."""
    if pattern is MotionPattern.SIDE_WELL_LEFT:
        pattern = MotionPattern.SIDE_WELL_RIGHT
    tp = turning_points(H, pattern, p)
    if pattern is MotionPattern.SIDE_WELL_RIGHT:
        x_b, x_c = tp
        y1 = min(energy_roots(H, p))
        (I0,) = _integrals_side(H, x_b, x_c, y1, p, powers=(0,), kinds=("I",))
        return 2.0 * I0
    (I0,) = _integrals_inner(H, tp[-1], p, powers=(0,), kinds=("I",))
    return 4.0 * I0


def frequency(H: float, pattern: MotionPattern, p: StiffnessParams) -> float:
    """Angular frequency omega(H) = 2 pi / T(H)."""
    return 2.0 * math.pi / period(H, pattern, p)


def time_average(H: float, pattern: MotionPattern, p: StiffnessParams) -> OrbitMoments:
    """Period-averaged orbit moments at energy H."""
    return orbit_data(H, pattern, p)[1]


# --- tabulation ----------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Per-branch energy grid: n points, endpoint margins relative to span."""

    n: int = 64
    h_max: float | None = None
    lo_margin: float = 1e-6
    hi_margin: float = 1e-6

    def __post_init__(self):
        if self.n < 16:
            raise InvalidGridSpecError(f"need >= 16 points per branch, got {self.n}")
        if not (0 < self.lo_margin < 1 and 0 < self.hi_margin < 1):
            raise InvalidGridSpecError("margins must lie in (0, 1)")


def _two_sided_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Geometric ladders from both endpoints, merged; resolves edge behavior."""
    span = hi - lo
    half = n // 2
    t = np.geomspace(1e-6, 0.5, half)
    pts = np.concatenate([lo + span * t[:-1], [lo + 0.5 * span],
                          hi - span * t[-2::-1]])
    pts = np.unique(pts)
    # drop near-duplicates that would destabilize monotone interpolation
    keep = np.concatenate([[True], np.diff(pts) > 1e-12 * span])
    return pts[keep]


@dataclass
class BranchTable:
    pattern: MotionPattern
    h: np.ndarray
    period: np.ndarray
    moments: dict
    _period_interp: PchipInterpolator = field(repr=False, default=None)
    _moment_interp: dict = field(repr=False, default=None)

    def __post_init__(self):
        self._period_interp = PchipInterpolator(self.h, self.period)
        self._moment_interp = {
            k: PchipInterpolator(self.h, v) for k, v in self.moments.items()
        }

    @property
    def interval(self) -> tuple:
        return float(self.h[0]), float(self.h[-1])

    def _check(self, H, clamp: bool):
        lo, hi = self.interval
        H = np.asarray(H, dtype=float)
        if clamp:
            return np.clip(H, lo, hi)
        if np.any(H < lo) or np.any(H > hi):
            raise OutsideBranchError(
                f"H outside branch {self.pattern.value} table [{lo:.6g}, {hi:.6g}]"
            )
        return H

    def period_at(self, H, clamp=False):
        return self._period_interp(self._check(H, clamp))

    def omega_at(self, H, clamp=False):
        return 2.0 * math.pi / self.period_at(H, clamp)

    def moment_at(self, name: str, H, clamp=False):
        return self._moment_interp[name](self._check(H, clamp))


@dataclass
class EnergyFunctionTable:
    """Tabulated T, omega and orbit moments per motion-pattern branch."""

    params: StiffnessParams
    landscape: Landscape
    branches: dict

    def branch(self, pattern: MotionPattern) -> BranchTable:
        if pattern is MotionPattern.SIDE_WELL_LEFT:
            pattern = MotionPattern.SIDE_WELL_RIGHT
        return self.branches[pattern]

    def moments_at(self, pattern: MotionPattern, H, clamp=False) -> OrbitMoments:
        bt = self.branch(pattern)
        vals = {k: float(bt.moment_at(k, H, clamp)) for k in _MOMENT_NAMES}
        mom = OrbitMoments(**vals)
        if pattern is MotionPattern.SIDE_WELL_LEFT:
            mom = mom.mirrored()
        return mom


def build_energy_table(p: StiffnessParams, spec: GridSpec = GridSpec(),
                       land: Landscape | None = None) -> EnergyFunctionTable:
    """Tabulate every branch of the tri-stable landscape on clustered grids.

    A quadrature failure at any grid point aborts the build, reporting the
    offending energy.
    """
    land = land or classify_landscape(p)
    h_max = spec.h_max
    if h_max is None:
        h_max = land.u1 + max(1.0, 10.0 * (land.u1 - land.u_min))
    if h_max <= land.u1:
        raise InvalidGridSpecError(f"h_max={h_max} must exceed u1={land.u1}")

    intervals = {
        MotionPattern.MIDDLE_WELL: (land.u_middle, land.u1),
        MotionPattern.SIDE_WELL_RIGHT: (land.u_side, land.u1),
        MotionPattern.CROSS_WELL: (land.u1, h_max),
    }
    branches = {}
    guard = 2.0 * land.guard_eps()
    for pattern, (lo, hi) in intervals.items():
        span = hi - lo
        # margins must clear the guard band around u1 and the well bottoms
        # even when the branch interval itself is tiny
        grid = _two_sided_grid(lo + max(spec.lo_margin * span, guard),
                               hi - max(spec.hi_margin * span, guard),
                               spec.n)
        periods = np.empty_like(grid)
        moments = {k: np.empty_like(grid) for k in _MOMENT_NAMES}
        for i, H in enumerate(grid):
            try:
                T, mom = orbit_data(float(H), pattern, p)
            except Exception as exc:
                raise type(exc)(
                    f"table build failed on branch {pattern.value} at H={H!r}: {exc}"
                ) from exc
            periods[i] = T
            for k in _MOMENT_NAMES:
                moments[k][i] = getattr(mom, k)
        branches[pattern] = BranchTable(pattern, grid, periods, moments)
    return EnergyFunctionTable(params=p, landscape=land, branches=branches)
