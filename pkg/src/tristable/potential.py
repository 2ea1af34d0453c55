"""Sextic triple-well potential: landscape classification, motion patterns, turning points.

The potential family is U(x) = k1 x^2 / 2 - k2 x^4 / 4 + k3 x^6 / 6 with all
stiffness coefficients positive.  It is tri-stable (two symmetric side wells
plus one at the origin) exactly when k2^2 - 4 k1 k3 > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "StiffnessParams",
    "Landscape",
    "MotionPattern",
    "Deepest",
    "NotTriStableError",
    "EnergyBelowMinimumError",
    "UnreachablePointError",
    "DegenerateEnergyError",
    "potential",
    "potential_deriv",
    "potential_second_deriv",
    "total_energy",
    "classify_landscape",
    "classify_motion",
    "turning_points",
    "energy_roots",
]


class PotentialError(Exception):
    """Base class for landscape / motion classification failures."""


class NotTriStableError(PotentialError):
    """k2^2 - 4 k1 k3 <= 0: the potential has a single well."""


class EnergyBelowMinimumError(PotentialError):
    """Requested energy lies below the global potential minimum."""


class UnreachablePointError(PotentialError):
    """U(x0) > H: the point is classically forbidden at this energy."""


class DegenerateEnergyError(PotentialError):
    """Energy inside a guard band around the saddle or a well bottom."""


class Deepest(Enum):
    MIDDLE = "middle"
    SIDES = "sides"
    TIE = "tie"


class MotionPattern(Enum):
    CROSS_WELL = "cross_well"
    MIDDLE_WELL = "middle_well"
    SIDE_WELL_RIGHT = "side_well_right"
    SIDE_WELL_LEFT = "side_well_left"

    @property
    def is_side(self) -> bool:
        return self in (MotionPattern.SIDE_WELL_RIGHT, MotionPattern.SIDE_WELL_LEFT)

    def mirrored(self) -> "MotionPattern":
        if self is MotionPattern.SIDE_WELL_RIGHT:
            return MotionPattern.SIDE_WELL_LEFT
        if self is MotionPattern.SIDE_WELL_LEFT:
            return MotionPattern.SIDE_WELL_RIGHT
        return self


@dataclass(frozen=True)
class StiffnessParams:
    """Coefficients of the sextic potential (linear, cubic, quintic stiffness)."""

    k1: float
    k2: float
    k3: float

    def __post_init__(self):
        for name in ("k1", "k2", "k3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")

    @property
    def discriminant(self) -> float:
        return self.k2 ** 2 - 4.0 * self.k1 * self.k3

    @property
    def tri_stable(self) -> bool:
        return self.discriminant > 0.0


def potential(x, p: StiffnessParams):
    """U(x) = k1 x^2/2 - k2 x^4/4 + k3 x^6/6.  Even in x; accepts arrays."""
    x2 = np.square(x)
    return x2 * (0.5 * p.k1 + x2 * (-0.25 * p.k2 + x2 * (p.k3 / 6.0)))


def potential_deriv(x, p: StiffnessParams):
    """dU/dx = k1 x - k2 x^3 + k3 x^5."""
    x2 = np.square(x)
    return x * (p.k1 + x2 * (-p.k2 + x2 * p.k3))


def potential_second_deriv(x, p: StiffnessParams):
    """d^2U/dx^2 = k1 - 3 k2 x^2 + 5 k3 x^4."""
    x2 = np.square(x)
    return p.k1 + x2 * (-3.0 * p.k2 + x2 * (5.0 * p.k3))


def total_energy(x, v, p: StiffnessParams):
    """H = v^2/2 + U(x)."""
    return 0.5 * np.square(v) + potential(x, p)


@dataclass(frozen=True)
class Landscape:
    """Equilibria and critical energies of a tri-stable potential.

    ``u1`` is the saddle energy; ``u2`` is the bottom energy of the
    shallower well(s), i.e. max(U(0), U(x_s)).  Side-well orbits live in
    (u_side, u1), middle-well orbits in (0, u1), cross-well orbits above u1.
    """

    params: StiffnessParams
    stable_side: float       # |x_s1|, side stable equilibrium
    unstable: float          # |x_u|, saddle position
    u_side: float            # U(x_s1)
    u1: float                # saddle energy U(x_u)
    u2: float                # max(U(0), U(x_s1))
    deepest: Deepest
    u_middle: float = 0.0    # U(0), the energy zero reference

    @property
    def u_min(self) -> float:
        """Global potential minimum energy."""
        return min(self.u_middle, self.u_side)

    def guard_eps(self) -> float:
        return 1e-9 * max(1.0, abs(self.u1))

    def well_bottom(self, pattern: MotionPattern) -> float:
        if pattern is MotionPattern.MIDDLE_WELL:
            return self.u_middle
        if pattern.is_side:
            return self.u_side
        return self.u1  # cross-well orbits degenerate onto the separatrix

    def branch_interval(self, pattern: MotionPattern) -> tuple:
        """Open energy interval on which the pattern's orbits exist."""
        if pattern is MotionPattern.CROSS_WELL:
            return (self.u1, math.inf)
        if pattern is MotionPattern.MIDDLE_WELL:
            return (self.u_middle, self.u1)
        return (self.u_side, self.u1)


def classify_landscape(p: StiffnessParams) -> Landscape:
    """Locate equilibria via the closed forms and derive the critical energies.

    Raises NotTriStableError when the discriminant k2^2 - 4 k1 k3 is not
    positive.
    """
    disc = p.discriminant
    if disc <= 0.0:
        raise NotTriStableError(
            f"k2^2 - 4*k1*k3 = {disc:.6g} <= 0: potential is mono-stable"
        )
    root = math.sqrt(disc)
    x_s = math.sqrt((p.k2 + root) / (2.0 * p.k3))
    x_u = math.sqrt((p.k2 - root) / (2.0 * p.k3))
    u_side = float(potential(x_s, p))
    u1 = float(potential(x_u, p))
    u2 = max(0.0, u_side)
    tol = 1e-12 * max(1.0, abs(u1))
    if abs(u_side) <= tol:
        deepest = Deepest.TIE
    elif u_side < 0.0:
        deepest = Deepest.SIDES
    else:
        deepest = Deepest.MIDDLE
    return Landscape(
        params=p,
        stable_side=x_s,
        unstable=x_u,
        u_side=u_side,
        u1=u1,
        u2=u2,
        deepest=deepest,
    )


def classify_motion(H: float, x0: float, land: Landscape) -> MotionPattern:
    """Motion pattern at energy H started from displacement x0.

    Above the saddle energy the orbit crosses all three wells; between u2 and
    u1 the initial condition picks the well; below u2 only the deepest well
    is accessible.
    """
    p = land.params
    if H < land.u_min:
        raise EnergyBelowMinimumError(f"H={H} below global minimum {land.u_min}")
    u_x0 = float(potential(x0, p))
    if u_x0 > H + 1e-12 * max(1.0, abs(H)):
        raise UnreachablePointError(f"U(x0)={u_x0:.6g} exceeds H={H:.6g}")

    eps = land.guard_eps()
    if abs(H - land.u1) < eps:
        raise DegenerateEnergyError(f"H={H} within guard band of saddle energy u1")

    if H > land.u1:
        return MotionPattern.CROSS_WELL

    if H > land.u2:
        # both well types exist; the forbidden zone straddles x_u
        if abs(x0) < land.unstable:
            pattern = MotionPattern.MIDDLE_WELL
        elif x0 > 0:
            pattern = MotionPattern.SIDE_WELL_RIGHT
        else:
            pattern = MotionPattern.SIDE_WELL_LEFT
    else:
        # only the deepest well is accessible
        if land.deepest is Deepest.MIDDLE:
            pattern = MotionPattern.MIDDLE_WELL
        elif land.deepest is Deepest.SIDES:
            pattern = (
                MotionPattern.SIDE_WELL_RIGHT if x0 >= 0
                else MotionPattern.SIDE_WELL_LEFT
            )
        else:
            raise DegenerateEnergyError("tied well depths: branch selection ambiguous")

    if abs(H - land.well_bottom(pattern)) < eps:
        raise DegenerateEnergyError(f"H={H} within guard band of well bottom")
    return pattern


# --- cubic machinery in y = x^2 ------------------------------------------
#
# 2H - 2U(x) = c3 y^3 + c2 y^2 + c1 y + c0 with
#   c3 = -k3/3, c2 = k2/2, c1 = -k1, c0 = 2H.
# Turning points are the positive real roots of this cubic.

def _cubic_coeffs(H: float, p: StiffnessParams):
    return (-p.k3 / 3.0, 0.5 * p.k2, -p.k1, 2.0 * H)


def _solve_cubic_trig(b: float, c: float, d: float):
    """Real roots of y^3 + b y^2 + c y + d = 0 (Viete / Cardano).

    Returns (roots, n_real) where roots holds 1 or 3 real roots.  Near a
    degenerate (double-root) discriminant the caller should fall back to
    bisection between the critical points of U.
    """
    shift = b / 3.0
    q = c - b * b / 3.0                      # depressed: t^3 + q t + r
    r = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = -4.0 * q ** 3 - 27.0 * r ** 2
    if q < 0.0 and disc > 0.0:
        # three distinct real roots
        m = 2.0 * math.sqrt(-q / 3.0)
        arg = 3.0 * r / (q * m)
        arg = min(1.0, max(-1.0, arg))
        theta = math.acos(arg) / 3.0
        roots = [m * math.cos(theta - 2.0 * math.pi * k / 3.0) - shift
                 for k in range(3)]
        return sorted(roots), 3
    # single real root (Cardano, numerically stable branch)
    if r == 0.0 and q >= 0.0:
        return [-shift], 1
    u = math.sqrt(max(0.0, r * r / 4.0 + q ** 3 / 27.0))
    s = -r / 2.0
    cbrt1 = math.copysign(abs(s + u) ** (1.0 / 3.0), s + u)
    cbrt2 = math.copysign(abs(s - u) ** (1.0 / 3.0), s - u)
    return [cbrt1 + cbrt2 - shift], 1


def _cubic_discriminant_rel(b: float, c: float, d: float) -> float:
    """Discriminant of the monic cubic, scaled to its natural magnitude."""
    q = c - b * b / 3.0
    r = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = -4.0 * q ** 3 - 27.0 * r ** 2
    scale = max(abs(q) ** 3, r * r, 1e-300)
    return disc / scale


def energy_roots(H: float, p: StiffnessParams):
    """Real roots (in y = x^2) of U(x) = H, Newton-polished, ascending.

    Uses the trigonometric closed form; falls back to bisection between the
    critical points of the cubic when the discriminant is nearly degenerate.
    """
    c3, c2, c1, c0 = _cubic_coeffs(H, p)
    # monic form: y^3 + b y^2 + c y + d
    b, c, d = c2 / c3, c1 / c3, c0 / c3
    if abs(_cubic_discriminant_rel(b, c, d)) < 1e-12:
        roots = _bisect_cubic_roots(b, c, d)
    else:
        roots, _ = _solve_cubic_trig(b, c, d)
    poly = lambda y: ((y + b) * y + c) * y + d
    dpoly = lambda y: (3.0 * y + 2.0 * b) * y + c
    polished = []
    for y in roots:
        for _ in range(3):
            f, df = poly(y), dpoly(y)
            if df != 0.0:
                step = f / df
                if abs(step) > 1.0 + abs(y):
                    break
                y -= step
        polished.append(y)
    return sorted(polished)


def _bisect_cubic_roots(b: float, c: float, d: float):
    """Bracketed bisection between critical points of the monic cubic."""
    poly = lambda y: ((y + b) * y + c) * y + d
    crit_disc = 4.0 * b * b - 12.0 * c
    span = 1.0 + abs(b) + abs(c) + abs(d)
    if crit_disc <= 0.0:
        brackets = [(-span, span)]
    else:
        s = math.sqrt(crit_disc)
        y_lo, y_hi = (-2.0 * b - s) / 6.0, (-2.0 * b + s) / 6.0
        brackets = [(y_lo - span, y_lo), (y_lo, y_hi), (y_hi, y_hi + span)]
    roots = []
    for lo, hi in brackets:
        flo, fhi = poly(lo), poly(hi)
        if flo == 0.0:
            roots.append(lo)
            continue
        if flo * fhi > 0.0:
            continue
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = poly(mid)
            if fm == 0.0 or hi - lo < 1e-16 * max(1.0, abs(mid)):
                break
            if flo * fm < 0.0:
                hi = mid
            else:
                lo, flo = mid, fm
        roots.append(0.5 * (lo + hi))
    return sorted(set(roots))


def _polish_turning_point(x: float, H: float, p: StiffnessParams) -> float:
    """Newton in x on U(x) - H = 0 until 1e-10 relative residual."""
    tol = 1e-10 * max(1.0, abs(H))
    for _ in range(50):
        f = float(potential(x, p)) - H
        if abs(f) <= tol:
            return x
        df = float(potential_deriv(x, p))
        if df == 0.0:
            break
        x -= f / df
    f = float(potential(x, p)) - H
    if abs(f) > tol:
        raise DegenerateEnergyError(
            f"turning point at H={H:.6g} did not converge (residual {f:.3g})"
        )
    return x


def turning_points(H: float, pattern: MotionPattern, p: StiffnessParams) -> np.ndarray:
    """Displacements where U(x) = H, for the given motion pattern.

    Cross-well: {-x_c, x_c}.  Middle well: {-x_a, x_a}.  Side well (right):
    {x_b, x_c} with 0 < x_b < x_c; the left well mirrors it.  Every returned
    x satisfies |U(x) - H| <= 1e-10 * max(1, |H|).
    """
    land = classify_landscape(p)
    eps = land.guard_eps()
    lo, hi = land.branch_interval(pattern)
    if not (lo + eps < H and (math.isinf(hi) or H < hi - eps)):
        raise DegenerateEnergyError(
            f"H={H:.6g} outside open interval ({lo:.6g}, {hi:.6g}) for {pattern}"
        )
    ys = [y for y in energy_roots(H, p) if y > 0.0]
    xs = [math.sqrt(y) for y in ys]
    if pattern is MotionPattern.CROSS_WELL:
        if not xs:
            raise DegenerateEnergyError(f"no turning point above saddle at H={H}")
        x_c = _polish_turning_point(max(xs), H, p)
        return np.array([-x_c, x_c])
    if pattern is MotionPattern.MIDDLE_WELL:
        x_a = _polish_turning_point(min(xs), H, p)
        return np.array([-x_a, x_a])
    if len(xs) < 2:
        raise DegenerateEnergyError(
            f"side-well turning points degenerate at H={H:.6g}"
        )
    x_b = _polish_turning_point(sorted(xs)[-2], H, p)
    x_c = _polish_turning_point(sorted(xs)[-1], H, p)
    if pattern is MotionPattern.SIDE_WELL_LEFT:
        return np.array([-x_c, -x_b])
    return np.array([x_b, x_c])
