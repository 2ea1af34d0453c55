"""Stochastic averaging of the energy envelope: drift/diffusion of H(t) and
stationary probability densities for the colored-noise tri-stable oscillator.

Case I is the additive-noise system (linear damping, one Ornstein-Uhlenbeck
channel); Case II adds a multiplicative channel with cross-correlation.  The
stationary density of the energy diffusion is evaluated either in an explicit
closed form (Case I only) or by direct integration of the drift/diffusion
ratio per motion-pattern branch, with branch constants fixed by continuity of
the joint density across the separatrix energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.interpolate import PchipInterpolator

from .orbit import (
    EnergyFunctionTable,
    GridSpec,
    OrbitMoments,
    build_energy_table,
)
from .potential import (
    Landscape,
    MotionPattern,
    StiffnessParams,
    classify_landscape,
    potential,
    potential_deriv,
    total_energy,
)

__all__ = [
    "NoiseSpec",
    "NoisePairSpec",
    "DampingParams",
    "Case1Params",
    "Case2Params",
    "DriftDiffusion",
    "DensityKind",
    "Form",
    "DensityTable",
    "NonIntegrableError",
    "SpdModel",
    "drift_diffusion_case1",
    "drift_diffusion_case2",
    "spd_energy",
    "spd_joint",
    "spd_joint_table",
    "spd_marginals",
    "spd_amplitude",
    "spd_fixed_frequency_baseline",
]


class NonIntegrableError(Exception):
    """The stationary density cannot be normalized (e.g. zero noise)."""


@dataclass(frozen=True)
class NoiseSpec:
    """Exponentially correlated (OU) noise: intensity d, correlation time tau.

    Spectral density S(omega) = d / (1 + tau^2 omega^2); tau = 0 is the
    white-noise limit with flat spectrum d.
    """

    d: float
    tau: float

    def __post_init__(self):
        if self.d < 0 or not math.isfinite(self.d):
            raise ValueError(f"noise intensity must be >= 0, got {self.d}")
        if self.tau < 0 or not math.isfinite(self.tau):
            raise ValueError(f"correlation time must be >= 0, got {self.tau}")

    def spectral(self, omega):
        return self.d / (1.0 + (self.tau * np.asarray(omega, float)) ** 2)


@dataclass(frozen=True)
class NoisePairSpec:
    """Additive channel n1, multiplicative channel n2, cross-correlation lam."""

    n1: NoiseSpec
    n2: NoiseSpec
    lam: float = 0.0

    def __post_init__(self):
        if abs(self.lam) > 1.0:
            raise ValueError(f"|lambda| must be <= 1, got {self.lam}")

    def cross_spectral(self, omega):
        # the cross term carries the (tau1*tau2)^2 omega^2 denominator
        w2 = np.asarray(omega, float) ** 2
        return (self.lam * math.sqrt(self.n1.d * self.n2.d)
                / (1.0 + (self.n1.tau * self.n2.tau) ** 2 * w2))


@dataclass(frozen=True)
class DampingParams:
    beta: float
    beta1: float = 0.0

    def __post_init__(self):
        for name in ("beta", "beta1"):
            v = getattr(self, name)
            if v < 0 or not math.isfinite(v):
                raise ValueError(f"{name} must be >= 0 and finite, got {v}")


@dataclass(frozen=True)
class Case1Params:
    """Additive colored noise, linear damping (beta1 forced to zero)."""

    stiffness: StiffnessParams
    damping: DampingParams
    noise: NoiseSpec

    def __post_init__(self):
        if self.damping.beta1 != 0.0:
            raise ValueError("Case I has linear damping only (beta1 = 0)")


@dataclass(frozen=True)
class Case2Params:
    """Additive + multiplicative cross-correlated colored noise."""

    stiffness: StiffnessParams
    damping: DampingParams
    pair: NoisePairSpec


@dataclass(frozen=True)
class DriftDiffusion:
    m: float
    sigma2: float
    branch: MotionPattern


class DensityKind(Enum):
    ENERGY = "energy"
    JOINT = "joint"
    MARGINAL_X = "marginal_x"
    MARGINAL_V = "marginal_v"
    AMPLITUDE = "amplitude"


class Form(Enum):
    CLOSED = "closed"
    INTEGRAL = "integral"


@dataclass
class DensityTable:
    """Tabulated stationary density, normalized to 1 on its own support."""

    kind: DensityKind
    grids: tuple
    values: np.ndarray
    c0: float
    form: Form
    metadata: dict = field(default_factory=dict)

    def integral(self) -> float:
        vals = self.values
        if len(self.grids) == 1:
            return float(np.trapezoid(vals, self.grids[0]))
        inner = np.trapezoid(vals, self.grids[1], axis=1)
        return float(np.trapezoid(inner, self.grids[0]))


def _dd_case1(m_v2, omega, damp: DampingParams, noise: NoiseSpec):
    s1 = noise.spectral(omega)
    m = -damp.beta * m_v2 + s1
    sigma2 = 2.0 * s1 * m_v2
    return m, sigma2


def _dd_case2(mom: OrbitMoments, omega, damp: DampingParams, pair: NoisePairSpec):
    s1 = pair.n1.spectral(omega)
    s2 = pair.n2.spectral(omega)
    sx = pair.cross_spectral(omega)
    m = (-(damp.beta * mom.m_v2 + damp.beta1 * mom.m_v2x2)
         + s1 + s2 * mom.m_x2 + 2.0 * sx * mom.m_x)
    sigma2 = (2.0 * s1 * mom.m_v2 + 2.0 * s2 * mom.m_v2x2
              + 4.0 * sx * mom.m_v2x)
    return m, sigma2


def drift_diffusion_case1(H: float, branch: MotionPattern, damp: DampingParams,
                          n1: NoiseSpec, p: StiffnessParams,
                          table: EnergyFunctionTable | None = None) -> DriftDiffusion:
    """Drift m(H) and diffusion sigma^2(H) of the energy process, Case I."""
    m_v2, omega = _branch_mv2_omega(H, branch, p, table)
    m, s2 = _dd_case1(m_v2, omega, damp, n1)
    return DriftDiffusion(m=float(m), sigma2=float(s2), branch=branch)


def drift_diffusion_case2(H: float, branch: MotionPattern, damp: DampingParams,
                          pair: NoisePairSpec, p: StiffnessParams,
                          table: EnergyFunctionTable | None = None) -> DriftDiffusion:
    """Drift and diffusion of the energy process for the two-channel system."""
    mom, omega = _branch_moments_omega(H, branch, p, table)
    m, s2 = _dd_case2(mom, omega, damp, pair)
    return DriftDiffusion(m=float(m), sigma2=float(s2), branch=branch)


def _branch_moments_omega(H, branch, p, table):
    if table is not None:
        bt = table.branch(branch)
        omega = float(bt.omega_at(H))
        mom = table.moments_at(branch, H)
    else:
        from .orbit import orbit_data
        T, mom = orbit_data(H, branch, p)
        omega = 2.0 * math.pi / T
    return mom, omega


def _branch_mv2_omega(H, branch, p, table):
    mom, omega = _branch_moments_omega(H, branch, p, table)
    return mom.m_v2, omega


_BRANCHES = (
    MotionPattern.MIDDLE_WELL,
    MotionPattern.SIDE_WELL_RIGHT,
    MotionPattern.SIDE_WELL_LEFT,
    MotionPattern.CROSS_WELL,
)


class SpdModel:
    """Per-branch log joint density psi(H) with continuity matching at u1.

    The unnormalized joint density on a branch is exp(psi_b(H)); the energy
    density contribution of the branch is T_b(H) exp(psi_b(H)).  Closed form
    (Case I only) uses an explicit antiderivative; integral form
    accumulates 2 m / sigma^2 - 1 / <v^2> from the branch's lowest tabulated
    energy, with branch constants fixed by matching the joint density across
    the separatrix.
    """

    def __init__(self, params, form: Form = Form.CLOSED,
                 table: EnergyFunctionTable | None = None,
                 grid: GridSpec | None = None,
                 h_max: float | None = None,
                 fixed_omega: float | None = None):
        self.params = params
        self.form = form
        self.fixed_omega = fixed_omega
        if isinstance(params, Case1Params):
            self.case1 = True
            self.noise = params.noise
            if params.noise.d <= 0:
                raise NonIntegrableError("Case I needs positive noise intensity")
        elif isinstance(params, Case2Params):
            self.case1 = False
            self.pair = params.pair
            if params.pair.n1.d <= 0 and params.pair.n2.d <= 0:
                raise NonIntegrableError("Case II needs some noise intensity")
            if form is Form.CLOSED:
                raise NonIntegrableError(
                    "no closed-form density for Case II; use integral form")
        else:
            raise TypeError(f"unsupported parameter bundle {type(params)}")
        self.stiffness = params.stiffness
        self.damping = params.damping
        self.land: Landscape = classify_landscape(self.stiffness)
        if h_max is None:
            h_max = self._auto_h_max()
        self.h_max = h_max
        if table is None:
            spec = grid or GridSpec()
            spec = GridSpec(n=spec.n, h_max=h_max, lo_margin=spec.lo_margin,
                            hi_margin=spec.hi_margin)
            table = build_energy_table(self.stiffness, spec, self.land)
        self.table = table
        self._build_psi()
        self._normalize()

    # -- construction ----------------------------------------------------

    def _auto_h_max(self) -> float:
        """Upper energy cutoff: exponential tail below ~1e-18 of the peak."""
        if self.case1:
            d_eff = self.noise.d
        else:
            d_eff = max(self.pair.n1.d, self.pair.n2.d)
        beta = max(self.damping.beta, 1e-3)
        return self.land.u1 + max(0.5, 42.0 * d_eff / beta)

    def _raw_psi(self, branch: MotionPattern, h: np.ndarray) -> np.ndarray:
        """Unnormalized log joint density before continuity offsets."""
        bt = self.table.branch(branch)
        if self.fixed_omega is not None:
            omega = np.full_like(h, self.fixed_omega)
        else:
            omega = bt.omega_at(h)
        if self.form is Form.CLOSED:
            n = self.noise
            fac = 1.0 + (n.tau * omega) ** 2
            return np.log(fac / n.d) - self.damping.beta * fac * h / n.d
        # integral form
        moments = {k: bt.moment_at(k, h) for k in
                   ("m_v2", "m_x", "m_x2", "m_v2x", "m_v2x2")}
        if branch is MotionPattern.SIDE_WELL_LEFT:
            moments["m_x"] = -moments["m_x"]
            moments["m_v2x"] = -moments["m_v2x"]
        m_v2 = moments["m_v2"]
        if self.case1:
            m, s2 = _dd_case1(m_v2, omega, self.damping, self.noise)
        else:
            mom = OrbitMoments(**moments)
            m, s2 = _dd_case2(mom, omega, self.damping, self.pair)
        if np.any(s2 <= 0):
            raise NonIntegrableError(
                f"diffusion coefficient not positive on branch {branch.value}; "
                "the cross-correlation spectral term of the averaged equations "
                "can overwhelm the direct terms at large |lambda|")
        integrand = 2.0 * m / s2 - 1.0 / m_v2
        accum = np.concatenate([[0.0], np.cumsum(
            0.5 * (integrand[1:] + integrand[:-1]) * np.diff(h))])
        return np.log(m_v2 / s2) + accum

    def _build_psi(self):
        self._psi = {}
        self._h_grids = {}
        land = self.land
        for branch in _BRANCHES:
            bt = self.table.branch(branch)
            h = bt.h
            self._h_grids[branch] = h
            self._psi[branch] = self._raw_psi(branch, h)
        # continuity of the joint density across the separatrix: anchor on
        # the middle branch, shift the others to match at their u1-edge
        ref = self._psi[MotionPattern.MIDDLE_WELL][-1]
        for branch in (MotionPattern.SIDE_WELL_RIGHT,
                       MotionPattern.SIDE_WELL_LEFT):
            self._psi[branch] += ref - self._psi[branch][-1]
        cross = MotionPattern.CROSS_WELL
        self._psi[cross] += ref - self._psi[cross][0]
        self._psi_interp = {
            b: PchipInterpolator(self._h_grids[b], self._psi[b])
            for b in _BRANCHES
        }

    def _x_breakpoints(self) -> list:
        """Positive x values where the v-integration segment structure changes."""
        from .potential import energy_roots
        xlim = self._x_support_limit()
        pts = {0.0, xlim}
        for th in (self.land.u_middle, self.land.u_side, self.land.u1):
            for y in energy_roots(th, self.stiffness):
                if y > 0:
                    x = math.sqrt(y)
                    if 0 < x < xlim:
                        pts.add(x)
        return sorted(pts)

    def _raw_marginal(self, x_arr: np.ndarray, shift: float,
                      order: int = 64) -> np.ndarray:
        """integral over v of exp(raw log joint - shift), per x (both signs of v)."""
        from .quadrature import _nodes
        gx, gw = _nodes(order)
        xs, vs, ws, idx = [], [], [], []
        x_arr = np.atleast_1d(np.asarray(x_arr, float))
        for i, x in enumerate(x_arr):
            cuts = self._v_segments(float(x))
            if cuts is None:
                continue
            for lo, hi in zip(cuts[:-1], cuts[1:]):
                mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
                if half <= 0:
                    continue
                xs.append(np.full(order, x))
                vs.append(mid + half * gx)
                ws.append(half * gw)
                idx.append(np.full(order, i, dtype=int))
        values = np.zeros(len(x_arr))
        if xs:
            dens = np.exp(self._log_joint_raw(np.concatenate(xs),
                                              np.concatenate(vs)) - shift)
            np.add.at(values, np.concatenate(idx), dens * np.concatenate(ws))
        return 2.0 * values  # density even in v

    def _normalize(self):
        """C0 from the requirement that the joint density integrate to 1.

        Phase-plane quadrature of exp(psi): adaptive Gauss in x between the
        points where the v-segment structure changes, exact-split Gauss in v.
        """
        from .quadrature import adaptive_gauss
        peak = max(float(np.max(v)) for v in self._psi.values())
        self._psi_shift = peak
        bps = self._x_breakpoints()
        f = lambda xa: self._raw_marginal(xa, peak)
        total = 0.0
        for sign in (1.0, -1.0):
            for a, b in zip(bps[:-1], bps[1:]):
                total += abs(adaptive_gauss(
                    lambda xa: f(sign * xa), a, b, rel_tol=1e-9))
        if not (math.isfinite(total) and total > 0):
            raise NonIntegrableError("normalization integral diverged")
        self._log_c0 = -math.log(total) - peak
        self.c0 = math.exp(self._log_c0)

    # -- branch classification (vectorized, clamping) --------------------

    def _branch_masks(self, X, H):
        land = self.land
        cross = H > land.u1
        absx = np.abs(X)
        inner = absx < land.unstable
        middle = ~cross & inner
        side_r = ~cross & ~inner & (X >= 0)
        side_l = ~cross & ~inner & (X < 0)
        return {
            MotionPattern.MIDDLE_WELL: middle,
            MotionPattern.SIDE_WELL_RIGHT: side_r,
            MotionPattern.SIDE_WELL_LEFT: side_l,
            MotionPattern.CROSS_WELL: cross,
        }

    def _log_joint_raw(self, X, V):
        """Unnormalized log joint density; -inf outside support."""
        X = np.asarray(X, float)
        V = np.asarray(V, float)
        H = total_energy(X, V, self.stiffness)
        out = np.full(np.broadcast(X, V, H).shape, -np.inf)
        H = np.broadcast_to(H, out.shape)
        Xb = np.broadcast_to(X, out.shape)
        masks = self._branch_masks(Xb, H)
        for b, mask in masks.items():
            if not np.any(mask):
                continue
            grid = self._h_grids[b]
            hv = np.clip(H[mask], grid[0], grid[-1])
            vals = self._psi_interp[b](hv)
            # outside-branch energies carry no density
            bad = (H[mask] > self.h_max)
            vals = np.where(bad, -np.inf, vals)
            out[mask] = vals
        return out

    def log_joint(self, X, V):
        """log of the normalized joint density; -inf outside support."""
        return self._log_joint_raw(X, V) + self._log_c0

    def joint(self, X, V):
        """Normalized stationary joint density p(x, v)."""
        res = np.exp(self.log_joint(X, V))
        if res.ndim == 0:
            return float(res)
        return res

    # -- density tables --------------------------------------------------

    def _meta(self, **extra) -> dict:
        meta = {
            "case": "case1" if self.case1 else "case2",
            "form": self.form.value,
            "c0": self.c0,
            "h_max": self.h_max,
            "stiffness": vars(self.stiffness) | {},
            "damping": {"beta": self.damping.beta, "beta1": self.damping.beta1},
            "branch_intervals": {
                b.value: self.table.branch(b).interval for b in _BRANCHES
            },
        }
        if self.case1:
            meta["noise"] = {"d": self.noise.d, "tau": self.noise.tau}
        else:
            meta["noise_pair"] = {
                "d1": self.pair.n1.d, "tau1": self.pair.n1.tau,
                "d2": self.pair.n2.d, "tau2": self.pair.n2.tau,
                "lambda": self.pair.lam,
            }
        meta.update(extra)
        return meta

    def energy_density(self, n_points: int = 400) -> DensityTable:
        """Combined p(H) (sum of branch contributions) plus per-branch curves."""
        h_lo = self.land.u_min
        grid = np.linspace(h_lo, self.h_max, n_points)
        combined = np.zeros_like(grid)
        per_branch = {}
        for b in _BRANCHES:
            bh = self._h_grids[b]
            mask = (grid >= bh[0]) & (grid <= bh[-1])
            vals = np.zeros_like(grid)
            if np.any(mask):
                T = self.table.branch(b).period_at(grid[mask])
                vals[mask] = T * np.exp(
                    self._psi_interp[b](grid[mask]) + self._log_c0)
            per_branch[b.value] = vals
            combined += vals
        norm = float(np.trapezoid(combined, grid))
        if norm <= 0:
            raise NonIntegrableError("energy density has no mass on the grid")
        return DensityTable(
            kind=DensityKind.ENERGY, grids=(grid,), values=combined / norm,
            c0=self.c0, form=self.form,
            metadata=self._meta(
                grid_norm=norm,
                branches={k: (v / norm).tolist() for k, v in per_branch.items()}),
        )

    def joint_table(self, x_grid: np.ndarray, v_grid: np.ndarray) -> DensityTable:
        vals = self.joint(x_grid[:, None], v_grid[None, :])
        norm = float(np.trapezoid(np.trapezoid(vals, v_grid, axis=1), x_grid))
        if norm <= 0:
            raise NonIntegrableError("joint density has no mass on the grid")
        return DensityTable(
            kind=DensityKind.JOINT, grids=(x_grid, v_grid), values=vals / norm,
            c0=self.c0, form=self.form, metadata=self._meta(grid_norm=norm))

    def _v_segments(self, x: float):
        """Velocity break points where the energy crosses branch thresholds."""
        u = float(potential(x, self.stiffness))
        vmax2 = 2.0 * (self.h_max - u)
        if vmax2 <= 0:
            return None
        thresholds = [self.land.u_side, self.land.u_middle, self.land.u1]
        cuts = [0.0]
        for th in sorted(thresholds):
            w2 = 2.0 * (th - u)
            if 0.0 < w2 < vmax2:
                cuts.append(math.sqrt(w2))
        cuts.append(math.sqrt(vmax2))
        return cuts

    def marginal_x(self, x_grid: np.ndarray, order: int = 64) -> DensityTable:
        """p(x) = integral of the joint density over v (piecewise Gauss)."""
        x_grid = np.asarray(x_grid, float)
        values = self._raw_marginal(x_grid, self._psi_shift, order)
        values *= math.exp(self._psi_shift + self._log_c0)
        norm = float(np.trapezoid(values, x_grid))
        if norm <= 0:
            raise NonIntegrableError("marginal p(x) has no mass on the grid")
        return DensityTable(
            kind=DensityKind.MARGINAL_X, grids=(np.asarray(x_grid, float),),
            values=values / norm, c0=self.c0, form=self.form,
            metadata=self._meta(grid_norm=norm))

    def marginal_v(self, v_grid: np.ndarray, x_grid: np.ndarray | None = None,
                   n_x: int = 401) -> DensityTable:
        """p(v) by trapezoid over a dense x grid at each v."""
        if x_grid is None:
            x_hi = self._x_support_limit()
            x_grid = np.linspace(-x_hi, x_hi, n_x)
        vals2d = self.joint(x_grid[:, None], np.asarray(v_grid, float)[None, :])
        values = np.trapezoid(vals2d, x_grid, axis=0)
        norm = float(np.trapezoid(values, v_grid))
        if norm <= 0:
            raise NonIntegrableError("marginal p(v) has no mass on the grid")
        return DensityTable(
            kind=DensityKind.MARGINAL_V, grids=(np.asarray(v_grid, float),),
            values=values / norm, c0=self.c0, form=self.form,
            metadata=self._meta(grid_norm=norm))

    def _x_support_limit(self) -> float:
        """Largest |x| reachable below the energy cutoff."""
        from .potential import energy_roots
        ys = [y for y in energy_roots(self.h_max, self.stiffness) if y > 0]
        return math.sqrt(max(ys))

    def amplitude_density(self, a_grid: np.ndarray | None = None,
                          n_points: int = 400) -> DensityTable:
        """p(a) = p(H) |dH/da| at H = U(a), amplitude = outermost turning point.

        Branch-wise: a < x_u belongs to middle-well orbits, x_s < a < the
        outer separatrix crossing to side-well orbits (left + right pooled),
        larger a to cross-well orbits.  Points near U'(a) = 0 carry no
        measure and are excluded by construction of the default grid.
        """
        from .potential import energy_roots
        land = self.land
        x_sep_out = math.sqrt(max(y for y in
                                  energy_roots(land.u1, self.stiffness) if y > 0))
        a_max = self._x_support_limit()
        segments = [
            (0.0, land.unstable, (MotionPattern.MIDDLE_WELL,)),
            (land.stable_side, x_sep_out,
             (MotionPattern.SIDE_WELL_RIGHT, MotionPattern.SIDE_WELL_LEFT)),
            (x_sep_out, a_max, (MotionPattern.CROSS_WELL,)),
        ]
        if a_grid is None:
            pts, labels = [], []
            per_seg = max(16, n_points // 3)
            for lo, hi, branches in segments:
                eps = 1e-4 * (hi - lo)
                seg = np.linspace(lo + eps, hi - eps, per_seg)
                pts.append(seg)
                labels.extend([branches[0].value] * per_seg)
            a_grid = np.concatenate(pts)
        else:
            a_grid = np.asarray(a_grid, float)
            labels = []
            for a in a_grid:
                for lo, hi, branches in segments:
                    if lo < a < hi:
                        labels.append(branches[0].value)
                        break
                else:
                    labels.append(None)
        values = np.zeros_like(a_grid)
        for lo, hi, branches in segments:
            mask = (a_grid > lo) & (a_grid < hi)
            if not np.any(mask):
                continue
            a = a_grid[mask]
            h = potential(a, self.stiffness)
            dh_da = np.abs(potential_deriv(a, self.stiffness))
            dens = np.zeros_like(a)
            for b in branches:
                grid = self._h_grids[b]
                hv = np.clip(h, grid[0], grid[-1])
                T = self.table.branch(b).period_at(hv)
                ok = (h <= self.h_max)
                dens += np.where(
                    ok, T * np.exp(self._psi_interp[b](hv) + self._log_c0), 0.0)
            values[mask] = dens * dh_da
        norm = float(np.trapezoid(values, a_grid))
        if norm <= 0:
            raise NonIntegrableError("amplitude density has no mass on the grid")
        return DensityTable(
            kind=DensityKind.AMPLITUDE, grids=(a_grid,), values=values / norm,
            c0=self.c0, form=self.form,
            metadata=self._meta(grid_norm=norm, branch_labels=list(labels)))


# --- convenience wrappers -------------------------------------------------

def spd_energy(params, form: Form = Form.CLOSED, n_points: int = 400,
               **model_kw) -> DensityTable:
    return SpdModel(params, form, **model_kw).energy_density(n_points)


def spd_joint(x, v, params, form: Form = Form.CLOSED,
              model: SpdModel | None = None, **model_kw):
    model = model or SpdModel(params, form, **model_kw)
    return model.joint(x, v)


def spd_joint_table(params, x_grid, v_grid, form: Form = Form.CLOSED,
                    **model_kw) -> DensityTable:
    return SpdModel(params, form, **model_kw).joint_table(
        np.asarray(x_grid, float), np.asarray(v_grid, float))


def spd_marginals(params, x_grid, v_grid, form: Form = Form.CLOSED,
                  model: SpdModel | None = None, **model_kw):
    model = model or SpdModel(params, form, **model_kw)
    return model.marginal_x(np.asarray(x_grid, float)), \
        model.marginal_v(np.asarray(v_grid, float))


def spd_amplitude(params, a_grid=None, form: Form = Form.CLOSED,
                  **model_kw) -> DensityTable:
    return SpdModel(params, form, **model_kw).amplitude_density(a_grid)


def spd_fixed_frequency_baseline(params: Case1Params, x_grid,
                                 **model_kw) -> DensityTable:
    """Case I closed-form density with omega(H) frozen at 1 rad/s.

    Serves as the constant-frequency reference against which the
    energy-dependent-frequency treatment is compared.
    """
    model = SpdModel(params, Form.CLOSED, fixed_omega=1.0, **model_kw)
    table = model.marginal_x(np.asarray(x_grid, float))
    table.metadata["fixed_omega"] = 1.0
    return table
