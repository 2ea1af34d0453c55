"""Command-line driver: landscape reports, frequency tables, stationary
densities, Monte Carlo runs, spectra and coherence-resonance sweeps.

Configuration is a strict JSON file (unknown keys are rejected); every output
file gets a JSON sidecar recording the exact parameters and seeds that
produced it.  Exit codes: 0 success, 2 configuration error, 3 numeric
failure, 4 threshold failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .averaging import (
    Case1Params,
    Case2Params,
    DampingParams,
    Form,
    NoisePairSpec,
    NoiseSpec,
    NonIntegrableError,
    SpdModel,
    spd_fixed_frequency_baseline,
)
from .estimation import (
    NoPeakError,
    NoWidthError,
    SupportMismatchError,
    amplitude_series,
    compare_densities,
    histogram_density,
    quality_factor,
    welch_psd,
)
from .orbit import GridSpec, build_energy_table
from .potential import (
    MotionPattern,
    NotTriStableError,
    PotentialError,
    StiffnessParams,
    classify_landscape,
    total_energy,
)
from .quadrature import QuadratureFailureError
from .sde import DivergenceError, SimConfig, simulate_case1, simulate_case2

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_THRESHOLD = 4

_FLOAT_FMT = "%.17g"

# table output format for the current invocation; set by main() from --format
_output_format = "csv"


class ConfigError(Exception):
    pass


def _require(d: dict, key: str, where: str):
    if key not in d:
        raise ConfigError(f"missing key '{key}' in {where}")
    return d[key]


def _check_known(d: dict, allowed, where: str):
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def _parse_stiffness(d: dict) -> StiffnessParams:
    _check_known(d, {"k1", "k2", "k3"}, "stiffness")
    try:
        return StiffnessParams(float(_require(d, "k1", "stiffness")),
                               float(_require(d, "k2", "stiffness")),
                               float(_require(d, "k3", "stiffness")))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_noise(d: dict, where="noise") -> NoiseSpec:
    _check_known(d, {"d", "tau"}, where)
    return NoiseSpec(float(_require(d, "d", where)),
                     float(_require(d, "tau", where)))


def _parse_config(path: str) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from exc
    allowed = {"case", "stiffness", "damping", "noise", "noise_pair",
               "sim", "grids", "output"}
    _check_known(raw, allowed, "top level")
    return raw


class RunConfig:
    """Validated bundle of all sections needed by a pipeline run."""

    def __init__(self, raw: dict, seed_override=None):
        self.case = raw.get("case", "case1")
        if self.case not in ("case1", "case2"):
            raise ConfigError(f"case must be 'case1' or 'case2', got {self.case!r}")
        self.stiffness = _parse_stiffness(_require(raw, "stiffness", "config"))
        damp = raw.get("damping", {})
        _check_known(damp, {"beta", "beta1"}, "damping")
        try:
            self.damping = DampingParams(float(damp.get("beta", 0.0)),
                                         float(damp.get("beta1", 0.0)))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.case == "case1":
            self.noise = _parse_noise(_require(raw, "noise", "config"))
            self.pair = None
        else:
            pd = _require(raw, "noise_pair", "config")
            _check_known(pd, {"n1", "n2", "lambda"}, "noise_pair")
            try:
                self.pair = NoisePairSpec(
                    _parse_noise(_require(pd, "n1", "noise_pair"), "noise_pair.n1"),
                    _parse_noise(_require(pd, "n2", "noise_pair"), "noise_pair.n2"),
                    float(pd.get("lambda", 0.0)))
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            self.noise = None
        sim = raw.get("sim", {})
        _check_known(sim, {"dt", "n_steps", "burn_in_fraction", "ensemble",
                           "seed", "init", "decimation"}, "sim")
        try:
            self.sim = SimConfig(
                dt=float(sim.get("dt", 1e-3)),
                n_steps=int(sim.get("n_steps", 5_000_000)),
                burn_in_fraction=float(sim.get("burn_in_fraction", 0.1)),
                ensemble=int(sim.get("ensemble", 1)),
                seed=int(seed_override if seed_override is not None
                         else sim.get("seed", 0)),
                init=tuple(sim.get("init", (1.0, 0.0))),
                decimation=int(sim.get("decimation", 1)))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        grids = raw.get("grids", {})
        _check_known(grids, {"x", "v", "a", "h_max", "n_energy", "bins"},
                     "grids")
        self.x_grid = _linspace(grids.get("x", [-1.6, 1.6, 128]), "grids.x")
        self.v_grid = _linspace(grids.get("v", [-1.5, 1.5, 128]), "grids.v")
        self.a_grid = grids.get("a")
        if self.a_grid is not None:
            self.a_grid = _linspace(self.a_grid, "grids.a")
        self.h_max = grids.get("h_max")
        self.n_energy = int(grids.get("n_energy", 64))
        self.bins = int(grids.get("bins", 128))
        out = raw.get("output", {})
        _check_known(out, {"formats"}, "output")
        self.formats = out.get("formats", ["csv"])
        self.raw = raw

    def bundle(self):
        if self.case == "case1":
            try:
                return Case1Params(self.stiffness, self.damping, self.noise)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        return Case2Params(self.stiffness, self.damping, self.pair)

    def snapshot(self) -> dict:
        return {"config": self.raw, "seed": self.sim.seed,
                "version": __version__}


def _linspace(spec, where: str) -> np.ndarray:
    try:
        lo, hi, n = spec
        return np.linspace(float(lo), float(hi), int(n))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where} must be [lo, hi, n]: {exc}") from exc


def _write_csv(path: Path, header, columns):
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = np.column_stack(columns)
    if _output_format == "json":
        path = path.with_suffix(".json")
        payload = {"columns": list(header),
                   "data": [[float(v) for v in row] for row in rows]}
        with open(path, "w") as fh:
            json.dump(payload, fh)
            fh.write("\n")
        return path
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_FLOAT_FMT % v for v in row) + "\n")
    return path


def _write_sidecar(path: Path, payload: dict):
    with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def _write_mixed(path: Path, header, rows):
    """Table writer for rows mixing strings and floats."""
    path.parent.mkdir(parents=True, exist_ok=True)

    def fmt(v):
        return _FLOAT_FMT % v if isinstance(v, float) else str(v)

    if _output_format == "json":
        path = path.with_suffix(".json")
        with open(path, "w") as fh:
            json.dump({"columns": list(header), "data": [list(r) for r in rows]},
                      fh, default=float)
            fh.write("\n")
        return path
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def _stiffness_from_args(args) -> StiffnessParams:
    if args.config:
        raw = _parse_config(args.config)
        return _parse_stiffness(_require(raw, "stiffness", "config"))
    if None in (args.k1, args.k2, args.k3):
        raise ConfigError("provide --config or all of --k1 --k2 --k3")
    try:
        return StiffnessParams(args.k1, args.k2, args.k3)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# --- subcommands ----------------------------------------------------------

def cmd_landscape(args) -> int:
    p = _stiffness_from_args(args)
    try:
        land = classify_landscape(p)
    except NotTriStableError as exc:
        report = {"tri_stable": False, "discriminant": p.discriminant,
                  "error": str(exc)}
        print(json.dumps(report, indent=2))
        return EXIT_NUMERIC
    report = {
        "tri_stable": True,
        "discriminant": p.discriminant,
        "stable_side": land.stable_side,
        "stable_middle": 0.0,
        "unstable": land.unstable,
        "u_side": land.u_side,
        "u_middle": land.u_middle,
        "u1": land.u1,
        "u2": land.u2,
        "deepest": land.deepest.value,
    }
    text = json.dumps(report, indent=2)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "landscape.json").write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_frequency(args) -> int:
    p = _stiffness_from_args(args)
    spec = GridSpec(n=args.n_energy, h_max=args.h_max)
    table = build_energy_table(p, spec)
    out = Path(args.out or ".")
    rows = []
    for pattern in (MotionPattern.MIDDLE_WELL, MotionPattern.SIDE_WELL_RIGHT,
                    MotionPattern.CROSS_WELL):
        bt = table.branch(pattern)
        for i, h in enumerate(bt.h):
            rows.append([pattern.value, float(h), float(bt.period[i]),
                         2.0 * math.pi / float(bt.period[i])]
                        + [float(bt.moments[k][i])
                           for k in ("m_v2", "m_x", "m_x2", "m_v2x",
                                     "m_v2x2")])
    path = _write_mixed(out / "frequency.csv",
                        ["branch", "H", "T", "omega", "m_v2", "m_x", "m_x2",
                         "m_v2x", "m_v2x2"], rows)
    _write_sidecar(path, {"stiffness": vars(p), "n_energy": args.n_energy,
                          "h_max": args.h_max, "version": __version__})
    print(f"wrote {path}")
    return EXIT_OK


def _spd_forms(form_arg: str):
    if form_arg == "both":
        return [Form.CLOSED, Form.INTEGRAL]
    return [Form.CLOSED if form_arg == "closed" else Form.INTEGRAL]


def cmd_spd(args) -> int:
    cfg = RunConfig(_parse_config(args.config), args.seed)
    out = Path(args.out or ".")
    bundle = cfg.bundle()
    written = []
    results = {}
    for form in _spd_forms(args.form):
        if cfg.case == "case2" and form is Form.CLOSED:
            continue
        model = SpdModel(bundle, form, grid=GridSpec(n=cfg.n_energy),
                         h_max=cfg.h_max)
        tag = form.value
        files = []
        ed = model.energy_density()
        files.append(("energy", _write_csv(out / f"spd_energy_{tag}.csv",
                                           ["H", "p"],
                                           [ed.grids[0], ed.values])))
        jt = model.joint_table(cfg.x_grid, cfg.v_grid)
        files.append(("joint",
                      _write_joint_csv(out / f"spd_joint_{tag}.csv", jt)))
        mx = model.marginal_x(cfg.x_grid)
        files.append(("marginal_x",
                      _write_csv(out / f"spd_marginal_x_{tag}.csv", ["x", "p"],
                                 [mx.grids[0], mx.values])))
        mv = model.marginal_v(cfg.v_grid)
        files.append(("marginal_v",
                      _write_csv(out / f"spd_marginal_v_{tag}.csv", ["v", "p"],
                                 [mv.grids[0], mv.values])))
        results[tag] = mx
        if cfg.case == "case1":
            ad = model.amplitude_density(cfg.a_grid)
            files.append(("amplitude",
                          _write_csv(out / f"spd_amplitude_{tag}.csv",
                                     ["a", "p"], [ad.grids[0], ad.values])))
        for kind, f in files:
            _write_sidecar(f, cfg.snapshot() | {
                "form": tag, "c0": model.c0, "kind": kind,
                "branch_intervals": {
                    b.value: model.table.branch(b).interval
                    for b in model.table.branches}})
            written.append(f)
    if cfg.case == "case1" and args.baseline:
        base = spd_fixed_frequency_baseline(bundle, cfg.x_grid,
                                            h_max=cfg.h_max)
        f = _write_csv(out / "spd_marginal_x_baseline.csv", ["x", "p"],
                       [base.grids[0], base.values])
        _write_sidecar(f, cfg.snapshot() | {"fixed_omega": 1.0})
        written.append(f)
    if len(results) == 2:
        rec = compare_densities(results["closed"], results["integral"])
        summary = {"l1": rec.l1, "sup": rec.sup, "ks": rec.ks,
                   "note": "closed vs integral form discrepancy of the "
                           "marginal displacement density"}
        (out / "form_discrepancy.json").write_text(
            json.dumps(summary, indent=2) + "\n")
    for f in written:
        print(f"wrote {f}")
    return EXIT_OK


def _write_joint_csv(path: Path, table):
    xg, vg = table.grids
    xx = np.repeat(xg, vg.size)
    vv = np.tile(vg, xg.size)
    return _write_csv(path, ["x", "v", "p"],
                      [xx, vv, np.asarray(table.values).ravel()])


def _run_simulation(cfg: RunConfig, keep_noise=False):
    series = []
    for r in range(cfg.sim.ensemble):
        if cfg.case == "case1":
            ts = simulate_case1(cfg.stiffness, cfg.damping, cfg.noise,
                                cfg.sim, realization=r, keep_noise=keep_noise)
        else:
            ts = simulate_case2(cfg.stiffness, cfg.damping, cfg.pair,
                                cfg.sim, realization=r, keep_noise=keep_noise)
        series.append(ts)
    return series


def cmd_simulate(args) -> int:
    import time
    cfg = RunConfig(_parse_config(args.config), args.seed)
    out = Path(args.out or ".")
    t0 = time.time()
    series = _run_simulation(cfg)
    wall = time.time() - t0
    x = np.concatenate([ts.x for ts in series])
    v = np.concatenate([ts.v for ts in series])
    hx = histogram_density(x, bins=cfg.bins,
                           range=(cfg.x_grid[0], cfg.x_grid[-1]))
    hv = histogram_density(v, bins=cfg.bins,
                           range=(cfg.v_grid[0], cfg.v_grid[-1]))
    h2 = histogram_density(np.column_stack([x, v]), bins=cfg.bins,
                           range=[(cfg.x_grid[0], cfg.x_grid[-1]),
                                  (cfg.v_grid[0], cfg.v_grid[-1])])
    energies = total_energy(x, v, cfg.stiffness)
    he = histogram_density(energies, bins=cfg.bins)
    amps = np.concatenate([amplitude_series(ts.x, ts.v) for ts in series])
    ha = histogram_density(amps, bins=cfg.bins)
    meta = cfg.snapshot() | {
        "wall_seconds": wall,
        "pooled_samples": int(x.size),
        "realizations": cfg.sim.ensemble,
    }
    for name, h in (("x", hx), ("v", hv), ("energy", he), ("amplitude", ha)):
        f = _write_csv(out / f"hist_{name}.csv", [name, "p"],
                       [h.centers[0], h.density])
        _write_sidecar(f, meta | {"out_of_range": h.out_of_range})
    cx, cv = h2.centers
    fj = _write_csv(out / "hist_joint.csv", ["x", "v", "p"],
                    [np.repeat(cx, cv.size), np.tile(cv, cx.size),
                     h2.density.ravel()])
    _write_sidecar(fj, meta)
    if args.save_series:
        for ts in series:
            t = np.arange(ts.x.size) * ts.dt_effective
            f = _write_csv(out / f"series_{ts.realization:03d}.csv",
                           ["t", "x", "v"], [t, ts.x, ts.v])
            _write_sidecar(f, meta | {"realization": ts.realization})
    print(f"wrote histograms to {out} ({wall:.1f} s, {x.size} samples)")
    return EXIT_OK


def cmd_psd(args) -> int:
    out = Path(args.out or ".")
    if args.series:
        data = np.genfromtxt(args.series, delimiter=",", names=True)
        col = data[args.column]
        if args.dt is None:
            tcol = data["t"]
            dt = float(tcol[1] - tcol[0])
        else:
            dt = args.dt
    else:
        if not args.config:
            raise ConfigError("psd needs --series or --config")
        cfg = RunConfig(_parse_config(args.config), args.seed)
        series = _run_simulation(cfg)
        col = np.concatenate([ts.x for ts in series])
        dt = series[0].dt_effective
    spec = welch_psd(col, dt, segment_length=args.nperseg)
    f = _write_csv(out / "psd.csv", ["omega", "psd"], [spec.omega, spec.psd])
    _write_sidecar(f, {"segment_length": spec.segment_length,
                       "overlap": spec.overlap, "window": spec.window,
                       "n_segments": spec.n_segments,
                       "version": __version__})
    try:
        qf = quality_factor(spec)
        payload = {"h": qf.h, "omega_m": qf.omega_m,
                   "delta_omega": qf.delta_omega, "eta": qf.eta}
    except (NoPeakError, NoWidthError) as exc:
        payload = {"error": type(exc).__name__, "detail": str(exc)}
    (out / "quality_factor.json").write_text(
        json.dumps(payload, indent=2) + "\n")
    print(f"wrote {f}")
    return EXIT_OK


_SWEEPABLE = {"d1", "tau1", "d2", "lambda"}


def _apply_sweep(raw: dict, param: str, value: float) -> dict:
    import copy
    raw = copy.deepcopy(raw)
    if raw.get("case", "case1") == "case1":
        if param not in ("d1", "tau1"):
            raise ConfigError(f"cannot sweep {param} in case1")
        raw["noise"][{"d1": "d", "tau1": "tau"}[param]] = value
    else:
        if param == "lambda":
            raw["noise_pair"]["lambda"] = value
        elif param in ("d1", "tau1"):
            raw["noise_pair"]["n1"][{"d1": "d", "tau1": "tau"}[param]] = value
        elif param == "d2":
            raw["noise_pair"]["n2"]["d"] = value
    return raw


def cmd_cr_sweep(args) -> int:
    raw = _parse_config(args.config)
    if args.param not in _SWEEPABLE:
        raise ConfigError(f"sweep parameter must be one of {sorted(_SWEEPABLE)}")
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad sweep values {args.values!r}: {exc}") from exc
    if not values:
        raise ConfigError("empty sweep value list")
    out = Path(args.out or ".")
    rows = []
    for val in values:
        cfg = RunConfig(_apply_sweep(raw, args.param, val), args.seed)
        try:
            series = _run_simulation(cfg)
            x = np.concatenate([ts.x for ts in series])
            spec = welch_psd(x, series[0].dt_effective,
                             segment_length=args.nperseg)
            qf = quality_factor(spec)
            rows.append((val, qf.h, qf.omega_m, qf.delta_omega, qf.eta, ""))
        except (NoPeakError, NoWidthError, DivergenceError) as exc:
            rows.append((val, math.nan, math.nan, math.nan, math.nan,
                         type(exc).__name__))
        print(f"{args.param}={val}: {rows[-1][5] or 'eta=%.6g' % rows[-1][4]}")
    f = _write_mixed(out / "cr_sweep.csv",
                     ["value", "h", "omega_m", "delta_omega", "eta", "flag"],
                     rows)
    _write_sidecar(f, {"param": args.param, "values": values,
                       "config": raw, "version": __version__})
    print(f"wrote {f}")
    return EXIT_OK


def _read_table_csv(path: str):
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    if data.ndim != 2 or data.shape[1] < 2:
        raise ConfigError(f"{path} is not a two-column CSV table")
    return data[:, 0], data[:, 1]


def cmd_compare(args) -> int:
    a = _read_table_csv(args.analytic)
    b = _read_table_csv(args.empirical)
    rec = compare_densities(a, b)
    payload = {"l1": rec.l1, "sup": rec.sup, "ks": rec.ks,
               "threshold": args.threshold,
               "passed": (args.threshold is None or rec.l1 <= args.threshold)}
    text = json.dumps(payload, indent=2)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "compare.json").write_text(text + "\n")
    print(text)
    if args.threshold is not None and rec.l1 > args.threshold:
        return EXIT_THRESHOLD
    return EXIT_OK


# --- entry point ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tristable",
        description="Stationary densities and coherence resonance of "
                    "tri-stable oscillators under colored noise")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the configured seed")
        sp.add_argument("--format", choices=["csv", "json"], default="csv",
                        help="table output format (sidecars are always JSON)")
        sp.add_argument("--threads", type=int, default=0,
                        help="compute threads for the integrator kernels "
                             "(0 = automatic)")

    sp = sub.add_parser("landscape", help="classify the potential landscape")
    common(sp)
    for k in ("k1", "k2", "k3"):
        sp.add_argument(f"--{k}", type=float)
    sp.set_defaults(func=cmd_landscape)

    sp = sub.add_parser("frequency", help="energy-dependent frequency table")
    common(sp)
    for k in ("k1", "k2", "k3"):
        sp.add_argument(f"--{k}", type=float)
    sp.add_argument("--n-energy", type=int, default=64)
    sp.add_argument("--h-max", type=float, default=None)
    sp.set_defaults(func=cmd_frequency)

    sp = sub.add_parser("spd", help="stationary probability densities")
    common(sp)
    sp.add_argument("--form", choices=["closed", "integral", "both"],
                    default="closed")
    sp.add_argument("--baseline", action="store_true",
                    help="also write the fixed-frequency baseline marginal")
    sp.set_defaults(func=cmd_spd)

    sp = sub.add_parser("simulate", help="Monte Carlo ensemble + histograms")
    common(sp)
    sp.add_argument("--save-series", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("psd", help="Welch power spectral density")
    common(sp)
    sp.add_argument("--series", help="CSV with t,x,v columns")
    sp.add_argument("--column", default="x")
    sp.add_argument("--dt", type=float, default=None)
    sp.add_argument("--nperseg", type=int, default=None)
    sp.set_defaults(func=cmd_psd)

    sp = sub.add_parser("cr-sweep", help="quality-factor parameter sweep")
    common(sp)
    sp.add_argument("--param", required=True,
                    help="one of d1, tau1, d2, lambda")
    sp.add_argument("--values", required=True,
                    help="comma-separated sweep values")
    sp.add_argument("--nperseg", type=int, default=None)
    sp.set_defaults(func=cmd_cr_sweep)

    sp = sub.add_parser("compare", help="analytic vs empirical density metrics")
    common(sp)
    sp.add_argument("--analytic", required=True)
    sp.add_argument("--empirical", required=True)
    sp.add_argument("--threshold", type=float, default=None,
                    help="L1 pass threshold (exit 4 on failure)")
    sp.set_defaults(func=cmd_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    global _output_format
    _output_format = getattr(args, "format", "csv")
    if getattr(args, "threads", 0) > 0:
        import numba
        numba.set_num_threads(args.threads)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PotentialError, NonIntegrableError, DivergenceError,
            QuadratureFailureError, SupportMismatchError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
