#!/usr/bin/env python3
"""Validate the analytic stationary densities against Monte Carlo histograms.

For each requested sextic stiffness k3, simulates a pooled ensemble, builds
the closed-form and integral-form marginal densities p(x) and p(v), and
prints the L1 distances to the empirical histograms.

Usage::

    python3 scripts/validate_spd.py [--k3 3.5,4.0] [--steps 6000000]
        [--ensemble 4] [--seed 101]
"""

import argparse

import numpy as np

from tristable import (
    Case1Params,
    DampingParams,
    Form,
    NoiseSpec,
    SimConfig,
    SpdModel,
    StiffnessParams,
    compare_densities,
    histogram_density,
    simulate_case1,
)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k3", default="3.5,4.0")
    ap.add_argument("--d", type=float, default=0.01)
    ap.add_argument("--tau", type=float, default=0.5)
    ap.add_argument("--beta", type=float, default=0.1)
    ap.add_argument("--steps", type=int, default=6_000_000)
    ap.add_argument("--ensemble", type=int, default=4)
    ap.add_argument("--seed", type=int, default=101)
    args = ap.parse_args(argv)

    damp = DampingParams(args.beta)
    noise = NoiseSpec(args.d, args.tau)
    print(f"{'k3':>5} {'form':>9} {'L1 p(x)':>9} {'L1 p(v)':>9}")
    for k3 in (float(s) for s in args.k3.split(",")):
        p = StiffnessParams(1.0, 4.5, k3)
        xs, vs = [], []
        for r in range(args.ensemble):
            cfg = SimConfig(dt=1e-3, n_steps=args.steps, burn_in_fraction=0.1,
                            ensemble=args.ensemble, seed=args.seed,
                            init=(1.0, 0.0))
            ts = simulate_case1(p, damp, noise, cfg, realization=r)
            xs.append(ts.x)
            vs.append(ts.v)
        hx = histogram_density(np.concatenate(xs), bins=128,
                               range=(-1.6, 1.6))
        hv = histogram_density(np.concatenate(vs), bins=128,
                               range=(-1.5, 1.5))
        for form in (Form.CLOSED, Form.INTEGRAL):
            model = SpdModel(Case1Params(p, damp, noise), form)
            l1x = compare_densities(
                model.marginal_x(np.linspace(-1.6, 1.6, 321)), hx).l1
            l1v = compare_densities(
                model.marginal_v(np.linspace(-1.5, 1.5, 301)), hv).l1
            print(f"{k3:5.2f} {form.name.lower():>9} {l1x:9.4f} {l1v:9.4f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
