"""Energy-envelope averaged stationary densities."""

import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from tristable import (
    Case1Params,
    Case2Params,
    DampingParams,
    Form,
    MotionPattern,
    NoisePairSpec,
    NoiseSpec,
    NonIntegrableError,
    SpdModel,
    StiffnessParams,
    compare_densities,
    drift_diffusion_case1,
    drift_diffusion_case2,
    potential,
    spd_fixed_frequency_baseline,
)

P35 = StiffnessParams(1.0, 4.5, 3.5)
P4 = StiffnessParams(1.0, 4.5, 4.0)
DAMP = DampingParams(0.1)
NOISE = NoiseSpec(0.01, 0.5)


@pytest.fixture(scope="module")
def model_closed():
    return SpdModel(Case1Params(P4, DAMP, NOISE), Form.CLOSED)


@pytest.fixture(scope="module")
def model_integral():
    return SpdModel(Case1Params(P4, DAMP, NOISE), Form.INTEGRAL)


class TestDriftDiffusion:
    def test_case1_signature(self):
        dd = drift_diffusion_case1(0.03, MotionPattern.MIDDLE_WELL,
                                   DAMP, NOISE, P35)
        assert dd.sigma2 > 0
        # drift = -beta <v^2> + S1(omega); diffusion = 2 S1(omega) <v^2>
        from tristable import orbit_data
        T, mom = orbit_data(0.03, MotionPattern.MIDDLE_WELL, P35)
        omega = 2.0 * math.pi / T
        s1 = NOISE.spectral(omega)
        assert dd.m == pytest.approx(-DAMP.beta * mom.m_v2 + s1, rel=1e-12)
        assert dd.sigma2 == pytest.approx(2.0 * s1 * mom.m_v2, rel=1e-12)

    def test_case2_reduces_to_case1(self):
        pair = NoisePairSpec(NOISE, NoiseSpec(0.0, 0.5), 0.0)
        d1 = drift_diffusion_case1(0.02, MotionPattern.SIDE_WELL_RIGHT,
                                   DAMP, NOISE, P35)
        d2 = drift_diffusion_case2(0.02, MotionPattern.SIDE_WELL_RIGHT,
                                   DAMP, pair, P35)
        assert d2.m == pytest.approx(d1.m, rel=1e-12)
        assert d2.sigma2 == pytest.approx(d1.sigma2, rel=1e-12)

    def test_cross_term_denominator(self):
        """Cross spectral term uses the (tau1 tau2)^2 omega^2 denominator."""
        pair = NoisePairSpec(NoiseSpec(0.005, 0.5), NoiseSpec(0.005, 0.5), 0.8)
        w = 2.0
        expected = 0.8 * 0.005 / (1.0 + (0.5 * 0.5) ** 2 * w * w)
        assert float(pair.cross_spectral(w)) == pytest.approx(expected)


class TestNormalization:
    def test_all_tables_integrate_to_one(self, model_closed):
        x = np.linspace(-1.5, 1.5, 201)
        v = np.linspace(-1.3, 1.3, 181)
        for table in (model_closed.energy_density(),
                      model_closed.joint_table(x, v),
                      model_closed.marginal_x(x),
                      model_closed.marginal_v(v),
                      model_closed.amplitude_density()):
            assert table.integral() == pytest.approx(1.0, abs=1e-9)

    def test_integral_form_tables_normalized(self, model_integral):
        x = np.linspace(-1.5, 1.5, 201)
        assert model_integral.marginal_x(x).integral() == \
            pytest.approx(1.0, abs=1e-9)

    def test_nonnegative(self, model_closed):
        x = np.linspace(-1.5, 1.5, 201)
        assert np.all(model_closed.marginal_x(x).values >= 0)


class TestWhiteNoiseOracle:
    def test_joint_matches_boltzmann_form(self):
        """tau -> 0: joint density is C exp(-beta H / D) exactly."""
        noise = NoiseSpec(0.01, 1e-4)
        model = SpdModel(Case1Params(P4, DAMP, noise), Form.CLOSED)
        beta_over_d = DAMP.beta / noise.d

        def boltz(v, x):
            h = float(potential(x, P4)) + 0.5 * v * v
            return math.exp(-beta_over_d * (h - P4_U_MIN))

        norm, _ = dblquad(boltz, -1.6, 1.6, -1.4, 1.4, epsrel=1e-10)
        x = np.linspace(-1.2, 1.2, 41)
        v = np.linspace(-0.9, 0.9, 31)
        X, V = np.meshgrid(x, v, indexing="ij")
        got = model.joint(X, V)
        want = np.vectorize(lambda xx, vv: boltz(vv, xx) / norm)(X, V)
        peak = want.max()
        mask = want > 1e-6 * peak
        rel = np.abs(got[mask] - want[mask]) / want[mask]
        assert rel.max() < 0.01

    def test_closed_form_even_in_x_and_v(self):
        model = SpdModel(Case1Params(P4, DAMP, NOISE), Form.CLOSED)
        x = np.linspace(-1.2, 1.2, 41)
        v = np.linspace(-1.0, 1.0, 41)
        j = model.joint(x[:, None], v[None, :])
        assert np.allclose(j, j[::-1, :], rtol=1e-10)
        assert np.allclose(j, j[:, ::-1], rtol=1e-10)


P4_U_MIN = 0.0  # middle well is deepest for k3=4; U(0) = 0


class TestCase2:
    def test_reduces_to_case1(self):
        pair = NoisePairSpec(NOISE, NoiseSpec(0.0, 0.5), 0.0)
        m1 = SpdModel(Case1Params(P4, DAMP, NOISE), Form.INTEGRAL)
        m2 = SpdModel(Case2Params(P4, DAMP, pair), Form.INTEGRAL)
        x = np.linspace(-1.4, 1.4, 201)
        r = compare_densities(m1.marginal_x(x), m2.marginal_x(x))
        assert r.l1 < 1e-12

    def test_closed_form_rejected(self):
        pair = NoisePairSpec(NOISE, NoiseSpec(0.005, 0.5), 0.0)
        with pytest.raises(NonIntegrableError):
            SpdModel(Case2Params(P4, DAMP, pair), Form.CLOSED)

    def test_lambda_antisymmetry(self):
        """p with lambda=+l equals the mirror of p with lambda=-l."""
        damp2 = DampingParams(0.1, 0.05)
        x = np.linspace(-1.4, 1.4, 201)
        marg = {}
        for lam in (0.5, -0.5):
            pair = NoisePairSpec(NoiseSpec(0.005, 0.5),
                                 NoiseSpec(0.005, 0.5), lam)
            m = SpdModel(Case2Params(P4, damp2, pair), Form.INTEGRAL)
            marg[lam] = m.marginal_x(x).values
        assert np.abs(marg[0.5] - marg[-0.5][::-1]).max() < 1e-9

    def test_strong_cross_correlation_not_integrable(self):
        """Verbatim cross-spectral form turns the diffusion negative on a
        side branch at lambda=0.9; reported, not silently clipped."""
        damp2 = DampingParams(0.1, 0.05)
        pair = NoisePairSpec(NoiseSpec(0.005, 0.5), NoiseSpec(0.005, 0.5), 0.9)
        with pytest.raises(NonIntegrableError):
            SpdModel(Case2Params(P4, damp2, pair), Form.INTEGRAL)


class TestAmplitude:
    def test_amplitude_peaks_near_stable_points(self, model_closed):
        table = model_closed.amplitude_density()
        a = table.grids[0]
        vals = table.values
        land = model_closed.land
        # global maximum near the side-well amplitude region
        assert vals.max() > 0
        a_peak = a[np.argmax(vals)]
        assert 0.0 <= a_peak <= a[-1]
        # no mass at amplitudes beyond the energy cutoff support
        assert vals[-1] < vals.max()


class TestFixedFrequencyBaseline:
    def test_distinct_from_energy_dependent(self):
        x = np.linspace(-1.5, 1.5, 201)
        par = Case1Params(P35, DAMP, NOISE)
        base = spd_fixed_frequency_baseline(par, x)
        freq = SpdModel(par, Form.CLOSED).marginal_x(x)
        assert base.integral() == pytest.approx(1.0, abs=1e-9)
        r = compare_densities(base, freq)
        assert r.l1 > 0.01  # k3=3.5: visibly different at x=0

    def test_metadata_records_fixed_omega(self):
        x = np.linspace(-1.5, 1.5, 101)
        base = spd_fixed_frequency_baseline(Case1Params(P4, DAMP, NOISE), x)
        assert base.metadata["fixed_omega"] == 1.0


class TestFormDiscrepancy:
    def test_forms_differ_for_colored_noise(self, model_closed, model_integral):
        x = np.linspace(-1.4, 1.4, 201)
        r = compare_densities(model_closed.marginal_x(x),
                              model_integral.marginal_x(x))
        assert r.l1 > 0.01

    def test_forms_agree_in_white_limit(self):
        noise = NoiseSpec(0.01, 1e-4)
        x = np.linspace(-1.4, 1.4, 201)
        mc = SpdModel(Case1Params(P4, DAMP, noise), Form.CLOSED)
        mi = SpdModel(Case1Params(P4, DAMP, noise), Form.INTEGRAL)
        r = compare_densities(mc.marginal_x(x), mi.marginal_x(x))
        assert r.l1 < 5e-3
