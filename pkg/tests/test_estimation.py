"""Empirical densities, Welch spectra, quality factor and comparisons."""

import math

import numpy as np
import pytest

from tristable import (
    EmptySeriesError,
    HistogramDensity,
    NoPeakError,
    NoiseSpec,
    SpectrumEstimate,
    SupportMismatchError,
    TooShortError,
    amplitude_series,
    compare_densities,
    count_modes,
    histogram_density,
    ou_generate,
    quality_factor,
    welch_psd,
)


class TestHistogram:
    def test_constant_series(self):
        h = histogram_density(np.full(100, 0.7), bins=8, range=(0.0, 1.0))
        occupied = h.density > 0
        assert occupied.sum() == 1
        width = np.diff(h.edges[0])[occupied][0]
        assert h.density[occupied][0] == pytest.approx(1.0 / width)

    def test_gaussian_l1(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(1_000_000)
        h = histogram_density(x, bins=64, range=(-5.0, 5.0))
        c = h.centers[0]
        ref = np.exp(-0.5 * c * c) / math.sqrt(2.0 * math.pi)
        l1 = float(np.trapezoid(np.abs(h.density - ref), c))
        assert l1 < 0.01

    def test_2d(self):
        rng = np.random.default_rng(3)
        samples = rng.standard_normal((200_000, 2))
        h = histogram_density(samples, bins=32,
                              range=[(-4, 4), (-4, 4)])
        assert h.dimension == 2
        area = np.outer(np.diff(h.edges[0]), np.diff(h.edges[1]))
        assert float((h.density * area).sum()) == pytest.approx(1.0, abs=1e-9)

    def test_out_of_range_mass(self):
        h = histogram_density(np.array([0.5, 1.5, 2.5]), bins=8,
                              range=(0.0, 1.0))
        assert h.out_of_range == pytest.approx(2.0 / 3.0)

    def test_empty(self):
        with pytest.raises(EmptySeriesError):
            histogram_density(np.array([]))


class TestAmplitudeSeries:
    def test_sine_wave(self):
        t = np.linspace(0, 40 * math.pi, 40_000)
        x = 0.8 * np.sin(t)
        v = 0.8 * np.cos(t)
        amps = amplitude_series(x, v)
        assert amps.size > 30
        assert np.allclose(amps, 0.8, atol=1e-3)


class TestWelch:
    def test_tone(self):
        dt = 0.01
        w0, A = 3.0, 1.5
        t = np.arange(1_000_000) * dt
        x = A * np.sin(w0 * t)
        spec = welch_psd(x, dt, segment_length=1 << 14)
        k = int(np.argmax(spec.psd))
        dw = spec.omega[1] - spec.omega[0]
        assert abs(spec.omega[k] - w0) <= dw
        integral = float(np.trapezoid(spec.psd, spec.omega))
        assert integral == pytest.approx(A * A / 2.0, rel=0.02)

    def test_white_flat_integral(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(1_000_000) * 0.5
        spec = welch_psd(x, 0.01, segment_length=1 << 12)
        integral = float(np.trapezoid(spec.psd, spec.omega))
        assert integral == pytest.approx(0.25, rel=0.05)

    def test_variance_integral_consistency(self):
        xi = ou_generate(NoiseSpec(0.01, 0.5), 0.01, 500_000, seed=2)
        spec = welch_psd(xi, 0.01)
        integral = float(np.trapezoid(spec.psd, spec.omega))
        assert integral == pytest.approx(float(xi.var()), rel=0.02)

    def test_ou_spectrum_tracks_lorentzian(self):
        """Estimated PSD follows D/(1+tau^2 w^2) within 10% on [0.1, 5]."""
        n = NoiseSpec(0.01, 0.5)
        xi = ou_generate(n, 0.01, 2_000_000, seed=5)
        spec = welch_psd(xi, 0.01, segment_length=1 << 13)
        mask = (spec.omega >= 0.1) & (spec.omega <= 5.0)
        # one-sided target with our normalization (integral = variance)
        target = (2.0 * n.d / math.pi) / (1.0 + (n.tau * spec.omega) ** 2)
        rel = np.abs(spec.psd[mask] - target[mask]) / target[mask]
        assert rel.max() < 0.10

    def test_too_short(self):
        with pytest.raises(TooShortError):
            welch_psd(np.zeros(100), 0.01, segment_length=1 << 10)


class TestQualityFactor:
    def test_lorentzian_width(self):
        om = np.linspace(0.0, 10.0, 4001)
        h0, w0, g = 2.0, 3.0, 0.2
        psd = h0 / (1.0 + ((om - w0) / g) ** 2)
        spec = SpectrumEstimate(om, psd, 4001, 0.5, "hann", 1)
        qf = quality_factor(spec, smooth_bins=1)
        exact = 2.0 * g * math.sqrt(math.sqrt(math.e) - 1.0)
        assert abs(qf.delta_omega - exact) / exact < 0.01
        assert qf.omega_m == pytest.approx(w0, abs=om[1] - om[0])
        assert qf.eta == pytest.approx(h0 * w0 / exact, rel=0.01)

    def test_flat_spectrum_no_peak(self):
        om = np.linspace(0.0, 5.0, 256)
        spec = SpectrumEstimate(om, np.ones_like(om), 256, 0.5, "hann", 1)
        with pytest.raises(NoPeakError):
            quality_factor(spec)

    def test_monotone_from_dc_no_peak(self):
        om = np.linspace(0.0, 5.0, 256)
        psd = 1.0 / (1.0 + om ** 2)
        spec = SpectrumEstimate(om, psd, 256, 0.5, "hann", 1)
        with pytest.raises(NoPeakError):
            quality_factor(spec, smooth_bins=1)

    def test_dc_flank_skipped(self):
        """A peak hiding behind a decaying DC flank is still found."""
        om = np.linspace(0.0, 10.0, 2001)
        psd = 5.0 / (1.0 + (om / 0.2) ** 2) \
            + 2.0 / (1.0 + ((om - 3.0) / 0.3) ** 2)
        spec = SpectrumEstimate(om, psd, 2001, 0.5, "hann", 1)
        qf = quality_factor(spec, smooth_bins=1)
        assert qf.omega_m == pytest.approx(3.0, abs=0.05)


class TestCompare:
    def test_self_compare_zero(self):
        g = np.linspace(-1, 1, 101)
        v = np.exp(-g * g)
        v /= np.trapezoid(v, g)
        r = compare_densities((g, v), (g, v))
        assert r.l1 == 0.0 and r.sup == 0.0 and r.ks == 0.0

    def test_disjoint_boxes(self):
        g = np.linspace(0.0, 3.0, 601)
        a = np.where((g >= 0.0) & (g <= 1.0), 1.0, 0.0)
        b = np.where((g >= 2.0) & (g <= 3.0), 1.0, 0.0)
        r = compare_densities((g, a), (g, b))
        assert r.l1 == pytest.approx(2.0, rel=0.01)
        assert r.ks == pytest.approx(1.0, rel=0.01)

    def test_symmetry(self):
        g = np.linspace(-1, 1, 201)
        a = np.exp(-g * g)
        b = np.exp(-2 * g * g)
        r1 = compare_densities((g, a), (g, b))
        r2 = compare_densities((g, b), (g, a))
        assert r1.l1 == pytest.approx(r2.l1)
        assert r1.sup == pytest.approx(r2.sup)

    def test_triangle_inequality(self):
        g = np.linspace(-1, 1, 201)
        a = np.exp(-g * g)
        b = np.exp(-2 * g * g)
        c = np.exp(-3 * g * g)
        ab = compare_densities((g, a), (g, b)).l1
        bc = compare_densities((g, b), (g, c)).l1
        ac = compare_densities((g, a), (g, c)).l1
        assert ac <= ab + bc + 1e-12

    def test_support_mismatch(self):
        with pytest.raises(SupportMismatchError):
            compare_densities((np.linspace(0, 1, 10), np.ones(10)),
                              (np.linspace(5, 6, 10), np.ones(10)))

    def test_histogram_input(self):
        rng = np.random.default_rng(4)
        h = histogram_density(rng.standard_normal(100_000), bins=64,
                              range=(-4, 4))
        assert isinstance(h, HistogramDensity)
        r = compare_densities(h, h)
        assert r.l1 == 0.0


class TestCountModes:
    def test_single_gaussian(self):
        g = np.linspace(-4, 4, 301)
        assert count_modes((g, np.exp(-g * g))) == 1

    def test_bimodal(self):
        g = np.linspace(-4, 4, 301)
        v = np.exp(-(g - 1.5) ** 2) + np.exp(-(g + 1.5) ** 2)
        assert count_modes((g, v)) == 2

    def test_trimodal(self):
        g = np.linspace(-4, 4, 601)
        v = (np.exp(-((g - 2) / 0.5) ** 2) + np.exp(-(g / 0.5) ** 2)
             + np.exp(-((g + 2) / 0.5) ** 2))
        assert count_modes((g, v)) == 3

    def test_flat_counts_one(self):
        assert count_modes(np.ones(64)) == 1

    def test_prominence_threshold(self):
        g = np.linspace(-4, 4, 301)
        v = np.exp(-g * g) + 0.01 * np.exp(-((g - 3) / 0.2) ** 2)
        assert count_modes((g, v), prominence=0.05) == 1
