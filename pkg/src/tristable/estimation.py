"""Empirical densities, Welch spectra, quality factors and comparison metrics
for validating the averaged densities against simulation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import signal

from .averaging import DensityTable

__all__ = [
    "HistogramDensity",
    "SpectrumEstimate",
    "QualityFactor",
    "ComparisonRecord",
    "EmptySeriesError",
    "TooShortError",
    "NoPeakError",
    "NoWidthError",
    "SupportMismatchError",
    "histogram_density",
    "amplitude_series",
    "welch_psd",
    "quality_factor",
    "compare_densities",
    "count_modes",
]


class EmptySeriesError(Exception):
    pass


class TooShortError(Exception):
    pass


class NoPeakError(Exception):
    """Spectrum is monotone from the first non-DC bin: no resonant structure."""


class NoWidthError(Exception):
    """The peak's h/sqrt(e) level crossing lies outside the spectrum."""


class SupportMismatchError(Exception):
    pass


@dataclass
class HistogramDensity:
    """Normalized empirical density on a regular grid (1-D or 2-D)."""

    dimension: int
    edges: tuple
    density: np.ndarray
    n_samples: int
    out_of_range: float

    @property
    def centers(self) -> tuple:
        return tuple(0.5 * (e[1:] + e[:-1]) for e in self.edges)


@dataclass
class SpectrumEstimate:
    """One-sided Welch PSD on an angular-frequency grid."""

    omega: np.ndarray
    psd: np.ndarray
    segment_length: int
    overlap: float
    window: str
    n_segments: int


@dataclass
class QualityFactor:
    """Peak height h at omega_m, width delta_omega at level h/sqrt(e)."""

    h: float
    omega_m: float
    delta_omega: float

    @property
    def eta(self) -> float:
        return self.h * self.omega_m / self.delta_omega


@dataclass
class ComparisonRecord:
    l1: float
    sup: float
    ks: float | None = None


def histogram_density(samples, bins=128, range=None) -> HistogramDensity:
    """Normalized histogram of a scalar sequence or of (x, v) sample pairs."""
    samples = np.asarray(samples, float)
    if samples.size == 0:
        raise EmptySeriesError("no samples")
    if samples.ndim == 1:
        counts, edges = np.histogram(samples, bins=bins, range=range)
        total = samples.size
        inside = counts.sum()
        widths = np.diff(edges)
        density = counts / (inside * widths) if inside else counts.astype(float)
        return HistogramDensity(1, (edges,), density, total,
                                (total - inside) / total)
    if samples.ndim == 2 and samples.shape[1] == 2:
        counts, ex, ev = np.histogram2d(samples[:, 0], samples[:, 1],
                                        bins=bins, range=range)
        total = samples.shape[0]
        inside = counts.sum()
        area = np.outer(np.diff(ex), np.diff(ev))
        density = counts / (inside * area) if inside else counts
        return HistogramDensity(2, (ex, ev), density, total,
                                (total - inside) / total)
    raise ValueError("samples must be 1-D or an (n, 2) array")


def amplitude_series(x: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Per-half-oscillation amplitudes: max |x| between velocity zero crossings."""
    x = np.asarray(x, float)
    v = np.asarray(v, float)
    if x.size == 0:
        raise EmptySeriesError("no samples")
    sign = np.sign(v)
    sign[sign == 0] = 1
    crossings = np.flatnonzero(np.diff(sign))
    if crossings.size < 2:
        return np.array([np.max(np.abs(x))])
    amps = np.empty(crossings.size - 1)
    for i, (a, b) in enumerate(zip(crossings[:-1], crossings[1:])):
        amps[i] = np.max(np.abs(x[a:b + 1]))
    return amps


def welch_psd(series: np.ndarray, dt_effective: float,
              segment_length: int | None = None, overlap: float = 0.5,
              window: str = "hann", detrend="constant") -> SpectrumEstimate:
    """Averaged modified periodogram, one-sided, on an angular-frequency grid.

    Normalized so that the integral of the PSD over omega equals the variance
    of the (mean-removed) series.  Pass detrend=False to keep the mean
    component; a nonzero time average then shows up as low-frequency power.
    """
    series = np.asarray(series, float)
    if segment_length is None:
        segment_length = min(series.size // 8, 1 << 14)
        segment_length = max(segment_length, 16)
    if series.size < 2 * segment_length:
        raise TooShortError(
            f"need at least {2 * segment_length} samples, got {series.size}")
    noverlap = int(overlap * segment_length)
    freqs, pxx = signal.welch(series, fs=1.0 / dt_effective, window=window,
                              nperseg=segment_length, noverlap=noverlap,
                              detrend=detrend)
    step = segment_length - noverlap
    n_segments = 1 + (series.size - segment_length) // step
    return SpectrumEstimate(
        omega=2.0 * math.pi * freqs, psd=pxx / (2.0 * math.pi),
        segment_length=segment_length, overlap=overlap, window=window,
        n_segments=n_segments)


def _smooth(values: np.ndarray, width: int) -> np.ndarray:
    if width <= 1:
        return values
    kernel = np.ones(width) / width
    pad = width // 2
    padded = np.pad(values, pad, mode="edge")
    return np.convolve(padded, kernel, mode="valid")[:values.size]


def quality_factor(spec: SpectrumEstimate, smooth_bins: int = 5) -> QualityFactor:
    """Peak height, frequency and h/sqrt(e) width of the dominant PSD peak.

    The DC bin is excluded from the search.  A monotone-decreasing spectrum
    raises NoPeakError; a peak whose level crossing is not bracketed inside
    the spectrum raises NoWidthError (widths are never extrapolated).
    """
    if spec.psd.size < 16:
        raise TooShortError("need at least 16 spectral bins")
    psd = _smooth(spec.psd, smooth_bins)
    omega = spec.omega
    # Exclude the DC structure: skip the DC bin plus any monotone flank
    # descending from it, which belongs to the zero-frequency component
    # rather than to a resonance.
    i0 = 1
    while i0 + 1 < psd.size and psd[i0 + 1] <= psd[i0]:
        i0 += 1
    if i0 + 1 >= psd.size:
        raise NoPeakError("spectrum decreases monotonically from DC")
    k = i0 + int(np.argmax(psd[i0:]))
    h = float(psd[k])
    omega_m = float(omega[k])
    level = h / math.sqrt(math.e)

    def crossing(direction: int) -> float:
        i = k
        while 0 <= i + direction < psd.size:
            j = i + direction
            if psd[j] < level:
                # linear interpolation between bins i and j
                frac = (psd[i] - level) / (psd[i] - psd[j])
                return float(omega[i] + frac * (omega[j] - omega[i]))
            i = j
        raise NoWidthError("level crossing outside the spectrum")

    left = crossing(-1)
    right = crossing(+1)
    delta = right - left
    if delta <= 0:
        raise NoWidthError("degenerate peak width")
    return QualityFactor(h=h, omega_m=omega_m, delta_omega=delta)


def _as_curve(obj):
    """(grid, values) view of a 1-D density table, histogram or pair."""
    if isinstance(obj, DensityTable):
        if len(obj.grids) != 1:
            raise ValueError("only 1-D density tables can be compared")
        return np.asarray(obj.grids[0]), np.asarray(obj.values)
    if isinstance(obj, HistogramDensity):
        if obj.dimension != 1:
            raise ValueError("only 1-D histograms can be compared")
        return obj.centers[0], obj.density
    grid, values = obj
    return np.asarray(grid, float), np.asarray(values, float)


def compare_densities(a, b) -> ComparisonRecord:
    """L1, sup and KS distances between two normalized 1-D densities.

    Both inputs are interpolated onto the overlap of their supports; disjoint
    supports raise SupportMismatchError.
    """
    ga, va = _as_curve(a)
    gb, vb = _as_curve(b)
    lo, hi = max(ga[0], gb[0]), min(ga[-1], gb[-1])
    if hi <= lo:
        raise SupportMismatchError(
            f"supports [{ga[0]:.4g}, {ga[-1]:.4g}] and "
            f"[{gb[0]:.4g}, {gb[-1]:.4g}] do not overlap")
    n = max(ga.size, gb.size, 256)
    grid = np.linspace(lo, hi, n)
    fa = np.interp(grid, ga, va)
    fb = np.interp(grid, gb, vb)
    diff = np.abs(fa - fb)
    l1 = float(np.trapezoid(diff, grid))
    sup = float(diff.max())
    dx = grid[1] - grid[0]
    cdf_a = np.cumsum(fa) * dx
    cdf_b = np.cumsum(fb) * dx
    ks = float(np.max(np.abs(cdf_a - cdf_b)))
    return ComparisonRecord(l1=l1, sup=sup, ks=ks)


def count_modes(density, prominence: float = 0.05) -> int:
    """Number of local maxima exceeding both neighboring minima by the
    prominence threshold (a fraction of the global maximum).

    A flat density counts as a single mode.
    """
    if isinstance(density, (DensityTable, HistogramDensity)):
        _, values = _as_curve(density)
    elif isinstance(density, tuple) and len(density) == 2:
        _, values = density
    else:
        values = density
    values = np.asarray(values, float)
    vmax = values.max()
    if vmax <= 0:
        return 0
    if np.allclose(values, values[0]):
        return 1
    peaks, _ = signal.find_peaks(values, prominence=prominence * vmax)
    # a maximum at either boundary is a mode as well
    if values[0] > values[1] and values[0] >= vmax * prominence:
        peaks = np.concatenate([[0], peaks])
    if values[-1] > values[-2] and values[-1] >= vmax * prominence:
        peaks = np.concatenate([peaks, [values.size - 1]])
    return max(int(len(peaks)), 1 if vmax > 0 else 0)
