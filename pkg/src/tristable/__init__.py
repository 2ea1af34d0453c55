"""Stationary probability densities and coherence resonance of tri-stable
sextic-potential oscillators driven by colored (Ornstein-Uhlenbeck) noise.

The package computes energy-envelope averaged densities with an
energy-dependent frequency, validates them against built-in Monte Carlo
simulation, and measures coherence resonance through Welch spectra and a
spectral quality factor.
"""

__version__ = "1.0.0"

from .potential import (
    Deepest,
    DegenerateEnergyError,
    EnergyBelowMinimumError,
    Landscape,
    MotionPattern,
    NotTriStableError,
    PotentialError,
    StiffnessParams,
    UnreachablePointError,
    classify_landscape,
    classify_motion,
    energy_roots,
    potential,
    potential_deriv,
    potential_second_deriv,
    total_energy,
    turning_points,
)
from .quadrature import QuadratureFailureError, adaptive_gauss, fixed_gauss
from .orbit import (
    BranchTable,
    EnergyFunctionTable,
    GridSpec,
    InvalidGridSpecError,
    Orbit,
    OrbitMoments,
    OutsideBranchError,
    build_energy_table,
    frequency,
    orbit_data,
    period,
    time_average,
)
from .averaging import (
    Case1Params,
    Case2Params,
    DampingParams,
    DensityKind,
    DensityTable,
    DriftDiffusion,
    Form,
    NoisePairSpec,
    NoiseSpec,
    NonIntegrableError,
    SpdModel,
    drift_diffusion_case1,
    drift_diffusion_case2,
    spd_amplitude,
    spd_energy,
    spd_fixed_frequency_baseline,
    spd_joint,
    spd_joint_table,
    spd_marginals,
)
from .sde import (
    DivergenceError,
    SimConfig,
    TimeSeries,
    ou_generate,
    ou_generate_pair,
    run_ensemble,
    simulate_case1,
    simulate_case2,
)
from .estimation import (
    ComparisonRecord,
    EmptySeriesError,
    HistogramDensity,
    NoPeakError,
    NoWidthError,
    QualityFactor,
    SpectrumEstimate,
    SupportMismatchError,
    TooShortError,
    amplitude_series,
    compare_densities,
    count_modes,
    histogram_density,
    quality_factor,
    welch_psd,
)

__all__ = [name for name in dir() if not name.startswith("_")]
