"""Steady states, bistability, spectra, stability and sensitivity of driven
Kerr-nonlinear one- and two-mode systems, with the fold points doubling as
bound states in the continuum."""

__version__ = "0.1.0"

from .core import (
    DomainError,
    FitError,
    LinearTwoModeParams,
    NoBistabilityError,
    NumericError,
    PoleError,
    SingleModeParams,
    Spectrum,
    Stability,
    SteadyRoot,
    StructuralDisagreementError,
    TwoModeParams,
    drive_rabi_magnon,
    drive_rabi_optical,
    kerr_coefficient_optical,
)
from .steady_state import (
    EffectiveDetuning,
    SweepTrace,
    effective_detuning,
    hysteresis_sweep,
    single_mode_intensity,
    solve_single_mode,
    solve_two_mode,
    solve_two_mode_cavity_driven,
    two_mode_intensity,
)
from .bistability import (
    CriticalPoint,
    TurningPoints,
    critical_point_single,
    is_bistable_single,
    is_bistable_two,
    turning_points_single,
    turning_points_two,
)
from .spectra import (
    BicLocus,
    BicPoint,
    QuarticCoefficients,
    SymmetryClass,
    bic_locus,
    classify_symmetry,
    det_h_two,
    det_single,
    eigenvalues_single,
    eigenvalues_two,
    linear_two_mode_eigenvalues,
    linearized_single_hamiltonian,
    linearized_two_hamiltonian,
)
from .stability import (
    hurwitz_margin,
    is_stable,
    is_stable_single,
    routh_hurwitz_coeffs,
)
from .sensitivity import (
    ScalingFit,
    SensitivityProfile,
    dalpha_ddelta,
    dx_ddelta_b,
    fit_scaling,
    sensitivity_profile,
)
from .dynamics import (
    RingdownResult,
    Trajectory,
    integrate_single,
    integrate_two,
    linearized_deviation,
    ringdown_rate,
)
from .reduction import (
    EffectiveSingleMode,
    adiabatic_b,
    effective_params,
    reduction_error,
    solve_effective,
)
