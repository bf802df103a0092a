"""Shared domain types, error classes, physical constants, and conversions
from platform parameters (optical cavity, YIG sphere) to the model's rate
units.

Everything downstream of this module works in dimensionless or rate units;
the three conversion functions below are the only place physical constants
enter the library.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

# CODATA 2018 exact/recommended values (SI)
HBAR = 1.054571817e-34  # reduced Planck constant, J s
EPSILON_0 = 8.8541878128e-12  # vacuum permittivity, F/m
SPEED_OF_LIGHT = 299792458.0  # m/s


class DomainError(ValueError):
    """An argument violates a precondition (wrong sign, wrong regime, ...)."""


class NoBistabilityError(DomainError):
    """Turning points requested where the bistability criterion fails.

    ``boundary`` carries the critical value of the criterion variable, e.g.
    sqrt(3) for the normalized single-mode detuning magnitude.
    """

    def __init__(self, message: str, boundary: float):
        super().__init__(message)
        self.boundary = boundary


class PoleError(DomainError):
    """A derivative was evaluated on top of one of its poles."""

    def __init__(self, message: str, which: str, location: float):
        super().__init__(message)
        self.which = which  # "lower" or "upper"
        self.location = location


class NumericError(RuntimeError):
    """An iterative numeric routine failed to converge."""


class FitError(NumericError):
    """A regression did not meet its quality gate; carries diagnostics."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class StructuralDisagreementError(RuntimeError):
    """Two models that should agree structurally (e.g. same root count) do not."""


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"

    def __str__(self) -> str:  # CSV-friendly
        return self.value


def require_finite(name: str, *values: float) -> None:
    """Raise DomainError if any value is NaN or infinite."""
    for v in values:
        if isinstance(v, complex):
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise DomainError(f"{name} must be finite, got {v!r}")
        elif not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class SingleModeParams:
    """Reduced single-mode Kerr system.

    ``delta_t`` is the cavity detuning divided by the linewidth; the drive
    strength and nonlinear response are operation arguments, not state.
    """

    delta_t: float

    def __post_init__(self):
        require_finite("delta_t", self.delta_t)


@dataclass(frozen=True)
class TwoModeParams:
    """Two-mode Kerr system in rate units (any consistent unit will do).

    ``delta_a``/``delta_b`` are the mode detunings from the drive (the b
    detuning already includes its one-photon Kerr shift), ``gamma_a``/
    ``gamma_b`` the decay rates, ``g`` the coherent coupling, ``u`` the Kerr
    coefficient and ``omega`` the drive amplitude on mode b.
    """

    delta_a: float
    delta_b: float
    gamma_a: float
    gamma_b: float
    g: float
    u: float
    omega: float = 0.0

    def __post_init__(self):
        require_finite(
            "TwoModeParams",
            self.delta_a,
            self.delta_b,
            self.gamma_a,
            self.gamma_b,
            self.g,
            self.u,
            self.omega,
        )
        if self.gamma_a <= 0 or self.gamma_b <= 0:
            raise DomainError("decay rates gamma_a, gamma_b must be positive")
        if self.g < 0:
            raise DomainError("coupling g must be non-negative")
        if self.omega < 0:
            raise DomainError("drive omega must be non-negative")

    @property
    def i_drive(self) -> float:
        """Composite drive strength u * omega**2."""
        return self.u * self.omega**2


@dataclass(frozen=True)
class LinearTwoModeParams:
    """Linear coupled two-mode system; decay rates are sign-free (negative
    means gain) and the complex coupling is J = g - i*Gamma."""

    delta_a: float
    delta_b: float
    kappa: float
    gamma: float
    g: float
    Gamma: float

    def __post_init__(self):
        require_finite(
            "LinearTwoModeParams",
            self.delta_a,
            self.delta_b,
            self.kappa,
            self.gamma,
            self.g,
            self.Gamma,
        )

    @property
    def coupling(self) -> complex:
        return complex(self.g, -self.Gamma)


@dataclass(frozen=True)
class SteadyRoot:
    """One steady-state branch value with its reconstructed amplitudes.

    ``response`` is the normalized nonlinear response (alpha for the single
    mode, u*|b0|^2 for the two-mode system).  ``marginal`` flags roots sitting
    on the stability boundary within numerical tolerance; such roots are
    classified UNSTABLE.
    """

    response: float
    amplitude_a: complex | None
    amplitude_b: complex | None
    stability: Stability
    marginal: bool = False

    @property
    def is_stable(self) -> bool:
        return self.stability is Stability.STABLE


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a linearized (or linear) Hamiltonian in the drive's
    rotating frame.  A vanishing eigenvalue magnitude signals a bound state
    in the continuum."""

    eigenvalues: tuple[complex, ...]

    def __post_init__(self):
        if len(self.eigenvalues) not in (2, 4):
            raise DomainError("spectrum must hold 2 or 4 eigenvalues")
        require_finite("eigenvalues", *self.eigenvalues)

    @property
    def decay_rates(self) -> tuple[float, ...]:
        return tuple(-ev.imag for ev in self.eigenvalues)

    @property
    def bic_measure(self) -> float:
        return min(abs(ev) for ev in self.eigenvalues)


def kerr_coefficient_optical(chi3: float, omega_a: float, n: float, v_eff: float) -> float:
    """Kerr coefficient of a chi(3) medium filling a cavity mode.

    Args:
        chi3: third-order susceptibility, m^2/V^2.
        omega_a: cavity angular frequency, rad/s.
        n: refractive index.
        v_eff: effective mode volume, m^3.

    Returns:
        Kerr coefficient in rad/s.
    """
    require_finite("kerr_coefficient_optical", chi3, omega_a, n, v_eff)
    if n <= 0 or v_eff <= 0 or omega_a <= 0:
        raise DomainError("omega_a, n and v_eff must be positive")
    return 3 * HBAR * omega_a**2 * chi3 / (4 * EPSILON_0 * n * v_eff)


def drive_rabi_optical(p_d: float, gamma: float, omega_d: float) -> float:
    """Drive amplitude of a cavity pumped with power ``p_d`` (W) through a
    linewidth ``gamma`` (rad/s) at frequency ``omega_d`` (rad/s)."""
    require_finite("drive_rabi_optical", p_d, gamma, omega_d)
    if p_d < 0:
        raise DomainError("drive power must be non-negative")
    if gamma <= 0 or omega_d <= 0:
        raise DomainError("gamma and omega_d must be positive")
    return math.sqrt(2 * gamma * p_d / (HBAR * omega_d))


def drive_rabi_magnon(gamma_e: float, rho: float, d: float, p_d: float) -> float:
    """Drive amplitude of a directly pumped magnon mode.

    Args:
        gamma_e: gyromagnetic ratio, rad/(s T).
        rho: spin density, m^-3.
        d: sphere diameter, m.
        p_d: pump power, W.
    """
    require_finite("drive_rabi_magnon", gamma_e, rho, d, p_d)
    if gamma_e < 0 or rho < 0 or d < 0 or p_d < 0:
        raise DomainError("all magnon-drive inputs must be non-negative")
    return gamma_e * math.sqrt(5 * math.pi * rho * d * p_d / (3 * SPEED_OF_LIGHT))
