"""Eigenvalue analysis of the linear two-mode system and of the Kerr
systems linearized about a steady state.

All spectra live in the drive's rotating frame, so a vanishing eigenvalue
magnitude means a mode that neither decays nor precesses: a bound state in
the continuum.  For both Kerr systems the determinant of the linearization
is proportional to dI/d(response), which ties the BIC loci to the fold
points of the steady-state curve.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DomainError,
    LinearTwoModeParams,
    NumericError,
    Spectrum,
    SteadyRoot,
    TwoModeParams,
    require_finite,
)
from .steady_state import EffectiveDetuning, effective_detuning, two_mode_intensity
from .bistability import NoBistabilityError, is_bistable_two, turning_points_two

#: Default threshold on min |eigenvalue| below which a spectrum is flagged
#: as containing a bound state in the continuum.
BIC_MEASURE_TOL = 1e-6


# ---------------------------------------------------------------------------
# linear two-mode system

def linear_two_mode_eigenvalues(p: LinearTwoModeParams) -> Spectrum:
    """Both eigenvalue branches of the linear coupled-mode Hamiltonian.

    Returned in (plus, minus) branch order of the closed form.
    """
    centre = 0.5 * (p.delta_a + p.delta_b) - 0.5j * (p.kappa + p.gamma)
    half_split = cmath.sqrt(
        (0.5 * (p.delta_a - p.delta_b) - 0.5j * (p.kappa - p.gamma)) ** 2 + p.coupling**2
    )
    return Spectrum((centre + half_split, centre - half_split))


@dataclass(frozen=True)
class SymmetryClass:
    """Symmetry tag of a linear two-mode configuration plus degeneracy and
    dark-state flags."""

    tag: str  # "PT", "anti-PT" or "none"
    at_exceptional_point: bool
    at_bic: bool


def classify_symmetry(p: LinearTwoModeParams, tol: float = 1e-9) -> SymmetryClass:
    """Tag PT / anti-PT parameter identities within ``tol`` and flag
    eigenvalue coalescence (|lambda_+ - lambda_-| <= 2 tol) and a dark state
    (min |lambda| < tol)."""
    if tol <= 0:
        raise DomainError("tol must be positive")
    if (
        abs(p.kappa + p.gamma) <= tol
        and abs(p.Gamma) <= tol
        and abs(p.delta_a - p.delta_b) <= tol
    ):
        tag = "PT"
    elif (
        abs(p.g) <= tol
        and abs(p.kappa - p.gamma) <= tol
        and abs(p.delta_a + p.delta_b) <= tol
    ):
        tag = "anti-PT"
    else:
        tag = "none"
    spec = linear_two_mode_eigenvalues(p)
    lam_p, lam_m = spec.eigenvalues
    return SymmetryClass(
        tag=tag,
        at_exceptional_point=abs(lam_p - lam_m) <= 2 * tol,
        at_bic=spec.bic_measure < tol,
    )


# ---------------------------------------------------------------------------
# single-mode Kerr system, linearized

def linearized_single_hamiltonian(
    alpha: float, delta_t: float, a0_phase: float = 0.0
) -> np.ndarray:
    """2x2 matrix governing perturbations about a single-mode steady state
    with response ``alpha``; ``a0_phase`` is the steady amplitude's phase."""
    require_finite("linearized_single_hamiltonian", alpha, delta_t, a0_phase)
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    beta = 0.5 * alpha * cmath.exp(2j * a0_phase)
    return np.array(
        [
            [complex(delta_t + alpha, -1.0), beta],
            [-beta.conjugate(), complex(-delta_t - alpha, -1.0)],
        ]
    )


def det_single(alpha: float, delta_t: float) -> float:
    """Determinant of the single-mode linearization (phase independent)."""
    return (0.5 * alpha) ** 2 - (delta_t + alpha) ** 2 - 1.0


def eigenvalues_single(alpha: float, delta_t: float) -> Spectrum:
    """Both eigenvalues of the single-mode linearization, closed form.

    Their sum is -2i (the fixed trace) and their product is the
    determinant, which pins the square-root argument: it vanishes, giving a
    zero eigenvalue, exactly where the determinant does.
    """
    require_finite("eigenvalues_single", alpha, delta_t)
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    s = cmath.sqrt((delta_t + alpha) ** 2 - (0.5 * alpha) ** 2)
    return Spectrum((-1j + s, -1j - s))


# ---------------------------------------------------------------------------
# two-mode Kerr system, linearized

def linearized_two_hamiltonian(p: TwoModeParams, root: SteadyRoot) -> np.ndarray:
    """4x4 matrix governing perturbations (B, b, B*, b*)-style doubled space
    about a two-mode steady state.

    The root must carry the b amplitude consistent with its response
    (x = u*|b0|^2); the b0 phase is kept exactly.
    """
    if root.amplitude_b is None:
        raise DomainError("two-mode root must carry amplitude_b")
    x = root.response
    if abs(p.u * abs(root.amplitude_b) ** 2 - x) > 1e-8 * (1.0 + abs(x)):
        raise DomainError("root amplitude inconsistent with its response")
    s = 2.0 * p.u * root.amplitude_b**2
    da, db = p.delta_a, p.delta_b
    ga, gb, g = p.gamma_a, p.gamma_b, p.g
    return np.array(
        [
            [complex(da, -ga), g, 0.0, 0.0],
            [g, complex(db + 4.0 * x, -gb), 0.0, s],
            [0.0, 0.0, complex(-da, -ga), -g],
            [0.0, -s.conjugate(), -g, complex(-(db + 4.0 * x), -gb)],
        ]
    )


def det_h_two(p: TwoModeParams, x: float) -> float:
    """Determinant of the two-mode linearization, closed form in x.

    Equals (delta_a^2 + gamma_a^2) * dI/dx, so it vanishes exactly at the
    fold points and is negative strictly between them.
    """
    require_finite("det_h_two", x)
    if x < 0:
        raise DomainError("x must be non-negative")
    da, db, ga, gb, g = p.delta_a, p.delta_b, p.gamma_a, p.gamma_b, p.g
    return (
        12.0 * (da**2 + ga**2) * x**2
        + 8.0 * (-da * g**2 + db * da**2 + db * ga**2) * x
        + (g**2 - da * db + ga * gb) ** 2
        + (da * gb + db * ga) ** 2
    )


@dataclass(frozen=True)
class QuarticCoefficients:
    """Real coefficients of the rotated characteristic polynomial
    s^4 + a1 s^3 + a2 s^2 + a3 s + a4, where s = -i*lambda."""

    a1: float
    a2: float
    a3: float
    a4: float

    def as_monic(self) -> tuple[float, ...]:
        return (1.0, self.a1, self.a2, self.a3, self.a4)


def characteristic_quartic(p: TwoModeParams, x: float) -> QuarticCoefficients:
    """Closed-form characteristic polynomial of the two-mode linearization.

    Phase independent; a4 is exactly the determinant closed form.
    """
    require_finite("characteristic_quartic", x)
    if x < 0:
        raise DomainError("x must be non-negative")
    da, db, ga, gb, g = p.delta_a, p.delta_b, p.gamma_a, p.gamma_b, p.g
    a1 = 2.0 * (ga + gb)
    a2 = (
        da**2
        + 2.0 * g**2
        + (ga**2 + 4.0 * ga * gb + gb**2)
        + (12.0 * x**2 + 8.0 * db * x + db**2)
    )
    a3 = (
        2.0 * da**2 * gb
        + 2.0 * db**2 * ga
        + 2.0 * (ga * gb + g**2) * (ga + gb)
        + 16.0 * db * ga * x
        + 24.0 * ga * x**2
    )
    return QuarticCoefficients(a1=a1, a2=a2, a3=a3, a4=det_h_two(p, x))


def durand_kerner(coeffs, max_iter: int = 200, tol: float = 1e-13) -> list[complex]:
    """All roots of a monic polynomial by simultaneous iteration.

    ``coeffs`` are monic, highest power first.  The starting circle is
    deterministically jittered to break symmetry, each converged root gets
    one Newton polish, and non-convergence raises NumericError.
    """
    coeffs = [complex(c) for c in coeffs]
    if not coeffs or coeffs[0] != 1.0:
        raise DomainError("coefficients must be monic, highest power first")
    n = len(coeffs) - 1
    if n == 0:
        return []

    def poly(z: complex) -> complex:
        acc = coeffs[0]
        for c in coeffs[1:]:
            acc = acc * z + c
        return acc

    def dpoly(z: complex) -> complex:
        acc = n * coeffs[0]
        for k, c in enumerate(coeffs[1:-1], start=1):
            acc = acc * z + (n - k) * c
        return acc

    rng = np.random.default_rng(0x5EED)  # fixed seed: byte-reproducible output
    radius = 1.0 + max(abs(c) for c in coeffs[1:])
    roots = [
        radius
        * (1.0 + 0.05 * rng.standard_normal())
        * cmath.exp(2j * math.pi * (k + 0.25) / n + 0.4j)
        for k in range(n)
    ]
    for _ in range(max_iter):
        max_step = 0.0
        new_roots = list(roots)
        for i in range(n):
            denom = 1.0 + 0j
            for j in range(n):
                if j != i:
                    denom *= roots[i] - roots[j]
            if denom == 0:
                denom = 1e-300
            step = poly(roots[i]) / denom
            new_roots[i] = roots[i] - step
            max_step = max(max_step, abs(step))
        roots = new_roots
        if max_step < tol * (1.0 + max(abs(r) for r in roots)):
            break
    else:
        raise NumericError(f"root iteration did not converge in {max_iter} steps")
    polished = []
    for r in roots:
        d = dpoly(r)
        polished.append(r - poly(r) / d if d != 0 else r)
    return polished


def eigenvalues_two(p: TwoModeParams, root: SteadyRoot) -> Spectrum:
    """All four eigenvalues of the two-mode linearization at ``root``,
    sorted by magnitude (so the first sets the BIC measure)."""
    coeffs = characteristic_quartic(p, root.response)
    # validate the root/amplitude pairing exactly as the matrix builder does
    linearized_two_hamiltonian(p, root)
    s_roots = durand_kerner(coeffs.as_monic())
    lams = sorted((1j * s for s in s_roots), key=abs)
    return Spectrum(tuple(lams))


# ---------------------------------------------------------------------------
# BIC locus tracing

@dataclass(frozen=True)
class BicPoint:
    delta_b: float
    response: float
    i_drive: float
    branch: str  # "lower" or "upper"


@dataclass(frozen=True)
class BicLocus:
    points: tuple[BicPoint, ...]
    gaps: tuple[float, ...]  # delta_b values with no fold pair


def bic_locus(p: TwoModeParams, delta_b_grid) -> BicLocus:
    """Trace both fold branches (the BIC loci) against delta_b.

    Grid points outside the bistable window are recorded as gaps, not
    errors.
    """
    grid = [float(v) for v in delta_b_grid]
    if not grid:
        raise DomainError("delta_b grid must not be empty")
    points: list[BicPoint] = []
    gaps: list[float] = []
    for db in grid:
        q = TwoModeParams(
            delta_a=p.delta_a,
            delta_b=db,
            gamma_a=p.gamma_a,
            gamma_b=p.gamma_b,
            g=p.g,
            u=p.u,
            omega=p.omega,
        )
        dt = effective_detuning(q)
        if not is_bistable_two(dt):
            gaps.append(db)
            continue
        try:
            tp = turning_points_two(dt)
        except NoBistabilityError:
            gaps.append(db)
            continue
        points.append(BicPoint(db, tp.lower, tp.i_lower, "lower"))
        points.append(BicPoint(db, tp.upper, tp.i_upper, "upper"))
    return BicLocus(points=tuple(points), gaps=tuple(gaps))
