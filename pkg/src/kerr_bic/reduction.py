"""Adiabatic elimination of the far-detuned nonlinear mode.

When mode b sits far from the drive (|delta_b| much larger than its
linewidth and the coupling), it follows mode a instantaneously and the
two-mode system collapses onto an effective single-mode Kerr cavity.  This
module provides the parameter mapping, the adiabatic solution for b, and an
honest measurement of the approximation error against the full model.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .core import DomainError, StructuralDisagreementError, TwoModeParams, require_finite
from .steady_state import real_cubic_roots, solve_two_mode_cavity_driven

#: Below this ratio of |delta_b| to max(gamma_b, g) the expansion is dubious.
VALIDITY_RATIO = 10.0


@dataclass(frozen=True)
class EffectiveSingleMode:
    """Effective single-mode parameters after eliminating mode b.

    The Kerr term enters the effective equation of motion as
    -i * u_eff * |a|^2 * a (single power of u_eff).
    """

    delta_eff: float
    u_eff: float
    gamma_eff: float
    drive_eff: float

    @property
    def delta_t(self) -> float:
        """Normalized detuning of the equivalent single-mode description."""
        return self.delta_eff / self.gamma_eff


def effective_params(p: TwoModeParams, drive_on_cavity: float) -> EffectiveSingleMode:
    """Map a cavity-driven two-mode system onto its effective single mode.

    The linear response of b pulls the cavity detuning by g^2/delta_b and
    its Kerr term is inherited scaled by 2*(g/delta_b)^4.  Emits a warning
    when |delta_b| is not at least 10x gamma_b and g.
    """
    require_finite("effective_params", drive_on_cavity)
    if drive_on_cavity < 0:
        raise DomainError("drive_on_cavity must be non-negative")
    if p.delta_b == 0:
        raise DomainError("adiabatic elimination requires delta_b != 0")
    if abs(p.delta_b) < VALIDITY_RATIO * max(p.gamma_b, p.g):
        warnings.warn(
            "adiabatic elimination is dubious: |delta_b| is below "
            f"{VALIDITY_RATIO}x max(gamma_b, g)",
            stacklevel=2,
        )
    return EffectiveSingleMode(
        delta_eff=p.delta_a - p.g**2 / p.delta_b,
        u_eff=2.0 * (p.g / p.delta_b) ** 4 * p.u,
        gamma_eff=p.gamma_a,
        drive_eff=drive_on_cavity,
    )


def adiabatic_b(a: complex, p: TwoModeParams) -> complex:
    """First-order adiabatic solution for mode b following a cavity
    amplitude ``a`` (undriven b)."""
    require_finite("adiabatic_b", a)
    if p.delta_b == 0:
        raise DomainError("adiabatic following requires delta_b != 0")
    lead = -p.g * a / p.delta_b
    corr = 2.0 * (p.g / p.delta_b) ** 3 * (p.u / p.delta_b) * abs(a) ** 2 * a
    return lead + corr


def solve_effective(em: EffectiveSingleMode) -> list[float]:
    """Steady cavity intensities |a0|^2 of the effective single mode,
    sorted ascending."""
    g2 = em.gamma_eff**2
    e2 = em.drive_eff**2
    if em.u_eff == 0.0:
        return [e2 / (g2 + em.delta_eff**2)]
    # u^2 n^3 + 2 d u n^2 + (g^2 + d^2) n - E^2 = 0, made monic
    u, d = em.u_eff, em.delta_eff
    roots = real_cubic_roots(2.0 * d / u, (g2 + d * d) / (u * u), -e2 / (u * u))
    return sorted(max(0.0, r) for r in roots)


def reduction_error(p: TwoModeParams, drive: float) -> float:
    """Relative error in the steady cavity intensity |a0|^2 between the full
    cavity-driven two-mode model and its effective single-mode reduction.

    Branches are matched by sorted order; a different branch count in the
    two models is a structural disagreement, not a number.
    """
    em = effective_params(p, drive)
    full = [abs(r.amplitude_a) ** 2 for r in solve_two_mode_cavity_driven(drive, p)]
    eff = solve_effective(em)
    if len(full) != len(eff):
        raise StructuralDisagreementError(
            f"full model has {len(full)} branches, effective model {len(eff)}"
        )
    full.sort()
    worst = 0.0
    for nf, ne in zip(full, eff):
        if nf == 0.0 and ne == 0.0:
            continue
        worst = max(worst, abs(ne - nf) / max(abs(nf), 1e-300))
    return worst


def cavity_fold_drives(p: TwoModeParams) -> tuple[float, float] | None:
    """Squared drive amplitudes at the fold points of the full cavity-driven
    response curve, or None when the curve is monotone."""
    r0 = p.gamma_a * p.gamma_b + p.g**2 - p.delta_a * p.delta_b
    r1 = -2.0 * p.u * p.delta_a
    q0 = p.gamma_a * p.delta_b + p.delta_a * p.gamma_b
    q1 = 2.0 * p.u * p.gamma_a
    if p.g == 0:
        return None
    # d/dw [w ((r0+r1 w)^2 + (q0+q1 w)^2)] = 0, a real quadratic in w
    c2 = 3.0 * (r1 * r1 + q1 * q1)
    c1 = 4.0 * (r0 * r1 + q0 * q1)
    c0 = r0 * r0 + q0 * q0
    disc = c1 * c1 - 4.0 * c2 * c0
    if c2 == 0.0 or disc <= 0.0:
        return None
    wm = (-c1 - math.sqrt(disc)) / (2.0 * c2)
    wp = (-c1 + math.sqrt(disc)) / (2.0 * c2)
    if wm <= 0 or wp <= 0:
        return None

    def e2(w):
        return w * ((r0 + r1 * w) ** 2 + (q0 + q1 * w) ** 2) / p.g**2

    return e2(wm), e2(wp)


def effective_fold_drives(em: EffectiveSingleMode) -> tuple[float, float] | None:
    """Squared drive amplitudes at the fold points of the effective
    single-mode response, or None when monotone."""
    if em.u_eff == 0.0:
        return None
    u, d, g2 = em.u_eff, em.delta_eff, em.gamma_eff**2
    # d/dn [n (g^2 + (d + u n)^2)] = 3u^2 n^2 + 4du n + g^2 + d^2 = 0
    disc = 16.0 * d * d * u * u - 12.0 * u * u * (g2 + d * d)
    if disc <= 0.0:
        return None
    nm = (-4.0 * d * u - math.sqrt(disc)) / (6.0 * u * u)
    np_ = (-4.0 * d * u + math.sqrt(disc)) / (6.0 * u * u)
    if nm <= 0 or np_ <= 0:
        return None

    def e2(n):
        return n * (g2 + (d + u * n) ** 2)

    return e2(nm), e2(np_)
