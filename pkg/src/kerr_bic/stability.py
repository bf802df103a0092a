"""Routh-Hurwitz stability of the steady states.

The rotated characteristic polynomial of the two-mode linearization has real
coefficients, so linear stability is an algebraic sign condition on them.
For the single mode the trace of the linearization is fixed, and the
determinant sign alone decides.

The full Hurwitz set {a1 > 0, a3 > 0, a4 > 0, margin > 0} is tested rather
than a4 alone: a4 > 0 plus positive decay rates does not by itself exclude
oscillatory instabilities at strong coupling and large detunings, and the
eigenvalue criterion must be matched exactly.
"""

from __future__ import annotations

from .core import DomainError, TwoModeParams, require_finite
from .spectra import QuarticCoefficients, characteristic_quartic, det_h_two

#: |a4| below this (absolute) counts as sitting on the stability boundary.
MARGINAL_TOL = 1e-12


def routh_hurwitz_coeffs(p: TwoModeParams, x: float) -> QuarticCoefficients:
    """Closed-form quartic coefficients used by the Hurwitz conditions;
    a4 is bit-for-bit the determinant closed form."""
    return characteristic_quartic(p, x)


def hurwitz_margin(p: TwoModeParams, x: float) -> float:
    """The third Hurwitz determinant a1*a2*a3 - a3^2 - a1^2*a4, evaluated
    through its factored closed form (three products of squared groups)."""
    require_finite("hurwitz_margin", x)
    if x < 0:
        raise DomainError("x must be non-negative")
    da, db, ga, gb, g = p.delta_a, p.delta_b, p.gamma_a, p.gamma_b, p.g
    gsum2 = (ga + gb) ** 2
    return (
        4.0 * ga * gb * (12.0 * x**2 + 8.0 * db * x - da**2 + db**2) ** 2
        + 4.0
        * ga
        * gb
        * gsum2
        * (24.0 * x**2 + 16.0 * db * x + 2.0 * (da**2 + db**2) + gsum2)
        + 4.0
        * g**2
        * gsum2
        * (12.0 * x**2 + 8.0 * (da + db) * x + (da + db) ** 2 + gsum2)
    )


def is_stable(p: TwoModeParams, x: float) -> bool:
    """Linear stability of a two-mode steady state with response ``x``."""
    stable, _ = classify_two(p, x)
    return stable


def classify_two(p: TwoModeParams, x: float) -> tuple[bool, bool]:
    """(stable, marginal) for a two-mode steady state.

    Marginal means a4 vanishes within tolerance (the BIC point itself is the
    stability boundary); marginal states are reported unstable.
    """
    c = routh_hurwitz_coeffs(p, x)
    assert c.a1 > 0.0  # decay rates are positive by construction
    if abs(c.a4) <= MARGINAL_TOL:
        return False, True
    stable = c.a4 > 0.0 and c.a3 > 0.0 and hurwitz_margin(p, x) > 0.0
    return stable, False


def is_stable_single(alpha: float, delta_t: float) -> bool:
    """Linear stability of a single-mode steady state with response
    ``alpha``; the trace of the linearization is fixed, so the (negated)
    determinant sign is the whole criterion."""
    stable, _ = classify_single(alpha, delta_t)
    return stable


def classify_single(alpha: float, delta_t: float) -> tuple[bool, bool]:
    """(stable, marginal) for a single-mode steady state."""
    require_finite("classify_single", alpha, delta_t)
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    neg_det = 0.75 * alpha**2 + 2.0 * delta_t * alpha + delta_t**2 + 1.0
    if abs(neg_det) <= MARGINAL_TOL * (1.0 + alpha**2 + delta_t**2):
        return False, True
    return neg_det > 0.0, False
