"""Fold (turning) points, onset of bistability, and the bistability criteria.

The turning points are where dI/d(response) vanishes; they bound the
three-root window of the steady-state cubic and double as the loci where the
linearized spectrum develops a zero eigenvalue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .core import DomainError, NoBistabilityError, require_finite
from .steady_state import EffectiveDetuning, single_mode_intensity, two_mode_intensity

SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class TurningPoints:
    """Fold coordinates: responses (lower < upper) and their drive values.

    On an S-shaped response curve ``i_lower`` (the drive at the lower-response
    fold) is the larger of the two drives: it is where an upward sweep jumps;
    ``i_upper`` is where a downward sweep falls back.
    """

    lower: float
    upper: float
    i_lower: float
    i_upper: float

    @property
    def degenerate(self) -> bool:
        return self.lower == self.upper


class CriticalPoint(NamedTuple):
    delta_t: float
    alpha: float
    i_drive: float


def is_bistable_single(u: float, delta: float, gamma: float) -> bool:
    """Whether a single-mode Kerr system can show bistability at all.

    Works in physical rate units: Kerr coefficient ``u``, detuning ``delta``,
    linewidth ``gamma``.
    """
    require_finite("is_bistable_single", u, delta, gamma)
    if gamma <= 0:
        raise DomainError("gamma must be positive")
    return u * delta < 0 and delta**2 > 3 * gamma**2


def turning_points_single(delta_t: float) -> TurningPoints:
    """Fold responses alpha_-, alpha_+ and their drives for normalized
    detuning ``delta_t`` (u > 0 convention, so ``delta_t <= -sqrt(3)``).

    At the boundary ``delta_t == -sqrt(3)`` the folds coincide and the
    degenerate pair is returned rather than an error, so sweeps pass
    continuously through the cusp.
    """
    require_finite("turning_points_single", delta_t)
    if delta_t > -SQRT3:
        raise NoBistabilityError(
            f"no turning points: need delta_t <= -sqrt(3) ~ {-SQRT3:.6f}, got {delta_t}",
            boundary=SQRT3,
        )
    s = math.sqrt(max(0.0, delta_t**2 - 3.0))
    lower = (-4.0 * delta_t - 2.0 * s) / 3.0
    upper = (-4.0 * delta_t + 2.0 * s) / 3.0
    return TurningPoints(
        lower=lower,
        upper=upper,
        i_lower=single_mode_intensity(lower, delta_t),
        i_upper=single_mode_intensity(upper, delta_t),
    )


def critical_point_single() -> CriticalPoint:
    """Onset of bistability: the unique point where the drive-response curve
    has a horizontal inflection (first and second derivative both zero)."""
    alpha_c = 4.0 * SQRT3 / 3.0
    return CriticalPoint(delta_t=-SQRT3, alpha=alpha_c, i_drive=8.0 * SQRT3 / 9.0)


def is_bistable_two(dt: EffectiveDetuning) -> bool:
    """Bistability criterion of the two-mode system (strict inequality;
    both sides are negative)."""
    return dt.real_part < SQRT3 * dt.imag_part


def turning_points_two(dt: EffectiveDetuning) -> TurningPoints:
    """Fold responses x_-, x_+ and their drives for the two-mode system.

    The boundary case (discriminant exactly zero) returns the degenerate
    pair; anything short of the criterion raises NoBistabilityError.
    """
    dr, di = dt.real_part, dt.imag_part
    if dr > SQRT3 * di:
        raise NoBistabilityError(
            f"no turning points: need Re ~ {dr:.6g} <= sqrt(3)*Im ~ {SQRT3 * di:.6g}",
            boundary=SQRT3,
        )
    # dr <= sqrt(3)*di < 0 makes the discriminant non-negative analytically;
    # clamp pure roundoff at the cusp.
    s = math.sqrt(max(0.0, dr**2 - 3.0 * di**2))
    lower = -dr / 3.0 - s / 6.0
    upper = -dr / 3.0 + s / 6.0
    return TurningPoints(
        lower=lower,
        upper=upper,
        i_lower=two_mode_intensity(lower, dt),
        i_upper=two_mode_intensity(upper, dt),
    )
