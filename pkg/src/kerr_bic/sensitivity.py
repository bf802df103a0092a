"""Closed-form response derivatives and the power-law scaling of the
sensitivity near the fold and inflection points.

The derivative of the response with respect to its detuning has first-order
poles at the fold responses (second order when the folds merge), which is
what makes drive values just short of a fold attractive operating points
for sensing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DomainError, PoleError, SingleModeParams, TwoModeParams, require_finite
from .steady_state import (
    EffectiveDetuning,
    effective_detuning,
    _single_mode_alpha_roots,
    _two_mode_x_roots,
)
from .bistability import (
    SQRT3,
    NoBistabilityError,
    turning_points_single,
    turning_points_two,
)

#: Default relative fit window |I - i_ref| / i_ref, calibrated so the fitted
#: prefactors land on the reference values for both systems.
DEFAULT_FIT_WINDOW = (1e-5, 1e-3)

#: Points closer to the reference than this (relative) are dropped: cubic
#: root accuracy degrades like the square root of the residual at a fold.
FIT_EXCLUSION = 1e-6


def _pole_check(value: float, poles: tuple[float, float] | None, tol: float = 1e-12):
    if poles is None:
        return
    lower, upper = poles
    if abs(value - lower) <= tol * (1.0 + abs(value)):
        raise PoleError("evaluated on the lower fold pole", "lower", lower)
    if abs(value - upper) <= tol * (1.0 + abs(value)):
        raise PoleError("evaluated on the upper fold pole", "upper", upper)


def dalpha_ddelta(alpha: float, delta_t: float) -> float:
    """d(alpha)/d(delta_t) at fixed drive, closed form.

    Diverges at the fold responses; evaluating within 1e-12 of one raises
    PoleError naming the fold.
    """
    require_finite("dalpha_ddelta", alpha, delta_t)
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    poles = None
    if delta_t <= -SQRT3:
        tp = turning_points_single(delta_t)
        poles = (tp.lower, tp.upper)
    _pole_check(alpha, poles)
    denom = 3.0 * alpha**2 + 8.0 * delta_t * alpha + 4.0 * (delta_t**2 + 1.0)
    if denom == 0.0:
        raise PoleError("evaluated on a fold pole", "lower", alpha)
    return -8.0 * alpha * (delta_t + 0.5 * alpha) / denom


def dx_ddelta_b(x: float, dt: EffectiveDetuning) -> float:
    """d(x)/d(delta_b) at fixed drive, closed form (the fold positions play
    the same pole role as in the single-mode case)."""
    require_finite("dx_ddelta_b", x)
    if x < 0:
        raise DomainError("x must be non-negative")
    poles = None
    try:
        tp = turning_points_two(dt)
        poles = (tp.lower, tp.upper)
    except NoBistabilityError:
        pass
    _pole_check(x, poles)
    denom = 0.25 * (12.0 * x**2 + 8.0 * dt.real_part * x + dt.abs_squared)
    if denom == 0.0:
        raise PoleError("evaluated on a fold pole", "lower", x)
    return -x * (x + 0.5 * dt.real_part) / denom


@dataclass(frozen=True)
class ProfilePoint:
    i_drive: float
    response: float
    derivative: float


@dataclass(frozen=True)
class GapRecord:
    i_drive: float
    reason: str


@dataclass(frozen=True)
class SensitivityProfile:
    points: tuple[ProfilePoint, ...]
    gaps: tuple[GapRecord, ...]


def _select_branch(roots: list[float], branch: str, folds) -> float | None:
    if folds is None:
        return roots[0] if len(roots) == 1 else None
    lo, hi = folds.lower, folds.upper
    tol = 1e-9 * (1.0 + hi)
    buckets = {"lower": [], "middle": [], "upper": []}
    for r in roots:
        if r <= lo + tol:
            buckets["lower"].append(r)
        elif r >= hi - tol:
            buckets["upper"].append(r)
        else:
            buckets["middle"].append(r)
    got = buckets[branch]
    return got[0] if got else None


def sensitivity_profile(
    system: SingleModeParams | TwoModeParams,
    i_grid,
    branch: str = "lower",
    include_unstable: bool = False,
) -> SensitivityProfile:
    """Response and closed-form derivative along one branch of the steady
    curve, one row per drive value.

    ``branch`` is "lower", "upper" or "middle"; the middle branch is the
    dynamically unstable one and must be requested explicitly with
    ``include_unstable``.  Grid points where the branch does not exist are
    returned as gaps.
    """
    if branch not in ("lower", "upper", "middle"):
        raise DomainError(f"unknown branch {branch!r}")
    if branch == "middle" and not include_unstable:
        raise DomainError("the middle branch is unstable; pass include_unstable=True")
    grid = [float(v) for v in i_grid]
    if not grid:
        raise DomainError("i_grid must not be empty")

    if isinstance(system, SingleModeParams):
        delta_t = system.delta_t
        try:
            folds = turning_points_single(delta_t)
        except NoBistabilityError:
            folds = None

        def roots_at(i):
            return _single_mode_alpha_roots(i, delta_t, 1e-9)

        def deriv(v):
            return dalpha_ddelta(v, delta_t)

    else:
        dt = effective_detuning(system)
        try:
            folds = turning_points_two(dt)
        except NoBistabilityError:
            folds = None

        def roots_at(i):
            return _two_mode_x_roots(i, dt, 1e-9)

        def deriv(v):
            return dx_ddelta_b(v, dt)

    points: list[ProfilePoint] = []
    gaps: list[GapRecord] = []
    for i in grid:
        if i < 0:
            gaps.append(GapRecord(i, "negative drive"))
            continue
        roots = roots_at(i)
        value = _select_branch(roots, branch, folds)
        if value is None:
            gaps.append(GapRecord(i, f"no {branch}-branch root"))
            continue
        try:
            points.append(ProfilePoint(i, value, deriv(value)))
        except PoleError:
            gaps.append(GapRecord(i, "on a fold pole"))
    return SensitivityProfile(points=tuple(points), gaps=tuple(gaps))


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares power law |derivative| = prefactor * |I - i_ref|^exponent."""

    exponent: float
    exponent_stderr: float
    intercept: float
    r_squared: float
    window: tuple[float, float]  # absolute |I - i_ref| range actually used
    n_points: int

    @property
    def prefactor(self) -> float:
        return math.exp(self.intercept)


def fit_scaling(
    profile: SensitivityProfile,
    i_ref: float,
    window: tuple[float, float] = DEFAULT_FIT_WINDOW,
) -> ScalingFit:
    """Fit log|derivative| against log|I - i_ref| over a relative window.

    ``window`` bounds |I - i_ref| / |i_ref|; at least 20 points must fall
    inside and all must sit on one side of the reference.
    """
    require_finite("fit_scaling", i_ref)
    if i_ref == 0:
        raise DomainError("i_ref must be nonzero")
    wlo, whi = window
    if not (0 < wlo < whi):
        raise DomainError("window must satisfy 0 < lo < hi")
    wlo = max(wlo, FIT_EXCLUSION)

    sel = [
        pt
        for pt in profile.points
        if wlo <= abs(pt.i_drive - i_ref) / abs(i_ref) <= whi and pt.derivative != 0.0
    ]
    if len(sel) < 20:
        raise DomainError(f"need >= 20 points inside the fit window, got {len(sel)}")
    sides = {pt.i_drive > i_ref for pt in sel}
    if len(sides) != 1:
        raise DomainError("fit points must all sit on one side of i_ref")

    dx = np.array([abs(pt.i_drive - i_ref) for pt in sel])
    dy = np.array([abs(pt.derivative) for pt in sel])
    X = np.log(dx)
    Y = np.log(dy)
    n = len(sel)
    A = np.vstack([np.ones(n), X]).T
    coef, *_ = np.linalg.lstsq(A, Y, rcond=None)
    intercept, slope = float(coef[0]), float(coef[1])
    resid = Y - (intercept + slope * X)
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((Y - Y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    sxx = float(np.sum((X - X.mean()) ** 2))
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 and sxx > 0 else 0.0
    return ScalingFit(
        exponent=slope,
        exponent_stderr=stderr,
        intercept=intercept,
        r_squared=r2,
        window=(float(dx.min()), float(dx.max())),
        n_points=n,
    )
