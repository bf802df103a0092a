"""Steady states of the driven Kerr systems.

Both systems reduce to a real cubic in the nonlinear response (alpha for the
single mode, x = u*|b0|^2 for the two-mode system).  The forward maps are
exact closed forms; the inverse solves use an analytic cubic solver followed
by a short Newton polish, with a derivative-bisection fallback that keeps
full accuracy at the fold points where the cubic has a double root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    DomainError,
    SingleModeParams,
    Stability,
    SteadyRoot,
    TwoModeParams,
    require_finite,
)

#: A root of the cubic is accepted as real when |Im| <= tol * (1 + |Re|).
REALNESS_TOL = 1e-9

#: Residual target of the polished roots, relative to max(1, I).
RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class EffectiveDetuning:
    """Complex detuning of mode b after the linear cavity response of mode a
    has been folded in.  Its imaginary part is strictly negative for any
    physical parameter set (both modes lose energy)."""

    value: complex

    def __post_init__(self):
        require_finite("effective detuning", self.value)
        if self.value.imag >= 0:
            raise DomainError(
                f"effective detuning must have negative imaginary part, got {self.value!r}"
            )

    @property
    def real_part(self) -> float:
        return self.value.real

    @property
    def imag_part(self) -> float:
        return self.value.imag

    @property
    def abs_squared(self) -> float:
        return self.value.real**2 + self.value.imag**2


def single_mode_intensity(alpha: float, delta_t: float) -> float:
    """Drive strength that sustains the response ``alpha`` at detuning
    ``delta_t`` (both dimensionless)."""
    require_finite("single_mode_intensity", alpha, delta_t)
    if alpha < 0:
        raise DomainError(f"alpha must be non-negative, got {alpha}")
    return 0.5 * alpha * (1.0 + (delta_t + 0.5 * alpha) ** 2)


def effective_detuning(p: TwoModeParams) -> EffectiveDetuning:
    """Fold the linear response of mode a into a complex detuning for mode b."""
    denom = complex(p.delta_a, -p.gamma_a)
    return EffectiveDetuning(complex(p.delta_b, -p.gamma_b) - p.g**2 / denom)


def two_mode_intensity(x: float, dt: EffectiveDetuning) -> float:
    """Drive strength u*omega^2 sustaining the response ``x = u*|b0|^2``."""
    require_finite("two_mode_intensity", x)
    if x < 0:
        raise DomainError(f"x must be non-negative, got {x}")
    return 4.0 * x**3 + 4.0 * dt.real_part * x**2 + dt.abs_squared * x


def real_cubic_roots(p: float, q: float, r: float, realness_tol: float = REALNESS_TOL) -> list[float]:
    """Real roots of t^3 + p t^2 + q t + r, multiplicity included.

    Uses the trigonometric form in the three-real-root case and Cardano
    otherwise; a conjugate pair with |Im| <= realness_tol * (1 + |Re|) is
    accepted as a real double root (discriminant noise near folds).
    """
    a = q - p * p / 3.0
    b = 2.0 * p**3 / 27.0 - p * q / 3.0 + r
    shift = -p / 3.0

    scale = max(abs(a) ** 3, b * b)
    if scale == 0.0:
        return [shift, shift, shift]
    disc = -4.0 * a**3 - 27.0 * b * b

    if a == 0.0:
        y = (-b) ** (1 / 3) if b <= 0 else -(b ** (1 / 3))
        return [shift + y]
    if abs(disc) <= 1e-14 * scale:
        double = shift - 1.5 * b / a
        simple = shift + 3.0 * b / a
        return sorted([double, double, simple])
    if disc > 0.0:
        # casus irreducibilis: three distinct real roots
        m = 2.0 * math.sqrt(-a / 3.0)
        theta = math.acos(max(-1.0, min(1.0, 3.0 * b / (a * m))))
        return sorted(shift + m * math.cos((theta - 2.0 * math.pi * k) / 3.0) for k in range(3))
    # one real root; keep the conjugate pair if it is real to tolerance
    sq = math.sqrt(b * b / 4.0 + a**3 / 27.0)
    c_arg = -b / 2.0 + sq if b <= 0 else -b / 2.0 - sq
    c = math.copysign(abs(c_arg) ** (1 / 3), c_arg)
    real_root = shift + c - a / (3.0 * c)
    pair_re = shift - 0.5 * (c - a / (3.0 * c))
    pair_im = 0.5 * math.sqrt(3.0) * abs(c + a / (3.0 * c))
    if pair_im <= realness_tol * (1.0 + abs(pair_re)):
        return sorted([real_root, pair_re, pair_re])
    return [real_root]


def _polish(root: float, f, fprime, scale: float) -> float:
    """Newton-polish a cubic root; fall back to bisection on f' near folds."""
    t = root
    for _ in range(5):
        ft = f(t)
        if abs(ft) <= RESIDUAL_TOL * scale:
            return t
        d = fprime(t)
        if abs(d) < 1e-9 * (1.0 + abs(t)):
            break
        t = t - ft / d
    if abs(f(t)) <= RESIDUAL_TOL * scale:
        return t
    # near a double root: the extremum of the cubic is the root; bracket f'
    h = max(1e-8, 1e-8 * abs(t))
    lo, hi = t - h, t + h
    for _ in range(60):
        if fprime(lo) * fprime(hi) < 0:
            break
        h *= 4.0
        lo, hi = t - h, t + h
    else:
        return t
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if fprime(lo) * fprime(mid) <= 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * (1.0 + abs(mid)):
            break
    return 0.5 * (lo + hi)


def _single_mode_alpha_roots(i_drive: float, delta_t: float, realness_tol: float) -> list[float]:
    # alpha^3 + 4*dt*alpha^2 + 4*(1+dt^2)*alpha - 8*I = 0
    if i_drive == 0.0:
        return [0.0]
    roots = real_cubic_roots(4.0 * delta_t, 4.0 * (1.0 + delta_t**2), -8.0 * i_drive, realness_tol)
    scale = max(1.0, i_drive)

    def f(t):
        return 0.5 * t * (1.0 + (delta_t + 0.5 * t) ** 2) - i_drive

    def fp(t):
        return 0.375 * t * t + delta_t * t + 0.5 * (1.0 + delta_t**2)

    return sorted(max(0.0, _polish(t, f, fp, scale)) for t in roots)


def _two_mode_x_roots(i_drive: float, dt: EffectiveDetuning, realness_tol: float) -> list[float]:
    # 4x^3 + 4*dR*x^2 + |d|^2*x - I = 0
    if i_drive == 0.0:
        return [0.0]
    dr, d2 = dt.real_part, dt.abs_squared
    roots = real_cubic_roots(dr, 0.25 * d2, -0.25 * i_drive, realness_tol)
    scale = max(1.0, i_drive)

    def f(t):
        return 4.0 * t**3 + 4.0 * dr * t * t + d2 * t - i_drive

    def fp(t):
        return 12.0 * t * t + 8.0 * dr * t + d2

    return sorted(max(0.0, _polish(t, f, fp, scale)) for t in roots)


def solve_single_mode(
    i_drive: float,
    delta_t: float,
    u_over_gamma: float = 1.0,
    realness_tol: float = REALNESS_TOL,
) -> list[SteadyRoot]:
    """All steady responses at drive ``i_drive``, sorted ascending.

    The amplitude is reconstructed in units where the linewidth is 1 and the
    Kerr coefficient is ``u_over_gamma``; the response itself is independent
    of that choice.
    """
    require_finite("solve_single_mode", i_drive, delta_t)
    if i_drive < 0:
        raise DomainError("i_drive must be non-negative")
    if u_over_gamma <= 0:
        raise DomainError("u_over_gamma must be positive")
    from . import stability  # deferred: stability sits above this module

    drive = math.sqrt(i_drive / (2.0 * u_over_gamma))
    out = []
    for alpha in _single_mode_alpha_roots(i_drive, delta_t, realness_tol):
        a0 = drive / complex(1.0, delta_t + 0.5 * alpha)
        stable, marginal = stability.classify_single(alpha, delta_t)
        out.append(
            SteadyRoot(
                response=alpha,
                amplitude_a=a0,
                amplitude_b=None,
                stability=Stability.STABLE if stable else Stability.UNSTABLE,
                marginal=marginal,
            )
        )
    return out


def solve_two_mode(
    i_drive: float,
    p: TwoModeParams,
    realness_tol: float = REALNESS_TOL,
) -> list[SteadyRoot]:
    """All steady responses x = u*|b0|^2 at composite drive ``i_drive``.

    ``i_drive`` overrides the drive implied by ``p.omega``; the effective
    drive amplitude is sqrt(i_drive / u).
    """
    require_finite("solve_two_mode", i_drive)
    if i_drive < 0:
        raise DomainError("i_drive must be non-negative")
    if i_drive > 0 and p.u <= 0:
        raise DomainError("a driven two-mode solve requires u > 0")
    from . import stability  # deferred: stability sits above this module

    dt = effective_detuning(p)
    omega = math.sqrt(i_drive / p.u) if i_drive > 0 else 0.0
    out = []
    for x in _two_mode_x_roots(i_drive, dt, realness_tol):
        b0 = -1j * omega / (dt.value + 2.0 * x) if omega else 0j
        a0 = -1j * p.g * b0 / complex(p.gamma_a, p.delta_a)
        stable, marginal = stability.classify_two(p, x)
        out.append(
            SteadyRoot(
                response=x,
                amplitude_a=a0,
                amplitude_b=b0,
                stability=Stability.STABLE if stable else Stability.UNSTABLE,
                marginal=marginal,
            )
        )
    return out


def solve_two_mode_cavity_driven(
    e_drive: float,
    p: TwoModeParams,
    realness_tol: float = REALNESS_TOL,
) -> list[SteadyRoot]:
    """Steady states when the drive (amplitude ``e_drive``) enters on mode a
    instead of mode b.  Used by the adiabatic-elimination cross-checks.

    Roots are reported with the same response convention x = u*|b0|^2.
    """
    require_finite("solve_two_mode_cavity_driven", e_drive)
    if e_drive < 0:
        raise DomainError("e_drive must be non-negative")
    from . import stability  # deferred: stability sits above this module

    # |b0|^2 = w solves  w * |(i*da+ga)(i*db+gb+2iUw) + g^2|^2 = g^2 E^2,
    # a real cubic in w with positive leading coefficient.
    r0 = p.gamma_a * p.gamma_b + p.g**2 - p.delta_a * p.delta_b
    r1 = -2.0 * p.u * p.delta_a
    q0 = p.gamma_a * p.delta_b + p.delta_a * p.gamma_b
    q1 = 2.0 * p.u * p.gamma_a
    lead = r1 * r1 + q1 * q1
    rhs = p.g**2 * e_drive**2

    if p.u == 0.0 or p.g == 0.0:
        ws = [rhs / (r0 * r0 + q0 * q0)] if p.g > 0 else [0.0]
    else:
        c2 = 2.0 * (r0 * r1 + q0 * q1) / lead
        c1 = (r0 * r0 + q0 * q0) / lead
        c0 = -rhs / lead
        ws = real_cubic_roots(c2, c1, c0, realness_tol)

        def f(w):
            return w * ((r0 + r1 * w) ** 2 + (q0 + q1 * w) ** 2) - rhs

        def fp(w):
            return (r0 + r1 * w) ** 2 + (q0 + q1 * w) ** 2 + w * (
                2.0 * r1 * (r0 + r1 * w) + 2.0 * q1 * (q0 + q1 * w)
            )

        scale = max(1.0, rhs)
        ws = sorted(max(0.0, _polish(w, f, fp, scale)) for w in ws)
    out = []
    for w in sorted(ws):
        k = complex(p.gamma_b, p.delta_b + 2.0 * p.u * w)
        b0 = 1j * p.g * e_drive / (-complex(p.gamma_a, p.delta_a) * k - p.g**2)
        a0 = (e_drive - 1j * p.g * b0) / complex(p.gamma_a, p.delta_a)
        x = p.u * w
        stable, marginal = stability.classify_two(p, x)
        out.append(
            SteadyRoot(
                response=x,
                amplitude_a=a0,
                amplitude_b=b0,
                stability=Stability.STABLE if stable else Stability.UNSTABLE,
                marginal=marginal,
            )
        )
    return out


@dataclass(frozen=True)
class JumpEvent:
    """A discontinuity of the followed branch during a sweep."""

    index: int
    i_before: float
    i_after: float
    response_before: float
    response_after: float


@dataclass(frozen=True)
class SweepTrace:
    """Record of a directional drive sweep with branch continuation."""

    direction: str
    i_values: tuple[float, ...]
    responses: tuple[float, ...]
    jumps: tuple[JumpEvent, ...]
    bic_responses: tuple[float, ...] = ()
    bic_drives: tuple[float, ...] = ()


def hysteresis_sweep(
    params: SingleModeParams | TwoModeParams,
    i_values,
    direction: str,
    jump_tol: float | None = None,
) -> SweepTrace:
    """Sweep the drive through ``i_values`` following the nearest stable
    branch, recording a jump wherever the followed branch folds away.

    ``i_values`` must be strictly monotone in the stated direction ("up" or
    "down").  The default jump threshold is half the response separation of
    the two fold points; monostable parameter sets can never jump.
    """
    i_values = [float(v) for v in i_values]
    if not i_values:
        raise DomainError("sweep grid must not be empty")
    if direction not in ("up", "down"):
        raise DomainError(f"direction must be 'up' or 'down', got {direction!r}")
    diffs = [b - a for a, b in zip(i_values, i_values[1:])]
    if direction == "up" and any(d <= 0 for d in diffs):
        raise DomainError("up sweep requires strictly increasing i_values")
    if direction == "down" and any(d >= 0 for d in diffs):
        raise DomainError("down sweep requires strictly decreasing i_values")

    from . import bistability  # deferred: bistability sits above this module

    if isinstance(params, SingleModeParams):
        def roots_at(i):
            return solve_single_mode(i, params.delta_t)

        try:
            tp = bistability.turning_points_single(params.delta_t)
        except bistability.NoBistabilityError:
            tp = None
    else:
        def roots_at(i):
            return solve_two_mode(i, params)

        try:
            tp = bistability.turning_points_two(effective_detuning(params))
        except bistability.NoBistabilityError:
            tp = None

    if jump_tol is None:
        jump_tol = 0.5 * (tp.upper - tp.lower) if tp is not None else math.inf
    if jump_tol <= 0:
        jump_tol = math.inf

    responses: list[float] = []
    jumps: list[JumpEvent] = []
    prev: float | None = None
    for k, i in enumerate(i_values):
        roots = roots_at(i)
        stable = [r.response for r in roots if r.is_stable] or [r.response for r in roots]
        if prev is None:
            cand = min(stable) if direction == "up" else max(stable)
        else:
            cand = min(stable, key=lambda v: abs(v - prev))
            if abs(cand - prev) > jump_tol:
                jumps.append(JumpEvent(k, i_values[k - 1], i, prev, cand))
        responses.append(cand)
        prev = cand

    return SweepTrace(
        direction=direction,
        i_values=tuple(i_values),
        responses=tuple(responses),
        jumps=tuple(jumps),
        bic_responses=(tp.lower, tp.upper) if tp is not None else (),
        bic_drives=(tp.i_lower, tp.i_upper) if tp is not None else (),
    )
