"""Time-domain oracle: fixed-step 4th-order integration of the equations of
motion, steady-state convergence checks, and ringdown decay-rate fits.

The integrator is deliberately fixed-step (the systems are small, smooth and
non-stiff in the regimes of interest), which keeps trajectories
bit-reproducible.  Ringdown rates are fitted on the late-time tail of the
deviation norm; an envelope fit over the beat maxima covers spiral decay,
and very slow decays are reported as lifetime lower bounds instead of
running forever.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DomainError,
    FitError,
    SingleModeParams,
    SteadyRoot,
    TwoModeParams,
    require_finite,
)
from . import output, spectra

#: Successive-state change rate below which a trajectory counts as converged.
CONVERGENCE_RATE = 1e-10

#: State norm beyond which the integration is truncated as divergent.
DIVERGENCE_NORM = 1e8

#: Hard cap on the default ringdown horizon (a true dark state never decays).
RINGDOWN_T_CAP = 1e4


@dataclass(frozen=True)
class Trajectory:
    """Sampled integration output; ``states`` has one row per time, with one
    column per mode amplitude."""

    times: np.ndarray
    states: np.ndarray
    converged: bool

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def write_csv(self, path_or_file) -> None:
        two = self.states.shape[1] == 2
        cols = ["t", "re_a", "im_a"] + (["re_b", "im_b"] if two else [])
        rows = []
        for t, s in zip(self.times, self.states):
            row = [float(t), float(s[0].real), float(s[0].imag)]
            if two:
                row += [float(s[1].real), float(s[1].imag)]
            rows.append(row)
        output.write_csv(path_or_file, "trajectory", cols, rows)


def _rk4(rhs, y0: np.ndarray, t_final: float, dt: float, record_every: int):
    if dt <= 0 or t_final <= 0:
        raise DomainError("dt and t_final must be positive")
    n_steps = max(1, int(math.ceil(t_final / dt)))
    times = [0.0]
    states = [y0.copy()]
    y = y0.copy()
    t = 0.0
    converged = False
    for k in range(1, n_steps + 1):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y_new = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = k * dt
        norm = float(np.linalg.norm(y_new))
        if not np.isfinite(norm) or norm > DIVERGENCE_NORM:
            break  # divergence: truncate, keep only finite samples
        change_rate = float(np.linalg.norm(y_new - y)) / dt
        y = y_new
        if k % record_every == 0 or k == n_steps:
            times.append(t)
            states.append(y.copy())
        if change_rate < CONVERGENCE_RATE:
            converged = True
            if times[-1] != t:
                times.append(t)
                states.append(y.copy())
            break
    return Trajectory(
        times=np.array(times), states=np.vstack(states), converged=converged
    )


def integrate_single(
    delta_t: float,
    u_over_gamma: float,
    drive: float,
    a_init: complex,
    t_final: float,
    dt: float | None = None,
    record_every: int = 1,
) -> Trajectory:
    """Integrate the driven single-mode equation in linewidth-normalized
    units; ``drive`` is the (real) drive amplitude in the same units."""
    require_finite("integrate_single", delta_t, u_over_gamma, drive, a_init)
    if dt is None:
        radius = max(1.0, math.hypot(delta_t, 1.0) + 2.0 * u_over_gamma * abs(a_init) ** 2)
        dt = 0.01 / radius
    coeff = -1j * complex(delta_t, -1.0)

    def rhs(y):
        a = y[0]
        return np.array([coeff * a - 2j * u_over_gamma * (a.real**2 + a.imag**2) * a + drive])

    return _rk4(rhs, np.array([complex(a_init)]), t_final, dt, record_every)


def integrate_two(
    p: TwoModeParams,
    a_init: complex,
    b_init: complex,
    t_final: float,
    dt: float | None = None,
    record_every: int = 1,
    cavity_drive: float = 0.0,
) -> Trajectory:
    """Integrate the two-mode equations in the params' rate units.

    ``p.omega`` drives mode b; a nonzero ``cavity_drive`` additionally drives
    mode a (the adiabatic-elimination setup uses cavity drive with omega 0).
    """
    require_finite("integrate_two", a_init, b_init, cavity_drive)
    if dt is None:
        radius = max(
            1.0,
            math.hypot(p.delta_a, p.gamma_a),
            math.hypot(p.delta_b, p.gamma_b) + 2.0 * abs(p.u) * abs(b_init) ** 2 + p.g,
        )
        dt = 0.01 / radius
    ca = -complex(p.gamma_a, p.delta_a)
    cb = -complex(p.gamma_b, p.delta_b)
    g, u, om = p.g, p.u, p.omega

    def rhs(y):
        a, b = y[0], y[1]
        da = ca * a - 1j * g * b + cavity_drive
        db = cb * b - 2j * u * (b.real**2 + b.imag**2) * b - 1j * g * a + om
        return np.array([da, db])

    return _rk4(rhs, np.array([complex(a_init), complex(b_init)]), t_final, dt, record_every)


def linearized_deviation(h_matrix: np.ndarray, dev0: np.ndarray, times) -> np.ndarray:
    """Exact flow of the linearized dynamics d(psi)/dt = -i H psi, sampled
    at ``times``; used to cross-check small perturbations of the nonlinear
    integration."""
    w, v = np.linalg.eig(np.asarray(h_matrix))
    c = np.linalg.solve(v, np.asarray(dev0, dtype=complex))
    t = np.asarray(times, dtype=float)
    return (v @ (np.exp(-1j * np.outer(w, t)) * c[:, None])).T


@dataclass(frozen=True)
class RingdownResult:
    rate: float
    r_squared: float
    n_points: int
    method: str  # "tail-fit", "envelope" or "bound"
    lifetime_lower_bound: bool = False


def _fit_log_decay(times: np.ndarray, logdev: np.ndarray):
    n = len(times)
    A = np.vstack([np.ones(n), times]).T
    coef, *_ = np.linalg.lstsq(A, logdev, rcond=None)
    fitted = A @ coef
    ss_res = float(np.sum((logdev - fitted) ** 2))
    ss_tot = float(np.sum((logdev - logdev.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return -float(coef[1]), r2


def _slow_mode_kick(h_matrix: np.ndarray) -> np.ndarray:
    """Physical (conjugation-symmetric) unit perturbation dominated by the
    least-damped mode of the doubled-space linearization.

    The doubled space pairs each eigenvalue with minus its conjugate, so a
    symmetrized eigenvector keeps only the slowest decay rate and the tail
    fit sees a clean exponential from the start.
    """
    dim = h_matrix.shape[0]
    half = dim // 2
    w, v = np.linalg.eig(h_matrix)
    order = np.argsort(-w.imag)  # least-damped first
    swap = np.concatenate([np.arange(half, dim), np.arange(0, half)])
    for idx in order:
        vec = v[:, idx]
        sym = vec + np.conj(vec[swap])
        if np.linalg.norm(sym[:half]) < 1e-8 * np.linalg.norm(vec):
            sym = 1j * (vec - np.conj(vec[swap]))
        amp = sym[:half]
        norm = np.linalg.norm(amp)
        if norm > 1e-8 * np.linalg.norm(vec):
            return amp / norm
    # degenerate fallback: a fixed generic direction
    amp = np.array([complex(0.6, 0.8)] * half) / math.sqrt(half)
    return amp


def ringdown_rate(
    params: SingleModeParams | TwoModeParams,
    i_drive: float,
    root: SteadyRoot,
    u_over_gamma: float = 1.0,
    perturbation: float = 1e-4,
    t_final: float | None = None,
    dt: float | None = None,
) -> RingdownResult:
    """Kick a stable steady state and fit the exponential return rate.

    The measured rate should match the smallest linewidth of the linearized
    spectrum.  For the single-mode system, pass the same ``u_over_gamma``
    that was used to reconstruct the root amplitude.
    """
    if not root.is_stable:
        raise DomainError("ringdown requires a stable root")
    if not 0 < perturbation <= 1e-3:
        raise DomainError("perturbation must be in (0, 1e-3]")

    if isinstance(params, SingleModeParams):
        spec = spectra.eigenvalues_single(root.response, params.delta_t)
        a0 = root.amplitude_a
        target = np.array([a0])
        drive = math.sqrt(i_drive / (2.0 * u_over_gamma))
        scale = max(abs(a0), 1e-6)
        h = spectra.linearized_single_hamiltonian(
            root.response, params.delta_t, np.angle(a0) if a0 else 0.0
        )
        start = target + perturbation * scale * _slow_mode_kick(h)

        def integrate(tf, step, every):
            return integrate_single(
                params.delta_t, u_over_gamma, drive, start[0], tf, step, every
            )

    else:
        spec = spectra.eigenvalues_two(params, root)
        a0, b0 = root.amplitude_a, root.amplitude_b
        target = np.array([a0, b0])
        omega = math.sqrt(i_drive / params.u) if i_drive > 0 else 0.0
        q = TwoModeParams(
            delta_a=params.delta_a,
            delta_b=params.delta_b,
            gamma_a=params.gamma_a,
            gamma_b=params.gamma_b,
            g=params.g,
            u=params.u,
            omega=omega,
        )
        scale = max(math.hypot(abs(a0), abs(b0)), 1e-6)
        h = spectra.linearized_two_hamiltonian(params, root)
        start = target + perturbation * scale * _slow_mode_kick(h)

        def integrate(tf, step, every):
            return integrate_two(q, start[0], start[1], tf, step, every)

    rates = [r for r in spec.decay_rates if r > 0]
    rate_pred = min(rates) if rates else 0.0
    fast = max(spec.decay_rates)
    if t_final is None:
        horizon = 16.0 / rate_pred + 5.0 / max(fast, 1e-3) if rate_pred > 0 else math.inf
        t_final = min(RINGDOWN_T_CAP, horizon)
    if dt is None:
        dt = 0.01 / max(1.0, max(abs(ev) for ev in spec.eigenvalues))
    every = max(1, int(t_final / dt) // 4000)

    traj = integrate(t_final, dt, every)
    dev = np.linalg.norm(traj.states - target, axis=1)
    dev0 = float(np.linalg.norm(start - target))

    in_band = np.flatnonzero((dev >= 1e-9) & (dev <= 0.1 * dev0))
    if len(in_band) < 8 or dev[-1] > 0.5 * dev0:
        # decay too slow to fit within the horizon: report a rate upper
        # bound, i.e. a lifetime lower bound
        span = traj.times[-1] - traj.times[0]
        bound = math.log(max(dev0, 1e-300) / max(float(dev[-1]), 1e-300)) / span
        return RingdownResult(
            rate=bound,
            r_squared=math.nan,
            n_points=len(dev),
            method="bound",
            lifetime_lower_bound=True,
        )
    tail = in_band[len(in_band) // 2 :]  # last half of the usable band
    t_fit = traj.times[tail]
    log_fit = np.log(dev[tail])
    rate, r2 = _fit_log_decay(t_fit, log_fit)
    if r2 >= 0.9999:
        # clean exponential on the designed window
        return RingdownResult(rate=rate, r_squared=r2, n_points=len(tail), method="tail-fit")

    # beating decay: model the log-deviation as a line plus the beat
    # harmonics, with the beat frequency read off the residual spectrum.
    # Keep the uniformly sampled part of the band (the final sample can sit
    # on a shorter step).
    band = in_band
    t_band = traj.times[band]
    steps = np.diff(t_band)
    if len(steps) > 2 and abs(steps[-1] - steps[0]) > 0.01 * steps[0]:
        band = band[:-1]
        t_band = t_band[:-1]
    log_band = np.log(dev[band])
    rate_b, r2_b = _fit_log_decay(t_band, log_band)
    if len(band) >= 16:
        resid = log_band - (log_band.mean() - rate_b * (t_band - t_band.mean()))
        spectrum = np.abs(np.fft.rfft(resid - resid.mean()))
        if len(spectrum) > 2:
            k_star = 1 + int(np.argmax(spectrum[1:]))
            freq = np.fft.rfftfreq(len(band), d=float(steps[0]))[k_star]
            if freq > 0:
                w = 2.0 * math.pi * freq
                tc = t_band - t_band.mean()
                cols = [
                    np.ones_like(tc),
                    tc,
                    np.cos(w * tc),
                    np.sin(w * tc),
                    np.cos(2 * w * tc),
                    np.sin(2 * w * tc),
                ]
                A = np.vstack(cols).T
                coef, *_ = np.linalg.lstsq(A, log_band, rcond=None)
                fitted = A @ coef
                ss_res = float(np.sum((log_band - fitted) ** 2))
                ss_tot = float(np.sum((log_band - log_band.mean()) ** 2))
                r2_beat = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
                if r2_beat >= 0.99:
                    return RingdownResult(
                        rate=-float(coef[1]),
                        r_squared=r2_beat,
                        n_points=len(band),
                        method="beat-fit",
                    )

    # strongly modulated decay: fall back to the beat maxima envelope
    peaks = [
        k
        for k in range(1, len(band) - 1)
        if log_band[k] > log_band[k - 1] and log_band[k] >= log_band[k + 1]
    ]
    if len(peaks) >= 6:
        rate_env, r2_env = _fit_log_decay(t_band[peaks], log_band[peaks])
        if r2_env >= 0.99:
            return RingdownResult(
                rate=rate_env, r_squared=r2_env, n_points=len(peaks), method="envelope"
            )
    raise FitError(
        "ringdown tail is not a clean exponential",
        r_squared=max(r2, r2_b),
        n_points=len(band),
        rate_estimate=rate,
        predicted_rate=rate_pred,
    )
