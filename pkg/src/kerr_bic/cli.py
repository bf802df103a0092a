"""Command-line front end.

Subcommands map one-to-one onto the library: ``steady`` (roots and
hysteresis sweeps), ``bic`` (fold/BIC points and loci), ``sensitivity``
(derivative profiles and scaling fits), ``ringdown`` (time-domain decay
oracle), ``reduce`` (adiabatic elimination), ``linear2`` (linear coupled
modes) and ``fig`` (figure recipes: CSV plus rendered PNG).

Exit codes: 0 ok, 2 bad configuration, 3 numeric failure, 4 regime not
applicable (e.g. fold points requested outside the bistable regime).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__, output
from .core import (
    DomainError,
    LinearTwoModeParams,
    NoBistabilityError,
    NumericError,
    SingleModeParams,
    StructuralDisagreementError,
    TwoModeParams,
    drive_rabi_magnon,
    drive_rabi_optical,
    kerr_coefficient_optical,
)
from . import (
    bistability,
    dynamics,
    reduction,
    sensitivity,
    spectra,
    stability,
    steady_state,
)

PARAM_NAMES = {
    "single": {"delta_t", "i", "u"},
    "two": {"delta_a", "delta_b", "gamma_a", "gamma_b", "g", "u", "omega", "i"},
    "linear2": {"delta_a", "delta_b", "kappa", "gamma", "g", "Gamma"},
}

SWEEP_VARS = {
    "single": {"i", "delta_t"},
    "two": {"i", "delta_b"},
}


class ConfigError(DomainError):
    pass


@dataclass
class SweepSpec:
    variable: str
    start: float
    stop: float
    count: int
    direction: str | None = None

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass
class RunConfig:
    system: str
    parameters: dict = field(default_factory=dict)
    sweep: SweepSpec | None = None
    out_path: str | None = None
    out_format: str = "csv"
    tolerances: dict = field(default_factory=dict)
    jobs: int = 1


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config file must hold a JSON object")
    return doc


def _norm_key(key: str) -> str:
    return key.replace("-", "_")


def build_run_config(args, system: str) -> RunConfig:
    """Merge --config file values with explicit flags (flags win)."""
    cfg = RunConfig(system=system)
    file_doc = _load_config_file(args.config) if getattr(args, "config", None) else {}

    if "system" in file_doc:
        cfg.system = str(file_doc["system"])
    if cfg.system not in PARAM_NAMES:
        raise ConfigError(f"unknown system {cfg.system!r}")

    allowed = PARAM_NAMES[cfg.system]
    for key, value in (file_doc.get("parameters") or {}).items():
        name = _norm_key(key) if key != "Gamma" else "Gamma"
        if name not in allowed:
            raise ConfigError(f"unknown parameter {key!r} for system {cfg.system!r}")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(f"parameter {key!r} must be a real number")
        cfg.parameters[name] = float(value)

    sweep_doc = file_doc.get("sweep")
    if sweep_doc:
        try:
            cfg.sweep = SweepSpec(
                variable=_norm_key(str(sweep_doc["variable"])),
                start=float(sweep_doc["start"]),
                stop=float(sweep_doc["stop"]),
                count=int(sweep_doc["count"]),
                direction=sweep_doc.get("direction"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad sweep spec: {exc}") from exc

    out_doc = file_doc.get("output") or {}
    cfg.out_path = out_doc.get("path")
    cfg.out_format = out_doc.get("format", "csv")
    cfg.tolerances = {
        _norm_key(k): float(v) for k, v in (file_doc.get("tolerances") or {}).items()
    }

    # explicit flags override the file
    for name in allowed:
        flag = getattr(args, name, None)
        if flag is not None:
            cfg.parameters[name] = float(flag)
    if getattr(args, "sweep", None):
        if args.sweep_start is None or args.sweep_stop is None:
            raise ConfigError("--sweep requires --sweep-start and --sweep-stop")
        cfg.sweep = SweepSpec(
            variable=_norm_key(args.sweep),
            start=args.sweep_start,
            stop=args.sweep_stop,
            count=args.sweep_count,
            direction=getattr(args, "direction", None),
        )
    if getattr(args, "output", None):
        cfg.out_path = args.output
    if getattr(args, "format", None):
        cfg.out_format = args.format
    for tol_flag, tol_name in (("tol_bic", "bic_measure"), ("tol_real", "root_realness")):
        v = getattr(args, tol_flag, None)
        if v is not None:
            cfg.tolerances[tol_name] = v

    jobs_env = os.environ.get("KERR_BIC_JOBS")
    cfg.jobs = int(getattr(args, "jobs", None) or jobs_env or 1)
    if cfg.jobs < 1:
        raise ConfigError("--jobs must be >= 1")

    if cfg.out_format not in ("csv", "json"):
        raise ConfigError(f"unknown output format {cfg.out_format!r}")
    if cfg.sweep is not None:
        if cfg.sweep.count < 2:
            raise ConfigError("sweep count must be >= 2")
        if cfg.system in SWEEP_VARS and cfg.sweep.variable not in SWEEP_VARS[cfg.system]:
            raise ConfigError(
                f"cannot sweep {cfg.sweep.variable!r} for system {cfg.system!r}"
            )
        if cfg.sweep.direction not in (None, "up", "down"):
            raise ConfigError("sweep direction must be 'up' or 'down'")
    return cfg


def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if n not in cfg.parameters]
    if missing:
        raise ConfigError(f"missing parameters: {', '.join(missing)}")


def _two_mode_params(cfg: RunConfig) -> TwoModeParams:
    _require(cfg, "delta_a", "delta_b", "gamma_a", "gamma_b", "g")
    p = cfg.parameters
    return TwoModeParams(
        delta_a=p["delta_a"],
        delta_b=p["delta_b"],
        gamma_a=p["gamma_a"],
        gamma_b=p["gamma_b"],
        g=p["g"],
        u=p.get("u", 1.0),
        omega=p.get("omega", 0.0),
    )


def _two_mode_drive(cfg: RunConfig, p: TwoModeParams) -> float:
    if "i" in cfg.parameters:
        return cfg.parameters["i"]
    return p.u * p.omega**2


def _pmap(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))  # map preserves input order


def _emit(cfg: RunConfig, command: str, columns, rows, comments=()):
    if cfg.out_format == "json":
        target = cfg.out_path or sys.stdout
        output.write_json(target, command, columns, rows)
    else:
        target = cfg.out_path or sys.stdout
        output.write_csv(target, command, columns, rows, comments)


def _apply_physical_single(args) -> None:
    """Convert optical-platform flags into normalized delta_t and i."""
    needed = ("chi3", "omega_a", "n", "v_eff", "gamma_rate", "p_d", "omega_d", "delta")
    missing = [f for f in needed if getattr(args, f, None) is None]
    if missing:
        raise ConfigError(
            "--physical (single) needs --chi3 --omega-a --n --v-eff --gamma-rate "
            "--p-d --omega-d --delta"
        )
    u = kerr_coefficient_optical(args.chi3, args.omega_a, args.n, args.v_eff)
    e = drive_rabi_optical(args.p_d, args.gamma_rate, args.omega_d)
    args.delta_t = args.delta / args.gamma_rate
    args.i = 2.0 * u * e**2 / args.gamma_rate**3


def _apply_physical_two(args) -> None:
    """Convert magnetic-platform pump flags into the drive amplitude."""
    needed = ("gamma_e", "rho", "d_sphere", "p_d")
    missing = [f for f in needed if getattr(args, f, None) is None]
    if missing:
        raise ConfigError("--physical (two) needs --gamma-e --rho --d-sphere --p-d")
    args.omega = drive_rabi_magnon(args.gamma_e, args.rho, args.d_sphere, args.p_d)


# ---------------------------------------------------------------------------
# subcommands

def cmd_steady(args) -> int:
    cfg = build_run_config(args, args.system)
    if getattr(args, "physical", False):
        if cfg.system == "single":
            _apply_physical_single(args)
            cfg.parameters["delta_t"] = args.delta_t
            cfg.parameters["i"] = args.i
        else:
            _apply_physical_two(args)
            cfg.parameters["omega"] = args.omega

    if cfg.sweep is not None and cfg.sweep.direction:
        if cfg.sweep.variable != "i":
            raise ConfigError("directional sweeps only run over the drive i")
        grid = cfg.sweep.grid()
        if cfg.sweep.direction == "down":
            grid = grid[::-1] if grid[0] < grid[-1] else grid
        if cfg.system == "single":
            _require(cfg, "delta_t")
            params = SingleModeParams(cfg.parameters["delta_t"])
        else:
            params = _two_mode_params(cfg)
        trace = steady_state.hysteresis_sweep(params, grid, cfg.sweep.direction)
        jumped = {j.index for j in trace.jumps}
        cols = ["i_drive", "response", "jump"]
        rows = [
            [i, r, k in jumped]
            for k, (i, r) in enumerate(zip(trace.i_values, trace.responses))
        ]
        comments = [
            f"jump index={j.index} i_before={output.format_value(j.i_before)} "
            f"i_after={output.format_value(j.i_after)}"
            for j in trace.jumps
        ]
        _emit(cfg, f"steady sweep {cfg.sweep.direction}", cols, rows, comments)
        return 0

    if cfg.system == "single":
        _require(cfg, "delta_t", "i")
        delta_t = cfg.parameters["delta_t"]
        u = cfg.parameters.get("u", 1.0)

        def rows_at(point):
            dt_val, i_val = point
            out = []
            for r in steady_state.solve_single_mode(i_val, dt_val, u):
                out.append(
                    [
                        i_val,
                        dt_val,
                        r.response,
                        r.amplitude_a.real,
                        r.amplitude_a.imag,
                        str(r.stability),
                        r.marginal,
                        spectra.det_single(r.response, dt_val),
                    ]
                )
            return out

        cols = ["i_drive", "delta_t", "response", "re_a", "im_a", "stability", "marginal", "det_h"]
        if cfg.sweep is not None:
            var = cfg.sweep.variable
            pts = [
                (v, cfg.parameters["i"]) if var == "delta_t" else (delta_t, v)
                for v in cfg.sweep.grid()
            ]
        else:
            pts = [(delta_t, cfg.parameters["i"])]
        rows = [row for chunk in _pmap(rows_at, pts, cfg.jobs) for row in chunk]
        _emit(cfg, "steady single", cols, rows)
        return 0

    p = _two_mode_params(cfg)

    def rows_at_two(point):
        q, i_val = point
        out = []
        for r in steady_state.solve_two_mode(i_val, q):
            out.append(
                [
                    i_val,
                    q.delta_b,
                    r.response,
                    r.amplitude_a.real,
                    r.amplitude_a.imag,
                    r.amplitude_b.real,
                    r.amplitude_b.imag,
                    str(r.stability),
                    r.marginal,
                    spectra.det_h_two(q, r.response),
                ]
            )
        return out

    cols = [
        "i_drive",
        "delta_b",
        "response",
        "re_a",
        "im_a",
        "re_b",
        "im_b",
        "stability",
        "marginal",
        "det_h",
    ]
    i_drive = _two_mode_drive(cfg, p)
    if cfg.sweep is not None:
        if cfg.sweep.variable == "delta_b":
            pts = [
                (
                    TwoModeParams(
                        delta_a=p.delta_a,
                        delta_b=v,
                        gamma_a=p.gamma_a,
                        gamma_b=p.gamma_b,
                        g=p.g,
                        u=p.u,
                        omega=p.omega,
                    ),
                    i_drive,
                )
                for v in cfg.sweep.grid()
            ]
        else:
            pts = [(p, v) for v in cfg.sweep.grid()]
    else:
        pts = [(p, i_drive)]
    rows = [row for chunk in _pmap(rows_at_two, pts, cfg.jobs) for row in chunk]
    _emit(cfg, "steady two", cols, rows)
    return 0


def cmd_bic(args) -> int:
    cfg = build_run_config(args, args.system)
    bic_tol = cfg.tolerances.get("bic_measure", spectra.BIC_MEASURE_TOL)
    cols = [
        "delta_b",
        "branch",
        "response",
        "i_drive",
        "det_h_residual",
        "min_abs_lambda",
        "is_bic",
    ]
    if cfg.system == "single":
        _require(cfg, "delta_t")
        delta_t = cfg.parameters["delta_t"]
        tp = bistability.turning_points_single(delta_t)
        rows = []
        for branch, resp, i_val in (
            ("lower", tp.lower, tp.i_lower),
            ("upper", tp.upper, tp.i_upper),
        ):
            lam = spectra.eigenvalues_single(resp, delta_t).bic_measure
            rows.append(
                [None, branch, resp, i_val, spectra.det_single(resp, delta_t), lam, lam < bic_tol]
            )
        _emit(cfg, "bic single", cols, rows)
        return 0

    p = _two_mode_params(cfg)
    if cfg.sweep is not None and cfg.sweep.variable == "delta_b":
        locus = spectra.bic_locus(p, cfg.sweep.grid())
        if not locus.points:
            raise NoBistabilityError("no bistable window anywhere on the grid", boundary=math.sqrt(3.0))
        rows = []
        for pt in locus.points:
            q = TwoModeParams(
                delta_a=p.delta_a,
                delta_b=pt.delta_b,
                gamma_a=p.gamma_a,
                gamma_b=p.gamma_b,
                g=p.g,
                u=p.u,
                omega=p.omega,
            )
            rows.append(
                [pt.delta_b, pt.branch, pt.response, pt.i_drive, spectra.det_h_two(q, pt.response), None, None]
            )
        comments = [f"gap delta_b={output.format_value(v)}" for v in locus.gaps]
        _emit(cfg, "bic two sweep", cols, rows, comments)
        return 0

    dt = steady_state.effective_detuning(p)
    tp = bistability.turning_points_two(dt)
    rows = []
    for branch, resp, i_val in (
        ("lower", tp.lower, tp.i_lower),
        ("upper", tp.upper, tp.i_upper),
    ):
        roots = steady_state.solve_two_mode(i_val, p)
        root = min(roots, key=lambda r: abs(r.response - resp))
        lam = spectra.eigenvalues_two(p, root).bic_measure
        rows.append(
            [p.delta_b, branch, resp, i_val, spectra.det_h_two(p, resp), lam, lam < bic_tol]
        )
    _emit(cfg, "bic two", cols, rows)
    return 0


def cmd_sensitivity(args) -> int:
    cfg = build_run_config(args, args.system)
    window = (args.window_lo, args.window_hi)
    n_pts = args.points
    if cfg.system == "single":
        _require(cfg, "delta_t")
        if args.ref == "inflection":
            crit = bistability.critical_point_single()
            system = SingleModeParams(crit.delta_t)
            i_ref = crit.i_drive
            branch = "lower"
        else:
            system = SingleModeParams(cfg.parameters["delta_t"])
            tp = bistability.turning_points_single(system.delta_t)
            i_ref = tp.i_lower if args.ref == "lower" else tp.i_upper
            branch = args.ref
    else:
        system = _two_mode_params(cfg)
        if args.ref == "inflection":
            raise ConfigError("--ref inflection is defined for the single-mode system")
        tp = bistability.turning_points_two(steady_state.effective_detuning(system))
        i_ref = tp.i_lower if args.ref == "lower" else tp.i_upper
        branch = args.ref
    branch = args.branch or branch
    # approach the reference from inside the branch's existence range
    side = -1.0 if branch == "lower" else 1.0
    rel = np.logspace(math.log10(max(window[0] * 0.5, 1e-12)), math.log10(window[1] * 2.0), n_pts)
    grid = i_ref * (1.0 + side * rel)
    profile = sensitivity.sensitivity_profile(
        system, grid, branch=branch, include_unstable=args.include_unstable
    )
    cols = ["i_drive", "response", "derivative"]
    rows = [[pt.i_drive, pt.response, pt.derivative] for pt in profile.points]
    comments = [f"gap i={output.format_value(g.i_drive)} reason={g.reason}" for g in profile.gaps]
    fit = sensitivity.fit_scaling(profile, i_ref, window)
    comments += [
        f"fit i_ref={output.format_value(i_ref)}",
        f"fit exponent={output.format_value(fit.exponent)} "
        f"stderr={output.format_value(fit.exponent_stderr)}",
        f"fit prefactor={output.format_value(fit.prefactor)}",
        f"fit r_squared={output.format_value(fit.r_squared)}",
        f"fit n_points={fit.n_points}",
    ]
    _emit(cfg, f"sensitivity {cfg.system} {args.ref}", cols, rows, comments)
    print(
        f"scaling fit: exponent {fit.exponent:+.4f} +/- {fit.exponent_stderr:.4f}, "
        f"prefactor {fit.prefactor:.4f}, r^2 {fit.r_squared:.6f}",
        file=sys.stderr,
    )
    return 0


def cmd_ringdown(args) -> int:
    cfg = build_run_config(args, args.system)
    if cfg.system == "single":
        _require(cfg, "delta_t", "i")
        delta_t = cfg.parameters["delta_t"]
        i_drive = cfg.parameters["i"]
        u = cfg.parameters.get("u", 1.0)
        roots = [r for r in steady_state.solve_single_mode(i_drive, delta_t, u) if r.is_stable]
        if not roots:
            raise NoBistabilityError("no stable root at this drive", boundary=math.nan)
        root = roots[0] if args.branch == "lower" else roots[-1]
        params = SingleModeParams(delta_t)
        predicted = min(spectra.eigenvalues_single(root.response, delta_t).decay_rates)
        result = dynamics.ringdown_rate(
            params,
            i_drive,
            root,
            u_over_gamma=u,
            perturbation=args.perturbation,
            t_final=args.t_final,
        )
    else:
        p = _two_mode_params(cfg)
        i_drive = _two_mode_drive(cfg, p)
        roots = [r for r in steady_state.solve_two_mode(i_drive, p) if r.is_stable]
        if not roots:
            raise NoBistabilityError("no stable root at this drive", boundary=math.nan)
        root = roots[0] if args.branch == "lower" else roots[-1]
        predicted = min(spectra.eigenvalues_two(p, root).decay_rates)
        result = dynamics.ringdown_rate(
            p, i_drive, root, perturbation=args.perturbation, t_final=args.t_final
        )
    cols = [
        "i_drive",
        "response",
        "fitted_rate",
        "predicted_rate",
        "rel_error",
        "r_squared",
        "method",
        "lifetime_lower_bound",
    ]
    rel = abs(result.rate - predicted) / predicted if predicted > 0 else math.nan
    rows = [
        [
            i_drive,
            root.response,
            result.rate,
            predicted,
            rel,
            result.r_squared,
            result.method,
            result.lifetime_lower_bound,
        ]
    ]
    _emit(cfg, f"ringdown {cfg.system}", cols, rows)
    return 0


def cmd_reduce(args) -> int:
    cfg = build_run_config(args, "two")
    p = _two_mode_params(cfg)
    drive = args.drive
    if drive is None:
        raise ConfigError("reduce requires --drive (cavity drive amplitude)")
    delta_bs = [p.delta_b]
    if args.sweep_delta_b:
        try:
            delta_bs = [float(tok) for tok in args.sweep_delta_b.split(",")]
        except ValueError as exc:
            raise ConfigError(f"bad --sweep-delta-b list: {exc}") from exc
    cols = ["delta_b", "delta_eff", "u_eff", "gamma_eff", "drive_eff", "rel_error"]
    rows = []
    for db in delta_bs:
        q = TwoModeParams(
            delta_a=p.delta_a,
            delta_b=db,
            gamma_a=p.gamma_a,
            gamma_b=p.gamma_b,
            g=p.g,
            u=p.u,
            omega=0.0,
        )
        em = reduction.effective_params(q, drive)
        err = reduction.reduction_error(q, drive)
        rows.append([db, em.delta_eff, em.u_eff, em.gamma_eff, em.drive_eff, err])
    _emit(cfg, "reduce", cols, rows)
    return 0


def cmd_linear2(args) -> int:
    cfg = build_run_config(args, "linear2")
    _require(cfg, "kappa", "gamma", "g", "Gamma", "delta_a", "delta_b")
    pp = cfg.parameters
    p = LinearTwoModeParams(
        delta_a=pp["delta_a"],
        delta_b=pp["delta_b"],
        kappa=pp["kappa"],
        gamma=pp["gamma"],
        g=pp["g"],
        Gamma=pp["Gamma"],
    )
    spec = spectra.linear_two_mode_eigenvalues(p)
    klass = spectra.classify_symmetry(p, tol=args.tol)
    lam_p, lam_m = spec.eigenvalues
    cols = [
        "re_lambda_plus",
        "im_lambda_plus",
        "re_lambda_minus",
        "im_lambda_minus",
        "symmetry",
        "at_exceptional_point",
        "at_bic",
    ]
    rows = [
        [
            lam_p.real,
            lam_p.imag,
            lam_m.real,
            lam_m.imag,
            klass.tag,
            klass.at_exceptional_point,
            klass.at_bic,
        ]
    ]
    _emit(cfg, "linear2", cols, rows)
    return 0


def cmd_fig(args) -> int:
    from . import figures  # matplotlib import deferred to figure rendering

    os.makedirs(args.outdir, exist_ok=True)
    made = figures.render(args.which, args.outdir)
    for path in made:
        print(path)
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(sp, system_choices=("single", "two")) -> None:
    if system_choices:
        sp.add_argument("--system", choices=system_choices, required=True)
    sp.add_argument("-o", "--output", help="output file (default: stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default=None)
    sp.add_argument("--config", help="JSON run-config file")
    sp.add_argument("--jobs", type=int, default=None, help="worker pool size (default: KERR_BIC_JOBS or 1)")
    sp.add_argument("--tol-bic", type=float, default=None, help="BIC flag threshold on min |lambda|")
    sp.add_argument("--tol-real", type=float, default=None, help="cubic-root realness tolerance")


def _add_model_params(sp) -> None:
    sp.add_argument("--delta-t", dest="delta_t", type=float, help="normalized single-mode detuning")
    sp.add_argument("--i", dest="i", type=float, help="drive strength (I, composite u*omega^2 for two-mode)")
    sp.add_argument("--u", dest="u", type=float, help="Kerr coefficient")
    sp.add_argument("--delta-a", dest="delta_a", type=float)
    sp.add_argument("--delta-b", dest="delta_b", type=float)
    sp.add_argument("--gamma-a", dest="gamma_a", type=float)
    sp.add_argument("--gamma-b", dest="gamma_b", type=float)
    sp.add_argument("--g", dest="g", type=float)
    sp.add_argument("--omega", dest="omega", type=float, help="drive amplitude on mode b")


def _add_physical(sp) -> None:
    sp.add_argument("--physical", action="store_true", help="derive model inputs from platform parameters")
    sp.add_argument("--chi3", type=float, help="third-order susceptibility (m^2/V^2)")
    sp.add_argument("--omega-a", dest="omega_a", type=float, help="cavity frequency (rad/s)")
    sp.add_argument("--n", type=float, help="refractive index")
    sp.add_argument("--v-eff", dest="v_eff", type=float, help="mode volume (m^3)")
    sp.add_argument("--gamma-rate", dest="gamma_rate", type=float, help="cavity linewidth (rad/s)")
    sp.add_argument("--p-d", dest="p_d", type=float, help="drive power (W)")
    sp.add_argument("--omega-d", dest="omega_d", type=float, help="drive frequency (rad/s)")
    sp.add_argument("--delta", type=float, help="physical detuning (rad/s)")
    sp.add_argument("--gamma-e", dest="gamma_e", type=float, help="gyromagnetic ratio (rad/s/T)")
    sp.add_argument("--rho", type=float, help="spin density (1/m^3)")
    sp.add_argument("--d-sphere", dest="d_sphere", type=float, help="sphere diameter (m)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="kerr-bic",
        description="Steady states, bistability, spectra and sensitivity of driven Kerr systems",
    )
    ap.add_argument("--version", action="version", version=f"kerr-bic {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("steady", help="steady-state roots or hysteresis sweep")
    _add_common(sp)
    _add_model_params(sp)
    _add_physical(sp)
    sp.add_argument("--sweep", choices=("i", "delta-t", "delta-b"))
    sp.add_argument("--sweep-start", type=float)
    sp.add_argument("--sweep-stop", type=float)
    sp.add_argument("--sweep-count", type=int, default=200)
    sp.add_argument("--direction", choices=("up", "down"), help="directional drive sweep (hysteresis)")
    sp.set_defaults(fn=cmd_steady)

    sp = sub.add_parser("bic", help="fold/BIC points and loci")
    _add_common(sp)
    _add_model_params(sp)
    sp.add_argument("--sweep", choices=("delta-b",))
    sp.add_argument("--sweep-start", type=float)
    sp.add_argument("--sweep-stop", type=float)
    sp.add_argument("--sweep-count", type=int, default=200)
    sp.set_defaults(fn=cmd_bic)

    sp = sub.add_parser("sensitivity", help="derivative profile and scaling fit near a reference drive")
    _add_common(sp)
    _add_model_params(sp)
    sp.add_argument("--ref", choices=("lower", "upper", "inflection"), default="lower")
    sp.add_argument("--branch", choices=("lower", "upper", "middle"), default=None)
    sp.add_argument("--include-unstable", action="store_true")
    sp.add_argument("--points", type=int, default=120)
    sp.add_argument("--window-lo", type=float, default=sensitivity.DEFAULT_FIT_WINDOW[0])
    sp.add_argument("--window-hi", type=float, default=sensitivity.DEFAULT_FIT_WINDOW[1])
    sp.set_defaults(fn=cmd_sensitivity)

    sp = sub.add_parser("ringdown", help="time-domain decay rate vs spectral prediction")
    _add_common(sp)
    _add_model_params(sp)
    sp.add_argument("--branch", choices=("lower", "upper"), default="lower")
    sp.add_argument("--perturbation", type=float, default=1e-4)
    sp.add_argument("--t-final", dest="t_final", type=float, default=None)
    sp.set_defaults(fn=cmd_ringdown)

    sp = sub.add_parser("reduce", help="adiabatic elimination of the nonlinear mode")
    _add_common(sp, system_choices=())
    _add_model_params(sp)
    sp.add_argument("--drive", type=float, help="cavity drive amplitude")
    sp.add_argument("--sweep-delta-b", help="comma-separated delta_b values")
    sp.set_defaults(fn=cmd_reduce)

    sp = sub.add_parser("linear2", help="linear coupled-mode eigenvalues and symmetry class")
    _add_common(sp, system_choices=())
    sp.add_argument("--delta-a", dest="delta_a", type=float, required=True)
    sp.add_argument("--delta-b", dest="delta_b", type=float, required=True)
    sp.add_argument("--kappa", type=float, required=True)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--g", type=float, required=True)
    sp.add_argument("--Gamma", type=float, required=True)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(fn=cmd_linear2)

    sp = sub.add_parser("fig", help="figure-reproduction recipes (CSV + PNG)")
    sp.add_argument("--which", choices=("fig2", "fig4", "all"), default="all")
    sp.add_argument("--outdir", default="figures")
    sp.set_defaults(fn=cmd_fig)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except NoBistabilityError as exc:
        print(f"kerr-bic: regime not applicable: {exc}", file=sys.stderr)
        return 4
    except (ConfigError, DomainError) as exc:
        print(f"kerr-bic: configuration error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, StructuralDisagreementError) as exc:
        print(f"kerr-bic: numeric failure: {exc}", file=sys.stderr)
        return 3


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
