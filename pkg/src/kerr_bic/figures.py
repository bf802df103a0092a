"""Figure recipes: each panel writes a CSV of the plotted data and renders a
PNG next to it.

The recipes cover the standard views of both systems: the S-shaped
drive-response curve with its fold points, the frozen-response eigenvalue
sweep, the response-vs-detuning cut with the fold loci, and the sensitivity
divergence next to its inverse-square-root reference curve.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import output
from .core import SingleModeParams, TwoModeParams
from .steady_state import (
    _single_mode_alpha_roots,
    _two_mode_x_roots,
    effective_detuning,
    single_mode_intensity,
)
from .bistability import SQRT3, turning_points_single
from .sensitivity import dalpha_ddelta, dx_ddelta_b, sensitivity_profile
from .spectra import bic_locus, eigenvalues_single

DPI = 150


def _save(fig, outdir: str, name: str) -> str:
    path = os.path.join(outdir, f"{name}.png")
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def _write(outdir: str, name: str, columns, rows) -> str:
    path = os.path.join(outdir, f"{name}.csv")
    output.write_csv(path, f"fig {name}", columns, rows)
    return path


def fig2a(outdir: str, delta_t: float = -3.0) -> list[str]:
    """Drive-response S-curve of the single-mode system with fold markers."""
    alphas = np.linspace(0.0, 8.0, 600)
    drives = [single_mode_intensity(a, delta_t) for a in alphas]
    tp = turning_points_single(delta_t)
    rows = [[i, a] for a, i in zip(alphas, drives)]
    csv_path = _write(outdir, "fig2a", ["i_drive", "alpha"], rows)

    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.plot(drives, alphas, "k-", lw=1.5)
    ax.plot([tp.i_lower, tp.i_upper], [tp.lower, tp.upper], "ro", ms=5)
    ax.annotate(r"$(\,I_-,\alpha_-)$", (tp.i_lower, tp.lower), textcoords="offset points", xytext=(6, -12))
    ax.annotate(r"$(\,I_+,\alpha_+)$", (tp.i_upper, tp.upper), textcoords="offset points", xytext=(6, 4))
    ax.set_xlabel(r"drive $I$")
    ax.set_ylabel(r"response $\alpha$")
    ax.set_title(rf"single-mode S-curve, $\tilde\Delta={delta_t:g}$")
    png_path = _save(fig, outdir, "fig2a")
    return [csv_path, png_path]


def fig2b(outdir: str, alpha: float = 2.367) -> list[str]:
    """Eigenvalues versus detuning at frozen response (linewidth closing)."""
    dts = np.linspace(-6.0, 0.0, 600)
    rows = []
    for dt in dts:
        lam_p, lam_m = eigenvalues_single(alpha, dt).eigenvalues
        rows.append([dt, lam_p.real, lam_p.imag, lam_m.real, lam_m.imag])
    cols = ["delta_t", "re_lambda_1", "im_lambda_1", "re_lambda_2", "im_lambda_2"]
    csv_path = _write(outdir, "fig2b", cols, rows)

    arr = np.array(rows)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.4))
    ax1.plot(arr[:, 0], arr[:, 1], "b-", arr[:, 0], arr[:, 3], "r--")
    ax1.set_xlabel(r"$\tilde\Delta$")
    ax1.set_ylabel(r"Re $\lambda$")
    ax2.plot(arr[:, 0], arr[:, 2], "b-", arr[:, 0], arr[:, 4], "r--")
    ax2.axhline(0.0, color="0.7", lw=0.8)
    ax2.set_xlabel(r"$\tilde\Delta$")
    ax2.set_ylabel(r"Im $\lambda$")
    fig.suptitle(rf"linearized spectrum at frozen $\alpha={alpha:g}$")
    png_path = _save(fig, outdir, "fig2b")
    return [csv_path, png_path]


def fig2c(outdir: str, i_drive: float = 5.0) -> list[str]:
    """Response versus detuning at fixed drive, with the fold loci."""
    dts = np.linspace(-6.0, 1.0, 700)
    rows = []
    for dt in dts:
        for a in _single_mode_alpha_roots(i_drive, dt, 1e-9):
            rows.append([dt, a, "root"])
        if dt <= -SQRT3:
            tp = turning_points_single(dt)
            rows.append([dt, tp.lower, "fold_lower"])
            rows.append([dt, tp.upper, "fold_upper"])
    csv_path = _write(outdir, "fig2c", ["delta_t", "alpha", "kind"], rows)

    fig, ax = plt.subplots(figsize=(5, 3.6))
    pts = np.array([[r[0], r[1]] for r in rows if r[2] == "root"])
    low = np.array([[r[0], r[1]] for r in rows if r[2] == "fold_lower"])
    upp = np.array([[r[0], r[1]] for r in rows if r[2] == "fold_upper"])
    ax.plot(pts[:, 0], pts[:, 1], "k.", ms=1.5, label=rf"roots at $I={i_drive:g}$")
    ax.plot(low[:, 0], low[:, 1], "-", color="orange", lw=1.5, label=r"$\alpha_-$")
    ax.plot(upp[:, 0], upp[:, 1], "r-", lw=1.5, label=r"$\alpha_+$")
    ax.set_xlabel(r"$\tilde\Delta$")
    ax.set_ylabel(r"response $\alpha$")
    ax.legend(loc="best", fontsize=8)
    png_path = _save(fig, outdir, "fig2c")
    return [csv_path, png_path]


def fig2d(outdir: str, delta_t: float = -3.0, prefactor: float = 2.63) -> list[str]:
    """Sensitivity divergence toward the up-jump drive, with the
    inverse-square-root reference curve."""
    tp = turning_points_single(delta_t)
    i_ref = tp.i_lower
    rel = np.logspace(-4.5, -0.7, 300)
    grid = i_ref * (1.0 - rel)
    prof = sensitivity_profile(SingleModeParams(delta_t), grid, branch="lower")
    rows = [
        [pt.i_drive, pt.response, pt.derivative, prefactor / math.sqrt(abs(pt.i_drive - i_ref))]
        for pt in prof.points
    ]
    cols = ["i_drive", "alpha", "derivative", "reference"]
    csv_path = _write(outdir, "fig2d", cols, rows)

    arr = np.array([[r[0], abs(r[2]), r[3]] for r in rows])
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.semilogy(arr[:, 0], arr[:, 1], "k-", lw=1.5, label=r"$|d\alpha/d\tilde\Delta|$")
    ax.semilogy(arr[:, 0], arr[:, 2], "r--", lw=1.2, label=rf"${prefactor:g}/\sqrt{{|I-I_-|}}$")
    ax.set_xlabel(r"drive $I$")
    ax.set_ylabel("sensitivity")
    ax.legend(loc="best", fontsize=8)
    png_path = _save(fig, outdir, "fig2d")
    return [csv_path, png_path]


def _fig4_params(delta_b: float = 0.0) -> TwoModeParams:
    return TwoModeParams(delta_a=4.0, delta_b=delta_b, gamma_a=1.0, gamma_b=1.0, g=4.0, u=1.0)


def fig4a(outdir: str, i_drive: float = 18.0) -> list[str]:
    """Two-mode response versus the nonlinear mode's detuning at fixed
    drive, with both fold loci."""
    dbs = np.linspace(-10.0, 2.0, 700)
    rows = []
    for db in dbs:
        p = _fig4_params(db)
        for x in _two_mode_x_roots(i_drive, effective_detuning(p), 1e-9):
            rows.append([db, x, "root"])
    locus = bic_locus(_fig4_params(), dbs)
    for pt in locus.points:
        rows.append([pt.delta_b, pt.response, f"fold_{pt.branch}"])
    csv_path = _write(outdir, "fig4a", ["delta_b", "x", "kind"], rows)

    fig, ax = plt.subplots(figsize=(5, 3.6))
    pts = np.array([[r[0], r[1]] for r in rows if r[2] == "root"])
    low = np.array([[r[0], r[1]] for r in rows if r[2] == "fold_lower"])
    upp = np.array([[r[0], r[1]] for r in rows if r[2] == "fold_upper"])
    ax.plot(pts[:, 0], pts[:, 1], "k.", ms=1.5, label=rf"roots at $I={i_drive:g}$")
    if len(low):
        ax.plot(low[:, 0], low[:, 1], "r-", lw=1.5, label=r"$x_-$")
    if len(upp):
        ax.plot(upp[:, 0], upp[:, 1], "-", color="orange", lw=1.5, label=r"$x_+$")
    ax.set_xlabel(r"$\delta_b$")
    ax.set_ylabel(r"response $x$")
    ax.legend(loc="best", fontsize=8)
    png_path = _save(fig, outdir, "fig4a")
    return [csv_path, png_path]


def fig4b(outdir: str, prefactor: float = 0.92) -> list[str]:
    """Two-mode sensitivity divergence toward the up-jump drive."""
    p = _fig4_params()
    dt = effective_detuning(p)
    from .bistability import turning_points_two

    tp = turning_points_two(dt)
    i_ref = tp.i_lower
    rel = np.logspace(-4.5, -0.7, 300)
    grid = i_ref * (1.0 - rel)
    prof = sensitivity_profile(p, grid, branch="lower")
    rows = [
        [pt.i_drive, pt.response, pt.derivative, prefactor / math.sqrt(abs(pt.i_drive - i_ref))]
        for pt in prof.points
    ]
    cols = ["i_drive", "x", "derivative", "reference"]
    csv_path = _write(outdir, "fig4b", cols, rows)

    arr = np.array([[r[0], abs(r[2]), r[3]] for r in rows])
    fig, ax = plt.subplots(figsize=(5, 3.6))
    ax.semilogy(arr[:, 0], arr[:, 1], "k-", lw=1.5, label=r"$|dx/d\delta_b|$")
    ax.semilogy(arr[:, 0], arr[:, 2], "r--", lw=1.2, label=rf"${prefactor:g}/\sqrt{{|I-I(x_-)|}}$")
    ax.set_xlabel(r"drive $I$")
    ax.set_ylabel("sensitivity")
    ax.legend(loc="best", fontsize=8)
    png_path = _save(fig, outdir, "fig4b")
    return [csv_path, png_path]


def render(which: str, outdir: str) -> list[str]:
    """Render a figure group ("fig2", "fig4" or "all"); returns the paths
    written."""
    made: list[str] = []
    if which in ("fig2", "all"):
        made += fig2a(outdir)
        made += fig2b(outdir)
        made += fig2c(outdir)
        made += fig2d(outdir)
    if which in ("fig4", "all"):
        made += fig4a(outdir)
        made += fig4b(outdir)
    if not made:
        raise ValueError(f"unknown figure group {which!r}")
    return made
