"""Figure rendering for the report path of the CLI.

All functions save to a file and return the path; nothing is shown
interactively (the Agg backend is forced so the CLI works headless).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .criteria import CriteriaReport, instability_weight, schwarzschild_margin, tserkovnikov_margin
from .profiles import EquilibriumProfile
from .scan import DispersionTable

__all__ = ["plot_profile", "plot_dispersion", "plot_trajectory"]


def plot_profile(prof: EquilibriumProfile, path: str,
                 report: CriteriaReport | None = None) -> str:
    """Equilibrium profiles and the pointwise stability margins."""
    z = prof.grid.nodes
    fig, axes = plt.subplots(2, 2, figsize=(9, 6), sharex=True)

    ax = axes[0, 0]
    ax.plot(z, prof.rho, label=r"$\bar\rho$")
    ax.plot(z, prof.pressure, label=r"$\bar P$")
    ax.set_ylabel("density, pressure")
    ax.legend(frameon=False)

    ax = axes[0, 1]
    ax.plot(z, prof.m2, color="tab:purple")
    ax.set_ylabel(r"$m^2$")

    ax = axes[1, 0]
    s, _ = schwarzschild_margin(prof)
    t, _ = tserkovnikov_margin(prof)
    ax.plot(z, s, label="Schwarzschild margin")
    ax.plot(z, t, label="field-corrected margin")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("z")
    ax.set_ylabel("margin")
    ax.legend(frameon=False)

    ax = axes[1, 1]
    ax.plot(z, instability_weight(prof), color="tab:red")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("z")
    ax.set_ylabel("instability weight W")

    if report is not None:
        fig.suptitle(
            f"xi2d = {report.xi2d:.4g}, xi3d = {report.xi3d:.4g}, "
            f"kappa = {report.kappa:.4g}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_dispersion(table: DispersionTable, path: str,
                    xi3d: float | None = None) -> str:
    """Growth rate versus xi1, one curve per xi2."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    xi2s = sorted({r.xi2 for r in table.rows})
    for xi2 in xi2s:
        pts = sorted((r.xi1, r.re_lambda) for r in table.rows
                     if r.xi2 == xi2 and not r.flagged)
        if not pts:
            continue
        x, y = zip(*pts)
        ax.plot(x, y, marker="o", ms=3, label=rf"$\xi_2={xi2:g}$")
    if xi3d is not None and np.isfinite(xi3d) and xi3d > 0:
        ax.axvline(xi3d, color="k", ls="--", lw=0.8, label=r"$\xi_{3D}$")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel(r"$\xi_1$")
    ax.set_ylabel(r"Re $\Lambda$")
    if len(xi2s) <= 8:
        ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_trajectory(times: np.ndarray, amplitude: np.ndarray, path: str,
                    sigma: float | None = None) -> str:
    """Amplitude history on a log scale with the fitted exponential."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.semilogy(times, amplitude, lw=1.2, label="amplitude")
    if sigma is not None and len(times) > 1:
        t0 = times[len(times) // 2]
        a0 = np.interp(t0, times, amplitude)
        ax.semilogy(times, a0 * np.exp(sigma * (times - t0)), "k--", lw=0.8,
                    label=rf"fit $\sigma={sigma:.4g}$")
    ax.set_xlabel("t")
    ax.set_ylabel("velocity norm")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
