"""Figure rendering for the CLI report path.

Each helper renders one matplotlib figure to a file next to the delimited
data it illustrates.  The Agg backend keeps rendering headless.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .josephson import EpsilonTrajectory, casimir_quanta_curve
from .tomography import WignerGrid

_DPI = 150


def save_wigner_figure(grid: WignerGrid, path, title: str = "Wigner function") -> None:
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    extent = [grid.v_axis[0], grid.v_axis[-1], grid.i_axis[0], grid.i_axis[-1]]
    vmax = float(np.max(np.abs(grid.values)))
    im = ax.imshow(
        grid.values, origin="lower", extent=extent, cmap="RdBu_r", vmin=-vmax, vmax=vmax,
        aspect="auto",
    )
    fig.colorbar(im, ax=ax, label="W(I, V)")
    ax.set_xlabel("V")
    ax.set_ylabel("I")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_tomogram_figure(j, w, path, title: str = "Tomogram") -> None:
    fig, ax = plt.subplots(figsize=(5.2, 3.6))
    ax.plot(j, w, lw=1.5)
    ax.set_xlabel("J")
    ax.set_ylabel("w(J)")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_tomogram2_figure(j1, j2, w, path, title: str = "Two-mode tomogram") -> None:
    fig, ax = plt.subplots(figsize=(5.2, 4.4))
    im = ax.pcolormesh(j1, j2, w.T, cmap="viridis", shading="auto")
    fig.colorbar(im, ax=ax, label="w(J1, J2)")
    ax.set_xlabel("J1")
    ax.set_ylabel("J2")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_quanta_figure(traj: EpsilonTrajectory, path) -> None:
    quanta = casimir_quanta_curve(traj)
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 5.2), sharex=True)
    ax1.plot(traj.t, quanta, lw=1.2)
    ax1.set_ylabel("mean quanta")
    ax1.grid(True, alpha=0.3)
    ax2.plot(traj.t, 0.5 * np.abs(traj.eps) ** 2, lw=1.0, label=r"$\sigma_{II}$")
    ax2.plot(traj.t, 0.5 * np.abs(traj.eps_dot) ** 2, lw=1.0, label=r"$\sigma_{VV}$")
    ax2.plot(traj.t, 0.5 * np.real(traj.eps_dot * np.conj(traj.eps)), lw=1.0, label=r"$\sigma_{IV}$")
    ax2.set_xlabel("t")
    ax2.set_ylabel("dispersions")
    ax2.legend(loc="best", fontsize=8)
    ax2.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def save_moments_figure(times, states, path) -> None:
    labels = [
        ("I1 I1", 0, 0), ("V1 V1", 1, 1), ("I1 V1", 0, 1),
        ("I2 I2", 2, 2), ("V2 V2", 3, 3), ("I2 V2", 2, 3),
        ("I1 I2", 0, 2), ("V1 V2", 1, 3), ("I1 V2", 0, 3), ("I2 V1", 1, 2),
    ]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.4, 5.6), sharex=True)
    for name, i, j in labels[:6]:
        ax1.plot(times, [s.cov[i, j] for s in states], lw=1.0, label=name)
    for name, i, j in labels[6:]:
        ax2.plot(times, [s.cov[i, j] for s in states], lw=1.0, label=name)
    ax1.set_ylabel("single-mode moments")
    ax2.set_ylabel("cross moments")
    ax2.set_xlabel("t")
    for ax in (ax1, ax2):
        ax.legend(loc="best", fontsize=7, ncol=3)
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
