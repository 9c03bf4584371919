"""Matplotlib rendering of the analysis views to image files.

Used by the CLI report path: alongside the CSV/JSON payload, each view can
be rendered to a figure file.  Everything here is presentation only; the
numbers come from the analysis modules untouched.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .frequency import FrequencyResponse, nyquist_curve
from .timeresp import TimeResponse
from .transfer import TransferFunction


def bode_figure(series: Sequence[tuple[str, FrequencyResponse]]):
    fig, (ax_mag, ax_phase) = plt.subplots(2, 1, sharex=True, figsize=(7, 6))
    for label, fr in series:
        keep = ~fr.singular
        ax_mag.semilogx(fr.omegas[keep], fr.mag_db[keep], label=label)
        ax_phase.semilogx(fr.omegas[keep], fr.phase_deg[keep], label=label)
    ax_mag.set_ylabel("magnitude [dB]")
    ax_mag.grid(True, which="both", alpha=0.3)
    ax_phase.set_xlabel("omega [rad/s]")
    ax_phase.set_ylabel("phase [deg]")
    ax_phase.grid(True, which="both", alpha=0.3)
    if len(series) > 1:
        ax_mag.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def nyquist_figure(series: Sequence[tuple[str, FrequencyResponse]]):
    fig, ax = plt.subplots(figsize=(6, 6))
    for label, fr in series:
        pts = nyquist_curve(fr)
        ax.plot(pts[:, 0], pts[:, 1], label=label)
    ax.plot([-1.0], [0.0], "r+", markersize=12, markeredgewidth=2)
    ax.axhline(0.0, color="gray", linewidth=0.5)
    ax.axvline(0.0, color="gray", linewidth=0.5)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal", adjustable="datalim")
    if len(series) > 1:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def step_figure(series: Sequence[tuple[str, TimeResponse]]):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for label, resp in series:
        ax.plot(resp.times, resp.values, label=f"{label} ({resp.method})")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("output")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def pzmap_figure(series: Sequence[tuple[str, TransferFunction]]):
    fig, ax = plt.subplots(figsize=(6, 6))
    for label, tf in series:
        poles = tf.poles()
        zeros = tf.zeros()
        if poles:
            ax.plot(
                [p.real for p in poles],
                [p.imag for p in poles],
                "x",
                markersize=10,
                markeredgewidth=2,
                label=f"{label} poles",
            )
        if zeros:
            ax.plot(
                [z.real for z in zeros],
                [z.imag for z in zeros],
                "o",
                fillstyle="none",
                markersize=10,
                label=f"{label} zeros",
            )
    ax.axhline(0.0, color="gray", linewidth=0.5)
    ax.axvline(0.0, color="gray", linewidth=0.5)
    ax.set_xlabel("Re(s)")
    ax.set_ylabel("Im(s)")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    return fig


def save_figure(fig, path: str, dpi: int = 120) -> None:
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
