"""Runnable analysis-script generation for Python, MATLAB, and Julia.

The generated scripts rebuild the current transfer function in the target
ecosystem's control-toolbox convention (coefficients in descending powers
of s) and plot its step response and Bode data.  Coefficients and the delay
are embedded as shortest round-trip decimal literals, so parsing them back
out of the text recovers the exact values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .transfer import TransferFunction

EXPORT_TARGETS = ("python", "matlab", "julia")

_FILENAMES = {"python": "system.py", "matlab": "system.m", "julia": "system.jl"}


@dataclass(frozen=True)
class SourceText:
    text: str
    target: str
    filename: str


def _descending(coeffs: tuple[float, ...]) -> list[float]:
    return list(reversed(coeffs))


def _literals(values: list[float]) -> str:
    return ", ".join(repr(v) for v in values)


def generate_code(tf: TransferFunction, target: str) -> SourceText:
    """Source text for one export target.

    Raises ``ValueError`` for an unknown target name.
    """
    if target not in EXPORT_TARGETS:
        raise ValueError(f"unknown export target {target!r}")
    num = _literals(_descending(tf.num.coeffs))
    den = _literals(_descending(tf.den.coeffs))
    delay = repr(tf.delay)
    if target == "python":
        text = _PYTHON_TEMPLATE.format(num=num, den=den, delay=delay)
    elif target == "matlab":
        text = _MATLAB_TEMPLATE.format(num=num, den=den, delay=delay)
    else:
        text = _JULIA_TEMPLATE.format(num=num, den=den, delay=delay)
    return SourceText(text=text, target=target, filename=_FILENAMES[target])


_PYTHON_TEMPLATE = '''\
#!/usr/bin/env python3
"""Step response and Bode data for an exported transfer function."""
import numpy as np
import matplotlib.pyplot as plt
from scipy import signal

num = [{num}]   # descending powers of s
den = [{den}]   # descending powers of s
delay = {delay}  # seconds (pure dead time)

G = signal.TransferFunction(num, den)

# Step response; the dead time is applied as an exact shift of the time axis.
t, y = signal.step(G, N=500)
t = np.concatenate(([0.0], t + delay))
y = np.concatenate(([0.0], y))

# Bode data; the delay leaves the magnitude alone and subtracts delay*w
# radians of phase.
w = np.logspace(-2, 3, 1000)
w, mag_db, phase_deg = signal.bode(G, w)
phase_deg = phase_deg - np.degrees(delay * w)

fig, axes = plt.subplots(3, 1, figsize=(7, 9))
axes[0].plot(t, y)
axes[0].set_xlabel("t [s]")
axes[0].set_ylabel("step response")
axes[1].semilogx(w, mag_db)
axes[1].set_ylabel("|G| [dB]")
axes[2].semilogx(w, phase_deg)
axes[2].set_xlabel("omega [rad/s]")
axes[2].set_ylabel("phase [deg]")
fig.tight_layout()
plt.show()
'''

_MATLAB_TEMPLATE = '''\
% Step response and Bode data for an exported transfer function.
num = [{num}];   % descending powers of s
den = [{den}];   % descending powers of s
L = {delay};     % seconds (pure dead time)

G = tf(num, den, 'InputDelay', L);

figure;
step(G);
title('Step response');

figure;
bode(G);
grid on;
'''

_JULIA_TEMPLATE = '''\
# Step response and Bode data for an exported transfer function.
using ControlSystemsBase, Plots

num = [{num}]   # descending powers of s
den = [{den}]   # descending powers of s
L = {delay}     # seconds (pure dead time)

G0 = tf(num, den)
G = L > 0 ? G0 * delay(L) : G0

p1 = plot(step(G), title = "Step response")
p2 = bodeplot(G)
plot(p1, p2, layout = (2, 1))
'''
