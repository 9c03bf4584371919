"""Frequency-domain analysis: Bode data, Nyquist curve, stability margins.

The response is obtained by substituting s = j*omega into the rational part
and multiplying by exp(-j*L*omega) for the delay.  Phase is reported
unwrapped: the principal value only covers (-180, 180] degrees, so jumps
between adjacent samples larger than half a turn are repaired by adding the
appropriate multiple of 360.  Delayed systems produce steep phase curves at
high frequency; ``densify_for_delay`` inserts grid points so the true phase
step between neighbours stays at or below a quarter turn, which keeps the
unwrapping unambiguous.

Margins are read off the unwrapped response: the gain margin at the first
-180 degree phase crossing, the phase margin at the unit-gain crossing,
both refined by bisection against the exact evaluator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .transfer import TransferFunction

# Default analysis span in rad/s.
WMIN_DEFAULT = 1e-2
WMAX_DEFAULT = 1e3
POINTS_DEFAULT = 1000

# |den(jw)| below this is treated as a pole on the imaginary axis.
SINGULAR_EPS = 1e-300

# Refinement targets for margin crossings.
PHASE_CROSSING_TOL_DEG = 1e-6
GAIN_CROSSING_TOL_DB = 1e-9
REFINE_MAX_ITER = 60


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing positive frequencies, rad/s."""

    omegas: tuple[float, ...]

    def __post_init__(self):
        if len(self.omegas) < 1:
            raise ValueError("empty frequency grid")
        prev = 0.0
        for w in self.omegas:
            if not (w > prev):
                raise ValueError("grid must be strictly increasing and positive")
            prev = w

    def __len__(self) -> int:
        return len(self.omegas)


def log_grid(wmin: float, wmax: float, n: int) -> FrequencyGrid:
    """n log-uniform points from wmin to wmax inclusive."""
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    if not (0.0 < wmin < wmax):
        raise ValueError("need 0 < wmin < wmax")
    return FrequencyGrid(tuple(np.logspace(math.log10(wmin), math.log10(wmax), n)))


def default_grid(n: int = POINTS_DEFAULT) -> FrequencyGrid:
    return log_grid(WMIN_DEFAULT, WMAX_DEFAULT, n)


def densify_for_delay(grid: FrequencyGrid, delay: float) -> FrequencyGrid:
    """Insert points so delay * (adjacent spacing) stays at or below pi/2.

    Returns the grid unchanged for delay-free systems.
    """
    if delay <= 0.0:
        return grid
    max_step = (math.pi / 2.0) / delay
    ws = grid.omegas
    out: list[float] = [ws[0]]
    for w0, w1 in zip(ws, ws[1:]):
        gap = w1 - w0
        if gap > max_step:
            segments = math.ceil(gap / max_step)
            out.extend(np.linspace(w0, w1, segments + 1)[1:])
        else:
            out.append(w1)
    return FrequencyGrid(tuple(out))


def unwrap_phase(raw_phase_deg: Sequence[float], omegas: Sequence[float]) -> np.ndarray:
    """Continuous phase from principal-value samples.

    The first sample is mapped into (-180, 180]; every later sample gets the
    360-degree multiple that keeps it within half a turn of its predecessor.
    NaN samples (singular grid points) are passed through without breaking
    the tracking.
    """
    if len(raw_phase_deg) != len(omegas):
        raise ValueError("phase and frequency sequences must align")
    out = np.empty(len(raw_phase_deg), dtype=float)
    prev: Optional[float] = None
    for k, raw in enumerate(raw_phase_deg):
        if math.isnan(raw):
            out[k] = math.nan
            continue
        if prev is None:
            wrapped = raw % 360.0
            if wrapped > 180.0:
                wrapped -= 360.0
            out[k] = wrapped
        else:
            turns = round((prev - raw) / 360.0)
            out[k] = raw + 360.0 * turns
        prev = out[k]
    return out


@dataclass(frozen=True)
class FrequencyResponse:
    """Sampled H(j*omega) with magnitude in dB and unwrapped phase in degrees."""

    omegas: np.ndarray
    values: np.ndarray
    mag_db: np.ndarray
    phase_deg: np.ndarray
    singular: np.ndarray


def freq_response(tf: TransferFunction, grid: FrequencyGrid) -> FrequencyResponse:
    """Evaluate H over a grid; delayed systems should use a densified grid.

    Grid points where the denominator vanishes are marked singular (infinite
    magnitude) instead of failing.
    """
    n = len(grid)
    values = np.empty(n, dtype=complex)
    raw_deg = np.empty(n, dtype=float)
    singular = np.zeros(n, dtype=bool)
    num, den, delay = tf.num, tf.den, tf.delay
    for k, w in enumerate(grid.omegas):
        s = 1j * w
        d = den(s)
        if abs(d) < SINGULAR_EPS:
            values[k] = complex(math.inf, 0.0)
            raw_deg[k] = math.nan
            singular[k] = True
            continue
        h = num(s) / d
        if delay:
            h *= cmath.exp(-1j * delay * w)
        values[k] = h
        raw_deg[k] = math.degrees(cmath.phase(h))
    mags = np.abs(values)
    with np.errstate(divide="ignore"):
        mag_db = 20.0 * np.log10(mags)
    phase_deg = unwrap_phase(raw_deg, grid.omegas)
    return FrequencyResponse(
        omegas=np.array(grid.omegas, dtype=float),
        values=values,
        mag_db=mag_db,
        phase_deg=phase_deg,
        singular=singular,
    )


def nyquist_curve(fr: FrequencyResponse) -> np.ndarray:
    """Curve points (Re, Im) rebuilt from magnitude and unwrapped phase.

    Singular samples are omitted.  The endpoints omega = 0 and omega = inf
    are never part of the grid and are left to the reader to extrapolate.
    """
    keep = ~fr.singular
    mags = np.abs(fr.values[keep])
    phases = np.radians(fr.phase_deg[keep])
    return np.column_stack((mags * np.cos(phases), mags * np.sin(phases)))


@dataclass(frozen=True)
class StabilityMargins:
    """Gain/phase margins with their crossover frequencies.

    ``gain_margin`` is infinite (and ``omega_pc`` None) when the phase never
    reaches -180 degrees inside the analysis span; ``phase_margin_deg`` is
    None (and ``omega_gc`` None) when the magnitude never crosses unity.
    """

    gain_margin: float
    gm_db: float
    omega_pc: Optional[float]
    phase_margin_deg: Optional[float]
    omega_gc: Optional[float]


def _principal_deg(tf: TransferFunction, w: float) -> float:
    return math.degrees(cmath.phase(tf.evaluate(1j * w)))


def _unwrapped_at(tf: TransferFunction, w: float, reference_deg: float) -> float:
    """Unwrapped phase at one frequency, snapped near a reference value."""
    principal = _principal_deg(tf, w)
    return principal + 360.0 * round((reference_deg - principal) / 360.0)


def _refine_phase_crossing(
    tf: TransferFunction,
    w_lo: float,
    w_hi: float,
    p_lo: float,
    p_hi: float,
    target: float,
) -> float:
    """Solve unwrapped_phase(w) == target inside a bracketing grid cell.

    Alternates interpolation in (log w, phase) with plain bisection and
    re-evaluates the transfer function directly at each candidate.
    """
    w_lo, w_hi = float(w_lo), float(w_hi)
    p_lo, p_hi = float(p_lo), float(p_hi)
    f_lo = p_lo - target
    f_hi = p_hi - target
    if f_lo == 0.0:
        return w_lo
    if f_hi == 0.0:
        return w_hi
    x_lo, x_hi = math.log10(w_lo), math.log10(w_hi)
    for it in range(REFINE_MAX_ITER):
        if it % 2 == 0 and f_hi != f_lo:
            x_mid = x_lo + (0.0 - f_lo) * (x_hi - x_lo) / (f_hi - f_lo)
            if not (x_lo < x_mid < x_hi):
                x_mid = 0.5 * (x_lo + x_hi)
        else:
            x_mid = 0.5 * (x_lo + x_hi)
        w_mid = 10.0 ** x_mid
        ref = p_lo + (x_mid - x_lo) * (p_hi - p_lo) / (x_hi - x_lo)
        p_mid = _unwrapped_at(tf, w_mid, ref)
        f_mid = p_mid - target
        if abs(f_mid) <= PHASE_CROSSING_TOL_DEG:
            return w_mid
        if (f_lo < 0.0) == (f_mid < 0.0):
            x_lo, f_lo, p_lo = x_mid, f_mid, p_mid
        else:
            x_hi, f_hi, p_hi = x_mid, f_mid, p_mid
    return 10.0 ** (0.5 * (x_lo + x_hi))


def _refine_gain_crossing(
    tf: TransferFunction, w_lo: float, w_hi: float
) -> float:
    """Solve |H(jw)| == 1 inside a bracketing grid cell (on log magnitude)."""

    def logmag(w: float) -> float:
        return math.log10(abs(tf.evaluate(1j * w)))

    w_lo, w_hi = float(w_lo), float(w_hi)
    x_lo, x_hi = math.log10(w_lo), math.log10(w_hi)
    f_lo, f_hi = logmag(w_lo), logmag(w_hi)
    if f_lo == 0.0:
        return w_lo
    if f_hi == 0.0:
        return w_hi
    for it in range(REFINE_MAX_ITER):
        if it % 2 == 0 and f_hi != f_lo:
            x_mid = x_lo + (0.0 - f_lo) * (x_hi - x_lo) / (f_hi - f_lo)
            if not (x_lo < x_mid < x_hi):
                x_mid = 0.5 * (x_lo + x_hi)
        else:
            x_mid = 0.5 * (x_lo + x_hi)
        f_mid = logmag(10.0 ** x_mid)
        if abs(f_mid) * 20.0 <= GAIN_CROSSING_TOL_DB:
            return 10.0 ** x_mid
        if (f_lo < 0.0) == (f_mid < 0.0):
            x_lo, f_lo = x_mid, f_mid
        else:
            x_hi, f_hi = x_mid, f_mid
    return 10.0 ** (0.5 * (x_lo + x_hi))


def margins(tf: TransferFunction) -> StabilityMargins:
    """Stability margins over the default analysis span.

    The phase crossover is the first -180 degree crossing scanning upward in
    frequency; the gain crossover is the highest frequency where |H| falls
    through unity (the conventional choice when several crossings exist).
    """
    grid = densify_for_delay(default_grid(POINTS_DEFAULT), tf.delay)
    fr = freq_response(tf, grid)
    ws = fr.omegas
    phase = fr.phase_deg
    mags = np.abs(fr.values)
    ok = ~fr.singular

    omega_pc = None
    for k in range(len(ws) - 1):
        if not (ok[k] and ok[k + 1]):
            continue
        f0 = phase[k] + 180.0
        f1 = phase[k + 1] + 180.0
        if f0 == 0.0:
            omega_pc = float(ws[k])
            break
        if f0 * f1 < 0.0 or f1 == 0.0:
            omega_pc = float(
                _refine_phase_crossing(
                    tf, ws[k], ws[k + 1], phase[k], phase[k + 1], -180.0
                )
            )
            break

    if omega_pc is None:
        gain_margin = math.inf
        gm_db = math.inf
    else:
        mag_at_pc = abs(tf.evaluate(1j * omega_pc))
        gain_margin = math.inf if mag_at_pc == 0.0 else 1.0 / mag_at_pc
        gm_db = 20.0 * math.log10(gain_margin) if math.isfinite(gain_margin) else math.inf

    downward: list[int] = []
    crossings: list[int] = []
    for k in range(len(ws) - 1):
        if not (ok[k] and ok[k + 1]):
            continue
        g0 = mags[k] - 1.0
        g1 = mags[k + 1] - 1.0
        if g0 * g1 < 0.0 or g0 == 0.0 or g1 == 0.0:
            crossings.append(k)
            if g0 >= 0.0 >= g1:
                downward.append(k)

    omega_gc = None
    phase_margin = None
    pick = downward[-1] if downward else (crossings[-1] if crossings else None)
    if pick is not None:
        k = pick
        if mags[k] == 1.0:
            omega_gc = float(ws[k])
        else:
            omega_gc = float(_refine_gain_crossing(tf, ws[k], ws[k + 1]))
        x = math.log10(omega_gc)
        x0, x1 = math.log10(ws[k]), math.log10(ws[k + 1])
        ref = float(phase[k] + (x - x0) * (phase[k + 1] - phase[k]) / (x1 - x0))
        phase_margin = float(180.0 + _unwrapped_at(tf, omega_gc, ref))

    return StabilityMargins(
        gain_margin=gain_margin,
        gm_db=gm_db,
        omega_pc=omega_pc,
        phase_margin_deg=phase_margin,
        omega_gc=omega_gc,
    )
