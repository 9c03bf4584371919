"""Real-coefficient polynomials in the Laplace variable s.

Coefficients are stored in ascending degree order: ``coeffs[k]`` multiplies
``s**k``.  All higher-level rational-function math (transfer functions,
frequency responses, pole/zero extraction) is built on this module.

Root finding goes through the companion-matrix eigenvalue route (via
``numpy.roots``); accuracy is checked against a normalized residual rather
than a particular algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

# Coefficients below TRIM_REL * max|coeff| are treated as zero when the
# degree is determined; guards against phantom leading terms produced by
# interactive dragging.
TRIM_REL = 1e-14

# Two roots are considered a conjugate pair when they match under
# conjugation within this tolerance (scaled by 1 + |root|).
CONJUGATE_TOL = 1e-9


def _trim(coeffs: Sequence[float]) -> tuple[float, ...]:
    cs = [float(c) for c in coeffs]
    if not cs:
        raise ValueError("polynomial needs at least one coefficient")
    biggest = max(abs(c) for c in cs)
    if biggest == 0.0:
        return (0.0,)
    cutoff = TRIM_REL * biggest
    last = len(cs) - 1
    while last > 0 and abs(cs[last]) < cutoff:
        last -= 1
    return tuple(cs[: last + 1])


@dataclass(frozen=True)
class Polynomial:
    """Immutable real polynomial; trailing near-zero coefficients are trimmed."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float]):
        trimmed = _trim(list(coeffs))
        for c in trimmed:
            if not math.isfinite(c):
                raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", trimmed)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, s):
        """Evaluate at a real or complex point with Horner's scheme."""
        acc = 0.0 if not isinstance(s, complex) else 0.0 + 0.0j
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = [0.0] * n
        for k, c in enumerate(self.coeffs):
            out[k] += c
        for k, c in enumerate(other.coeffs):
            out[k] += c
        return Polynomial(out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return multiply(self, other)

    def scaled(self, factor: float) -> "Polynomial":
        return Polynomial(tuple(factor * c for c in self.coeffs))

    def pow_int(self, exponent: int) -> "Polynomial":
        """Nonnegative integer power by repeated multiplication.

        The left-to-right multiplication order is shared with the expression
        normalizer so both paths produce bit-identical coefficients.
        """
        if exponent < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial((1.0,))
        for _ in range(exponent):
            result = result * self
        return result


def eval_complex(p: Polynomial, s: complex) -> complex:
    """Horner evaluation of ``p`` at the complex point ``s``."""
    acc = 0.0 + 0.0j
    for c in reversed(p.coeffs):
        acc = acc * s + c
    return acc


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    """Product polynomial; coefficient sequences are convolved."""
    out = [0.0] * (len(p.coeffs) + len(q.coeffs) - 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(q.coeffs):
            out[i + j] += a * b
    return Polynomial(out)


def sort_roots(roots: Iterable[complex]) -> list[complex]:
    """Canonical ordering for root comparisons: by (real, imaginary)."""
    return sorted((complex(r) for r in roots), key=lambda r: (r.real, r.imag))


def roots(p: Polynomial) -> list[complex]:
    """All roots of ``p`` with multiplicity, canonically sorted.

    Raises
    ------
    ValueError
        If ``p`` has degree zero (a constant has no roots).
    """
    if p.degree < 1:
        raise ValueError("constant polynomial has no roots")
    # numpy expects descending coefficients and returns companion-matrix
    # eigenvalues; the real eigensolver keeps conjugate pairs exact.
    rts = np.roots(np.array(p.coeffs[::-1], dtype=float))
    return sort_roots(rts)


def residual(p: Polynomial, root: complex) -> float:
    """Normalized root residual |p(r)| / (max|coeff| * max(1,|r|)^deg)."""
    biggest = max(abs(c) for c in p.coeffs)
    scale = biggest * max(1.0, abs(root)) ** p.degree
    return abs(eval_complex(p, root)) / scale


def from_roots(root_set: Iterable[complex], gain: float = 1.0) -> Polynomial:
    """Real polynomial with the given roots and leading coefficient ``gain``.

    The root multiset must be closed under complex conjugation; conjugate
    pairs are folded into real quadratic factors so the result has exactly
    real coefficients.
    """
    rts = sort_roots(root_set)
    used = [False] * len(rts)
    factors: list[Polynomial] = []
    for i, r in enumerate(rts):
        if used[i]:
            continue
        used[i] = True
        tol = CONJUGATE_TOL * (1.0 + abs(r))
        if abs(r.imag) <= tol:
            factors.append(Polynomial((-r.real, 1.0)))
            continue
        partner = None
        for j in range(i + 1, len(rts)):
            if not used[j] and abs(rts[j] - r.conjugate()) <= tol:
                partner = j
                break
        if partner is None:
            raise ValueError(
                f"root set is not closed under conjugation: {r} has no partner"
            )
        used[partner] = True
        # (s - r)(s - conj r) = s^2 - 2 Re(r) s + |r|^2, with |r|^2 formed
        # directly from the parts (abs() would round through a square root)
        factors.append(
            Polynomial((r.real * r.real + r.imag * r.imag, -2.0 * r.real, 1.0))
        )
    result = Polynomial((float(gain),))
    for f in factors:
        result = result * f
    return result
