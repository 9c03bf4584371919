"""Transfer-function model: a real rational function of s plus a pure delay.

``TransferFunction(num, den, delay)`` represents ``num(s)/den(s) * exp(-delay*s)``.
This is the central value type shared by the parser, the template catalog,
and both analysis paths.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .polynomial import Polynomial, eval_complex, roots


@dataclass(frozen=True)
class TransferFunction:
    num: Polynomial
    den: Polynomial
    delay: float = 0.0

    def __post_init__(self):
        if self.den.is_zero:
            raise ValueError("denominator is identically zero")
        if not math.isfinite(self.delay) or self.delay < 0.0:
            raise ValueError("delay must be finite and nonnegative")

    def poles(self) -> list[complex]:
        if self.den.degree < 1:
            return []
        return roots(self.den)

    def zeros(self) -> list[complex]:
        if self.num.degree < 1:
            return []
        return roots(self.num)

    def static_gain(self) -> float:
        """Zero-frequency gain num(0)/den(0); infinite for integrating systems."""
        d0 = self.den.coeffs[0]
        n0 = self.num.coeffs[0]
        if d0 == 0.0:
            return math.inf if n0 != 0.0 else math.nan
        return n0 / d0

    def evaluate(self, s: complex) -> complex:
        """Value of the transfer function at a complex point (delay included)."""
        value = eval_complex(self.num, s) / eval_complex(self.den, s)
        if self.delay:
            value *= cmath.exp(-self.delay * s)
        return value

    def to_text(self) -> str:
        """Canonical expression text; reparsing reproduces the coefficients."""
        text = f"({_poly_text(self.num)})/({_poly_text(self.den)})"
        if self.delay > 0.0:
            text += f"*exp(-{self.delay!r}*s)"
        return text


def _poly_text(p: Polynomial) -> str:
    terms = []
    for k, c in enumerate(p.coeffs):
        if k == 0:
            terms.append(f"({c!r})")
        elif k == 1:
            terms.append(f"({c!r})*s")
        else:
            terms.append(f"({c!r})*s^{k}")
    return "+".join(terms)


def make_tf(num, den, delay: float = 0.0) -> TransferFunction:
    """Convenience constructor from raw ascending coefficient sequences."""
    return TransferFunction(Polynomial(num), Polynomial(den), float(delay))
