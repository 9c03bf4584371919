"""Canonical parameterized system families G1-G6.

Six slider-driven families cover the standard teaching systems: first-order
lag, two real poles, complex second order, delayed first order, zero with
two poles, and a quadruple pole.  ``instantiate`` turns a template instance
into coefficients and ``match_template`` recovers the template (and its
parameters) from a plain transfer function so interactive edits can be
mapped back onto sliders and so the time-response dispatcher can pick the
closed-form path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .polynomial import Polynomial, multiply
from .transfer import TransferFunction

# Relative tolerance used when deciding whether coefficients fit a family.
MATCH_RTOL = 1e-9


class TemplateId(str, Enum):
    FIRST_ORDER = "G1"
    TWO_REAL_POLES = "G2"
    COMPLEX_SECOND_ORDER = "G3"
    DELAYED_FIRST_ORDER = "G4"
    ZERO_TWO_POLES = "G5"
    QUADRUPLE_POLE = "G6"


@dataclass(frozen=True)
class ParamSpec:
    name: str
    default: float
    lo: float
    hi: float
    log_scale: bool = False


@dataclass(frozen=True)
class TemplateInfo:
    id: TemplateId
    title: str
    expression: str
    params: tuple[ParamSpec, ...]

    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def defaults(self) -> dict[str, float]:
        return {p.name: p.default for p in self.params}

    def param(self, name: str) -> ParamSpec:
        for p in self.params:
            if p.name == name:
                return p
        raise KeyError(name)


def _gain(name: str, default: float = 1.0) -> ParamSpec:
    return ParamSpec(name, default, -5.0, 5.0)


def _time(name: str, default: float) -> ParamSpec:
    return ParamSpec(name, default, 0.01, 10.0, log_scale=True)


CATALOG: dict[TemplateId, TemplateInfo] = {
    TemplateId.FIRST_ORDER: TemplateInfo(
        TemplateId.FIRST_ORDER,
        "First-order lag",
        "k_1/(1+T_1*s)",
        (_gain("k_1"), _time("T_1", 1.0)),
    ),
    TemplateId.TWO_REAL_POLES: TemplateInfo(
        TemplateId.TWO_REAL_POLES,
        "Two real poles",
        "k_2/((1+T_2*s)*(1+T_3*s))",
        (_gain("k_2"), _time("T_2", 1.0), _time("T_3", 0.2)),
    ),
    TemplateId.COMPLEX_SECOND_ORDER: TemplateInfo(
        TemplateId.COMPLEX_SECOND_ORDER,
        "Second order with complex poles",
        "k_3*omega_0^2/(s^2+2*zeta*omega_0*s+omega_0^2)",
        (
            _gain("k_3"),
            ParamSpec("omega_0", 2.0, 0.1, 100.0, log_scale=True),
            ParamSpec("zeta", 0.2, 0.0, 2.0),
        ),
    ),
    TemplateId.DELAYED_FIRST_ORDER: TemplateInfo(
        TemplateId.DELAYED_FIRST_ORDER,
        "First order with time delay",
        "3/(1+s)*exp(-L*s)",
        (_time("L", 0.5),),
    ),
    TemplateId.ZERO_TWO_POLES: TemplateInfo(
        TemplateId.ZERO_TWO_POLES,
        "Zero with two real poles",
        "k_4*(1+T_8*s)/((1+T_6*s)*(1+T_7*s))",
        (_gain("k_4"), _time("T_6", 1.0), _time("T_7", 0.1), _time("T_8", 0.5)),
    ),
    TemplateId.QUADRUPLE_POLE: TemplateInfo(
        TemplateId.QUADRUPLE_POLE,
        "Four identical poles",
        "1/(1+T_5*s)^4",
        (_time("T_5", 0.5),),
    ),
}


@dataclass(frozen=True)
class TemplateInstance:
    id: TemplateId
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        info = CATALOG[self.id]
        merged = info.defaults()
        for name, value in self.params.items():
            if name not in merged:
                raise ValueError(
                    f"unknown parameter '{name}' for template {self.id.value}"
                )
            merged[name] = float(value)
        object.__setattr__(self, "params", merged)

    def with_param(self, name: str, value: float) -> "TemplateInstance":
        updated = dict(self.params)
        if name not in updated:
            raise ValueError(
                f"unknown parameter '{name}' for template {self.id.value}"
            )
        updated[name] = float(value)
        return TemplateInstance(self.id, updated)


def default_instance(tid: TemplateId) -> TemplateInstance:
    return TemplateInstance(tid, {})


def _require(ok: bool, message: str) -> None:
    if not ok:
        raise ValueError(f"parameter out of range: {message}")


def instantiate(inst: TemplateInstance) -> TransferFunction:
    """Coefficient form of a template instance.

    Raises ``ValueError`` when a parameter violates the family's invariants
    (time constants and omega_0 positive, zeta and L nonnegative, gains
    finite).
    """
    p = inst.params
    for name, value in p.items():
        _require(math.isfinite(value), f"{name} must be finite")
    tid = inst.id
    if tid is TemplateId.FIRST_ORDER:
        _require(p["T_1"] > 0, "T_1 must be positive")
        return TransferFunction(
            Polynomial((p["k_1"],)), Polynomial((1.0, p["T_1"]))
        )
    if tid is TemplateId.TWO_REAL_POLES:
        _require(p["T_2"] > 0, "T_2 must be positive")
        _require(p["T_3"] > 0, "T_3 must be positive")
        den = multiply(Polynomial((1.0, p["T_2"])), Polynomial((1.0, p["T_3"])))
        return TransferFunction(Polynomial((p["k_2"],)), den)
    if tid is TemplateId.COMPLEX_SECOND_ORDER:
        w0, zeta = p["omega_0"], p["zeta"]
        _require(w0 > 0, "omega_0 must be positive")
        _require(zeta >= 0, "zeta must be nonnegative")
        w0_sq = w0 * w0
        return TransferFunction(
            Polynomial((p["k_3"] * w0_sq,)),
            Polynomial((w0_sq, 2.0 * zeta * w0, 1.0)),
        )
    if tid is TemplateId.DELAYED_FIRST_ORDER:
        _require(p["L"] >= 0, "L must be nonnegative")
        return TransferFunction(
            Polynomial((3.0,)), Polynomial((1.0, 1.0)), p["L"]
        )
    if tid is TemplateId.ZERO_TWO_POLES:
        _require(p["T_6"] > 0, "T_6 must be positive")
        _require(p["T_7"] > 0, "T_7 must be positive")
        _require(p["T_8"] > 0, "T_8 must be positive")
        den = multiply(Polynomial((1.0, p["T_6"])), Polynomial((1.0, p["T_7"])))
        num = multiply(Polynomial((p["k_4"],)), Polynomial((1.0, p["T_8"])))
        return TransferFunction(num, den)
    if tid is TemplateId.QUADRUPLE_POLE:
        _require(p["T_5"] > 0, "T_5 must be positive")
        den = Polynomial((1.0, p["T_5"])).pow_int(4)
        return TransferFunction(Polynomial((1.0,)), den)
    raise ValueError(f"unknown template {tid}")


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= MATCH_RTOL * max(1.0, abs(a), abs(b))


def _split_real_time_constants(c1: float, c2: float) -> Optional[tuple[float, float]]:
    """Factor 1 + c1*s + c2*s^2 into (1+Ta*s)(1+Tb*s) with Ta >= Tb > 0."""
    disc = c1 * c1 - 4.0 * c2
    if disc < 0.0:
        return None
    root = math.sqrt(disc)
    ta = 0.5 * (c1 + root)
    tb = 0.5 * (c1 - root)
    if ta <= 0.0 or tb <= 0.0:
        return None
    return ta, tb


def match_template(
    tf: TransferFunction,
) -> Optional[tuple[TemplateId, dict[str, float]]]:
    """Recognize a transfer function as a template instance.

    Returns the template id with its recovered parameters when the
    structure (degrees, delay, coefficient pattern) fits one of the six
    families within ``MATCH_RTOL`` relative tolerance, otherwise ``None``.

    A second-order denominator with real poles is reported as the two-pole
    family even when it could equally be written on the complex-pole form
    with damping >= 1: the two parameterizations describe the same system
    and the real-pole form is what the closed-form step response uses.
    """
    num, den, delay = tf.num, tf.den, tf.delay
    d0 = den.coeffs[0]
    if d0 == 0.0:
        return None
    n0 = num.coeffs[0]
    if delay > 0.0:
        if num.degree == 0 and den.degree == 1:
            if _close(n0 / d0, 3.0) and _close(den.coeffs[1] / d0, 1.0):
                return TemplateId.DELAYED_FIRST_ORDER, {"L": delay}
        return None
    if num.degree == 0 and den.degree == 1:
        t1 = den.coeffs[1] / d0
        if t1 > 0.0:
            return TemplateId.FIRST_ORDER, {"k_1": n0 / d0, "T_1": t1}
        return None
    if num.degree == 0 and den.degree == 2:
        c1 = den.coeffs[1] / d0
        c2 = den.coeffs[2] / d0
        if c2 <= 0.0:
            return None
        pair = _split_real_time_constants(c1, c2)
        if pair is not None:
            ta, tb = pair
            return TemplateId.TWO_REAL_POLES, {
                "k_2": n0 / d0,
                "T_2": ta,
                "T_3": tb,
            }
        w0 = math.sqrt(1.0 / c2)
        zeta = 0.5 * c1 * w0
        if zeta < 0.0:
            return None
        return TemplateId.COMPLEX_SECOND_ORDER, {
            "k_3": n0 / d0,
            "omega_0": w0,
            "zeta": zeta,
        }
    if num.degree == 1 and den.degree == 2:
        if n0 == 0.0:
            return None
        t8 = num.coeffs[1] / n0
        if t8 <= 0.0:
            return None
        pair = _split_real_time_constants(den.coeffs[1] / d0, den.coeffs[2] / d0)
        if pair is None:
            return None
        ta, tb = pair
        return TemplateId.ZERO_TWO_POLES, {
            "k_4": n0 / d0,
            "T_6": ta,
            "T_7": tb,
            "T_8": t8,
        }
    if num.degree == 0 and den.degree == 4:
        if not _close(n0 / d0, 1.0):
            return None
        t5 = den.coeffs[1] / d0 / 4.0
        if t5 <= 0.0:
            return None
        expected = (6.0 * t5 * t5, 4.0 * t5 ** 3, t5 ** 4)
        for k, want in zip((2, 3, 4), expected):
            if not _close(den.coeffs[k] / d0, want):
                return None
        return TemplateId.QUADRUPLE_POLE, {"T_5": t5}
    return None


def catalog_payload() -> list[dict]:
    """JSON-friendly template catalog for slider-driven UIs."""
    out = []
    for info in CATALOG.values():
        out.append(
            {
                "id": info.id.value,
                "title": info.title,
                "expression": info.expression,
                "params": [
                    {
                        "name": p.name,
                        "default": p.default,
                        "min": p.lo,
                        "max": p.hi,
                        "scale": "log" if p.log_scale else "linear",
                    }
                    for p in info.params
                ],
            }
        )
    return out
