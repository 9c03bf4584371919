"""Guided assignments: data-driven checks over a system snapshot.

Each assignment belongs to one template family and states a predicate as
data (quantity, comparator, target, tolerance), so new assignments only
need a catalog entry.  Supported quantities:

``param:<name>``      a template parameter value
``ratio:<a>/<b>``     ratio of two template parameters
``pole_re``           real part of the dominant (right-most) pole
``pole_count``        number of poles
``static_gain``       zero-frequency gain
``delay``             dead time in seconds

Comparators: ``approx_abs``, ``approx_rel``, ``above``, ``below``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from ..templates import TemplateId, TemplateInstance
from ..transfer import TransferFunction
from .achievements import _data_text

COMPARATORS = ("approx_abs", "approx_rel", "above", "below")


@dataclass(frozen=True)
class AssignmentDef:
    id: str
    group: TemplateId
    prose: str
    quantity: str
    comparator: str
    target: float
    tolerance: float
    explanation: str

    def __post_init__(self):
        if self.comparator not in COMPARATORS:
            raise ValueError(f"assignment {self.id!r}: unknown comparator")
        if not self.tolerance > 0:
            raise ValueError(f"assignment {self.id!r}: tolerance must be positive")


def load_assignment_catalog(path: Optional[Path] = None) -> tuple[AssignmentDef, ...]:
    raw = Path(path).read_text(encoding="utf-8") if path else _data_text("assignments.json")
    entries = json.loads(raw)
    defs = tuple(
        AssignmentDef(
            id=e["id"],
            group=TemplateId(e["group"]),
            prose=e["prose"],
            quantity=e["quantity"],
            comparator=e["comparator"],
            target=float(e["target"]),
            tolerance=float(e["tolerance"]),
            explanation=e["explanation"],
        )
        for e in entries
    )
    ids = [d.id for d in defs]
    if len(set(ids)) != len(ids):
        raise ValueError("assignment ids must be unique")
    return defs


def _extract_quantity(
    quantity: str, tf: TransferFunction, instance: TemplateInstance
) -> float:
    if quantity.startswith("param:"):
        return instance.params[quantity[len("param:"):]]
    if quantity.startswith("ratio:"):
        a, b = quantity[len("ratio:"):].split("/")
        return instance.params[a] / instance.params[b]
    if quantity == "pole_re":
        return max(p.real for p in tf.poles())
    if quantity == "pole_count":
        return float(len(tf.poles()))
    if quantity == "static_gain":
        return tf.static_gain()
    if quantity == "delay":
        return tf.delay
    raise ValueError(f"unknown assignment quantity {quantity!r}")


def check_assignment(
    assignment: AssignmentDef,
    tf: TransferFunction,
    instance: TemplateInstance,
) -> tuple[bool, Optional[str]]:
    """Evaluate one assignment's predicate against a system snapshot.

    The snapshot's system must belong to the assignment's template group;
    the explanation text is returned only on a pass.
    """
    if instance.id is not assignment.group:
        raise ValueError(
            f"assignment {assignment.id!r} targets {assignment.group.value}, "
            f"but the system is {instance.id.value}"
        )
    value = _extract_quantity(assignment.quantity, tf, instance)
    target, tol = assignment.target, assignment.tolerance
    if assignment.comparator == "approx_abs":
        passed = abs(value - target) <= tol
    elif assignment.comparator == "approx_rel":
        passed = abs(value - target) <= tol * abs(target)
    elif assignment.comparator == "above":
        passed = value > target
    else:
        passed = value < target
    return passed, (assignment.explanation if passed else None)
