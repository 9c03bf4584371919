"""Interaction events emitted by the UI and CLI and consumed by the
achievement engine."""

from __future__ import annotations

from dataclasses import dataclass, field

EVENT_KINDS = frozenset(
    {
        "pole_dragged",
        "zero_dragged",
        "bode_hovered",
        "nyquist_hovered",
        "step_hovered",
        "system_added",
        "system_removed",
        "code_exported",
        "expression_edited",
        "assignment_completed",
        "quiz_answered",
        "fullscreen_toggled",
        "input_kind_changed",
    }
)


@dataclass(frozen=True)
class Event:
    kind: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
