"""Achievements, session points, and badge progress.

Achievements unlock from the event stream (a single occurrence or a counted
repetition of one event kind) and are idempotent: replaying a log always
yields the same unlocked set and point total.  Points accumulate in three
categories -- achievements, assignments, quiz -- and badges are awarded per
category at 30% (bronze), 60% (silver) and 100% (gold) of that category's
attainable points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

from .events import EVENT_KINDS, Event

ACHIEVEMENT_POINTS = 10
ASSIGNMENT_POINTS = 10
# Quiz points count toward the quiz badge up to this goal.
QUIZ_POINT_GOAL = 100

BADGE_CATEGORIES = ("achievements", "assignments", "quiz")


@dataclass(frozen=True)
class AchievementDef:
    id: str
    title: str
    event: str
    count: int = 1
    points: int = ACHIEVEMENT_POINTS

    def __post_init__(self):
        if self.event not in EVENT_KINDS:
            raise ValueError(f"achievement {self.id!r} watches unknown event")
        if self.count < 1 or self.points < 1:
            raise ValueError(f"achievement {self.id!r} must have positive count/points")


def _data_text(name: str) -> str:
    return resources.files("ltilab.data").joinpath(name).read_text(encoding="utf-8")


def load_achievement_catalog(path: Optional[Path] = None) -> tuple[AchievementDef, ...]:
    """Achievement catalog from a declarative JSON document."""
    raw = Path(path).read_text(encoding="utf-8") if path else _data_text("achievements.json")
    entries = json.loads(raw)
    defs = tuple(
        AchievementDef(
            id=e["id"],
            title=e["title"],
            event=e["event"],
            count=int(e.get("count", 1)),
            points=int(e.get("points", ACHIEVEMENT_POINTS)),
        )
        for e in entries
    )
    ids = [d.id for d in defs]
    if len(set(ids)) != len(ids):
        raise ValueError("achievement ids must be unique")
    return defs


@dataclass(frozen=True)
class ProgressState:
    """Per-session points, unlocked achievements, and event counters."""

    points: dict[str, int] = field(
        default_factory=lambda: {c: 0 for c in BADGE_CATEGORIES}
    )
    unlocked: tuple[str, ...] = ()
    event_counts: dict[str, int] = field(default_factory=dict)
    completed_assignments: tuple[str, ...] = ()

    @property
    def total_points(self) -> int:
        return sum(self.points.values())

    @property
    def level(self) -> int:
        return self.total_points // 100


def record_event(
    progress: ProgressState,
    catalog: tuple[AchievementDef, ...],
    event: Event,
) -> tuple[ProgressState, list[AchievementDef]]:
    """Apply one event; returns the new state and any newly unlocked
    achievements.  Already-unlocked achievements never re-award points."""
    counts = dict(progress.event_counts)
    counts[event.kind] = counts.get(event.kind, 0) + 1

    points = dict(progress.points)
    unlocked = list(progress.unlocked)
    completed = list(progress.completed_assignments)

    newly: list[AchievementDef] = []
    for ach in catalog:
        if ach.event == event.kind and ach.id not in unlocked:
            if counts[event.kind] >= ach.count:
                unlocked.append(ach.id)
                points["achievements"] += ach.points
                newly.append(ach)

    if event.kind == "quiz_answered" and event.payload.get("correct"):
        difficulty = int(event.payload.get("difficulty", 1))
        points["quiz"] += max(1, difficulty)

    if event.kind == "assignment_completed":
        assignment_id = event.payload.get("assignment_id")
        if assignment_id and assignment_id not in completed:
            completed.append(assignment_id)
            points["assignments"] += ASSIGNMENT_POINTS

    new_state = ProgressState(
        points=points,
        unlocked=tuple(unlocked),
        event_counts=counts,
        completed_assignments=tuple(completed),
    )
    return new_state, newly


def attainable_points(
    achievement_catalog: tuple[AchievementDef, ...],
    assignment_count: int,
) -> dict[str, int]:
    return {
        "achievements": sum(a.points for a in achievement_catalog),
        "assignments": ASSIGNMENT_POINTS * assignment_count,
        "quiz": QUIZ_POINT_GOAL,
    }


def badge_progress(
    progress: ProgressState, attainable: dict[str, int]
) -> dict[str, str]:
    """Badge per category; thresholds are inclusive and compared exactly
    (integer cross-multiplication, no float boundaries)."""
    badges = {}
    for cat in BADGE_CATEGORIES:
        earned = progress.points.get(cat, 0)
        total = attainable.get(cat, 0)
        if total <= 0:
            badges[cat] = "none"
            continue
        if earned >= total:
            badges[cat] = "gold"
        elif earned * 5 >= total * 3:  # >= 60%
            badges[cat] = "silver"
        elif earned * 10 >= total * 3:  # >= 30%
            badges[cat] = "bronze"
        else:
            badges[cat] = "none"
    return badges
