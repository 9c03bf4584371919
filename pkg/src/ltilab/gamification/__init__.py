"""Gamified learning layer: achievements, assignments, adaptive quiz,
layered plot explanations."""

from .events import EVENT_KINDS, Event
from .achievements import (
    ACHIEVEMENT_POINTS,
    ASSIGNMENT_POINTS,
    QUIZ_POINT_GOAL,
    AchievementDef,
    ProgressState,
    attainable_points,
    badge_progress,
    load_achievement_catalog,
    record_event,
)
from .assignments import (
    AssignmentDef,
    check_assignment,
    load_assignment_catalog,
)
from .quiz import (
    QUIZ_CATEGORIES,
    GradeResult,
    QuizQuestion,
    QuizState,
    category_tolerance,
    grade,
    next_question,
    update_difficulty,
)
from .questions import question_bank, question_topics

__all__ = [
    "EVENT_KINDS",
    "Event",
    "ACHIEVEMENT_POINTS",
    "ASSIGNMENT_POINTS",
    "QUIZ_POINT_GOAL",
    "AchievementDef",
    "ProgressState",
    "attainable_points",
    "badge_progress",
    "load_achievement_catalog",
    "record_event",
    "AssignmentDef",
    "check_assignment",
    "load_assignment_catalog",
    "QUIZ_CATEGORIES",
    "GradeResult",
    "QuizQuestion",
    "QuizState",
    "category_tolerance",
    "grade",
    "next_question",
    "update_difficulty",
    "question_bank",
    "question_topics",
]
