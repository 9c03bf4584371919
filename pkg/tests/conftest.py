"""Shared generators for property and acceptance tests."""

from __future__ import annotations

import numpy as np

from ltilab.gamification import ProgressState, QuizState, QUIZ_CATEGORIES
from ltilab.polynomial import sort_roots
from ltilab.session import Session, add_system, create_session
from ltilab.templates import TemplateId, TemplateInstance, CATALOG, instantiate


def random_stable_roots(rng: np.random.Generator, max_degree: int = 6) -> list[complex]:
    """Conjugate-closed left-half-plane root set, |Re| in [0.01, 100]."""
    degree = int(rng.integers(1, max_degree + 1))
    pairs = int(rng.integers(0, degree // 2 + 1))
    reals = degree - 2 * pairs
    roots: list[complex] = []
    for _ in range(reals):
        roots.append(complex(-(10.0 ** rng.uniform(-2.0, 2.0)), 0.0))
    for _ in range(pairs):
        re = -(10.0 ** rng.uniform(-2.0, 2.0))
        im = 10.0 ** rng.uniform(-2.0, 2.0)
        roots.append(complex(re, im))
        roots.append(complex(re, -im))
    return sort_roots(roots)


def random_template_instance(rng: np.random.Generator, tid: TemplateId) -> TemplateInstance:
    """Uniformly random parameters inside the slider ranges."""
    params = {}
    for spec in CATALOG[tid].params:
        if spec.log_scale:
            params[spec.name] = float(
                10.0 ** rng.uniform(np.log10(spec.lo), np.log10(spec.hi))
            )
        else:
            params[spec.name] = float(rng.uniform(spec.lo, spec.hi))
    return TemplateInstance(tid, params)


def random_session(rng: np.random.Generator) -> Session:
    """Randomized but valid session for serialization round trips."""
    session = create_session()
    for _ in range(int(rng.integers(0, 4))):
        choice = rng.integers(0, 3)
        if choice == 0:
            add_system(session, "G5")
        elif choice == 1:
            add_system(session, "G6")
        else:
            k = float(np.round(rng.uniform(0.5, 3.0), 3))
            add_system(session, f"{k}/(1+s+s^2+0.2*s^3)")
    levels = {
        cat: (int(rng.integers(1, 6)), int(rng.integers(0, 6)))
        for cat in QUIZ_CATEGORIES
    }
    session.quiz = QuizState(levels)
    session.progress = ProgressState(
        points={
            "achievements": int(rng.integers(0, 100)),
            "assignments": int(rng.integers(0, 50)),
            "quiz": int(rng.integers(0, 120)),
        },
        unlocked=tuple(
            sorted(
                rng.choice(
                    ["bode-explorer", "system-builder", "code-courier", "quiz-starter"],
                    size=int(rng.integers(0, 4)),
                    replace=False,
                )
            )
        ),
        event_counts={"bode_hovered": int(rng.integers(0, 9))},
        completed_assignments=tuple(
            ["g1-pole-at-minus-half"] if rng.random() < 0.5 else []
        ),
    )
    session.input_kind = "impulse" if rng.random() < 0.3 else "step"
    ids = list(session.systems)
    session.selected_id = ids[int(rng.integers(0, len(ids)))]
    return session
