"""Adaptive quiz engine.

Five question categories share one state machine: every category keeps its
own difficulty (1..5) and streak of consecutive correct answers.  A correct
answer extends the streak and promotes the difficulty every second
consecutive hit; a wrong answer drops the difficulty one level and resets
the streak.  Categories never influence each other, so a student can be at
level 5 frequency-reading while still warming up on Nyquist angles.

Tolerances tighten linearly with difficulty:

* click_frequency: (0.40 - 0.06 d) decades around the target frequency
* click_time: (0.10 - 0.015 d) of the plot's time span
* click_nyquist_angle: (28 - 4 d) degrees
* click_complexity / odd_one_out: exact choice

Question generation is deterministic for a fixed (state, seed) pair, and
wrong answers are graded with feedback that names what the student actually
clicked and how far off it was.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Optional

from ..polynomial import Polynomial, multiply
from ..templates import TemplateId, TemplateInstance, instantiate
from ..transfer import TransferFunction

QUIZ_CATEGORIES = (
    "click_frequency",
    "click_time",
    "click_nyquist_angle",
    "click_complexity",
    "odd_one_out",
)

MIN_DIFFICULTY = 1
MAX_DIFFICULTY = 5


@dataclass(frozen=True)
class QuizState:
    """(difficulty, streak) per category."""

    levels: dict[str, tuple[int, int]] = field(
        default_factory=lambda: {c: (MIN_DIFFICULTY, 0) for c in QUIZ_CATEGORIES}
    )

    def difficulty(self, category: str) -> int:
        return self.levels[category][0]

    def streak(self, category: str) -> int:
        return self.levels[category][1]


def update_difficulty(state: QuizState, category: str, correct: bool) -> QuizState:
    """Streak-driven adaptation; other categories are untouched."""
    if category not in state.levels:
        raise ValueError(f"unknown quiz category {category!r}")
    d, s = state.levels[category]
    if correct:
        s += 1
        if s % 2 == 0:
            d = min(MAX_DIFFICULTY, d + 1)
    else:
        d = max(MIN_DIFFICULTY, d - 1)
        s = 0
    levels = dict(state.levels)
    levels[category] = (d, s)
    return QuizState(levels)


def category_tolerance(category: str, difficulty: int, span: float = 10.0) -> float:
    if category == "click_frequency":
        return 0.40 - 0.06 * difficulty
    if category == "click_time":
        return (0.10 - 0.015 * difficulty) * span
    if category == "click_nyquist_angle":
        return 28.0 - 4.0 * difficulty
    if category in ("click_complexity", "odd_one_out"):
        return 0.0
    raise ValueError(f"unknown quiz category {category!r}")


@dataclass(frozen=True)
class QuizQuestion:
    category: str
    difficulty: int
    prompt: str
    target: dict
    tolerance: float
    systems: tuple[TransferFunction, ...]


@dataclass(frozen=True)
class GradeResult:
    correct: bool
    feedback: str


# ---------------------------------------------------------------------------
# Random system builders

def _rand_first_order(rng: random.Random, gain: Optional[float] = None) -> TransferFunction:
    k = gain if gain is not None else round(rng.uniform(0.5, 3.0), 2)
    T = round(10.0 ** rng.uniform(-1.0, 0.7), 3)
    return instantiate(TemplateInstance(TemplateId.FIRST_ORDER, {"k_1": k, "T_1": T}))


def _rand_two_poles(rng: random.Random) -> TransferFunction:
    t2 = round(10.0 ** rng.uniform(-1.0, 0.7), 3)
    t3 = round(10.0 ** rng.uniform(-1.0, 0.7), 3)
    k = round(rng.uniform(0.5, 3.0), 2)
    return instantiate(
        TemplateInstance(TemplateId.TWO_REAL_POLES, {"k_2": k, "T_2": t2, "T_3": t3})
    )


def _chain_of_poles(rng: random.Random, count: int, spread: float) -> TransferFunction:
    """count cascaded first-order lags; spread shrinks as difficulty rises."""
    den = Polynomial((1.0,))
    base = 10.0 ** rng.uniform(-0.5, 0.3)
    for _ in range(count):
        T = round(base * 10.0 ** rng.uniform(-spread, spread), 4)
        den = multiply(den, Polynomial((1.0, T)))
    return TransferFunction(Polynomial((1.0,)), den)


def _pole_count(tf: TransferFunction) -> int:
    return tf.den.degree


def _is_oscillatory(tf: TransferFunction) -> bool:
    return any(abs(p.imag) > 1e-9 for p in tf.poles())


def _has_zero(tf: TransferFunction) -> bool:
    return tf.num.degree >= 1


def _has_delay(tf: TransferFunction) -> bool:
    return tf.delay > 0.0


# ---------------------------------------------------------------------------
# Question generation

def next_question(
    state: QuizState, category: Optional[str] = None, seed: int = 0
) -> QuizQuestion:
    """Generate a question at the category's current difficulty.

    Deterministic for a fixed (state, seed); pass a fresh seed per question.
    """
    rng = random.Random(seed)
    if category is None:
        category = rng.choice(QUIZ_CATEGORIES)
    if category not in state.levels:
        raise ValueError(f"unknown quiz category {category!r}")
    d = state.difficulty(category)

    if category == "click_frequency":
        omega = 10.0 ** rng.uniform(-2.0, 3.0)
        return QuizQuestion(
            category,
            d,
            f"Click on the Bode plot at the frequency {omega:.3g} rad/s.",
            {"omega": omega},
            category_tolerance(category, d),
            (_rand_first_order(rng),),
        )
    if category == "click_time":
        span = 10.0
        t = rng.uniform(0.05 * span, 0.95 * span)
        return QuizQuestion(
            category,
            d,
            f"Click on the step response at time t = {t:.3g} s.",
            {"time": t, "span": span},
            category_tolerance(category, d, span),
            (_rand_first_order(rng),),
        )
    if category == "click_nyquist_angle":
        angle = rng.uniform(-175.0, -5.0)
        return QuizQuestion(
            category,
            d,
            f"Click on the Nyquist curve where the phase is {angle:.3g} degrees.",
            {"angle_deg": angle},
            category_tolerance(category, d),
            (_rand_two_poles(rng),),
        )
    if category == "click_complexity":
        counts = [1, 2, 3, 4]
        rng.shuffle(counts)
        # tighter spread makes the curves harder to tell apart
        spread = max(0.05, 0.6 - 0.1 * d)
        systems = tuple(_chain_of_poles(rng, c, spread) for c in counts)
        target_count = counts[rng.randrange(4)]
        return QuizQuestion(
            category,
            d,
            f"Click the system that has exactly {target_count} pole(s).",
            {"pole_count": target_count},
            0.0,
            systems,
        )
    if category == "odd_one_out":
        return _odd_one_out(rng, d)
    raise ValueError(f"unknown quiz category {category!r}")


_ODD_PROPERTIES = {
    1: "pole_count",
    2: "static_gain",
    3: "oscillatory",
    4: "has_zero",
    5: "has_delay",
}

_PROPERTY_LABEL = {
    "pole_count": "the number of poles",
    "static_gain": "the static gain",
    "oscillatory": "whether the poles are complex",
    "has_zero": "whether the system has a zero",
    "has_delay": "whether the system has a time delay",
}


def _odd_one_out(rng: random.Random, difficulty: int) -> QuizQuestion:
    prop = _ODD_PROPERTIES[difficulty]
    if prop == "pole_count":
        majority = [_rand_first_order(rng) for _ in range(3)]
        odd = _rand_two_poles(rng)
        predicate = lambda tf: _pole_count(tf) == 1
    elif prop == "static_gain":
        shared = round(rng.uniform(0.5, 2.5), 1)
        majority = [_rand_first_order(rng, gain=shared) for _ in range(3)]
        odd = _rand_first_order(rng, gain=shared + rng.choice([-1.5, 1.5]))
        predicate = lambda tf: abs(tf.static_gain() - shared) < 1e-6
    elif prop == "oscillatory":
        majority = [_rand_two_poles(rng) for _ in range(3)]
        odd = instantiate(
            TemplateInstance(
                TemplateId.COMPLEX_SECOND_ORDER,
                {
                    "k_3": round(rng.uniform(0.5, 2.0), 2),
                    "omega_0": round(10.0 ** rng.uniform(-0.3, 1.0), 3),
                    "zeta": round(rng.uniform(0.1, 0.6), 2),
                },
            )
        )
        predicate = lambda tf: not _is_oscillatory(tf)
    elif prop == "has_zero":
        majority = [_rand_two_poles(rng) for _ in range(3)]
        odd = instantiate(
            TemplateInstance(
                TemplateId.ZERO_TWO_POLES,
                {
                    "k_4": round(rng.uniform(0.5, 2.0), 2),
                    "T_6": round(10.0 ** rng.uniform(-0.8, 0.5), 3),
                    "T_7": round(10.0 ** rng.uniform(-0.8, 0.5), 3),
                    "T_8": round(10.0 ** rng.uniform(-0.8, 0.5), 3),
                },
            )
        )
        predicate = lambda tf: not _has_zero(tf)
    else:  # has_delay
        majority = [_rand_first_order(rng, gain=3.0) for _ in range(3)]
        odd = instantiate(
            TemplateInstance(
                TemplateId.DELAYED_FIRST_ORDER,
                {"L": round(rng.uniform(0.3, 2.0), 2)},
            )
        )
        predicate = lambda tf: not _has_delay(tf)

    systems = majority + [odd]
    order = list(range(4))
    rng.shuffle(order)
    shuffled = tuple(systems[i] for i in order)
    odd_index = order.index(3)
    # generation sanity: exactly one system must violate the shared property
    violators = [i for i, tf in enumerate(shuffled) if not predicate(tf)]
    if violators != [odd_index]:
        raise AssertionError("odd-one-out generation produced an ambiguous set")
    return QuizQuestion(
        "odd_one_out",
        difficulty,
        "Click the system that does not belong with the other three.",
        {"odd_index": odd_index, "property": prop},
        0.0,
        shuffled,
    )


# ---------------------------------------------------------------------------
# Grading

def grade(question: QuizQuestion, answer: dict) -> GradeResult:
    """Check an answer and build feedback naming what was actually clicked."""
    if not isinstance(answer, dict):
        raise ValueError("answer must be a mapping")
    cat = question.category
    if cat == "click_frequency":
        clicked = _answer_float(answer, "omega")
        if clicked <= 0.0:
            raise ValueError("clicked frequency must be positive")
        target = question.target["omega"]
        offset = math.log10(clicked / target)
        if abs(offset) <= question.tolerance:
            return GradeResult(
                True, f"Correct: {clicked:.3g} rad/s is within "
                f"{question.tolerance:.2f} decades of the target."
            )
        direction = "above" if offset > 0 else "below"
        return GradeResult(
            False,
            f"You clicked {clicked:.3g} rad/s, which is {abs(offset):.1f} "
            f"decades {direction} the target of {target:.3g} rad/s.",
        )
    if cat == "click_time":
        clicked = _answer_float(answer, "time")
        target = question.target["time"]
        offset = clicked - target
        if abs(offset) <= question.tolerance:
            return GradeResult(True, f"Correct: t = {clicked:.3g} s hits the target.")
        direction = "after" if offset > 0 else "before"
        return GradeResult(
            False,
            f"You clicked t = {clicked:.3g} s, {abs(offset):.2f} s {direction} "
            f"the target of {target:.3g} s.",
        )
    if cat == "click_nyquist_angle":
        clicked = _answer_float(answer, "angle_deg")
        target = question.target["angle_deg"]
        diff = (clicked - target + 180.0) % 360.0 - 180.0
        if abs(diff) <= question.tolerance:
            return GradeResult(True, f"Correct: {clicked:.3g} degrees is on target.")
        return GradeResult(
            False,
            f"You clicked at {clicked:.3g} degrees, {abs(diff):.1f} degrees away "
            f"from the target of {target:.3g} degrees.",
        )
    if cat == "click_complexity":
        idx = _answer_index(answer, len(question.systems))
        picked = question.systems[idx]
        want = question.target["pole_count"]
        have = _pole_count(picked)
        if have == want:
            return GradeResult(True, f"Correct: that system has {want} pole(s).")
        return GradeResult(
            False,
            f"The system you picked has {have} pole(s); the question asked "
            f"for one with {want}.",
        )
    if cat == "odd_one_out":
        idx = _answer_index(answer, len(question.systems))
        if idx == question.target["odd_index"]:
            return GradeResult(True, "Correct: that one differs from the rest.")
        label = _PROPERTY_LABEL[question.target["property"]]
        return GradeResult(
            False,
            f"The system you picked matches the other two in {label}; "
            f"look for the one that differs in {label}.",
        )
    raise ValueError(f"unknown quiz category {cat!r}")


def _answer_float(answer: dict, key: str) -> float:
    if key not in answer:
        raise ValueError(f"answer is missing {key!r}")
    try:
        return float(answer[key])
    except (TypeError, ValueError):
        raise ValueError(f"answer field {key!r} must be a number") from None


def _answer_index(answer: dict, count: int) -> int:
    if "system" not in answer:
        raise ValueError("answer is missing 'system'")
    try:
        idx = int(answer["system"])
    except (TypeError, ValueError):
        raise ValueError("answer field 'system' must be an index") from None
    if not (0 <= idx < count):
        raise ValueError(f"system index {idx} out of range")
    return idx
