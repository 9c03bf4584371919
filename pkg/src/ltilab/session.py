"""Sessions: the server-side state behind one explorer view.

A session holds an ordered set of systems (template instances or free
expressions), the adaptive quiz state, achievement/assignment progress, the
selected system for the margins readout, and the current input kind.  All
views (Bode, Nyquist, step, pole-zero map, margins) derive from the stored
transfer functions on demand, so any parameter change is reflected in every
view by construction.

Sessions serialize to versioned JSON documents that round-trip losslessly;
the canonical dump (sorted keys, no whitespace) is byte-stable.
"""

from __future__ import annotations

import json
import math
import uuid
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import frequency, timeresp
from .gamification import (
    Event,
    ProgressState,
    QuizQuestion,
    QuizState,
    attainable_points,
    badge_progress,
    load_achievement_catalog,
    load_assignment_catalog,
    record_event,
)
from .parsing import (
    ExpressionError,
    free_symbols,
    normalize,
    parse,
    parse_expression,
    tokenize,
)
from .polynomial import Polynomial, from_roots
from .templates import (
    CATALOG,
    TemplateId,
    TemplateInstance,
    default_instance,
    instantiate,
    match_template,
)
from .transfer import TransferFunction

SCHEMA_VERSION = 1
MAX_SYSTEMS = 16
PALETTE_SIZE = 10

# Catalogs are declarative documents; these are the packaged defaults.
ACHIEVEMENTS = load_achievement_catalog()
ASSIGNMENTS = load_assignment_catalog()
ATTAINABLE = attainable_points(ACHIEVEMENTS, len(ASSIGNMENTS))

_REAL_AXIS_TOL = 1e-9


@dataclass
class SystemEntry:
    system_id: str
    tf: TransferFunction
    template: Optional[TemplateInstance] = None
    source: Optional[str] = None
    env: dict[str, float] = field(default_factory=dict)
    color_index: int = 0


@dataclass
class Session:
    session_id: str
    systems: dict[str, SystemEntry] = field(default_factory=dict)
    next_system_number: int = 1
    quiz: QuizState = field(default_factory=QuizState)
    progress: ProgressState = field(default_factory=ProgressState)
    selected_id: Optional[str] = None
    input_kind: str = "step"
    pending_question: Optional[QuizQuestion] = None


def create_session(session_id: Optional[str] = None) -> Session:
    """New session pre-populated with the four default systems, step input,
    and the first system selected."""
    session = Session(session_id=session_id or uuid.uuid4().hex)
    for tid in (
        TemplateId.FIRST_ORDER,
        TemplateId.TWO_REAL_POLES,
        TemplateId.COMPLEX_SECOND_ORDER,
        TemplateId.DELAYED_FIRST_ORDER,
    ):
        _append_system(session, instantiate(default_instance(tid)), default_instance(tid))
    session.selected_id = next(iter(session.systems))
    return session


def _append_system(
    session: Session,
    tf: TransferFunction,
    template: Optional[TemplateInstance],
    source: Optional[str] = None,
    env: Optional[dict[str, float]] = None,
) -> str:
    if len(session.systems) >= MAX_SYSTEMS:
        raise ValueError(f"session already holds {MAX_SYSTEMS} systems")
    system_id = f"sys-{session.next_system_number}"
    session.next_system_number += 1
    session.systems[system_id] = SystemEntry(
        system_id=system_id,
        tf=tf,
        template=template,
        source=source,
        env=dict(env or {}),
        color_index=(session.next_system_number - 2) % PALETTE_SIZE,
    )
    if session.selected_id is None:
        session.selected_id = system_id
    return system_id


def apply_event(session: Session, event: Event) -> list:
    """Feed one interaction event through the achievement engine."""
    session.progress, newly = record_event(session.progress, ACHIEVEMENTS, event)
    return newly


def add_system(session: Session, source: str, env: Optional[dict[str, float]] = None):
    """Add a system from a template id (e.g. "G5") or an expression.

    Symbol-free expressions that structurally match a template family are
    stored with the recovered template instance so they get sliders; an
    expression with its own named parameters keeps those as the adjustable
    handles instead.  Returns ``(session, system_id, newly_unlocked)``.
    """
    env = dict(env or {})
    try:
        tid = TemplateId(source)
    except ValueError:
        tid = None
    if tid is not None:
        inst = default_instance(tid)
        system_id = _append_system(session, instantiate(inst), inst)
        newly = apply_event(session, Event("system_added", {"system_id": system_id}))
        return session, system_id, newly
    ast = parse(tokenize(source))
    tf = normalize(ast, env)
    template = None
    if not free_symbols(ast):
        matched = match_template(tf)
        if matched is not None:
            template = TemplateInstance(matched[0], matched[1])
    system_id = _append_system(session, tf, template, source=source, env=env)
    newly = apply_event(
        session, Event("expression_edited", {"system_id": system_id})
    )
    return session, system_id, newly


def remove_system(session: Session, system_id: str) -> list:
    _get_entry(session, system_id)
    del session.systems[system_id]
    if session.selected_id == system_id:
        session.selected_id = next(iter(session.systems), None)
    return apply_event(session, Event("system_removed", {"system_id": system_id}))


def select_system(session: Session, system_id: str) -> None:
    _get_entry(session, system_id)
    session.selected_id = system_id


def set_input_kind(session: Session, kind: str) -> list:
    if kind not in ("step", "impulse"):
        raise ValueError(f"unknown input kind {kind!r}")
    changed = kind != session.input_kind
    session.input_kind = kind
    if changed:
        return apply_event(session, Event("input_kind_changed", {"kind": kind}))
    return []


def _get_entry(session: Session, system_id: str) -> SystemEntry:
    if system_id not in session.systems:
        raise KeyError(f"unknown system {system_id!r}")
    return session.systems[system_id]


def _check_range(tid: TemplateId, name: str, value: float) -> None:
    spec = CATALOG[tid].param(name)
    if not (spec.lo <= value <= spec.hi):
        raise ValueError(
            f"{name} = {value:.6g} is outside the allowed range "
            f"[{spec.lo:g}, {spec.hi:g}]"
        )


def update_parameter(
    session: Session, system_id: str, symbol: str, value: float
) -> Session:
    """Re-instantiate one system with a changed parameter.

    Template parameters are validated against their slider range; free
    expression symbols only need to keep the expression normalizable.
    """
    entry = _get_entry(session, system_id)
    value = float(value)
    if not math.isfinite(value):
        raise ValueError("parameter value must be finite")
    if entry.template is not None:
        if symbol not in entry.template.params:
            raise ValueError(
                f"unknown parameter {symbol!r} for system {system_id}"
            )
        _check_range(entry.template.id, symbol, value)
        entry.template = entry.template.with_param(symbol, value)
        entry.tf = instantiate(entry.template)
        if entry.source is not None and symbol in entry.env:
            entry.env[symbol] = value
        return session
    if entry.source is not None:
        symbols = free_symbols(parse(tokenize(entry.source)))
        if symbol not in symbols:
            raise ValueError(
                f"unknown parameter {symbol!r} for system {system_id}"
            )
        env = dict(entry.env)
        env[symbol] = value
        entry.tf = parse_expression(entry.source, env)
        entry.env = env
        return session
    raise ValueError(f"system {system_id} has no adjustable parameters")


def move_pole(
    session: Session, system_id: str, index: int, new_location: complex
) -> Session:
    """Drag one pole to a new location.

    Template systems back-solve their parameters (first-order poles stay
    real, complex pairs move jointly); free systems rebuild the denominator
    from the edited root set, preserving its constant coefficient (or the
    leading one when a root sits at the origin).
    """
    entry = _get_entry(session, system_id)
    poles = entry.tf.poles()
    if not (0 <= index < len(poles)):
        raise ValueError(f"pole index {index} out of range")
    new = complex(new_location)
    if not (math.isfinite(new.real) and math.isfinite(new.imag)):
        raise ValueError("pole location must be finite")
    if entry.template is not None:
        _move_template_pole(entry, index, poles, new)
        return session
    _move_free_pole(entry, index, poles, new)
    return session


def _require_real(new: complex, what: str) -> float:
    if abs(new.imag) > _REAL_AXIS_TOL * (1.0 + abs(new)):
        raise ValueError(f"{what} must stay on the real axis")
    return new.real


def _time_constant_from_pole(new: complex, what: str) -> float:
    re = _require_real(new, what)
    if re >= 0.0:
        raise ValueError(f"{what} must stay in the left half-plane")
    return -1.0 / re


def _move_template_pole(
    entry: SystemEntry, index: int, poles: list[complex], new: complex
) -> None:
    inst = entry.template
    tid = inst.id
    if tid is TemplateId.FIRST_ORDER:
        t_new = _time_constant_from_pole(new, "a first-order pole")
        _check_range(tid, "T_1", t_new)
        entry.template = inst.with_param("T_1", t_new)
    elif tid is TemplateId.DELAYED_FIRST_ORDER:
        raise ValueError(
            "the delayed system's pole is fixed; drag the step response "
            "to change the delay instead"
        )
    elif tid in (TemplateId.TWO_REAL_POLES, TemplateId.ZERO_TWO_POLES):
        names = ("T_2", "T_3") if tid is TemplateId.TWO_REAL_POLES else ("T_6", "T_7")
        t_new = _time_constant_from_pole(new, "a real pole")
        moved = poles[index]
        # pick the parameter whose current pole is nearest the dragged one
        dists = [abs(moved + 1.0 / inst.params[name]) for name in names]
        name = names[0] if dists[0] <= dists[1] else names[1]
        _check_range(tid, name, t_new)
        entry.template = inst.with_param(name, t_new)
    elif tid is TemplateId.COMPLEX_SECOND_ORDER:
        magnitude = abs(new)
        if magnitude == 0.0:
            raise ValueError("pole cannot sit at the origin")
        if new.real > 0.0:
            raise ValueError("damping would be negative; keep the pole in the left half-plane")
        omega_0 = magnitude
        zeta = -new.real / magnitude
        _check_range(tid, "omega_0", omega_0)
        _check_range(tid, "zeta", zeta)
        entry.template = inst.with_param("omega_0", omega_0).with_param("zeta", zeta)
    elif tid is TemplateId.QUADRUPLE_POLE:
        t_new = _time_constant_from_pole(new, "the repeated pole")
        _check_range(tid, "T_5", t_new)
        entry.template = inst.with_param("T_5", t_new)
    else:
        raise ValueError(f"poles of template {tid.value} cannot be moved")
    entry.tf = instantiate(entry.template)


def _move_free_pole(
    entry: SystemEntry, index: int, poles: list[complex], new: complex
) -> None:
    old = poles[index]
    rts = list(poles)
    if abs(old.imag) <= _REAL_AXIS_TOL * (1.0 + abs(old)):
        rts[index] = complex(_require_real(new, "this real pole"), 0.0)
    else:
        partner = None
        for j, candidate in enumerate(rts):
            if j != index and abs(candidate - old.conjugate()) <= _REAL_AXIS_TOL * (
                1.0 + abs(old)
            ):
                partner = j
                break
        if partner is None:
            raise ValueError("complex pole has no conjugate partner to mirror")
        if abs(new.imag) <= _REAL_AXIS_TOL * (1.0 + abs(new)):
            new = complex(new.real, 0.0)
        rts[index] = new
        rts[partner] = new.conjugate()
    old_den = entry.tf.den
    monic = from_roots(rts, 1.0)
    if abs(old_den.coeffs[0]) > 0.0 and abs(monic.coeffs[0]) > 0.0:
        gain = old_den.coeffs[0] / monic.coeffs[0]
    else:
        gain = old_den.coeffs[-1]
    entry.tf = TransferFunction(entry.tf.num, from_roots(rts, gain), entry.tf.delay)
    # the original expression no longer describes the system
    entry.source = None
    entry.env = {}


# ---------------------------------------------------------------------------
# Views

VIEWS = ("bode", "nyquist", "step", "pzmap", "margins")


def get_views(
    session: Session,
    system_id: str,
    view: str,
    wmin: float = frequency.WMIN_DEFAULT,
    wmax: float = frequency.WMAX_DEFAULT,
    points: int = frequency.POINTS_DEFAULT,
    tmax: Optional[float] = None,
    time_points: int = timeresp.TIME_POINTS_DEFAULT,
) -> dict:
    """Computed view payload for one system (arrays are JSON-ready lists)."""
    entry = _get_entry(session, system_id)
    tf = entry.tf
    if view in ("bode", "nyquist"):
        grid = frequency.densify_for_delay(
            frequency.log_grid(wmin, wmax, points), tf.delay
        )
        fr = frequency.freq_response(tf, grid)
        keep = ~fr.singular & np.isfinite(fr.mag_db) & np.isfinite(fr.phase_deg)
        if view == "bode":
            return {
                "omega": fr.omegas[keep].tolist(),
                "re": fr.values[keep].real.tolist(),
                "im": fr.values[keep].imag.tolist(),
                "mag_db": fr.mag_db[keep].tolist(),
                "phase_deg": fr.phase_deg[keep].tolist(),
            }
        curve = frequency.nyquist_curve(fr)
        finite = np.isfinite(curve).all(axis=1)
        return {
            "omega": fr.omegas[~fr.singular][finite].tolist(),
            "re": curve[finite, 0].tolist(),
            "im": curve[finite, 1].tolist(),
        }
    if view == "step":
        if tmax is not None:
            grid = timeresp.linear_grid(tmax, time_points)
        else:
            grid = timeresp.default_time_grid(tf, time_points)
        resp = timeresp.respond(tf, session.input_kind, grid)
        values = [v if math.isfinite(v) else None for v in resp.values.tolist()]
        return {
            "t": resp.times.tolist(),
            "y": values,
            "method": resp.method,
            "input_kind": resp.input_kind,
        }
    if view == "pzmap":
        return {
            "poles": [{"re": p.real, "im": p.imag} for p in tf.poles()],
            "zeros": [{"re": z.real, "im": z.imag} for z in tf.zeros()],
        }
    if view == "margins":
        m = frequency.margins(tf)
        return {
            "gain_margin": m.gain_margin if math.isfinite(m.gain_margin) else None,
            "gm_db": m.gm_db if math.isfinite(m.gm_db) else None,
            "omega_pc": m.omega_pc,
            "phase_margin_deg": m.phase_margin_deg,
            "omega_gc": m.omega_gc,
        }
    raise ValueError(f"unknown view {view!r}")


def hover_link(session: Session, plot: str, coordinate: dict) -> dict:
    """Cross-plot annotations for a hover coordinate.

    Bode magnitude hovers become circles in the Nyquist plane, phase hovers
    become rays, Nyquist hovers become paired magnitude/phase lines, and
    step hovers snap to the nearest response curve when within 2% of the
    plot height.
    """
    if plot == "bode_mag":
        mag_db = float(coordinate["mag_db"])
        return {"nyquist_circle": {"radius": 10.0 ** (mag_db / 20.0)}}
    if plot == "bode_phase":
        phase_deg = float(coordinate["phase_deg"])
        return {"nyquist_ray": {"angle_deg": phase_deg}}
    if plot == "nyquist":
        re = float(coordinate["re"])
        im = float(coordinate["im"])
        radius = math.hypot(re, im)
        if radius == 0.0:
            raise ValueError("hover coordinate has no direction at the origin")
        return {
            "bode_mag_line": {"mag_db": 20.0 * math.log10(radius)},
            "bode_phase_line": {"phase_deg": math.degrees(math.atan2(im, re))},
        }
    if plot == "step":
        return _snap_step(session, float(coordinate["t"]), float(coordinate["y"]))
    raise ValueError(f"unknown plot {plot!r}")


def _snap_step(session: Session, t: float, y: float) -> dict:
    lows, highs, candidates = [], [], []
    for entry in session.systems.values():
        resp = timeresp.respond(entry.tf, session.input_kind)
        finite = np.isfinite(resp.values)
        if not finite.any():
            continue
        lows.append(float(np.min(resp.values[finite])))
        highs.append(float(np.max(resp.values[finite])))
        k = int(np.argmin(np.abs(resp.times - t)))
        if math.isfinite(resp.values[k]):
            candidates.append((entry.system_id, float(resp.times[k]), float(resp.values[k])))
    if not candidates:
        return {"snapped": False, "t": t, "y": y}
    height = max(highs) - min(lows)
    if height <= 0.0:
        height = 1.0
    best = min(candidates, key=lambda c: abs(c[2] - y))
    if abs(best[2] - y) <= 0.02 * height:
        return {"snapped": True, "system_id": best[0], "t": best[1], "y": best[2]}
    return {"snapped": False, "t": t, "y": y}


def session_badges(session: Session) -> dict[str, str]:
    return badge_progress(session.progress, ATTAINABLE)


# ---------------------------------------------------------------------------
# Serialization

def _tf_to_doc(tf: TransferFunction) -> dict:
    return {"num": list(tf.num.coeffs), "den": list(tf.den.coeffs), "delay": tf.delay}


def _tf_from_doc(doc: dict) -> TransferFunction:
    return TransferFunction(
        Polynomial(doc["num"]), Polynomial(doc["den"]), float(doc["delay"])
    )


def _question_to_doc(q: Optional[QuizQuestion]) -> Optional[dict]:
    if q is None:
        return None
    return {
        "category": q.category,
        "difficulty": q.difficulty,
        "prompt": q.prompt,
        "target": q.target,
        "tolerance": q.tolerance,
        "systems": [_tf_to_doc(tf) for tf in q.systems],
    }


def _question_from_doc(doc: Optional[dict]) -> Optional[QuizQuestion]:
    if doc is None:
        return None
    return QuizQuestion(
        category=doc["category"],
        difficulty=int(doc["difficulty"]),
        prompt=doc["prompt"],
        target=doc["target"],
        tolerance=float(doc["tolerance"]),
        systems=tuple(_tf_from_doc(d) for d in doc["systems"]),
    )


def save_session(session: Session) -> dict:
    """Versioned document for persistence; ``load_session`` inverts it."""
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": session.session_id,
        "input_kind": session.input_kind,
        "selected_id": session.selected_id,
        "next_system_number": session.next_system_number,
        "systems": [
            {
                "id": entry.system_id,
                "tf": _tf_to_doc(entry.tf),
                "template": (
                    {"id": entry.template.id.value, "params": entry.template.params}
                    if entry.template
                    else None
                ),
                "source": entry.source,
                "env": entry.env,
                "color": entry.color_index,
            }
            for entry in session.systems.values()
        ],
        "quiz": {cat: list(ds) for cat, ds in session.quiz.levels.items()},
        "progress": {
            "points": session.progress.points,
            "unlocked": list(session.progress.unlocked),
            "event_counts": session.progress.event_counts,
            "completed_assignments": list(session.progress.completed_assignments),
        },
        "pending_question": _question_to_doc(session.pending_question),
    }


def load_session(document: dict) -> Session:
    """Rebuild a session from a document.

    Raises ``ValueError`` for malformed documents or unsupported versions.
    """
    if not isinstance(document, dict):
        raise ValueError("session document must be an object")
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported session document version: {version!r}")
    try:
        session = Session(
            session_id=document["session_id"],
            next_system_number=int(document["next_system_number"]),
            input_kind=document["input_kind"],
            selected_id=document["selected_id"],
        )
        for sys_doc in document["systems"]:
            template = None
            if sys_doc["template"] is not None:
                template = TemplateInstance(
                    TemplateId(sys_doc["template"]["id"]),
                    {k: float(v) for k, v in sys_doc["template"]["params"].items()},
                )
            session.systems[sys_doc["id"]] = SystemEntry(
                system_id=sys_doc["id"],
                tf=_tf_from_doc(sys_doc["tf"]),
                template=template,
                source=sys_doc["source"],
                env={k: float(v) for k, v in sys_doc["env"].items()},
                color_index=int(sys_doc["color"]),
            )
        session.quiz = QuizState(
            {cat: (int(d), int(s)) for cat, (d, s) in document["quiz"].items()}
        )
        progress = document["progress"]
        session.progress = ProgressState(
            points={k: int(v) for k, v in progress["points"].items()},
            unlocked=tuple(progress["unlocked"]),
            event_counts={k: int(v) for k, v in progress["event_counts"].items()},
            completed_assignments=tuple(progress["completed_assignments"]),
        )
        session.pending_question = _question_from_doc(document["pending_question"])
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed session document: {exc}") from exc
    return session


def document_json(document: dict) -> str:
    """Canonical byte-stable serialization of a session document."""
    return json.dumps(document, sort_keys=True, separators=(",", ":"))
