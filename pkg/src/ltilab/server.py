"""HTTP JSON API over the session engine.

All math happens server-side; the browser UI only consumes these endpoints.
Sessions are persisted to the data directory after every mutation, so a
restarted server picks up where it left off.
"""

from __future__ import annotations

import secrets
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Response
from pydantic import BaseModel, Field

from . import session as sessions
from .config import Config, load_config
from .export import EXPORT_TARGETS, generate_code
from .gamification import (
    EVENT_KINDS,
    Event,
    check_assignment,
    grade,
    next_question,
    question_bank,
    question_topics,
    update_difficulty,
)
from .parsing import ExpressionError
from .store import SessionStore
from .templates import catalog_payload

API = "/api/v1"


class SystemCreate(BaseModel):
    template: Optional[str] = None
    expression: Optional[str] = None
    env: dict[str, float] = Field(default_factory=dict)


class ParamPatch(BaseModel):
    symbol: str
    value: float


class PoleMove(BaseModel):
    index: int
    re: float
    im: float


class SessionPatch(BaseModel):
    input_kind: Optional[str] = None
    selected_id: Optional[str] = None


class EventIn(BaseModel):
    kind: str
    payload: dict = Field(default_factory=dict)


class QuizNextIn(BaseModel):
    category: Optional[str] = None
    seed: Optional[int] = None


class QuizAnswerIn(BaseModel):
    answer: dict


class AssignmentCheckIn(BaseModel):
    system_id: str


def _achievement_payload(defs) -> list[dict]:
    return [{"id": a.id, "title": a.title, "points": a.points} for a in defs]


def _progress_payload(session) -> dict:
    p = session.progress
    return {
        "total_points": p.total_points,
        "level": p.level,
        "points": dict(p.points),
        "badges": sessions.session_badges(session),
        "unlocked": list(p.unlocked),
    }


def _system_payload(entry) -> dict:
    return {
        "id": entry.system_id,
        "tf": {
            "num": list(entry.tf.num.coeffs),
            "den": list(entry.tf.den.coeffs),
            "delay": entry.tf.delay,
        },
        "template": (
            {"id": entry.template.id.value, "params": dict(entry.template.params)}
            if entry.template
            else None
        ),
        "source": entry.source,
        "env": dict(entry.env),
        "color": entry.color_index,
    }


def _snapshot(session) -> dict:
    return {
        "session_id": session.session_id,
        "input_kind": session.input_kind,
        "selected_id": session.selected_id,
        "systems": [_system_payload(e) for e in session.systems.values()],
        "quiz": {cat: {"difficulty": d, "streak": s} for cat, (d, s) in session.quiz.levels.items()},
        "progress": _progress_payload(session),
    }


def create_app(config: Optional[Config] = None) -> FastAPI:
    config = config or load_config()
    store = SessionStore(Path(config.data_dir))
    app = FastAPI(title="ltilab", version="0.1.0")
    app.state.store = store

    def _get_session(sid: str):
        try:
            return store.get(sid)
        except KeyError:
            raise HTTPException(404, f"unknown session {sid!r}")

    def _bad_request(exc: Exception) -> HTTPException:
        if isinstance(exc, ExpressionError):
            return HTTPException(
                400, {"error": str(exc), "message": exc.message, "offset": exc.offset}
            )
        return HTTPException(400, {"error": str(exc)})

    @app.post(API + "/sessions", status_code=201)
    def create_session():
        session = store.create()
        return _snapshot(session)

    @app.get(API + "/sessions/{sid}")
    def get_session(sid: str):
        return _snapshot(_get_session(sid))

    @app.patch(API + "/sessions/{sid}")
    def patch_session(sid: str, body: SessionPatch):
        _get_session(sid)
        with store.mutate(sid) as session:
            unlocked = []
            try:
                if body.input_kind is not None:
                    unlocked = sessions.set_input_kind(session, body.input_kind)
                if body.selected_id is not None:
                    sessions.select_system(session, body.selected_id)
            except KeyError as exc:
                raise HTTPException(404, str(exc))
            except ValueError as exc:
                raise _bad_request(exc)
            return {
                "session": _snapshot(session),
                "unlocked": _achievement_payload(unlocked),
            }

    @app.post(API + "/sessions/{sid}/systems", status_code=201)
    def add_system(sid: str, body: SystemCreate):
        _get_session(sid)
        source = body.template or body.expression
        if not source:
            raise HTTPException(400, {"error": "need a template id or an expression"})
        with store.mutate(sid) as session:
            if len(session.systems) >= sessions.MAX_SYSTEMS:
                raise HTTPException(
                    409, {"error": f"session already holds {sessions.MAX_SYSTEMS} systems"}
                )
            try:
                _, system_id, unlocked = sessions.add_system(session, source, body.env)
            except ExpressionError as exc:
                raise _bad_request(exc)
            except ValueError as exc:
                raise _bad_request(exc)
            return {
                "system_id": system_id,
                "system": _system_payload(session.systems[system_id]),
                "unlocked": _achievement_payload(unlocked),
            }

    @app.delete(API + "/sessions/{sid}/systems/{system_id}")
    def delete_system(sid: str, system_id: str):
        _get_session(sid)
        with store.mutate(sid) as session:
            try:
                unlocked = sessions.remove_system(session, system_id)
            except KeyError as exc:
                raise HTTPException(404, str(exc))
            return {
                "session": _snapshot(session),
                "unlocked": _achievement_payload(unlocked),
            }

    @app.patch(API + "/sessions/{sid}/systems/{system_id}/params")
    def patch_param(sid: str, system_id: str, body: ParamPatch):
        _get_session(sid)
        with store.mutate(sid) as session:
            try:
                sessions.update_parameter(session, system_id, body.symbol, body.value)
            except KeyError as exc:
                raise HTTPException(404, str(exc))
            except (ExpressionError, ValueError) as exc:
                raise _bad_request(exc)
            return {"system": _system_payload(session.systems[system_id])}

    @app.post(API + "/sessions/{sid}/systems/{system_id}/pole-move")
    def pole_move(sid: str, system_id: str, body: PoleMove):
        _get_session(sid)
        with store.mutate(sid) as session:
            try:
                sessions.move_pole(
                    session, system_id, body.index, complex(body.re, body.im)
                )
                unlocked = sessions.apply_event(
                    session, Event("pole_dragged", {"system_id": system_id})
                )
            except KeyError as exc:
                raise HTTPException(404, str(exc))
            except ValueError as exc:
                raise _bad_request(exc)
            return {
                "system": _system_payload(session.systems[system_id]),
                "unlocked": _achievement_payload(unlocked),
            }

    @app.get(API + "/sessions/{sid}/systems/{system_id}/{view}")
    def get_view(
        sid: str,
        system_id: str,
        view: str,
        wmin: float = 1e-2,
        wmax: float = 1e3,
        points: int = 1000,
        tmax: Optional[float] = None,
        time_points: int = 500,
        target: Optional[str] = None,
    ):
        session = _get_session(sid)
        if view == "export":
            return _export(session, sid, system_id, target)
        if view not in sessions.VIEWS:
            raise HTTPException(404, f"unknown view {view!r}")
        try:
            return sessions.get_views(
                session,
                system_id,
                view,
                wmin=wmin,
                wmax=wmax,
                points=points,
                tmax=tmax,
                time_points=time_points,
            )
        except KeyError as exc:
            raise HTTPException(404, str(exc))
        except ValueError as exc:
            raise _bad_request(exc)

    def _export(session, sid: str, system_id: str, target: Optional[str]):
        if target not in EXPORT_TARGETS:
            raise HTTPException(
                400, {"error": f"target must be one of {', '.join(EXPORT_TARGETS)}"}
            )
        if system_id not in session.systems:
            raise HTTPException(404, f"unknown system {system_id!r}")
        code = generate_code(session.systems[system_id].tf, target)
        with store.mutate(sid) as mutable:
            sessions.apply_event(
                mutable, Event("code_exported", {"target": target})
            )
        return Response(
            content=code.text,
            media_type="text/plain; charset=utf-8",
            headers={
                "Content-Disposition": f'attachment; filename="{code.filename}"'
            },
        )

    @app.post(API + "/sessions/{sid}/events")
    def post_event(sid: str, body: EventIn):
        if body.kind not in EVENT_KINDS:
            raise HTTPException(400, {"error": f"unknown event kind {body.kind!r}"})
        _get_session(sid)
        with store.mutate(sid) as session:
            unlocked = sessions.apply_event(session, Event(body.kind, body.payload))
            return {
                "unlocked": _achievement_payload(unlocked),
                "progress": _progress_payload(session),
            }

    @app.post(API + "/sessions/{sid}/quiz/next")
    def quiz_next(sid: str, body: QuizNextIn):
        _get_session(sid)
        with store.mutate(sid) as session:
            seed = body.seed if body.seed is not None else secrets.randbits(32)
            try:
                question = next_question(session.quiz, body.category, seed)
            except ValueError as exc:
                raise _bad_request(exc)
            session.pending_question = question
            return {"question": sessions._question_to_doc(question)}

    @app.post(API + "/sessions/{sid}/quiz/answer")
    def quiz_answer(sid: str, body: QuizAnswerIn):
        _get_session(sid)
        with store.mutate(sid) as session:
            question = session.pending_question
            if question is None:
                raise HTTPException(409, {"error": "no question is pending"})
            try:
                result = grade(question, body.answer)
            except ValueError as exc:
                raise _bad_request(exc)
            session.quiz = update_difficulty(
                session.quiz, question.category, result.correct
            )
            unlocked = sessions.apply_event(
                session,
                Event(
                    "quiz_answered",
                    {
                        "category": question.category,
                        "correct": result.correct,
                        "difficulty": question.difficulty,
                    },
                ),
            )
            session.pending_question = None
            return {
                "correct": result.correct,
                "feedback": result.feedback,
                "quiz": {
                    cat: {"difficulty": d, "streak": s}
                    for cat, (d, s) in session.quiz.levels.items()
                },
                "progress": _progress_payload(session),
                "unlocked": _achievement_payload(unlocked),
            }

    @app.get(API + "/sessions/{sid}/assignments")
    def list_assignments(sid: str):
        session = _get_session(sid)
        completed = set(session.progress.completed_assignments)
        return {
            "assignments": [
                {
                    "id": a.id,
                    "group": a.group.value,
                    "prose": a.prose,
                    "completed": a.id in completed,
                }
                for a in sessions.ASSIGNMENTS
            ]
        }

    @app.post(API + "/sessions/{sid}/assignments/{assignment_id}/check")
    def assignment_check(sid: str, assignment_id: str, body: AssignmentCheckIn):
        _get_session(sid)
        assignment = next(
            (a for a in sessions.ASSIGNMENTS if a.id == assignment_id), None
        )
        if assignment is None:
            raise HTTPException(404, f"unknown assignment {assignment_id!r}")
        with store.mutate(sid) as session:
            if body.system_id not in session.systems:
                raise HTTPException(404, f"unknown system {body.system_id!r}")
            entry = session.systems[body.system_id]
            if entry.template is None:
                raise HTTPException(
                    409, {"error": "assignments apply to template systems"}
                )
            try:
                passed, explanation = check_assignment(
                    assignment, entry.tf, entry.template
                )
            except ValueError as exc:
                raise HTTPException(409, {"error": str(exc)})
            unlocked = []
            if passed:
                unlocked = sessions.apply_event(
                    session,
                    Event("assignment_completed", {"assignment_id": assignment.id}),
                )
            return {
                "passed": passed,
                "explanation": explanation,
                "unlocked": _achievement_payload(unlocked),
                "progress": _progress_payload(session),
            }

    @app.post(API + "/sessions/{sid}/hover")
    def hover(sid: str, body: dict):
        session = _get_session(sid)
        try:
            return sessions.hover_link(session, body.get("plot"), body.get("coordinate", {}))
        except (KeyError, TypeError, ValueError) as exc:
            raise _bad_request(ValueError(str(exc)))

    @app.get(API + "/catalog/templates")
    def templates_catalog():
        return {"templates": catalog_payload()}

    @app.get(API + "/catalog/achievements")
    def achievements_catalog():
        return {"achievements": _achievement_payload(sessions.ACHIEVEMENTS)}

    @app.get(API + "/catalog/questions")
    def questions_catalog():
        return {"topics": question_topics()}

    @app.get(API + "/catalog/questions/{topic}")
    def question_layers(topic: str):
        try:
            return {"topic": topic, "layers": question_bank(topic)}
        except ValueError as exc:
            raise HTTPException(404, str(exc))

    return app


def main() -> None:  # pragma: no cover - thin launcher
    import uvicorn

    config = load_config()
    uvicorn.run(create_app(config), host=config.host, port=config.port)
