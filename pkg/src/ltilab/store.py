"""File-backed session store.

One JSON document per session id in the data directory; writes are atomic
(temp file + rename).  Mutations on a session are serialized by a
per-session lock, so request handlers can read and write concurrently
across different sessions.
"""

from __future__ import annotations

import json
import threading
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from .session import Session, create_session, document_json, load_session, save_session


class SessionStore:
    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()

    def _path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def create(self) -> Session:
        session = create_session()
        with self._lock_for(session.session_id):
            self._sessions[session.session_id] = session
            self._persist(session)
        return session

    def get(self, session_id: str) -> Session:
        with self._lock_for(session_id):
            if session_id in self._sessions:
                return self._sessions[session_id]
            path = self._path(session_id)
            if not path.exists():
                raise KeyError(f"unknown session {session_id!r}")
            session = load_session(json.loads(path.read_text(encoding="utf-8")))
            self._sessions[session_id] = session
            return session

    @contextmanager
    def mutate(self, session_id: str) -> Iterator[Session]:
        """Single-writer access to one session; persists on clean exit."""
        lock = self._lock_for(session_id)
        with lock:
            if session_id in self._sessions:
                session = self._sessions[session_id]
            else:
                path = self._path(session_id)
                if not path.exists():
                    raise KeyError(f"unknown session {session_id!r}")
                session = load_session(json.loads(path.read_text(encoding="utf-8")))
                self._sessions[session_id] = session
            yield session
            self._persist(session)

    def _persist(self, session: Session) -> None:
        path = self._path(session.session_id)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(document_json(save_session(session)), encoding="utf-8")
        tmp.replace(path)
