"""Session registry: one live state and one mutation lock per session id."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..pipeline import Engine, SessionConfig, SessionState, save_session


@dataclass
class ApiSessionRecord:
    session: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    created_at: str = ""
    updated_at: str = ""
    path: Path | None = None


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class SessionStore:
    """Creates sessions and serializes mutations; snapshots on every change."""

    def __init__(self, engine: Engine, sessions_dir, config: SessionConfig | None = None):
        self.engine = engine
        self.sessions_dir = Path(sessions_dir)
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self.config = config or SessionConfig()
        self._records: dict[str, ApiSessionRecord] = {}
        self._registry_lock = threading.Lock()

    def create(self, category: str) -> ApiSessionRecord:
        session = self.engine.session_init(category, config=SessionConfig(**self.config.to_json()))
        record = ApiSessionRecord(
            session=session,
            created_at=_now(),
            updated_at=_now(),
            path=self.sessions_dir / session.session_id,
        )
        with self._registry_lock:
            self._records[session.session_id] = record
        save_session(session, record.path)
        return record

    def get(self, session_id: str) -> ApiSessionRecord:
        with self._registry_lock:
            record = self._records.get(session_id)
        if record is None:
            raise KeyError(session_id)
        return record

    def mutate(self, session_id: str, fn):
        """Run fn(engine, session) under the session lock; snapshot after."""
        record = self.get(session_id)
        with record.lock:
            result = fn(self.engine, record.session)
            record.updated_at = _now()
            save_session(record.session, record.path)
        return result
