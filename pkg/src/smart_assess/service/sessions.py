"""Assessment sessions: draft response collection with a single open session
per ToA.

The open-session lock is an exclusive marker file per ToA, so it holds
across processes; session state transitions are additionally serialized
behind a process lock. Sessions expire after an idle period, which releases
the lock without touching the journal.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from pathlib import Path
from typing import Callable

from ..errors import SessionConflict, UnknownId
from ..journal import PackRef
from ..scoring import EvidenceItem, Response
from ..serialize import (
    canonical_json,
    evidence_from_dict,
    format_timestamp,
    parse_timestamp,
    response_from_dict,
)

Clock = Callable[[], datetime]


class SessionState(Enum):
    DRAFT = "draft"
    AWAITING_DECISION = "awaiting_decision"
    FINALIZED = "finalized"
    EXPIRED = "expired"


@dataclass
class AssessmentSession:
    session_id: str
    toa_id: str
    pack: PackRef
    state: SessionState
    created_by: str
    created_at: datetime
    expires_at: datetime
    responses: dict[str, Response] = field(default_factory=dict)
    evidence: dict[str, EvidenceItem] = field(default_factory=dict)
    snapshot_sequence: int | None = None

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "toa_id": self.toa_id,
            "pack": self.pack.to_dict(),
            "state": self.state.value,
            "created_by": self.created_by,
            "created_at": format_timestamp(self.created_at),
            "expires_at": format_timestamp(self.expires_at),
            "responses": {qid: r.to_dict() for qid, r in self.responses.items()},
            "evidence": {eid: e.to_dict() for eid, e in self.evidence.items()},
            "snapshot_sequence": self.snapshot_sequence,
        }


def _session_from_dict(data: dict) -> AssessmentSession:
    pack_raw = data["pack"]
    return AssessmentSession(
        session_id=data["session_id"],
        toa_id=data["toa_id"],
        pack=PackRef(pack_raw["pack_id"], pack_raw["version"], pack_raw["digest"]),
        state=SessionState(data["state"]),
        created_by=data.get("created_by", ""),
        created_at=parse_timestamp(data["created_at"]),
        expires_at=parse_timestamp(data["expires_at"]),
        responses={
            qid: response_from_dict(qid, raw) for qid, raw in data.get("responses", {}).items()
        },
        evidence={
            eid: evidence_from_dict(eid, raw) for eid, raw in data.get("evidence", {}).items()
        },
        snapshot_sequence=data.get("snapshot_sequence"),
    )


class SessionStore:
    """Persists sessions as JSON files; open sessions hold a per-ToA marker."""

    def __init__(self, root: Path, clock: Clock, idle_period: timedelta):
        self.root = Path(root)
        self.open_dir = self.root / "open"
        self.root.mkdir(parents=True, exist_ok=True)
        self.open_dir.mkdir(parents=True, exist_ok=True)
        self.clock = clock
        self.idle_period = idle_period
        self._lock = threading.RLock()

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def _marker(self, toa_id: str) -> Path:
        return self.open_dir / toa_id

    def _save(self, session: AssessmentSession) -> None:
        tmp = self._path(session.session_id).with_suffix(".tmp")
        tmp.write_text(canonical_json(session.to_dict()), encoding="utf-8")
        tmp.rename(self._path(session.session_id))

    def _expire_if_stale(self, session: AssessmentSession) -> AssessmentSession:
        if (
            session.state in (SessionState.DRAFT, SessionState.AWAITING_DECISION)
            and self.clock() > session.expires_at
        ):
            session.state = SessionState.EXPIRED
            self._save(session)
            self._marker(session.toa_id).unlink(missing_ok=True)
        return session

    def get(self, session_id: str) -> AssessmentSession:
        path = self._path(session_id)
        if not path.exists():
            raise UnknownId("session", session_id)
        session = _session_from_dict(json.loads(path.read_text(encoding="utf-8")))
        with self._lock:
            return self._expire_if_stale(session)

    def open_session_id(self, toa_id: str) -> str | None:
        marker = self._marker(toa_id)
        if not marker.exists():
            return None
        session_id = marker.read_text(encoding="utf-8").strip()
        try:
            session = self.get(session_id)
        except UnknownId:
            marker.unlink(missing_ok=True)
            return None
        if session.state in (SessionState.DRAFT, SessionState.AWAITING_DECISION):
            return session_id
        return None

    def open(self, toa_id: str, pack: PackRef, created_by: str) -> AssessmentSession:
        with self._lock:
            existing = self.open_session_id(toa_id)
            if existing:
                raise SessionConflict(
                    f"ToA {toa_id!r} already has an open session {existing!r}",
                    open_session_id=existing,
                )
            now = self.clock()
            session = AssessmentSession(
                session_id=uuid.uuid4().hex[:16],
                toa_id=toa_id,
                pack=pack,
                state=SessionState.DRAFT,
                created_by=created_by,
                created_at=now,
                expires_at=now + self.idle_period,
            )
            marker = self._marker(toa_id)
            try:
                with marker.open("x", encoding="utf-8") as fh:
                    fh.write(session.session_id)
            except FileExistsError:
                raise SessionConflict(f"ToA {toa_id!r} already has an open session") from None
            self._save(session)
            return session

    def record_response(
        self, session_id: str, response: Response, evidence: list[EvidenceItem]
    ) -> AssessmentSession:
        with self._lock:
            session = self.get(session_id)
            if session.state is not SessionState.DRAFT:
                raise SessionConflict(
                    f"session {session_id!r} is {session.state.value}; responses are frozen"
                )
            session.responses[response.question_id] = response
            for item in evidence:
                session.evidence[item.id] = item
            session.expires_at = self.clock() + self.idle_period
            self._save(session)
            return session

    def transition(self, session_id: str, new_state: SessionState,
                   snapshot_sequence: int | None = None) -> AssessmentSession:
        with self._lock:
            session = self.get(session_id)
            session.state = new_state
            if snapshot_sequence is not None:
                session.snapshot_sequence = snapshot_sequence
            self._save(session)
            if new_state in (SessionState.FINALIZED, SessionState.EXPIRED):
                self._marker(session.toa_id).unlink(missing_ok=True)
            return session
