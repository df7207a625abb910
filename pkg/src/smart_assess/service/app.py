"""HTTP/JSON surface over the assessment engine.

Every JSON response body is canonical (sorted keys, UTF-8, newline
terminated) and produced by the same serializer as the CLI, so a finalize
response is byte-identical to ``smart assess --json`` on the same inputs.
Error mapping: 400 validation, 401 bad token, 404 unknown id, 409 conflict,
422 unmet gate precondition.
"""

from __future__ import annotations

from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable, Optional

from fastapi import Depends, FastAPI, Header, Request, Response
from fastapi.exceptions import RequestValidationError

from .. import __version__
from ..core import ReadinessLevel, axis_to_dict
from ..errors import (
    AllNotApplicable,
    AssessmentPrecondition,
    ChainUnverified,
    DuplicateSequence,
    EmptyAxisForProfile,
    EmptyHistory,
    EmptyJustification,
    EvidenceInvalid,
    EvidenceMissing,
    HashChainMismatch,
    IncompleteSubmetrics,
    InvalidThresholds,
    LevelMismatch,
    MalformedDocument,
    MissingResponse,
    NoPendingDecision,
    NothingToRemediate,
    PackInvalid,
    PackLoadError,
    PackUnresolvable,
    ProfileInvalid,
    ReplayDivergence,
    ResponseInvalid,
    SessionConflict,
    SmartError,
    StorageFailure,
    UnexpectedResponse,
    UnknownId,
    UnknownNotation,
    UnsupportedFormat,
)
from ..gating import AssessorDecision, Decision, DecisionChoice
from ..journal import PackRef
from ..questionnaire import load_pack, validate_pack
from ..report import (
    ReportFormat,
    history_rows,
    open_action_items,
    render_history_report,
    render_snapshot_report,
)
from ..scoring import Answer, EvidenceItem, Response as QuestionResponse, ResponseSet
from ..scoring import assessment_axes
from ..questionnaire import applicable_questions
from ..serialize import canonical_bytes, parse_timestamp
from ..store import DataStore
from ..workflow import (
    apply_assessor_decision,
    decision_payload,
    finalize_assessment,
    finalize_payload,
)
from .config import ServiceConfig
from .schemas import (
    DecisionRequest,
    ResponseUpsertRequest,
    SessionOpenRequest,
    ToACreateRequest,
)
from .sessions import SessionState, SessionStore
from ..serialize import profile_from_dict

Clock = Callable[[], datetime]

_STATUS_BY_ERROR: list[tuple[type, int]] = [
    (UnknownId, 404),
    (PackUnresolvable, 404),
    (SessionConflict, 409),
    (HashChainMismatch, 409),
    (DuplicateSequence, 409),
    (NoPendingDecision, 409),
    (ChainUnverified, 409),
    (ReplayDivergence, 409),
    (AssessmentPrecondition, 422),
    (MissingResponse, 422),
    (AllNotApplicable, 422),
    (EmptyAxisForProfile, 422),
    (LevelMismatch, 422),
    (IncompleteSubmetrics, 422),
    (EmptyHistory, 404),
    (NothingToRemediate, 404),
    (StorageFailure, 500),
    # Everything else that is a SmartError is a validation problem.
    (PackLoadError, 400),
    (PackInvalid, 400),
    (ProfileInvalid, 400),
    (ResponseInvalid, 400),
    (UnexpectedResponse, 400),
    (EvidenceMissing, 400),
    (EvidenceInvalid, 400),
    (EmptyJustification, 400),
    (MalformedDocument, 400),
    (UnknownNotation, 400),
    (InvalidThresholds, 400),
    (UnsupportedFormat, 400),
]


def _status_for(exc: SmartError) -> int:
    for klass, status in _STATUS_BY_ERROR:
        if isinstance(exc, klass):
            return status
    return 400


class CanonicalJSONResponse(Response):
    media_type = "application/json"

    def render(self, content) -> bytes:
        return canonical_bytes(content)


def _error_body(exc: SmartError) -> dict:
    body = {"error": exc.code, "message": str(exc), "details": exc.details or {}}
    if isinstance(exc, PackInvalid):
        body["details"] = {"report": exc.report.to_dict()}
    return body


def create_app(
    config: ServiceConfig | None = None,
    clock: Clock | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    config = config or ServiceConfig()
    clock = clock or (lambda: datetime.now(timezone.utc))

    store = DataStore(config.data_path())
    sessions = SessionStore(
        config.data_path() / "sessions", clock, timedelta(days=config.session_idle_days)
    )
    follow_up = timedelta(days=config.follow_up_days)

    default_pack_ref: Optional[PackRef] = None
    if config.pack:
        pack_path = Path(config.pack)
        pack = load_pack(pack_path.read_bytes())
        report = validate_pack(pack)
        if not report.ok:
            raise PackInvalid(report)
        default_pack_ref = store.add_pack(pack)

    async def auth(authorization: str = Header(default="")) -> None:
        if config.token and authorization != f"Bearer {config.token}":
            from fastapi import HTTPException

            raise HTTPException(status_code=401, detail="missing or invalid bearer token")

    app = FastAPI(
        title="smart-assess",
        version=__version__,
        default_response_class=CanonicalJSONResponse,
    )
    app.state.store = store
    app.state.sessions = sessions
    app.state.config = config

    @app.exception_handler(SmartError)
    async def smart_error_handler(_request: Request, exc: SmartError):
        return CanonicalJSONResponse(_error_body(exc), status_code=_status_for(exc))

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return CanonicalJSONResponse(
            {"error": "validation", "message": "request body failed validation",
             "details": {"errors": [str(e.get("msg", "")) + " @ " + "/".join(str(p) for p in e.get("loc", []))
                                    for e in exc.errors()]}},
            status_code=400,
        )

    # --- helpers -----------------------------------------------------------

    def resolve_session_pack(session_pack: PackRef):
        pack = store.resolve_pack_ref(session_pack)
        if pack is None:
            raise PackUnresolvable(session_pack.pack_id, session_pack.version)
        return pack

    def session_questions(session_id: str) -> tuple:
        session = sessions.get(session_id)
        profile = store.get_profile(session.toa_id)
        pack = resolve_session_pack(session.pack)
        axes = assessment_axes(profile)
        per_axis = [(axis, applicable_questions(pack, profile, axis)) for axis in axes]
        return session, profile, pack, per_axis

    # --- meta --------------------------------------------------------------

    @app.get("/")
    async def root():
        return {
            "service": "smart-assess",
            "version": __version__,
            "docs": "/docs",
            "ui": "/ui/" if ui_dir else None,
        }

    # --- ToA profiles -------------------------------------------------------

    @app.post("/toas", status_code=201, dependencies=[Depends(auth)])
    async def create_toa(body: ToACreateRequest):
        profile = profile_from_dict(body.model_dump())
        store.create_profile(profile)
        return profile.to_dict()

    @app.get("/toas", dependencies=[Depends(auth)])
    async def list_toas():
        return {"toas": [p.to_dict() for p in store.list_profiles()]}

    @app.get("/toas/{toa_id}", dependencies=[Depends(auth)])
    async def get_toa(toa_id: str):
        return store.get_profile(toa_id).to_dict()

    # --- packs ---------------------------------------------------------------

    @app.post("/packs", status_code=201, dependencies=[Depends(auth)])
    async def upload_pack(request: Request):
        body = await request.body()
        pack = load_pack(body)
        report = validate_pack(pack)
        if not report.ok:
            raise PackInvalid(report)
        ref = store.add_pack(pack)
        return {
            "pack_id": ref.pack_id,
            "version": ref.version,
            "digest": ref.digest,
            "warnings": [d.to_dict() for d in report.warnings],
        }

    @app.get("/packs", dependencies=[Depends(auth)])
    async def list_packs():
        return {"packs": store.list_packs()}

    @app.get("/packs/{pack_id}/{version}", dependencies=[Depends(auth)])
    async def get_pack(pack_id: str, version: str):
        pack = store.get_pack(pack_id, version)
        if pack is None:
            raise UnknownId("pack", f"{pack_id}@{version}")
        return pack.to_dict()

    # --- sessions -------------------------------------------------------------

    @app.post("/toas/{toa_id}/sessions", status_code=201, dependencies=[Depends(auth)])
    async def open_session(toa_id: str, body: SessionOpenRequest):
        profile = store.get_profile(toa_id)
        if profile.current_level is ReadinessLevel.OUTDATED:
            raise AssessmentPrecondition(
                f"ToA {toa_id!r} is outdated; assessments are record-only"
            )
        if body.pack_id:
            pack = store.get_pack(body.pack_id, body.pack_version, body.pack_digest)
            if pack is None:
                raise UnknownId("pack", f"{body.pack_id}@{body.pack_version}")
            ref = PackRef(pack.pack_id, pack.version, store.pack_digest(pack))
        elif default_pack_ref is not None:
            ref = default_pack_ref
        else:
            raise AssessmentPrecondition(
                "no pack specified and no default pack configured"
            )
        # Fail early if the pack cannot score this profile on every axis.
        pack = resolve_session_pack(ref)
        for axis in assessment_axes(profile):
            applicable_questions(pack, profile, axis)
        session = sessions.open(toa_id, ref, body.created_by)
        return session.to_dict()

    @app.get("/sessions/{session_id}", dependencies=[Depends(auth)])
    async def get_session(session_id: str):
        return sessions.get(session_id).to_dict()

    @app.get("/sessions/{session_id}/questions", dependencies=[Depends(auth)])
    async def get_session_questions(session_id: str):
        session, _profile, _pack, per_axis = session_questions(session_id)
        unanswered, answered = [], []
        axis_progress = []
        for axis, questions in per_axis:
            answered_count = 0
            for question in questions:
                response = session.responses.get(question.id)
                entry = {
                    **question.to_dict(),
                    "answered": response is not None,
                    "response": response.to_dict() if response else None,
                }
                if response is None:
                    unanswered.append(entry)
                else:
                    answered_count += 1
                    answered.append(entry)
            axis_progress.append(
                {
                    "axis": axis_to_dict(axis),
                    "answered": answered_count,
                    "applicable": len(questions),
                }
            )
        return {
            "session_id": session.session_id,
            "state": session.state.value,
            "questions": unanswered + answered,
            "progress": axis_progress,
        }

    @app.put("/sessions/{session_id}/responses/{question_id}", dependencies=[Depends(auth)])
    async def upsert_response(session_id: str, question_id: str, body: ResponseUpsertRequest):
        if sessions.get(session_id).state is not SessionState.DRAFT:
            raise SessionConflict(
                f"session {session_id!r} is not a draft; responses are frozen"
            )
        session, profile, pack, per_axis = session_questions(session_id)
        question = pack.question(question_id)
        if question is None:
            raise UnknownId("question", question_id)
        applicable_ids = {q.id for _axis, questions in per_axis for q in questions}
        if question_id not in applicable_ids:
            raise ResponseInvalid(
                f"question {question_id!r} is not applicable to this assessment"
            )
        try:
            answer = Answer(body.answer)
        except ValueError as exc:
            raise ResponseInvalid(f"unknown answer {body.answer!r}") from exc
        evidence_items = [
            EvidenceItem(
                id=e.id,
                kind=_parse_evidence_kind(e.kind),
                description=e.description,
                content_digest=e.content_digest,
                recorded_at=parse_timestamp(e.recorded_at) if e.recorded_at else clock(),
            )
            for e in body.evidence
        ]
        response = QuestionResponse(
            question_id=question_id,
            answer=answer,
            justification=body.justification,
            evidence=tuple(e.id for e in evidence_items),
        )
        if answer is Answer.YES and question.evidence_required and not response.evidence:
            raise EvidenceMissing(question_id)
        session = sessions.record_response(session_id, response, evidence_items)
        return {
            "session_id": session.session_id,
            "question_id": question_id,
            "response": response.to_dict(),
            "state": session.state.value,
        }

    @app.post("/sessions/{session_id}/finalize", dependencies=[Depends(auth)])
    async def finalize_session(session_id: str):
        state = sessions.get(session_id).state
        if state is not SessionState.DRAFT:
            raise SessionConflict(
                f"session {session_id!r} is {state.value}; cannot finalize"
            )
        session, profile, pack, per_axis = session_questions(session_id)
        missing = [
            q.id
            for _axis, questions in per_axis
            for q in questions
            if q.id not in session.responses
        ]
        if missing:
            raise AssessmentPrecondition(
                f"{len(missing)} question(s) unanswered", missing=missing
            )
        response_set = ResponseSet(
            profile_id=profile.id,
            pack_id=pack.pack_id,
            pack_version=pack.version,
            assessor=session.created_by,
            assessed_at=clock(),
            responses=dict(session.responses),
            evidence=dict(session.evidence),
        )
        outcome = finalize_assessment(store, profile, pack, response_set, follow_up)
        new_state = (
            SessionState.AWAITING_DECISION
            if outcome.snapshot.transition.decision is Decision.NEEDS_ASSESSOR_DECISION
            else SessionState.FINALIZED
        )
        sessions.transition(session_id, new_state, outcome.snapshot.sequence_no)
        return finalize_payload(outcome.snapshot)

    @app.post("/sessions/{session_id}/decision", dependencies=[Depends(auth)])
    async def decide_session(session_id: str, body: DecisionRequest):
        session = sessions.get(session_id)
        if session.state is not SessionState.AWAITING_DECISION:
            raise NoPendingDecision(
                f"session {session_id!r} is {session.state.value}, not awaiting a decision"
            )
        try:
            choice = DecisionChoice(body.choice)
        except ValueError as exc:
            raise ResponseInvalid(f"unknown decision choice {body.choice!r}") from exc
        decision = AssessorDecision(
            choice=choice,
            justification=body.justification,
            assessor=body.assessor or session.created_by,
            decided_at=clock(),
        )
        outcome = apply_assessor_decision(store, session.toa_id, decision)
        sessions.transition(session_id, SessionState.FINALIZED, outcome.snapshot.sequence_no)
        return decision_payload(outcome)

    # --- history / reports ------------------------------------------------------

    @app.get("/toas/{toa_id}/history", dependencies=[Depends(auth)])
    async def get_history(toa_id: str):
        store.get_profile(toa_id)
        history = store.journal.history(toa_id)
        return {"toa_id": toa_id, "rows": history_rows(history)}

    @app.get("/toas/{toa_id}/report", dependencies=[Depends(auth)])
    async def get_report(
        toa_id: str,
        format: str = "plain",
        sequence: int | None = None,
        history: bool = False,
    ):
        store.get_profile(toa_id)
        fmt = ReportFormat.parse(format)
        snapshots = store.journal.history(toa_id)
        if not snapshots:
            raise EmptyHistory(f"ToA {toa_id!r} has no assessments yet")
        if history:
            body = render_history_report(snapshots, fmt)
        else:
            chosen = None
            if sequence is None:
                chosen = snapshots[-1]
            else:
                for snapshot in snapshots:
                    if snapshot.sequence_no == sequence:
                        chosen = snapshot
                        break
                if chosen is None:
                    raise UnknownId("snapshot", f"{toa_id}#{sequence}")
            body = render_snapshot_report(chosen, fmt, history=snapshots)
        media = {
            ReportFormat.PLAIN: "text/plain; charset=utf-8",
            ReportFormat.JSON: "application/json",
            ReportFormat.HTML: "text/html; charset=utf-8",
        }[fmt]
        return Response(content=body, media_type=media)

    @app.get("/toas/{toa_id}/action-plan", dependencies=[Depends(auth)])
    async def get_action_plan(toa_id: str, format: str = "json"):
        store.get_profile(toa_id)
        history = store.journal.history(toa_id)
        latest_plan = None
        for snapshot in reversed(history):
            if snapshot.action_plan is not None:
                latest_plan = snapshot.action_plan
                break
        if format == "csv":
            from ..gating import plan_to_csv

            if latest_plan is None:
                raise NothingToRemediate(f"ToA {toa_id!r} has no action plan to export")
            return Response(content=plan_to_csv(latest_plan), media_type="text/csv; charset=utf-8")
        if format != "json":
            raise UnsupportedFormat(f"unsupported action-plan format {format!r}")
        return {
            "toa_id": toa_id,
            "open_items": [item.to_dict() for item in open_action_items(history)],
            "latest_plan": latest_plan.to_dict() if latest_plan else None,
        }

    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _parse_evidence_kind(token: str):
    from ..core import EvidenceKind

    try:
        return EvidenceKind(token)
    except ValueError as exc:
        raise EvidenceInvalid(f"unknown evidence kind {token!r}") from exc
