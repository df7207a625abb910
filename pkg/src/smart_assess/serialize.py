"""Canonical JSON serialization and strict parsers for the domain types.

Canonical form: UTF-8, keys sorted, no insignificant whitespace, no NaN or
infinities, newline-terminated. These exact bytes are what the journal
hashes, so every producer (engine, service, CLI) must route through
``canonical_json``.
"""

from __future__ import annotations

import hashlib
import json
from datetime import date, datetime, timezone
from typing import Any

from .core import (
    CharacteristicScore,
    Dependency,
    EvidenceKind,
    LevelScore,
    MaturityState,
    QualityCharacteristic,
    QualitySubmetric,
    ReadinessLevel,
    SecurityCriticality,
    SoftwareType,
    ThresholdConfig,
    ToAProfile,
    MaturityVector,
    axis_from_dict,
)
from .errors import MalformedDocument
from .gating import (
    ActionPlan,
    AssessorDecision,
    Decision,
    DecisionChoice,
    PlanItem,
    TransitionResult,
)
from .scoring import Answer, EvidenceItem, Response, ResponseSet

ZERO_DIGEST = "0" * 64
DIGEST_ALGORITHM = "sha256"


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, ensure_ascii=False,
                      separators=(",", ":"), allow_nan=False) + "\n"


def canonical_bytes(value: Any) -> bytes:
    return canonical_json(value).encode("utf-8")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def digest_of(value: Any) -> str:
    return sha256_hex(canonical_bytes(value))


def format_timestamp(dt: datetime) -> str:
    """UTC ISO-8601 with explicit offset; naive datetimes are taken as UTC."""
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc).isoformat()


def parse_timestamp(text: str) -> datetime:
    try:
        normalized = text.replace("Z", "+00:00")
        dt = datetime.fromisoformat(normalized)
    except ValueError as exc:
        raise MalformedDocument(f"bad timestamp {text!r}: {exc}") from exc
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def parse_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError as exc:
        raise MalformedDocument(f"bad date {text!r}: {exc}") from exc


def _get(data: dict, key: str, kind: str) -> Any:
    if key not in data:
        raise MalformedDocument(f"{kind}: missing field {key!r}")
    return data[key]


def _enum(enum_cls: type, raw: Any, kind: str) -> Any:
    try:
        return enum_cls(raw)
    except ValueError as exc:
        raise MalformedDocument(f"{kind}: {exc}") from exc


def profile_from_dict(data: dict) -> ToAProfile:
    return ToAProfile(
        id=_get(data, "id", "profile"),
        name=data.get("name", ""),
        purpose=_get(data, "purpose", "profile"),
        environment=_get(data, "environment", "profile"),
        software_type=_enum(SoftwareType, _get(data, "software_type", "profile"), "profile"),
        dependency=_enum(Dependency, _get(data, "dependency", "profile"), "profile"),
        security_criticality=_enum(
            SecurityCriticality, _get(data, "security_criticality", "profile"), "profile"
        ),
        lifecycle_note=data.get("lifecycle_note", ""),
        current_level=_enum(ReadinessLevel, data.get("current_level", "idea"), "profile"),
    )


def thresholds_from_dict(data: dict) -> ThresholdConfig:
    return ThresholdConfig(
        t_negative=float(_get(data, "t_negative", "thresholds")),
        t_positive=float(_get(data, "t_positive", "thresholds")),
    )


def level_score_from_dict(data: dict) -> LevelScore:
    return LevelScore(
        raw_percentage=float(_get(data, "raw_percentage", "level score")),
        state=_enum(MaturityState, _get(data, "state", "level score"), "level score"),
        answered=int(_get(data, "answered", "level score")),
        applicable=int(_get(data, "applicable", "level score")),
    )


def vector_from_dict(data: dict) -> MaturityVector:
    quality: dict[QualityCharacteristic, CharacteristicScore] = {}
    for char_token, cs_raw in _get(data, "quality", "vector").items():
        char = _enum(QualityCharacteristic, char_token, "vector")
        quality[char] = CharacteristicScore(
            state=_enum(MaturityState, _get(cs_raw, "state", "vector"), "vector"),
            submetric_scores={
                _enum(QualitySubmetric, sub_token, "vector"): level_score_from_dict(ls_raw)
                for sub_token, ls_raw in _get(cs_raw, "submetrics", "vector").items()
            },
        )
    return MaturityVector(
        level=_enum(ReadinessLevel, _get(data, "level", "vector"), "vector"),
        readiness=level_score_from_dict(_get(data, "readiness", "vector")),
        quality=quality,
    )


def evidence_from_dict(eid: str, data: dict) -> EvidenceItem:
    return EvidenceItem(
        id=eid,
        kind=_enum(EvidenceKind, _get(data, "kind", "evidence"), "evidence"),
        description=data.get("description", ""),
        content_digest=_get(data, "content_digest", "evidence"),
        recorded_at=parse_timestamp(_get(data, "recorded_at", "evidence")),
    )


def response_from_dict(question_id: str, data: dict) -> Response:
    return Response(
        question_id=question_id,
        answer=_enum(Answer, _get(data, "answer", "response"), "response"),
        justification=data.get("justification", ""),
        evidence=tuple(data.get("evidence", [])),
    )


def response_set_from_dict(data: dict) -> ResponseSet:
    responses = {
        qid: response_from_dict(qid, raw)
        for qid, raw in _get(data, "responses", "response set").items()
    }
    evidence = {
        eid: evidence_from_dict(eid, raw)
        for eid, raw in data.get("evidence", {}).items()
    }
    return ResponseSet(
        profile_id=_get(data, "profile_id", "response set"),
        pack_id=_get(data, "pack_id", "response set"),
        pack_version=_get(data, "pack_version", "response set"),
        assessor=data.get("assessor", ""),
        assessed_at=parse_timestamp(_get(data, "assessed_at", "response set")),
        responses=responses,
        evidence=evidence,
    )


def transition_from_dict(data: dict) -> TransitionResult:
    advance_raw = data.get("advance_to")
    options = data.get("options")
    return TransitionResult(
        decision=_enum(Decision, _get(data, "decision", "transition"), "transition"),
        blocking_axes=tuple(axis_from_dict(a) for a in data.get("blocking_axes", [])),
        rationale=data.get("rationale", ""),
        advance_to=_enum(ReadinessLevel, advance_raw, "transition") if advance_raw else None,
        options=tuple(options) if options is not None else None,
    )


def plan_from_dict(data: dict) -> ActionPlan:
    items = tuple(
        PlanItem(
            question_id=_get(raw, "question_id", "plan item"),
            remediation_hint=raw.get("remediation_hint", ""),
            required_evidence_kinds=tuple(
                _enum(EvidenceKind, k, "plan item")
                for k in raw.get("required_evidence_kinds", [])
            ),
            target_axis=axis_from_dict(_get(raw, "target_axis", "plan item")),
        )
        for raw in _get(data, "items", "action plan")
    )
    return ActionPlan(
        items=items,
        follow_up_by=parse_date(_get(data, "follow_up_by", "action plan")),
        created_from=data.get("created_from", ""),
    )


def assessor_decision_from_dict(data: dict) -> AssessorDecision:
    return AssessorDecision(
        choice=_enum(DecisionChoice, _get(data, "choice", "assessor decision"), "assessor decision"),
        justification=_get(data, "justification", "assessor decision"),
        assessor=data.get("assessor", ""),
        decided_at=parse_timestamp(_get(data, "decided_at", "assessor decision")),
    )
