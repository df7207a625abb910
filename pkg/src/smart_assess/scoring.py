"""Turns binary, evidence-backed responses into axis scores and a maturity vector.

Scoring is a pure function of its inputs: no clock reads, no randomness.
Equal weighting is the default (all starter-pack questions carry weight 1.0);
per-question weights are honored when a pack sets them. Not-applicable
answers are excluded from both numerator and denominator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from .core import (
    CHARACTERISTIC_SUBMETRICS,
    CharacteristicScore,
    EvidenceKind,
    LevelScore,
    MaturityState,
    MaturityVector,
    QUALITY_AXES,
    QualityCharacteristic,
    QualitySubmetric,
    ReadinessLevel,
    ThresholdConfig,
    ToAProfile,
    axis_label,
    min_state,
)
from .errors import (
    AllNotApplicable,
    AssessmentPrecondition,
    EvidenceInvalid,
    EvidenceMissing,
    IncompleteSubmetrics,
    MissingResponse,
    PackInvalid,
    ResponseInvalid,
    UnexpectedResponse,
)
from .questionnaire import Question, QuestionnairePack, applicable_questions, validate_pack


class Answer(Enum):
    YES = "yes"
    NO = "no"
    NOT_APPLICABLE = "not_applicable"


@dataclass(frozen=True)
class EvidenceItem:
    """Proof attached to an answer; the binary lives outside the store and is
    referenced by its digest."""

    id: str
    kind: EvidenceKind
    description: str
    content_digest: str
    recorded_at: datetime

    def __post_init__(self) -> None:
        if not self.id:
            raise EvidenceInvalid("evidence id must be non-empty")
        if not self.content_digest:
            raise EvidenceInvalid(f"evidence {self.id!r} has an empty content digest")

    def to_dict(self) -> dict:
        from .serialize import format_timestamp

        return {
            "id": self.id,
            "kind": self.kind.value,
            "description": self.description,
            "content_digest": self.content_digest,
            "recorded_at": format_timestamp(self.recorded_at),
        }


@dataclass(frozen=True)
class Response:
    """One answer; not-applicable requires a justification."""

    question_id: str
    answer: Answer
    justification: str = ""
    evidence: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.answer is Answer.NOT_APPLICABLE and not self.justification.strip():
            raise ResponseInvalid(
                f"not-applicable answer to {self.question_id!r} requires a justification"
            )

    def to_dict(self) -> dict:
        return {
            "answer": self.answer.value,
            "justification": self.justification,
            "evidence": list(self.evidence),
        }


@dataclass(frozen=True)
class ResponseSet:
    """All answers of one assessment round, with the evidence registry."""

    profile_id: str
    pack_id: str
    pack_version: str
    assessor: str
    assessed_at: datetime
    responses: dict[str, Response] = field(default_factory=dict)
    evidence: dict[str, EvidenceItem] = field(default_factory=dict)

    def response_for(self, question_id: str) -> Response | None:
        return self.responses.get(question_id)

    def to_dict(self) -> dict:
        from .serialize import format_timestamp

        return {
            "profile_id": self.profile_id,
            "pack_id": self.pack_id,
            "pack_version": self.pack_version,
            "assessor": self.assessor,
            "assessed_at": format_timestamp(self.assessed_at),
            "responses": {qid: r.to_dict() for qid, r in self.responses.items()},
            "evidence": {eid: e.to_dict() for eid, e in self.evidence.items()},
        }


def map_state(raw_percentage: float, thresholds: ThresholdConfig) -> MaturityState:
    """Threshold rule: below t_negative is negative, at or above t_positive is
    positive, in between is neutral. Lower boundary is inclusive to neutral."""
    thresholds.require_valid()
    if not 0.0 <= raw_percentage <= 100.0:
        raise ValueError(f"raw percentage {raw_percentage} outside [0, 100]")
    if raw_percentage < thresholds.t_negative:
        return MaturityState.NEGATIVE
    if raw_percentage >= thresholds.t_positive:
        return MaturityState.POSITIVE
    return MaturityState.NEUTRAL


def _check_evidence(question: Question, response: Response, response_set: ResponseSet) -> None:
    if response.answer is Answer.YES and question.evidence_required and not response.evidence:
        raise EvidenceMissing(question.id)
    for eid in response.evidence:
        item = response_set.evidence.get(eid)
        if item is None:
            raise EvidenceInvalid(
                f"response to {question.id!r} references unknown evidence {eid!r}"
            )
        if item.recorded_at > response_set.assessed_at:
            raise EvidenceInvalid(
                f"evidence {eid!r} is recorded after the assessment time"
            )


def score_axis(
    questions: list[Question],
    responses: ResponseSet,
    thresholds: ThresholdConfig,
) -> LevelScore:
    """Weighted fraction of yes answers over non-not-applicable answers,
    mapped to a tri-state. All questions must share one axis and be answered."""
    if not questions:
        raise ValueError("score_axis requires at least one question")
    axis = questions[0].axis
    label = axis_label(axis)
    yes_weight = 0.0
    total_weight = 0.0
    for question in questions:
        if question.axis != axis:
            raise ValueError("score_axis requires all questions on one axis")
        response = responses.response_for(question.id)
        if response is None:
            raise MissingResponse(question.id, label)
        _check_evidence(question, response, responses)
        if response.answer is Answer.NOT_APPLICABLE:
            continue
        total_weight += question.weight
        if response.answer is Answer.YES:
            yes_weight += question.weight
    if total_weight == 0.0:
        raise AllNotApplicable(label)
    # Exact endpoints: an all-yes axis is 100.0 regardless of weight rounding.
    if yes_weight == total_weight:
        raw = 100.0
    elif yes_weight == 0.0:
        raw = 0.0
    else:
        raw = (100.0 * yes_weight) / total_weight
    return LevelScore(
        raw_percentage=raw,
        state=map_state(raw, thresholds),
        answered=len(questions),
        applicable=len(questions),
    )


def compose_characteristic(
    characteristic: QualityCharacteristic,
    submetric_states: dict[QualitySubmetric, MaturityState],
) -> MaturityState:
    """Composite characteristic state: the minimum of its submetric states."""
    expected = set(CHARACTERISTIC_SUBMETRICS[characteristic])
    if set(submetric_states) != expected:
        missing = {s.value for s in expected - set(submetric_states)}
        extra = {s.value for s in set(submetric_states) - expected}
        raise IncompleteSubmetrics(
            f"characteristic {characteristic.value}: missing {sorted(missing)}, "
            f"extra {sorted(extra)}"
        )
    result = MaturityState.POSITIVE
    for state in submetric_states.values():
        result = min_state(result, state)
    return result


def _validate_response_set(
    pack: QuestionnairePack, profile: ToAProfile, responses: ResponseSet
) -> None:
    if responses.profile_id != profile.id:
        raise ResponseInvalid(
            f"response set is for profile {responses.profile_id!r}, not {profile.id!r}"
        )
    if (responses.pack_id, responses.pack_version) != (pack.pack_id, pack.version):
        raise ResponseInvalid(
            f"response set targets pack {responses.pack_id}@{responses.pack_version}, "
            f"not {pack.pack_id}@{pack.version}"
        )


def assessment_axes(profile: ToAProfile) -> list:
    """Axes scored in one assessment: the current readiness level plus all
    nine quality pairs. Outdated profiles are record-only."""
    if profile.current_level is ReadinessLevel.OUTDATED:
        raise AssessmentPrecondition(
            f"ToA {profile.id!r} is outdated; assessments are record-only"
        )
    return [profile.current_level, *QUALITY_AXES]


def assess(
    pack: QuestionnairePack, profile: ToAProfile, responses: ResponseSet
) -> MaturityVector:
    """Score the readiness axis at the profile's current level and all nine
    quality submetric axes, composing characteristic states by minimum.

    Deterministic: identical inputs yield an identical vector (and identical
    canonical serialization)."""
    report = validate_pack(pack)
    if not report.ok:
        raise PackInvalid(report)
    _validate_response_set(pack, profile, responses)

    axes = assessment_axes(profile)
    questions_by_axis = {axis: applicable_questions(pack, profile, axis) for axis in axes}

    allowed_ids = {q.id for qs in questions_by_axis.values() for q in qs}
    for qid in responses.responses:
        if qid not in allowed_ids:
            raise UnexpectedResponse(qid)

    readiness = score_axis(questions_by_axis[profile.current_level], responses, pack.thresholds)

    submetric_scores: dict[QualitySubmetric, LevelScore] = {}
    for axis in QUALITY_AXES:
        submetric_scores[axis.submetric] = score_axis(
            questions_by_axis[axis], responses, pack.thresholds
        )

    quality: dict[QualityCharacteristic, CharacteristicScore] = {}
    for characteristic, submetrics in CHARACTERISTIC_SUBMETRICS.items():
        states = {sub: submetric_scores[sub].state for sub in submetrics}
        quality[characteristic] = CharacteristicScore(
            state=compose_characteristic(characteristic, states),
            submetric_scores={sub: submetric_scores[sub] for sub in submetrics},
        )

    return MaturityVector(level=profile.current_level, readiness=readiness, quality=quality)
