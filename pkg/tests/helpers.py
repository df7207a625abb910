"""Shared fixture builders for the test suite."""

from __future__ import annotations

import random
from datetime import datetime, timezone

from smart_assess.core import (
    CHARACTERISTIC_SUBMETRICS,
    CharacteristicScore,
    Dependency,
    EvidenceKind,
    LevelScore,
    MaturityState,
    MaturityVector,
    PROGRESSION,
    QualityCharacteristic,
    ReadinessLevel,
    SecurityCriticality,
    SoftwareType,
    ThresholdConfig,
    ToAProfile,
    min_state,
)
from smart_assess.questionnaire import (
    ApplicabilityClause,
    Question,
    QuestionnairePack,
    REQUIRED_AXES,
    applicable_questions,
)
from smart_assess.scoring import (
    Answer,
    EvidenceItem,
    Response,
    ResponseSet,
    assessment_axes,
)

TS = datetime(2026, 8, 1, 12, 0, tzinfo=timezone.utc)

STATE_PERCENT = {
    MaturityState.NEGATIVE: 40.0,
    MaturityState.NEUTRAL: 65.0,
    MaturityState.POSITIVE: 90.0,
}


def make_profile(
    toa_id: str = "t1",
    level: ReadinessLevel = ReadinessLevel.IDEA,
    security: SecurityCriticality = SecurityCriticality.LOW,
    software_type: SoftwareType = SoftwareType.NEWLY_DEVELOPED,
    dependency: Dependency = Dependency.INDEPENDENT,
) -> ToAProfile:
    return ToAProfile(
        id=toa_id,
        name="Fixture ToA",
        purpose="exercise the assessment engine",
        environment="test bench",
        software_type=software_type,
        dependency=dependency,
        security_criticality=security,
        current_level=level,
    )


def make_question(qid, axis, weight=1.0, evidence_required=False, applicability=(), hint=""):
    return Question(
        id=qid,
        text=f"fixture question {qid}",
        axis=axis,
        applicability=tuple(ApplicabilityClause(f, v) for f, v in applicability),
        evidence_required=evidence_required,
        weight=weight,
        remediation_hint=hint or f"resolve {qid}",
        evidence_kinds_suggested=(EvidenceKind.DOCUMENT,),
    )


def make_pack(questions, t_negative=50.0, t_positive=80.0, pack_id="fixture", version="1.0.0"):
    return QuestionnairePack(
        pack_id=pack_id,
        version=version,
        thresholds=ThresholdConfig(t_negative, t_positive),
        questions=tuple(questions),
    )


def minimal_pack(per_axis: int = 1, **kwargs) -> QuestionnairePack:
    """per_axis questions on each of the 14 required axes."""
    questions = []
    n = 0
    for axis in REQUIRED_AXES:
        for _ in range(per_axis):
            n += 1
            questions.append(make_question(f"q{n:03d}", axis))
    return make_pack(questions, **kwargs)


def build_responses(
    pack: QuestionnairePack,
    profile: ToAProfile,
    answers: dict[str, Answer] | None = None,
    default: Answer = Answer.YES,
    at: datetime = TS,
    assessor: str = "alice",
) -> ResponseSet:
    """Complete response set over all applicable questions, with evidence
    auto-attached where required."""
    responses: dict[str, Response] = {}
    evidence: dict[str, EvidenceItem] = {}
    for axis in assessment_axes(profile):
        for question in applicable_questions(pack, profile, axis):
            answer = (answers or {}).get(question.id, default)
            evidence_ids: tuple[str, ...] = ()
            justification = ""
            if answer is Answer.YES and question.evidence_required:
                eid = f"ev-{question.id}"
                evidence[eid] = EvidenceItem(
                    id=eid,
                    kind=EvidenceKind.DOCUMENT,
                    description="fixture evidence",
                    content_digest="0123abcd",
                    recorded_at=at,
                )
                evidence_ids = (eid,)
            if answer is Answer.NOT_APPLICABLE:
                justification = "out of scope for this fixture"
            responses[question.id] = Response(
                question_id=question.id,
                answer=answer,
                justification=justification,
                evidence=evidence_ids,
            )
    return ResponseSet(
        profile_id=profile.id,
        pack_id=pack.pack_id,
        pack_version=pack.version,
        assessor=assessor,
        assessed_at=at,
        responses=responses,
        evidence=evidence,
    )


def make_vector(
    level: ReadinessLevel,
    readiness: MaturityState,
    characteristics: dict[QualityCharacteristic, MaturityState],
    submetric_overrides: dict | None = None,
) -> MaturityVector:
    """Vector with synthetic-but-consistent raw percentages; submetrics default
    to their characteristic's state unless overridden."""
    quality = {}
    for char in QualityCharacteristic:
        fill = characteristics[char]
        subs = {}
        for sub in CHARACTERISTIC_SUBMETRICS[char]:
            state = (submetric_overrides or {}).get(sub, fill)
            subs[sub] = LevelScore(STATE_PERCENT[state], state, 1, 1)
        composite = MaturityState.POSITIVE
        for score in subs.values():
            composite = min_state(composite, score.state)
        quality[char] = CharacteristicScore(state=composite, submetric_scores=subs)
    return MaturityVector(
        level=level,
        readiness=LevelScore(STATE_PERCENT[readiness], readiness, 1, 1),
        quality=quality,
    )


# --- random generators (seeded) -------------------------------------------------

def random_pack(rng: random.Random, max_per_axis: int = 3, weighted: bool = True):
    questions = []
    n = 0
    for axis in REQUIRED_AXES:
        for _ in range(rng.randint(1, max_per_axis)):
            n += 1
            questions.append(
                Question(
                    id=f"q{n:03d}",
                    text=f"random question {n}",
                    axis=axis,
                    weight=round(rng.uniform(0.5, 2.0), 3) if weighted else 1.0,
                    evidence_required=rng.random() < 0.25,
                    remediation_hint=f"resolve q{n:03d}",
                    evidence_kinds_suggested=(EvidenceKind.DOCUMENT,),
                )
            )
    t_negative = round(rng.uniform(20.0, 60.0), 1)
    t_positive = round(rng.uniform(t_negative + 5.0, 95.0), 1)
    return make_pack(questions, t_negative, t_positive)


def random_profile(rng: random.Random, toa_id: str = "t1", level=None) -> ToAProfile:
    return make_profile(
        toa_id=toa_id,
        level=level if level is not None else rng.choice(PROGRESSION),
        security=rng.choice(list(SecurityCriticality)),
        software_type=rng.choice(list(SoftwareType)),
        dependency=rng.choice(list(Dependency)),
    )


def random_answers(
    rng: random.Random,
    pack: QuestionnairePack,
    profile: ToAProfile,
    p_yes: float = 0.6,
    p_na: float = 0.1,
) -> dict[str, Answer]:
    """At least one non-not-applicable answer per axis, so scores stay defined."""
    answers: dict[str, Answer] = {}
    for axis in assessment_axes(profile):
        questions = applicable_questions(pack, profile, axis)
        keep = rng.randrange(len(questions))
        for i, question in enumerate(questions):
            roll = rng.random()
            if i != keep and roll < p_na:
                answers[question.id] = Answer.NOT_APPLICABLE
            elif roll < p_na + p_yes:
                answers[question.id] = Answer.YES
            else:
                answers[question.id] = Answer.NO
    return answers
