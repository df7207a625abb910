"""Promotion gates: maps a maturity vector to a transition decision.

Gate rules per level:

* idea, research — readiness alone gates; quality is recorded but never blocks.
* concept — every quality characteristic must be at least neutral to leave.
* trial — every quality characteristic must be positive to reach product;
  a neutral characteristic holds the ToA (the assessor cannot override it).
* product — a negative readiness or quality evaluation retires the ToA to
  outdated; otherwise it is maintained.
* outdated — terminal; assessments are recorded only.

A neutral readiness score at an open gate defers to the assessor (hold or
advance, justification mandatory).
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, datetime, timedelta
from enum import Enum

from .core import (
    Axis,
    EvidenceKind,
    MaturityState,
    MaturityVector,
    QUALITY_AXES,
    ReadinessLevel,
    ToAProfile,
    axis_label,
    axis_to_dict,
)
from .errors import (
    EmptyJustification,
    LevelMismatch,
    NoPendingDecision,
    NothingToRemediate,
)
from .questionnaire import QuestionnairePack
from .scoring import Answer, ResponseSet

DEFAULT_FOLLOW_UP = timedelta(days=90)


class Decision(Enum):
    ADVANCE = "advance"
    HOLD = "hold"
    REMEDIATE = "remediate"
    NEEDS_ASSESSOR_DECISION = "needs_assessor_decision"
    RETIRE = "retire"
    MAINTAIN = "maintain"


# Order used by the monotonicity guarantee: raising any axis state never
# demotes the decision. Product-level decisions form their own order.
DECISION_RANK = {
    Decision.REMEDIATE: 0,
    Decision.HOLD: 1,
    Decision.NEEDS_ASSESSOR_DECISION: 2,
    Decision.ADVANCE: 3,
    Decision.RETIRE: 0,
    Decision.MAINTAIN: 1,
}


class DecisionChoice(Enum):
    HOLD = "hold"
    ADVANCE = "advance"


def readiness_target(level: ReadinessLevel) -> MaturityState | None:
    if level in (ReadinessLevel.IDEA, ReadinessLevel.RESEARCH,
                 ReadinessLevel.CONCEPT, ReadinessLevel.TRIAL):
        return MaturityState.POSITIVE
    if level is ReadinessLevel.PRODUCT:
        return MaturityState.NEUTRAL
    return None


def quality_target(level: ReadinessLevel) -> MaturityState | None:
    """Minimum characteristic state demanded by the gate at this level; no
    quality gate exists below concept."""
    if level is ReadinessLevel.CONCEPT:
        return MaturityState.NEUTRAL
    if level is ReadinessLevel.TRIAL:
        return MaturityState.POSITIVE
    if level is ReadinessLevel.PRODUCT:
        return MaturityState.NEUTRAL
    return None


def blocking_axes(vector: MaturityVector) -> tuple[Axis, ...]:
    """Axes scoring below the gate targets for the vector's level: the
    readiness axis first, then quality submetric axes in canonical order."""
    blocked: list[Axis] = []
    r_target = readiness_target(vector.level)
    if r_target is not None and vector.readiness.state.rank < r_target.rank:
        blocked.append(vector.level)
    q_target = quality_target(vector.level)
    if q_target is not None:
        for axis in QUALITY_AXES:
            score = vector.quality[axis.characteristic].submetric_scores[axis.submetric]
            if score.state.rank < q_target.rank:
                blocked.append(axis)
    return tuple(blocked)


@dataclass(frozen=True)
class TransitionResult:
    decision: Decision
    blocking_axes: tuple[Axis, ...]
    rationale: str
    advance_to: ReadinessLevel | None = None
    options: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "decision": self.decision.value,
            "advance_to": self.advance_to.value if self.advance_to else None,
            "blocking_axes": [axis_to_dict(a) for a in self.blocking_axes],
            "options": list(self.options) if self.options is not None else None,
            "rationale": self.rationale,
        }


@dataclass(frozen=True)
class PlanItem:
    question_id: str
    remediation_hint: str
    required_evidence_kinds: tuple[EvidenceKind, ...]
    target_axis: Axis

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "remediation_hint": self.remediation_hint,
            "required_evidence_kinds": [k.value for k in self.required_evidence_kinds],
            "target_axis": axis_to_dict(self.target_axis),
        }


@dataclass(frozen=True)
class ActionPlan:
    items: tuple[PlanItem, ...]
    follow_up_by: date
    created_from: str

    def to_dict(self) -> dict:
        return {
            "items": [item.to_dict() for item in self.items],
            "follow_up_by": self.follow_up_by.isoformat(),
            "created_from": self.created_from,
        }


@dataclass(frozen=True)
class AssessorDecision:
    choice: DecisionChoice
    justification: str
    assessor: str
    decided_at: datetime

    def __post_init__(self) -> None:
        if not self.justification.strip():
            raise EmptyJustification("assessor decision requires a justification")

    def to_dict(self) -> dict:
        from .serialize import format_timestamp

        return {
            "choice": self.choice.value,
            "justification": self.justification,
            "assessor": self.assessor,
            "decided_at": format_timestamp(self.decided_at),
        }


_ASSESSOR_OPTIONS = (DecisionChoice.HOLD.value, DecisionChoice.ADVANCE.value)


def _negative_characteristics(vector: MaturityVector) -> list[str]:
    return [
        char.value
        for char, cs in vector.quality.items()
        if cs.state is MaturityState.NEGATIVE
    ]


def _neutral_characteristics(vector: MaturityVector) -> list[str]:
    return [
        char.value
        for char, cs in vector.quality.items()
        if cs.state is MaturityState.NEUTRAL
    ]


def evaluate_transition(
    vector: MaturityVector, current_level: ReadinessLevel
) -> TransitionResult:
    """Apply the gate table for the current level to a scored vector."""
    if vector.level is not current_level:
        raise LevelMismatch(
            f"vector was scored at {vector.level.value}, profile is at {current_level.value}"
        )

    level = current_level
    notation = vector.notation
    r = vector.readiness.state
    blocked = blocking_axes(vector)

    if level is ReadinessLevel.OUTDATED:
        return TransitionResult(
            Decision.MAINTAIN, (), f"{notation}: outdated is terminal; assessment recorded only"
        )

    if level is ReadinessLevel.PRODUCT:
        negatives = _negative_characteristics(vector)
        if r is MaturityState.NEGATIVE or negatives:
            what = "readiness" if r is MaturityState.NEGATIVE else ""
            both = ", ".join(filter(None, [what, *negatives]))
            return TransitionResult(
                Decision.RETIRE,
                blocked,
                f"{notation}: negative evaluation ({both}); ToA moves to outdated",
            )
        return TransitionResult(
            Decision.MAINTAIN, (), f"{notation}: product maturity sustained"
        )

    next_level = level.next_level()
    assert next_level is not None
    q_target = quality_target(level)
    negatives = _negative_characteristics(vector)

    if level in (ReadinessLevel.IDEA, ReadinessLevel.RESEARCH):
        if r is MaturityState.POSITIVE:
            return TransitionResult(
                Decision.ADVANCE,
                (),
                f"{notation}: readiness positive; no quality gate before concept",
                advance_to=next_level,
            )
        if r is MaturityState.NEUTRAL:
            return TransitionResult(
                Decision.NEEDS_ASSESSOR_DECISION,
                blocked,
                f"{notation}: neutral readiness; assessor decides hold or advance",
                options=_ASSESSOR_OPTIONS,
            )
        return TransitionResult(
            Decision.REMEDIATE,
            blocked,
            f"{notation}: readiness below threshold; remediation plan required",
        )

    if level is ReadinessLevel.CONCEPT:
        if r is MaturityState.NEGATIVE or negatives:
            return TransitionResult(
                Decision.REMEDIATE,
                blocked,
                f"{notation}: negative axes block the concept gate "
                f"(quality must be at least neutral)",
            )
        if r is MaturityState.POSITIVE:
            return TransitionResult(
                Decision.ADVANCE,
                (),
                f"{notation}: readiness positive and all quality characteristics "
                f"at least neutral",
                advance_to=next_level,
            )
        return TransitionResult(
            Decision.NEEDS_ASSESSOR_DECISION,
            blocked,
            f"{notation}: neutral readiness with quality at least neutral; "
            f"assessor decides hold or advance",
            options=_ASSESSOR_OPTIONS,
        )

    # trial
    assert level is ReadinessLevel.TRIAL and q_target is MaturityState.POSITIVE
    neutrals = _neutral_characteristics(vector)
    if r is MaturityState.NEGATIVE or negatives:
        return TransitionResult(
            Decision.REMEDIATE,
            blocked,
            f"{notation}: negative axes block the trial gate",
        )
    if not neutrals:
        if r is MaturityState.POSITIVE:
            return TransitionResult(
                Decision.ADVANCE,
                (),
                f"{notation}: readiness positive and all quality characteristics positive",
                advance_to=next_level,
            )
        return TransitionResult(
            Decision.NEEDS_ASSESSOR_DECISION,
            blocked,
            f"{notation}: neutral readiness with all quality characteristics positive; "
            f"assessor decides hold or advance",
            options=_ASSESSOR_OPTIONS,
        )
    return TransitionResult(
        Decision.HOLD,
        blocked,
        f"{notation}: quality below positive ({', '.join(sorted(neutrals))}); "
        f"hard constraint holds promotion to product",
    )


def build_action_plan(
    vector: MaturityVector,
    responses: ResponseSet,
    pack: QuestionnairePack,
    follow_up_interval: timedelta = DEFAULT_FOLLOW_UP,
    created_from: str = "",
) -> ActionPlan:
    """One item per no-answered question on each blocking axis, carrying the
    question's remediation hint and suggested evidence kinds."""
    blocked = set(blocking_axes(vector))
    if not blocked:
        raise NothingToRemediate(f"{vector.notation}: every axis meets its gate target")
    items: list[PlanItem] = []
    for question in pack.questions:
        if question.axis not in blocked:
            continue
        response = responses.response_for(question.id)
        if response is None or response.answer is not Answer.NO:
            continue
        items.append(
            PlanItem(
                question_id=question.id,
                remediation_hint=question.remediation_hint,
                required_evidence_kinds=question.evidence_kinds_suggested,
                target_axis=question.axis,
            )
        )
    if not items:
        raise NothingToRemediate(
            f"{vector.notation}: blocking axes have no no-answered questions to cite"
        )
    follow_up_by = (responses.assessed_at + follow_up_interval).date()
    return ActionPlan(items=tuple(items), follow_up_by=follow_up_by, created_from=created_from)


def plan_to_csv(plan: ActionPlan) -> str:
    """Flat CSV export, one item per row."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["question_id", "target_axis", "remediation_hint", "required_evidence_kinds",
         "follow_up_by", "created_from"]
    )
    for item in plan.items:
        writer.writerow(
            [
                item.question_id,
                axis_label(item.target_axis),
                item.remediation_hint,
                "|".join(k.value for k in item.required_evidence_kinds),
                plan.follow_up_by.isoformat(),
                plan.created_from,
            ]
        )
    return buf.getvalue()


def apply_decision(
    pending: TransitionResult, decision: AssessorDecision, profile: ToAProfile
) -> ToAProfile:
    """Resolve a pending hold-or-advance: advance increments the level by one,
    hold leaves the profile unchanged. The caller records the decision in the
    journal either way."""
    if pending.decision is not Decision.NEEDS_ASSESSOR_DECISION:
        raise NoPendingDecision(
            f"transition decision is {pending.decision.value}, nothing to resolve"
        )
    if not decision.justification.strip():
        raise EmptyJustification("assessor decision requires a justification")
    if decision.choice is DecisionChoice.ADVANCE:
        next_level = profile.current_level.next_level()
        if next_level is None:
            raise NoPendingDecision(
                f"no next level exists after {profile.current_level.value}"
            )
        return profile.with_level(next_level)
    return profile


def resolved_transition(
    pending: TransitionResult, decision: AssessorDecision, current_level: ReadinessLevel
) -> TransitionResult:
    """Transition stored in the decision record that supersedes a pending one."""
    notation_hint = pending.rationale.split(":", 1)[0]
    if decision.choice is DecisionChoice.ADVANCE:
        next_level = current_level.next_level()
        return TransitionResult(
            Decision.ADVANCE,
            pending.blocking_axes,
            f"{notation_hint}: assessor resolved neutral readiness as advance",
            advance_to=next_level,
        )
    return TransitionResult(
        Decision.HOLD,
        pending.blocking_axes,
        f"{notation_hint}: assessor resolved neutral readiness as hold",
    )
