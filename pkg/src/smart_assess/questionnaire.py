"""Questionnaire packs: the machine-readable handbook of binary questions.

A pack is a single UTF-8 JSON document (extension ``.smartpack.json``) with
top-level keys ``pack_id``, ``version``, ``thresholds``, ``questions`` and
optional ``metadata``. Parsing is strict: unknown fields, duplicate ids and
invalid axes are rejected with positioned diagnostics. Structural rules
(axis coverage, threshold ordering, weight positivity) are reported by
``validate_pack`` as diagnostics rather than load failures.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import IO, Iterable, Union

from .core import (
    Axis,
    EvidenceKind,
    PREDICATE_FIELDS,
    PROGRESSION,
    QUALITY_AXES,
    QualityAxis,
    QualityCharacteristic,
    QualitySubmetric,
    ReadinessLevel,
    ThresholdConfig,
    ToAProfile,
    axis_label,
    profile_field_value,
)
from .errors import (
    DuplicateId,
    EmptyAxisForProfile,
    InvalidAxis,
    MalformedSyntax,
    UnknownField,
)


@dataclass(frozen=True)
class ApplicabilityClause:
    """Equality constraint over one enumerated profile field."""

    field: str
    value: str

    def __post_init__(self) -> None:
        if self.field not in PREDICATE_FIELDS:
            raise ValueError(f"unknown predicate field {self.field!r}")
        if self.value not in PREDICATE_FIELDS[self.field]:
            raise ValueError(
                f"value {self.value!r} is not valid for field {self.field!r}"
            )

    def matches(self, profile: ToAProfile) -> bool:
        return profile_field_value(profile, self.field) == self.value

    def to_dict(self) -> dict:
        return {"field": self.field, "value": self.value}


def predicate_matches(clauses: tuple[ApplicabilityClause, ...], profile: ToAProfile) -> bool:
    """Empty conjunction is true."""
    return all(clause.matches(profile) for clause in clauses)


def predicate_satisfiable(clauses: tuple[ApplicabilityClause, ...]) -> bool:
    """A conjunction of equality clauses is unsatisfiable exactly when two
    clauses pin the same field to different values."""
    pinned: dict[str, str] = {}
    for clause in clauses:
        seen = pinned.setdefault(clause.field, clause.value)
        if seen != clause.value:
            return False
    return True


@dataclass(frozen=True)
class Question:
    """One binary question targeting a readiness level or quality axis."""

    id: str
    text: str
    axis: Axis
    applicability: tuple[ApplicabilityClause, ...] = ()
    evidence_required: bool = False
    weight: float = 1.0
    remediation_hint: str = ""
    evidence_kinds_suggested: tuple[EvidenceKind, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("question id must be non-empty")
        if isinstance(self.axis, ReadinessLevel) and self.axis is ReadinessLevel.OUTDATED:
            raise ValueError("questions cannot target the outdated level")

    def to_dict(self) -> dict:
        from .core import axis_to_dict

        return {
            "id": self.id,
            "text": self.text,
            "axis": axis_to_dict(self.axis),
            "applicability": [c.to_dict() for c in self.applicability],
            "evidence_required": self.evidence_required,
            "weight": self.weight,
            "remediation_hint": self.remediation_hint,
            "evidence_kinds_suggested": [k.value for k in self.evidence_kinds_suggested],
        }


# The 14 axes every pack must cover: five progression levels + nine quality pairs.
REQUIRED_AXES: tuple[Axis, ...] = tuple(PROGRESSION) + QUALITY_AXES


@dataclass(frozen=True)
class QuestionnairePack:
    pack_id: str
    version: str
    thresholds: ThresholdConfig
    questions: tuple[Question, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for q in self.questions:
            if q.id in seen:
                raise DuplicateId(q.id)
            seen.add(q.id)

    def questions_on_axis(self, axis: Axis) -> list[Question]:
        return [q for q in self.questions if q.axis == axis]

    def question(self, question_id: str) -> Question | None:
        for q in self.questions:
            if q.id == question_id:
                return q
        return None

    def covered_axes(self) -> set[Axis]:
        return {q.axis for q in self.questions} & set(REQUIRED_AXES)

    def to_dict(self) -> dict:
        return {
            "pack_id": self.pack_id,
            "version": self.version,
            "thresholds": self.thresholds.to_dict(),
            "metadata": self.metadata,
            "questions": [q.to_dict() for q in self.questions],
        }


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    subject: str = ""

    def to_dict(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "subject": self.subject,
        }


@dataclass(frozen=True)
class ValidationReport:
    diagnostics: tuple[Diagnostic, ...]

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.WARNING)

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict:
        return {"diagnostics": [d.to_dict() for d in self.diagnostics], "ok": self.ok}


_TOP_LEVEL_FIELDS = {"pack_id", "version", "thresholds", "questions", "metadata"}
_THRESHOLD_FIELDS = {"t_negative", "t_positive"}
_QUESTION_FIELDS = {
    "id",
    "text",
    "axis",
    "applicability",
    "evidence_required",
    "weight",
    "remediation_hint",
    "evidence_kinds_suggested",
}
_AXIS_FIELDS = {"kind", "level", "characteristic", "submetric", "readiness", "quality"}


def _require(condition: bool, message: str, position: str) -> None:
    if not condition:
        raise MalformedSyntax(message, position)


def _parse_axis(raw: object, position: str) -> Axis:
    if not isinstance(raw, dict):
        raise InvalidAxis("axis must be an object", position)
    keys = set(raw)
    if not keys <= _AXIS_FIELDS:
        raise InvalidAxis(f"unknown axis fields {sorted(keys - _AXIS_FIELDS)}", position)
    # Accept both the explicit {"kind": ...} form and the terse
    # {"readiness": "idea"} / {"quality": {...}} form.
    if "readiness" in raw:
        level_token = raw["readiness"]
    elif raw.get("kind") == "readiness":
        level_token = raw.get("level")
    elif "quality" in raw or raw.get("kind") == "quality":
        body = raw.get("quality", raw)
        if not isinstance(body, dict):
            raise InvalidAxis("quality axis must be an object", position)
        try:
            axis = QualityAxis(
                QualityCharacteristic(body.get("characteristic")),
                QualitySubmetric(body.get("submetric")),
            )
        except ValueError as exc:
            raise InvalidAxis(str(exc), position) from exc
        return axis
    else:
        raise InvalidAxis("axis must name a readiness level or quality pair", position)
    try:
        level = ReadinessLevel(level_token)
    except ValueError as exc:
        raise InvalidAxis(f"unknown readiness level {level_token!r}", position) from exc
    if level is ReadinessLevel.OUTDATED:
        raise InvalidAxis("questions cannot target the outdated level", position)
    return level


def _parse_question(raw: object, position: str) -> Question:
    _require(isinstance(raw, dict), "question must be an object", position)
    assert isinstance(raw, dict)
    unknown = set(raw) - _QUESTION_FIELDS
    if unknown:
        raise UnknownField(f"unknown question fields {sorted(unknown)}", position)
    _require(isinstance(raw.get("id"), str) and raw["id"] != "", "question id must be a non-empty string", position)
    _require(isinstance(raw.get("text"), str), "question text must be a string", position)
    axis = _parse_axis(raw.get("axis"), f"{position}.axis")

    clauses: list[ApplicabilityClause] = []
    for i, c in enumerate(raw.get("applicability", [])):
        cpos = f"{position}.applicability[{i}]"
        _require(isinstance(c, dict), "clause must be an object", cpos)
        _require(set(c) == {"field", "value"}, "clause must have exactly field and value", cpos)
        try:
            clauses.append(ApplicabilityClause(c["field"], c["value"]))
        except ValueError as exc:
            raise MalformedSyntax(str(exc), cpos) from exc

    kinds: list[EvidenceKind] = []
    for i, k in enumerate(raw.get("evidence_kinds_suggested", [])):
        try:
            kinds.append(EvidenceKind(k))
        except ValueError as exc:
            raise MalformedSyntax(
                f"unknown evidence kind {k!r}", f"{position}.evidence_kinds_suggested[{i}]"
            ) from exc

    weight = raw.get("weight", 1.0)
    _require(isinstance(weight, (int, float)) and not isinstance(weight, bool),
             "weight must be a number", f"{position}.weight")
    evidence_required = raw.get("evidence_required", False)
    _require(isinstance(evidence_required, bool), "evidence_required must be a boolean",
             f"{position}.evidence_required")
    hint = raw.get("remediation_hint", "")
    _require(isinstance(hint, str), "remediation_hint must be a string",
             f"{position}.remediation_hint")

    try:
        return Question(
            id=raw["id"],
            text=raw["text"],
            axis=axis,
            applicability=tuple(clauses),
            evidence_required=evidence_required,
            weight=float(weight),
            remediation_hint=hint,
            evidence_kinds_suggested=tuple(kinds),
        )
    except ValueError as exc:
        raise MalformedSyntax(str(exc), position) from exc


def load_pack(source: Union[bytes, str, IO[bytes], IO[str]]) -> QuestionnairePack:
    """Parse a pack document. Total: returns a pack or raises a positioned
    PackLoadError subclass; never returns a partially parsed pack."""
    if hasattr(source, "read"):
        source = source.read()  # type: ignore[union-attr]
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedSyntax(f"not valid UTF-8: {exc}", f"byte {exc.start}") from exc
    try:
        raw = json.loads(source)
    except json.JSONDecodeError as exc:
        raise MalformedSyntax(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc

    _require(isinstance(raw, dict), "pack document must be a JSON object", "$")
    unknown = set(raw) - _TOP_LEVEL_FIELDS
    if unknown:
        raise UnknownField(f"unknown pack fields {sorted(unknown)}", "$")
    _require(isinstance(raw.get("pack_id"), str) and raw["pack_id"] != "",
             "pack_id must be a non-empty string", "$.pack_id")
    _require(isinstance(raw.get("version"), str) and raw["version"] != "",
             "version must be a non-empty string", "$.version")

    thr_raw = raw.get("thresholds")
    _require(isinstance(thr_raw, dict), "thresholds must be an object", "$.thresholds")
    assert isinstance(thr_raw, dict)
    unknown = set(thr_raw) - _THRESHOLD_FIELDS
    if unknown:
        raise UnknownField(f"unknown threshold fields {sorted(unknown)}", "$.thresholds")
    for key in _THRESHOLD_FIELDS:
        _require(isinstance(thr_raw.get(key), (int, float)) and not isinstance(thr_raw.get(key), bool),
                 f"{key} must be a number", f"$.thresholds.{key}")
    thresholds = ThresholdConfig(float(thr_raw["t_negative"]), float(thr_raw["t_positive"]))

    metadata = raw.get("metadata", {})
    _require(isinstance(metadata, dict), "metadata must be an object", "$.metadata")

    questions_raw = raw.get("questions")
    _require(isinstance(questions_raw, list), "questions must be an array", "$.questions")
    assert isinstance(questions_raw, list)
    questions: list[Question] = []
    seen_ids: set[str] = set()
    for i, q_raw in enumerate(questions_raw):
        question = _parse_question(q_raw, f"$.questions[{i}]")
        if question.id in seen_ids:
            raise DuplicateId(question.id, f"$.questions[{i}]")
        seen_ids.add(question.id)
        questions.append(question)

    return QuestionnairePack(
        pack_id=raw["pack_id"],
        version=raw["version"],
        thresholds=thresholds,
        questions=tuple(questions),
        metadata=metadata,
    )


def _enumerate_profiles() -> Iterable[dict[str, str]]:
    fields = sorted(PREDICATE_FIELDS)
    for combo in product(*(PREDICATE_FIELDS[f] for f in fields)):
        yield dict(zip(fields, combo))


def validate_pack(pack: QuestionnairePack) -> ValidationReport:
    """Structural validation: axis coverage, threshold ordering, weight
    positivity (errors) and unsatisfiable applicability (warnings)."""
    diagnostics: list[Diagnostic] = []

    for problem in pack.thresholds.problems():
        diagnostics.append(Diagnostic(Severity.ERROR, "thresholds", problem, "thresholds"))

    covered = {q.axis for q in pack.questions}
    for axis in REQUIRED_AXES:
        if axis not in covered:
            diagnostics.append(
                Diagnostic(
                    Severity.ERROR,
                    "axis_coverage",
                    f"no question covers axis {axis_label(axis)}",
                    axis_label(axis),
                )
            )

    for q in pack.questions:
        if not q.weight > 0:
            diagnostics.append(
                Diagnostic(
                    Severity.ERROR,
                    "nonpositive_weight",
                    f"question {q.id!r} has non-positive weight {q.weight}",
                    q.id,
                )
            )
        if not predicate_satisfiable(q.applicability):
            diagnostics.append(
                Diagnostic(
                    Severity.WARNING,
                    "unsatisfiable_applicability",
                    f"question {q.id!r} has an unsatisfiable applicability predicate",
                    q.id,
                )
            )
        if not q.text.strip():
            diagnostics.append(
                Diagnostic(Severity.WARNING, "empty_text", f"question {q.id!r} has empty text", q.id)
            )

    return ValidationReport(tuple(diagnostics))


def applicable_questions(
    pack: QuestionnairePack, profile: ToAProfile, axis: Axis
) -> list[Question]:
    """Questions on the axis whose predicate matches the profile, in pack
    file order. Raises EmptyAxisForProfile when the result would be empty."""
    matched = [
        q
        for q in pack.questions
        if q.axis == axis and predicate_matches(q.applicability, profile)
    ]
    if not matched:
        raise EmptyAxisForProfile(axis_label(axis))
    return matched
