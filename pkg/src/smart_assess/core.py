"""Core domain types: tri-state maturity algebra, readiness levels, quality axes.

All types here are immutable value objects and safe to share across threads.
Serialization uses lowercase snake_case field names throughout; the dicts
produced by ``to_dict`` are the normative form hashed by the journal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union

from .errors import InvalidThresholds, ProfileInvalid, UnknownNotation


class MaturityState(Enum):
    """Tri-state axis score, totally ordered negative < neutral < positive."""

    NEGATIVE = "negative"
    NEUTRAL = "neutral"
    POSITIVE = "positive"

    @property
    def rank(self) -> int:
        return _STATE_RANK[self]

    @property
    def sign(self) -> str:
        return _STATE_SIGN[self]

    @classmethod
    def from_sign(cls, sign: str) -> "MaturityState":
        for state, s in _STATE_SIGN.items():
            if s == sign:
                return state
        raise UnknownNotation(f"unknown maturity sign {sign!r}")


_STATE_RANK = {
    MaturityState.NEGATIVE: 0,
    MaturityState.NEUTRAL: 1,
    MaturityState.POSITIVE: 2,
}

_STATE_SIGN = {
    MaturityState.NEGATIVE: "-",
    MaturityState.NEUTRAL: "0",
    MaturityState.POSITIVE: "+",
}


def min_state(a: MaturityState, b: MaturityState) -> MaturityState:
    """Meet of two states under negative < neutral < positive."""
    return a if a.rank <= b.rank else b


class ReadinessLevel(Enum):
    """Six-point readiness scale; OUTDATED is a terminal sink outside the
    idea..product progression."""

    IDEA = "idea"
    RESEARCH = "research"
    CONCEPT = "concept"
    TRIAL = "trial"
    PRODUCT = "product"
    OUTDATED = "outdated"

    @property
    def letter(self) -> str:
        return _LEVEL_LETTER[self]

    @property
    def in_progression(self) -> bool:
        return self is not ReadinessLevel.OUTDATED

    @property
    def ordinal(self) -> int:
        """Position within the progression; OUTDATED has no ordinal."""
        if self is ReadinessLevel.OUTDATED:
            raise ValueError("outdated is not part of the progression order")
        return PROGRESSION.index(self)

    def next_level(self) -> "ReadinessLevel | None":
        """Successor in the progression, or None at product / outdated."""
        if self in (ReadinessLevel.PRODUCT, ReadinessLevel.OUTDATED):
            return None
        return PROGRESSION[self.ordinal + 1]


PROGRESSION = (
    ReadinessLevel.IDEA,
    ReadinessLevel.RESEARCH,
    ReadinessLevel.CONCEPT,
    ReadinessLevel.TRIAL,
    ReadinessLevel.PRODUCT,
)

_LEVEL_LETTER = {
    ReadinessLevel.IDEA: "I",
    ReadinessLevel.RESEARCH: "R",
    ReadinessLevel.CONCEPT: "C",
    ReadinessLevel.TRIAL: "T",
    ReadinessLevel.PRODUCT: "P",
    ReadinessLevel.OUTDATED: "X",
}


def render_notation(level: ReadinessLevel, state: MaturityState) -> str:
    """Compact maturity notation: level letter plus state sign, e.g. "I+"."""
    return level.letter + state.sign


def parse_notation(text: str) -> tuple[ReadinessLevel, MaturityState]:
    """Inverse of render_notation over the 18 (level, state) pairs."""
    if len(text) != 2:
        raise UnknownNotation(f"notation must be two characters, got {text!r}")
    for level, letter in _LEVEL_LETTER.items():
        if letter == text[0]:
            return level, MaturityState.from_sign(text[1])
    raise UnknownNotation(f"unknown level letter {text[0]!r}")


class QualityCharacteristic(Enum):
    SECURITY = "security"
    RISK = "risk"
    OPERATIONAL = "operational"
    ENHANCEMENT = "enhancement"


class QualitySubmetric(Enum):
    PROTECTION_GOAL = "protection_goal"
    TRUST_ASSUMPTIONS = "trust_assumptions"
    SIDE_EFFECTS = "side_effects"
    RELIABILITY = "reliability"
    PERFORMANCE_EFFICIENCY = "performance_efficiency"
    OPERABILITY = "operability"
    MAINTAINABILITY = "maintainability"
    TRANSFERABILITY = "transferability"
    SCOPE = "scope"


CHARACTERISTIC_SUBMETRICS: dict[QualityCharacteristic, tuple[QualitySubmetric, ...]] = {
    QualityCharacteristic.SECURITY: (
        QualitySubmetric.PROTECTION_GOAL,
        QualitySubmetric.TRUST_ASSUMPTIONS,
    ),
    QualityCharacteristic.RISK: (
        QualitySubmetric.SIDE_EFFECTS,
        QualitySubmetric.RELIABILITY,
    ),
    QualityCharacteristic.OPERATIONAL: (
        QualitySubmetric.PERFORMANCE_EFFICIENCY,
        QualitySubmetric.OPERABILITY,
        QualitySubmetric.MAINTAINABILITY,
    ),
    QualityCharacteristic.ENHANCEMENT: (
        QualitySubmetric.TRANSFERABILITY,
        QualitySubmetric.SCOPE,
    ),
}

SUBMETRIC_CHARACTERISTIC: dict[QualitySubmetric, QualityCharacteristic] = {
    sub: char for char, subs in CHARACTERISTIC_SUBMETRICS.items() for sub in subs
}


@dataclass(frozen=True)
class QualityAxis:
    """One of the 9 valid (characteristic, submetric) pairs."""

    characteristic: QualityCharacteristic
    submetric: QualitySubmetric

    def __post_init__(self) -> None:
        if SUBMETRIC_CHARACTERISTIC[self.submetric] is not self.characteristic:
            raise ValueError(
                f"submetric {self.submetric.value} does not belong to "
                f"characteristic {self.characteristic.value}"
            )

    @classmethod
    def of(cls, submetric: QualitySubmetric) -> "QualityAxis":
        return cls(SUBMETRIC_CHARACTERISTIC[submetric], submetric)


QUALITY_AXES: tuple[QualityAxis, ...] = tuple(
    QualityAxis(char, sub)
    for char in QualityCharacteristic
    for sub in CHARACTERISTIC_SUBMETRICS[char]
)

# An assessment axis is either a readiness level or a quality pair.
Axis = Union[ReadinessLevel, QualityAxis]


def axis_label(axis: Axis) -> str:
    """Stable human/machine token, e.g. "readiness:idea" or
    "quality:security/protection_goal"."""
    if isinstance(axis, ReadinessLevel):
        return f"readiness:{axis.value}"
    return f"quality:{axis.characteristic.value}/{axis.submetric.value}"


def axis_to_dict(axis: Axis) -> dict:
    if isinstance(axis, ReadinessLevel):
        return {"kind": "readiness", "level": axis.value}
    return {
        "kind": "quality",
        "characteristic": axis.characteristic.value,
        "submetric": axis.submetric.value,
    }


def axis_from_dict(data: dict) -> Axis:
    kind = data.get("kind")
    if kind == "readiness":
        return ReadinessLevel(data["level"])
    if kind == "quality":
        return QualityAxis(
            QualityCharacteristic(data["characteristic"]),
            QualitySubmetric(data["submetric"]),
        )
    raise ValueError(f"unknown axis kind {kind!r}")


class EvidenceKind(Enum):
    DOCUMENT = "document"
    URL = "url"
    TEST_REPORT = "test_report"
    METRIC_INDICATOR = "metric_indicator"
    ANECDOTE = "anecdote"
    META_STUDY = "meta_study"


class SoftwareType(Enum):
    NEWLY_DEVELOPED = "newly_developed"
    INTERNAL_REUSED = "internal_reused"
    COMMERCIAL_OFF_THE_SHELF = "commercial_off_the_shelf"


class Dependency(Enum):
    DEPENDENT = "dependent"
    INDEPENDENT = "independent"


class SecurityCriticality(Enum):
    HIGH = "high"
    LOW = "low"


# Identifier charset keeps ToA ids usable as journal directory names.
_ID_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]{0,63}$")


@dataclass(frozen=True)
class ToAProfile:
    """The target of assessment: identity, purpose, environment, categorization."""

    id: str
    name: str
    purpose: str
    environment: str
    software_type: SoftwareType
    dependency: Dependency
    security_criticality: SecurityCriticality
    lifecycle_note: str = ""
    current_level: ReadinessLevel = ReadinessLevel.IDEA

    def __post_init__(self) -> None:
        if not _ID_RE.match(self.id):
            raise ProfileInvalid(
                f"profile id {self.id!r} must match {_ID_RE.pattern}"
            )
        if not self.purpose.strip():
            raise ProfileInvalid("profile purpose must be non-empty")
        if not self.environment.strip():
            raise ProfileInvalid("profile environment must be non-empty")

    def with_level(self, level: ReadinessLevel) -> "ToAProfile":
        return replace(self, current_level=level)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "purpose": self.purpose,
            "environment": self.environment,
            "software_type": self.software_type.value,
            "dependency": self.dependency.value,
            "security_criticality": self.security_criticality.value,
            "lifecycle_note": self.lifecycle_note,
            "current_level": self.current_level.value,
        }


# The four enumerated profile fields usable in applicability predicates.
PREDICATE_FIELDS: dict[str, tuple[str, ...]] = {
    "software_type": tuple(v.value for v in SoftwareType),
    "dependency": tuple(v.value for v in Dependency),
    "security_criticality": tuple(v.value for v in SecurityCriticality),
    "current_level": tuple(v.value for v in ReadinessLevel),
}


def profile_field_value(profile: ToAProfile, field_name: str) -> str:
    if field_name not in PREDICATE_FIELDS:
        raise ValueError(f"field {field_name!r} is not usable in applicability predicates")
    value = getattr(profile, field_name)
    return value.value


@dataclass(frozen=True)
class ThresholdConfig:
    """Percentage thresholds mapping a raw score to a tri-state.

    Validity (0 <= t_negative < t_positive <= 100) is checked by
    ``problems``/``require_valid`` rather than at construction so pack
    validation can report bad thresholds as diagnostics.
    """

    t_negative: float = 50.0
    t_positive: float = 80.0

    def problems(self) -> list[str]:
        out = []
        if not (0.0 <= self.t_negative <= 100.0 and 0.0 <= self.t_positive <= 100.0):
            out.append("thresholds must lie in [0, 100]")
        if not self.t_negative < self.t_positive:
            out.append("thresholds out of order: t_negative must be < t_positive")
        return out

    def require_valid(self) -> None:
        problems = self.problems()
        if problems:
            raise InvalidThresholds("; ".join(problems))

    def to_dict(self) -> dict:
        return {"t_negative": self.t_negative, "t_positive": self.t_positive}


@dataclass(frozen=True)
class LevelScore:
    """Score of one axis: raw percentage plus its tri-state image."""

    raw_percentage: float
    state: MaturityState
    answered: int
    applicable: int

    def to_dict(self) -> dict:
        return {
            "raw_percentage": self.raw_percentage,
            "state": self.state.value,
            "answered": self.answered,
            "applicable": self.applicable,
        }


@dataclass(frozen=True)
class CharacteristicScore:
    """Composite state of one quality characteristic plus its submetric scores."""

    state: MaturityState
    submetric_scores: dict[QualitySubmetric, LevelScore] = field(compare=True, default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "state": self.state.value,
            "submetrics": {
                sub.value: score.to_dict() for sub, score in self.submetric_scores.items()
            },
        }


@dataclass(frozen=True)
class MaturityVector:
    """Two-dimensional maturity: readiness score at a level plus the four
    quality characteristic scores."""

    level: ReadinessLevel
    readiness: LevelScore
    quality: dict[QualityCharacteristic, CharacteristicScore]

    @property
    def notation(self) -> str:
        return render_notation(self.level, self.readiness.state)

    def characteristic_state(self, characteristic: QualityCharacteristic) -> MaturityState:
        return self.quality[characteristic].state

    def to_dict(self) -> dict:
        return {
            "level": self.level.value,
            "notation": self.notation,
            "readiness": self.readiness.to_dict(),
            "quality": {char.value: cs.to_dict() for char, cs in self.quality.items()},
        }
