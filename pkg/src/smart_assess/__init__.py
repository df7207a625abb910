"""Two-dimensional software maturity assessment engine and tooling."""

__version__ = "0.1.0"

from .core import (
    Axis,
    CharacteristicScore,
    Dependency,
    EvidenceKind,
    LevelScore,
    MaturityState,
    MaturityVector,
    QUALITY_AXES,
    QualityAxis,
    QualityCharacteristic,
    QualitySubmetric,
    ReadinessLevel,
    SecurityCriticality,
    SoftwareType,
    ThresholdConfig,
    ToAProfile,
    min_state,
    parse_notation,
    render_notation,
)
from .questionnaire import (
    ApplicabilityClause,
    Question,
    QuestionnairePack,
    ValidationReport,
    applicable_questions,
    load_pack,
    validate_pack,
)
from .scoring import (
    Answer,
    EvidenceItem,
    Response,
    ResponseSet,
    assess,
    compose_characteristic,
    map_state,
    score_axis,
)
from .gating import (
    ActionPlan,
    AssessorDecision,
    Decision,
    DecisionChoice,
    TransitionResult,
    apply_decision,
    build_action_plan,
    evaluate_transition,
)
from .journal import AssessmentSnapshot, JournalStore, PackRef, build_snapshot
from .report import ReportFormat, render_history_report, render_snapshot_report
from .store import DataStore

__all__ = [
    "__version__",
    "ActionPlan",
    "Answer",
    "ApplicabilityClause",
    "AssessmentSnapshot",
    "AssessorDecision",
    "Axis",
    "CharacteristicScore",
    "DataStore",
    "Decision",
    "DecisionChoice",
    "Dependency",
    "EvidenceItem",
    "EvidenceKind",
    "JournalStore",
    "LevelScore",
    "MaturityState",
    "MaturityVector",
    "PackRef",
    "QUALITY_AXES",
    "QualityAxis",
    "QualityCharacteristic",
    "QualitySubmetric",
    "Question",
    "QuestionnairePack",
    "ReadinessLevel",
    "ReportFormat",
    "Response",
    "ResponseSet",
    "SecurityCriticality",
    "SoftwareType",
    "ThresholdConfig",
    "ToAProfile",
    "TransitionResult",
    "ValidationReport",
    "applicable_questions",
    "apply_decision",
    "assess",
    "build_action_plan",
    "build_snapshot",
    "compose_characteristic",
    "evaluate_transition",
    "load_pack",
    "map_state",
    "min_state",
    "parse_notation",
    "render_history_report",
    "render_snapshot_report",
    "render_notation",
    "score_axis",
    "validate_pack",
]
