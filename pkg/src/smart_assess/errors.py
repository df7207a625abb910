"""Exception hierarchy shared by the engine, journal, service and CLI.

Every domain failure is a ``SmartError`` with a stable ``code`` so the
service can map it to an HTTP status and the CLI to an exit code without
string matching.
"""

from __future__ import annotations

from typing import Any


class SmartError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details = details


# --- profiles / core types -------------------------------------------------

class ProfileInvalid(SmartError):
    code = "profile_invalid"


class InvalidThresholds(SmartError):
    code = "invalid_thresholds"


class UnknownNotation(SmartError):
    code = "unknown_notation"


# --- questionnaire packs ---------------------------------------------------

class PackLoadError(SmartError):
    """Raised when a pack file cannot be parsed; carries a position."""

    code = "pack_load_error"

    def __init__(self, message: str, position: str, **details: Any):
        super().__init__(f"{position}: {message}", position=position, **details)
        self.position = position


class MalformedSyntax(PackLoadError):
    code = "malformed_syntax"


class UnknownField(PackLoadError):
    code = "unknown_field"


class DuplicateId(PackLoadError):
    code = "duplicate_id"

    def __init__(self, question_id: str, position: str = "questions"):
        super().__init__(f"duplicate question id {question_id!r}", position)
        self.question_id = question_id


class InvalidAxis(PackLoadError):
    code = "invalid_axis"


class PackInvalid(SmartError):
    """A parsed pack failed validation with Error-severity diagnostics."""

    code = "pack_invalid"

    def __init__(self, report: Any):
        errors = "; ".join(d.message for d in report.errors)
        super().__init__(f"pack failed validation: {errors}")
        self.report = report


class EmptyAxisForProfile(SmartError):
    """No question on the axis applies to the profile: score undefined."""

    code = "empty_axis_for_profile"

    def __init__(self, axis_label: str):
        super().__init__(f"no applicable question on axis {axis_label}", axis=axis_label)
        self.axis_label = axis_label


# --- responses / scoring ---------------------------------------------------

class ResponseInvalid(SmartError):
    code = "response_invalid"


class MissingResponse(SmartError):
    code = "missing_response"

    def __init__(self, question_id: str, axis_label: str = ""):
        where = f" on axis {axis_label}" if axis_label else ""
        super().__init__(f"missing response for question {question_id!r}{where}",
                         question_id=question_id, axis=axis_label)
        self.question_id = question_id


class UnexpectedResponse(SmartError):
    code = "unexpected_response"

    def __init__(self, question_id: str):
        super().__init__(f"response to unknown or inapplicable question {question_id!r}",
                         question_id=question_id)
        self.question_id = question_id


class AllNotApplicable(SmartError):
    """Every response on the axis was NotApplicable: score undefined."""

    code = "all_not_applicable"

    def __init__(self, axis_label: str):
        super().__init__(f"all responses on axis {axis_label} are not-applicable", axis=axis_label)
        self.axis_label = axis_label


class EvidenceMissing(SmartError):
    code = "evidence_missing"

    def __init__(self, question_id: str):
        super().__init__(
            f"question {question_id!r} requires evidence for a yes answer", question_id=question_id
        )
        self.question_id = question_id


class EvidenceInvalid(SmartError):
    code = "evidence_invalid"


class IncompleteSubmetrics(SmartError):
    code = "incomplete_submetrics"


# --- gating ------------------------------------------------------------------

class LevelMismatch(SmartError):
    code = "level_mismatch"


class NothingToRemediate(SmartError):
    code = "nothing_to_remediate"


class NoPendingDecision(SmartError):
    code = "no_pending_decision"


class EmptyJustification(SmartError):
    code = "empty_justification"


# --- journal -----------------------------------------------------------------

class HashChainMismatch(SmartError):
    code = "hash_chain_mismatch"


class DuplicateSequence(SmartError):
    code = "duplicate_sequence"


class StorageFailure(SmartError):
    code = "storage_failure"


class PackUnresolvable(SmartError):
    code = "pack_unresolvable"

    def __init__(self, pack_id: str, version: str):
        super().__init__(f"pack {pack_id}@{version} is not resolvable",
                         pack_id=pack_id, version=version)


class ReplayDivergence(SmartError):
    code = "replay_divergence"

    def __init__(self, sequence_no: int, message: str = ""):
        detail = message or "stored vector differs from recomputation"
        super().__init__(f"replay divergence at sequence {sequence_no}: {detail}",
                         sequence_no=sequence_no)
        self.sequence_no = sequence_no


class ChainUnverified(SmartError):
    code = "chain_unverified"


# --- reporting ---------------------------------------------------------------

class UnsupportedFormat(SmartError):
    code = "unsupported_format"


class EmptyHistory(SmartError):
    code = "empty_history"


# --- storage / service -------------------------------------------------------

class MalformedDocument(SmartError):
    """A JSON document (responses file, stored record) failed strict parsing."""

    code = "malformed_document"


class UnknownId(SmartError):
    code = "unknown_id"

    def __init__(self, kind: str, identifier: str):
        super().__init__(f"unknown {kind} {identifier!r}", kind=kind, identifier=identifier)


class SessionConflict(SmartError):
    code = "session_conflict"


class AssessmentPrecondition(SmartError):
    """A gate precondition is unmet (incomplete responses, record-only ToA)."""

    code = "assessment_precondition"
