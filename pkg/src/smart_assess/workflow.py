"""Application layer shared by the HTTP service and the CLI.

Both front ends are thin shells over these functions, and both emit results
through the same canonical serializer, which is what makes CLI and service
output byte-identical for identical inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import timedelta
from typing import Optional

from .core import ReadinessLevel, ToAProfile
from .errors import NoPendingDecision
from .gating import (
    ActionPlan,
    AssessorDecision,
    DEFAULT_FOLLOW_UP,
    Decision,
    apply_decision,
    build_action_plan,
    evaluate_transition,
    resolved_transition,
)
from .journal import AssessmentSnapshot, build_snapshot
from .questionnaire import QuestionnairePack
from .scoring import ResponseSet, assess
from .store import DataStore

# Decisions that come with a remediation/improvement plan attached.
_PLANNED_DECISIONS = (Decision.REMEDIATE, Decision.HOLD)


@dataclass(frozen=True)
class AssessmentOutcome:
    snapshot: AssessmentSnapshot
    profile_after: ToAProfile


def finalize_payload(snapshot: AssessmentSnapshot) -> dict:
    """Response body of a finalized assessment; shared by service and CLI."""
    return {
        "toa_id": snapshot.toa_id,
        "notation": snapshot.vector.notation,
        "vector": snapshot.vector.to_dict(),
        "transition": snapshot.transition.to_dict(),
        "action_plan": snapshot.action_plan.to_dict() if snapshot.action_plan else None,
        "snapshot": {
            "sequence_no": snapshot.sequence_no,
            "prev_hash": snapshot.prev_hash,
            "this_hash": snapshot.this_hash,
        },
    }


def finalize_assessment(
    store: DataStore,
    profile: ToAProfile,
    pack: QuestionnairePack,
    responses: ResponseSet,
    follow_up_interval: timedelta = DEFAULT_FOLLOW_UP,
) -> AssessmentOutcome:
    """Score, gate, journal and apply the automatic profile transition.

    Advance moves the profile up one level, retire moves it to outdated;
    a needs-assessor-decision outcome leaves the profile untouched until
    the decision is applied."""
    vector = assess(pack, profile, responses)
    transition = evaluate_transition(vector, profile.current_level)

    pack_ref = store.add_pack(pack)
    head_seq, head_hash = store.journal.head(profile.id)

    plan: Optional[ActionPlan] = None
    if transition.decision in _PLANNED_DECISIONS:
        plan = build_action_plan(
            vector,
            responses,
            pack,
            follow_up_interval,
            created_from=f"{profile.id}#{head_seq + 1}",
        )

    snapshot = build_snapshot(
        sequence_no=head_seq + 1,
        toa_id=profile.id,
        pack=pack_ref,
        profile=profile,
        responses=responses,
        vector=vector,
        transition=transition,
        prev_hash=head_hash,
        action_plan=plan,
    )
    store.journal.append(snapshot)

    profile_after = profile
    if transition.decision is Decision.ADVANCE and transition.advance_to is not None:
        profile_after = profile.with_level(transition.advance_to)
    elif transition.decision is Decision.RETIRE:
        profile_after = profile.with_level(ReadinessLevel.OUTDATED)
    if profile_after is not profile:
        store.update_profile(profile_after)

    return AssessmentOutcome(snapshot=snapshot, profile_after=profile_after)


def pending_decision_snapshot(store: DataStore, toa_id: str) -> AssessmentSnapshot:
    """Newest snapshot iff it awaits an assessor decision."""
    head_seq, _ = store.journal.head(toa_id)
    if head_seq == 0:
        raise NoPendingDecision(f"ToA {toa_id!r} has no assessments")
    latest = store.journal.read(toa_id, head_seq)
    if latest.transition.decision is not Decision.NEEDS_ASSESSOR_DECISION:
        raise NoPendingDecision(
            f"latest assessment of {toa_id!r} is {latest.transition.decision.value}, "
            f"not awaiting a decision"
        )
    return latest


def apply_assessor_decision(
    store: DataStore, toa_id: str, decision: AssessorDecision
) -> AssessmentOutcome:
    """Resolve a pending hold-or-advance by appending a superseding snapshot
    that carries the decision, then update the profile accordingly."""
    pending = pending_decision_snapshot(store, toa_id)
    profile = store.get_profile(toa_id)
    profile_after = apply_decision(pending.transition, decision, profile)
    transition = resolved_transition(pending.transition, decision, profile.current_level)

    head_seq, head_hash = store.journal.head(toa_id)
    snapshot = build_snapshot(
        sequence_no=head_seq + 1,
        toa_id=toa_id,
        pack=pending.pack,
        profile=pending.profile,
        responses=pending.responses,
        vector=pending.vector,
        transition=transition,
        prev_hash=head_hash,
        assessor_decision=decision,
    )
    store.journal.append(snapshot)
    if profile_after != profile:
        store.update_profile(profile_after)
    return AssessmentOutcome(snapshot=snapshot, profile_after=profile_after)


def decision_payload(outcome: AssessmentOutcome) -> dict:
    snapshot = outcome.snapshot
    assert snapshot.assessor_decision is not None
    return {
        "toa_id": snapshot.toa_id,
        "notation": snapshot.vector.notation,
        "choice": snapshot.assessor_decision.choice.value,
        "current_level": outcome.profile_after.current_level.value,
        "transition": snapshot.transition.to_dict(),
        "snapshot": {
            "sequence_no": snapshot.sequence_no,
            "prev_hash": snapshot.prev_hash,
            "this_hash": snapshot.this_hash,
        },
    }


def audit_toa(store: DataStore, toa_id: str) -> dict:
    """Chain verification plus deterministic replay; the CLI audit verdict."""
    verification = store.journal.verify(toa_id)
    replay_result: dict = {"ok": True, "vectors": 0, "error": None}
    if verification.ok:
        try:
            vectors = store.journal.replay(toa_id, store.resolve_pack_ref)
            replay_result["vectors"] = len(vectors)
        except Exception as exc:  # PackUnresolvable, ReplayDivergence
            replay_result = {"ok": False, "vectors": 0, "error": str(exc)}
    else:
        replay_result = {"ok": False, "vectors": 0, "error": "chain verification failed"}
    clean = verification.ok and replay_result["ok"]
    return {
        "toa_id": toa_id,
        "chain": verification.to_dict(),
        "replay": replay_result,
        "verdict": "clean" if clean else "divergent",
    }
