"""Promotion gates: decision table, blocking axes, action plans, decisions.

The decision-table oracle below is written directly from the gate rules as
independent nested conditionals; the exhaustive equivalence sweep lives in
the acceptance suite."""

import itertools
from datetime import timedelta

import pytest

from smart_assess.core import (
    MaturityState,
    QualityAxis,
    QualityCharacteristic,
    QualitySubmetric,
    ReadinessLevel,
)
from smart_assess.errors import (
    EmptyJustification,
    LevelMismatch,
    NoPendingDecision,
    NothingToRemediate,
)
from smart_assess.gating import (
    AssessorDecision,
    Decision,
    DecisionChoice,
    DECISION_RANK,
    apply_decision,
    blocking_axes,
    build_action_plan,
    evaluate_transition,
    plan_to_csv,
    resolved_transition,
)
from smart_assess.scoring import Answer

from helpers import TS, build_responses, make_profile, make_vector, minimal_pack

NEG, NEU, POS = MaturityState.NEGATIVE, MaturityState.NEUTRAL, MaturityState.POSITIVE
CHARS = list(QualityCharacteristic)

SEC_TA = QualityAxis(QualityCharacteristic.SECURITY, QualitySubmetric.TRUST_ASSUMPTIONS)


def oracle_decision(level: ReadinessLevel, r: MaturityState, q: tuple) -> Decision:
    """Independent restatement of the gate rules."""
    any_q_negative = NEG in q
    all_q_at_least_neutral = all(s.rank >= NEU.rank for s in q)
    all_q_positive = all(s is POS for s in q)
    if level is ReadinessLevel.OUTDATED:
        return Decision.MAINTAIN
    if level in (ReadinessLevel.IDEA, ReadinessLevel.RESEARCH):
        if r is POS:
            return Decision.ADVANCE
        if r is NEU:
            return Decision.NEEDS_ASSESSOR_DECISION
        return Decision.REMEDIATE
    if level is ReadinessLevel.CONCEPT:
        if r is NEG or any_q_negative:
            return Decision.REMEDIATE
        if r is POS and all_q_at_least_neutral:
            return Decision.ADVANCE
        return Decision.NEEDS_ASSESSOR_DECISION
    if level is ReadinessLevel.TRIAL:
        if r is NEG or any_q_negative:
            return Decision.REMEDIATE
        if all_q_positive:
            return Decision.ADVANCE if r is POS else Decision.NEEDS_ASSESSOR_DECISION
        return Decision.HOLD
    # product
    if r is NEG or any_q_negative:
        return Decision.RETIRE
    return Decision.MAINTAIN


def vector_for(level, r, q_states):
    return make_vector(level, r, dict(zip(CHARS, q_states)))


class TestDecisionTable:
    def test_idea_gate_ignores_quality(self):
        result = evaluate_transition(
            vector_for(ReadinessLevel.IDEA, POS, (NEG, NEG, NEG, NEG)), ReadinessLevel.IDEA
        )
        assert result.decision is Decision.ADVANCE
        assert result.advance_to is ReadinessLevel.RESEARCH

    def test_trial_gate_hard_constraint(self):
        result = evaluate_transition(
            vector_for(ReadinessLevel.TRIAL, POS, (POS, POS, NEU, POS)), ReadinessLevel.TRIAL
        )
        assert result.decision is Decision.HOLD

    def test_product_negative_retires(self):
        result = evaluate_transition(
            vector_for(ReadinessLevel.PRODUCT, POS, (POS, POS, NEG, POS)),
            ReadinessLevel.PRODUCT,
        )
        assert result.decision is Decision.RETIRE

    def test_neutral_readiness_defers_to_assessor(self):
        result = evaluate_transition(
            vector_for(ReadinessLevel.RESEARCH, NEU, (NEG, NEG, NEG, NEG)),
            ReadinessLevel.RESEARCH,
        )
        assert result.decision is Decision.NEEDS_ASSESSOR_DECISION
        assert result.options == ("hold", "advance")

    def test_concept_requires_quality_at_least_neutral(self):
        blocked = evaluate_transition(
            vector_for(ReadinessLevel.CONCEPT, POS, (POS, NEG, POS, POS)),
            ReadinessLevel.CONCEPT,
        )
        assert blocked.decision is Decision.REMEDIATE
        ok = evaluate_transition(
            vector_for(ReadinessLevel.CONCEPT, POS, (NEU, NEU, NEU, NEU)),
            ReadinessLevel.CONCEPT,
        )
        assert ok.decision is Decision.ADVANCE
        assert ok.advance_to is ReadinessLevel.TRIAL

    def test_trial_all_positive_neutral_readiness_is_assessor_call(self):
        result = evaluate_transition(
            vector_for(ReadinessLevel.TRIAL, NEU, (POS, POS, POS, POS)), ReadinessLevel.TRIAL
        )
        assert result.decision is Decision.NEEDS_ASSESSOR_DECISION

    def test_outdated_always_maintains(self):
        for r in MaturityState:
            result = evaluate_transition(
                vector_for(ReadinessLevel.OUTDATED, r, (NEG, NEG, NEG, NEG)),
                ReadinessLevel.OUTDATED,
            )
            assert result.decision is Decision.MAINTAIN

    def test_level_mismatch(self):
        with pytest.raises(LevelMismatch):
            evaluate_transition(
                vector_for(ReadinessLevel.IDEA, POS, (POS, POS, POS, POS)),
                ReadinessLevel.TRIAL,
            )

    def test_advance_targets_exactly_next_level(self):
        for level in (ReadinessLevel.IDEA, ReadinessLevel.RESEARCH,
                      ReadinessLevel.CONCEPT, ReadinessLevel.TRIAL):
            result = evaluate_transition(
                vector_for(level, POS, (POS, POS, POS, POS)), level
            )
            assert result.decision is Decision.ADVANCE
            assert result.advance_to is level.next_level()

    def test_spot_equivalence_with_oracle(self):
        for level in (ReadinessLevel.IDEA, ReadinessLevel.CONCEPT, ReadinessLevel.TRIAL,
                      ReadinessLevel.PRODUCT):
            for r in MaturityState:
                for q in itertools.product(MaturityState, repeat=4):
                    result = evaluate_transition(vector_for(level, r, q), level)
                    assert result.decision is oracle_decision(level, r, q), (level, r, q)
        # only spot totality here; the full 1215-case sweep is an acceptance test

    def test_single_raise_never_demotes_decision(self):
        raises = {NEG: NEU, NEU: POS}
        for level in (ReadinessLevel.CONCEPT, ReadinessLevel.TRIAL, ReadinessLevel.PRODUCT):
            for r in MaturityState:
                for q in itertools.product(MaturityState, repeat=4):
                    before = DECISION_RANK[
                        evaluate_transition(vector_for(level, r, q), level).decision
                    ]
                    for i, state in enumerate(q):
                        if state in raises:
                            q2 = q[:i] + (raises[state],) + q[i + 1:]
                            after = DECISION_RANK[
                                evaluate_transition(vector_for(level, r, q2), level).decision
                            ]
                            assert after >= before


class TestBlockingAxes:
    def test_submetric_level_blocking(self):
        vector = make_vector(
            ReadinessLevel.TRIAL,
            POS,
            {c: POS for c in CHARS},
            submetric_overrides={QualitySubmetric.TRUST_ASSUMPTIONS: NEU},
        )
        blocked = blocking_axes(vector)
        assert SEC_TA in blocked
        assert all(
            not (isinstance(a, QualityAxis) and a.submetric is QualitySubmetric.PROTECTION_GOAL)
            for a in blocked
        )

    def test_quality_not_blocking_before_concept(self):
        vector = vector_for(ReadinessLevel.IDEA, NEG, (NEG, NEG, NEG, NEG))
        blocked = blocking_axes(vector)
        assert blocked == (ReadinessLevel.IDEA,)

    def test_nothing_blocked_at_full_marks(self):
        vector = vector_for(ReadinessLevel.TRIAL, POS, (POS, POS, POS, POS))
        assert blocking_axes(vector) == ()


class TestActionPlan:
    def _assessment(self, level=ReadinessLevel.IDEA, per_axis=3, answers=None):
        from smart_assess.scoring import assess

        pack = minimal_pack(per_axis=per_axis)
        profile = make_profile(level=level)
        responses = build_responses(pack, profile, answers or {})
        return pack, profile, responses, assess(pack, profile, responses)

    def test_two_no_answers_two_items(self):
        pack = minimal_pack(per_axis=3)
        profile = make_profile()
        readiness = pack.questions_on_axis(ReadinessLevel.IDEA)
        answers = {readiness[0].id: Answer.NO, readiness[2].id: Answer.NO}
        from smart_assess.scoring import assess

        responses = build_responses(pack, profile, answers)
        vector = assess(pack, profile, responses)
        plan = build_action_plan(vector, responses, pack, timedelta(days=90), "t1#1")
        cited = [item.question_id for item in plan.items]
        assert cited == [readiness[0].id, readiness[2].id]
        assert all(item.remediation_hint for item in plan.items)
        assert plan.follow_up_by == (TS + timedelta(days=90)).date()
        assert plan.created_from == "t1#1"

    def test_all_axes_at_target_nothing_to_remediate(self):
        pack, profile, responses, vector = self._assessment()
        with pytest.raises(NothingToRemediate):
            build_action_plan(vector, responses, pack, timedelta(days=90), "t1#1")

    def test_trial_neutral_trust_yields_single_item(self):
        pack = minimal_pack(per_axis=3)
        profile = make_profile(level=ReadinessLevel.TRIAL)
        trust = pack.questions_on_axis(SEC_TA)
        answers = {trust[0].id: Answer.NO}  # 2/3 = 66.7 -> neutral
        from smart_assess.scoring import assess

        responses = build_responses(pack, profile, answers)
        vector = assess(pack, profile, responses)
        assert vector.quality[QualityCharacteristic.SECURITY].state is NEU
        plan = build_action_plan(vector, responses, pack, timedelta(days=30), "t1#1")
        assert len(plan.items) == 1
        assert plan.items[0].question_id == trust[0].id
        assert plan.items[0].target_axis == SEC_TA

    def test_csv_export(self):
        pack = minimal_pack(per_axis=2)
        profile = make_profile()
        readiness = pack.questions_on_axis(ReadinessLevel.IDEA)
        answers = {readiness[0].id: Answer.NO}
        from smart_assess.scoring import assess

        responses = build_responses(pack, profile, answers)
        vector = assess(pack, profile, responses)
        plan = build_action_plan(vector, responses, pack, timedelta(days=90), "t1#7")
        csv_text = plan_to_csv(plan)
        lines = csv_text.strip().splitlines()
        assert lines[0].startswith("question_id,")
        assert len(lines) == 1 + len(plan.items)
        assert "t1#7" in lines[1]


class TestApplyDecision:
    def _pending(self, level=ReadinessLevel.RESEARCH):
        return evaluate_transition(
            vector_for(level, NEU, (POS, POS, POS, POS)), level
        )

    def _decision(self, choice, justification="beta lab ready"):
        return AssessorDecision(
            choice=choice, justification=justification, assessor="bob", decided_at=TS
        )

    def test_advance_from_research_reaches_concept(self):
        profile = make_profile(level=ReadinessLevel.RESEARCH)
        updated = apply_decision(self._pending(), self._decision(DecisionChoice.ADVANCE), profile)
        assert updated.current_level is ReadinessLevel.CONCEPT

    def test_hold_is_identity(self):
        profile = make_profile(level=ReadinessLevel.CONCEPT)
        updated = apply_decision(
            self._pending(ReadinessLevel.CONCEPT),
            self._decision(DecisionChoice.HOLD, "risk gaps remain"),
            profile,
        )
        assert updated == profile

    def test_apply_on_advance_result_rejected(self):
        advance = evaluate_transition(
            vector_for(ReadinessLevel.IDEA, POS, (POS, POS, POS, POS)), ReadinessLevel.IDEA
        )
        with pytest.raises(NoPendingDecision):
            apply_decision(advance, self._decision(DecisionChoice.ADVANCE), make_profile())

    def test_justification_mandatory(self):
        with pytest.raises(EmptyJustification):
            AssessorDecision(
                choice=DecisionChoice.ADVANCE, justification="  ", assessor="bob", decided_at=TS
            )

    def test_resolved_transition_records_choice(self):
        pending = self._pending()
        resolved = resolved_transition(
            pending, self._decision(DecisionChoice.ADVANCE), ReadinessLevel.RESEARCH
        )
        assert resolved.decision is Decision.ADVANCE
        assert resolved.advance_to is ReadinessLevel.CONCEPT
        held = resolved_transition(
            pending, self._decision(DecisionChoice.HOLD), ReadinessLevel.RESEARCH
        )
        assert held.decision is Decision.HOLD and held.advance_to is None
