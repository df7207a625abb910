"""Core model: tri-state algebra, notation, profiles, thresholds."""

import itertools

import pytest

from smart_assess.core import (
    CHARACTERISTIC_SUBMETRICS,
    MaturityState,
    PROGRESSION,
    QUALITY_AXES,
    QualityAxis,
    QualityCharacteristic,
    QualitySubmetric,
    ReadinessLevel,
    ThresholdConfig,
    axis_from_dict,
    axis_to_dict,
    min_state,
    parse_notation,
    render_notation,
)
from smart_assess.errors import InvalidThresholds, ProfileInvalid, UnknownNotation

from helpers import make_profile

STATES = list(MaturityState)
LEVELS = list(ReadinessLevel)


class TestMinState:
    def test_lowest_wins(self):
        assert min_state(MaturityState.NEGATIVE, MaturityState.NEUTRAL) is MaturityState.NEGATIVE
        assert min_state(MaturityState.POSITIVE, MaturityState.POSITIVE) is MaturityState.POSITIVE
        assert min_state(MaturityState.NEUTRAL, MaturityState.POSITIVE) is MaturityState.NEUTRAL

    def test_meet_semilattice_exhaustive(self):
        for a, b, c in itertools.product(STATES, repeat=3):
            assert min_state(a, min_state(b, c)) is min_state(min_state(a, b), c)
        for a, b in itertools.product(STATES, repeat=2):
            assert min_state(a, b) is min_state(b, a)
        for a in STATES:
            assert min_state(a, a) is a

    def test_total_order(self):
        ranks = [MaturityState.NEGATIVE.rank, MaturityState.NEUTRAL.rank,
                 MaturityState.POSITIVE.rank]
        assert ranks == sorted(ranks) and len(set(ranks)) == 3


class TestNotation:
    def test_known_notations(self):
        assert render_notation(ReadinessLevel.IDEA, MaturityState.POSITIVE) == "I+"
        assert render_notation(ReadinessLevel.RESEARCH, MaturityState.NEUTRAL) == "R0"
        assert render_notation(ReadinessLevel.OUTDATED, MaturityState.NEGATIVE) == "X-"

    def test_injective_over_18_pairs(self):
        rendered = {render_notation(lv, st) for lv in LEVELS for st in STATES}
        assert len(rendered) == 18

    def test_round_trip(self):
        for level in LEVELS:
            for state in STATES:
                assert parse_notation(render_notation(level, state)) == (level, state)

    @pytest.mark.parametrize("bad", ["", "I", "I++", "Z+", "I?"])
    def test_parse_rejects(self, bad):
        with pytest.raises(UnknownNotation):
            parse_notation(bad)


class TestReadinessLevel:
    def test_progression_order(self):
        assert [l.value for l in PROGRESSION] == [
            "idea", "research", "concept", "trial", "product"
        ]
        assert [l.ordinal for l in PROGRESSION] == [0, 1, 2, 3, 4]

    def test_next_level_chain(self):
        chain = []
        level = ReadinessLevel.IDEA
        while level is not None:
            chain.append(level)
            level = level.next_level()
        assert chain == list(PROGRESSION)

    def test_outdated_is_sink(self):
        assert ReadinessLevel.OUTDATED.next_level() is None
        assert not ReadinessLevel.OUTDATED.in_progression
        with pytest.raises(ValueError):
            ReadinessLevel.OUTDATED.ordinal


class TestQualityAxes:
    def test_nine_valid_pairs(self):
        assert len(QUALITY_AXES) == 9
        assert sum(len(subs) for subs in CHARACTERISTIC_SUBMETRICS.values()) == 9

    def test_wrong_pairing_rejected(self):
        with pytest.raises(ValueError):
            QualityAxis(QualityCharacteristic.SECURITY, QualitySubmetric.RELIABILITY)

    def test_axis_dict_round_trip(self):
        for axis in (*QUALITY_AXES, *PROGRESSION):
            assert axis_from_dict(axis_to_dict(axis)) == axis


class TestToAProfile:
    def test_defaults_to_idea(self):
        assert make_profile().current_level is ReadinessLevel.IDEA

    @pytest.mark.parametrize("field", ["purpose", "environment"])
    @pytest.mark.parametrize("value", ["", "   "])
    def test_rejects_blank_purpose_and_environment(self, field, value):
        kwargs = dict(
            id="t1", name="n", purpose="p", environment="e",
            software_type=make_profile().software_type,
            dependency=make_profile().dependency,
            security_criticality=make_profile().security_criticality,
        )
        kwargs[field] = value
        with pytest.raises(ProfileInvalid):
            type(make_profile())(**kwargs)

    def test_rejects_unsafe_id(self):
        with pytest.raises(ProfileInvalid):
            make_profile(toa_id="../escape")

    def test_with_level_is_pure(self):
        base = make_profile()
        advanced = base.with_level(ReadinessLevel.TRIAL)
        assert base.current_level is ReadinessLevel.IDEA
        assert advanced.current_level is ReadinessLevel.TRIAL
        assert advanced.id == base.id

    def test_serialization_keys_are_snake_case(self):
        data = make_profile().to_dict()
        assert all(key == key.lower() for key in data)
        assert data["software_type"] == "newly_developed"


class TestThresholdConfig:
    def test_defaults_valid(self):
        ThresholdConfig().require_valid()

    def test_out_of_order_reported_not_raised(self):
        config = ThresholdConfig(80.0, 50.0)
        assert any("out of order" in p for p in config.problems())
        with pytest.raises(InvalidThresholds):
            config.require_valid()

    @pytest.mark.parametrize("neg,pos", [(-1, 50), (0, 101), (50, 50)])
    def test_invalid_ranges(self, neg, pos):
        assert ThresholdConfig(neg, pos).problems()
