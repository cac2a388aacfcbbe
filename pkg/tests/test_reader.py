import pytest

from nomoforge import (
    FeatureSpace,
    FeatureSpec,
    OutOfRange,
    OutputVector,
    derive_rules,
    expand_grid,
    match_rule,
    read_tabular,
    read_type1,
    snap_to_grid,
)
from nomoforge.explain import PredictorRanking


def ranking_ab():
    return PredictorRanking(entries=(("A", 0.5), ("B", 0.3)))


class TestReadType1:
    def test_positive_sample(self, ab_space, ab_combos, ab_outputs):
        rules = derive_rules(ab_combos, ab_outputs, ranking_ab(), 0.5)
        trace = read_type1(ab_space, rules, {"A": "1", "B": "0"})
        assert trace.polarity == "positive"
        assert trace.matched_rule.assignments == (("A", "1"),)
        assert trace.steps[0].focus == "A"

    def test_negative_sample(self, ab_space, ab_combos, ab_outputs):
        rules = derive_rules(ab_combos, ab_outputs, ranking_ab(), 0.5)
        trace = read_type1(ab_space, rules, {"A": "0", "B": "0"})
        assert trace.polarity == "negative"
        assert trace.matched_rule.assignments == (("B", "0"), ("A", "0"))
        # no positive-valued predictor: the trace starts with the shortcut
        assert "no predictor" in trace.steps[0].description

    def test_agrees_with_match_rule_on_all_samples(self, ab_space, ab_combos, ab_outputs):
        rules = derive_rules(ab_combos, ab_outputs, ranking_ab(), 0.5)
        for row, y in zip(ab_combos.rows, ab_outputs.values):
            sample = dict(zip(ab_space.names, row))
            trace = read_type1(ab_space, rules, sample)
            rule, polarity = match_rule(rules, sample)
            assert trace.matched_rule == rule
            assert trace.polarity == polarity == ("positive" if y >= 0.5 else "negative")

    def test_rejects_incomplete_sample(self, ab_space, ab_combos, ab_outputs):
        rules = derive_rules(ab_combos, ab_outputs, ranking_ab(), 0.5)
        with pytest.raises(ValueError):
            read_type1(ab_space, rules, {"A": "1"})


class TestReadTabular:
    def test_row_lookup(self, ab_combos, ab_outputs):
        for i, row in enumerate(ab_combos.rows):
            sample = dict(zip(ab_combos.space.names, row))
            trace = read_tabular(ab_combos, ab_outputs, sample)
            assert trace.matched_row == i
            assert trace.output == ab_outputs.values[i]

    def test_numeric_snapping(self, mixed_inputs):
        space, combos, outputs, _ = mixed_inputs
        trace = read_tabular(combos, outputs, {"A": "0", "B": "0", "q": 16.4})
        exact = read_tabular(combos, outputs, {"A": "0", "B": "0", "q": 16.0})
        assert trace.matched_row == exact.matched_row
        assert "delta 0.4" in trace.steps[0].description

    def test_ties_snap_toward_min(self):
        space = FeatureSpace(features=(
            FeatureSpec.categorical("A", ("0", "1")),
            FeatureSpec.numeric("q", 16, 18, 1),
        ))
        assert snap_to_grid(space, 16.5) == (16.0, 0.5)
        assert snap_to_grid(space, 17.5) == (17.0, 0.5)
        assert snap_to_grid(space, 17.6)[0] == 18.0

    def test_out_of_range(self, mixed_inputs):
        space, combos, outputs, _ = mixed_inputs
        with pytest.raises(OutOfRange):
            read_tabular(combos, outputs, {"A": "0", "B": "0", "q": 99.0})

    def test_unknown_level(self, ab_combos, ab_outputs):
        with pytest.raises(ValueError):
            read_tabular(ab_combos, ab_outputs, {"A": "2", "B": "0"})

    def test_json_round_trip_shape(self, ab_combos, ab_outputs):
        trace = read_tabular(ab_combos, ab_outputs, {"A": "0", "B": "1"})
        d = trace.to_json_dict()
        assert d["matched_row"] == 1
        assert d["output"] == ab_outputs.values[1]
        assert d["steps"] and all("description" in s for s in d["steps"])
