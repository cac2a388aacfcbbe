import pytest

from nomoforge import (
    FeatureSpace,
    FeatureSpec,
    MissingExplainability,
    NomogramKind,
    OutputVector,
    derive_rules,
    expand_grid,
    layout_tabular,
    layout_type1,
    max_explainability,
    tree_order,
)
from nomoforge.csvio import load_inputs
from nomoforge.explain import PredictorRanking
from nomoforge.layout import CYAN, RED, Marker, PolyLine, ReferenceLine, Text, Tile
from nomoforge.rules import RuleList


def ranking_ab():
    return PredictorRanking(entries=(("A", 0.5), ("B", 0.3)))


class TestTreeOrder:
    def test_two_features(self, ab_combos):
        perm = tree_order(ab_combos, ["A", "B"])
        assert [ab_combos.rows[i] for i in perm] == [
            ("1", "1"), ("1", "0"), ("0", "1"), ("0", "0"),
        ]

    def test_single_feature(self):
        space = FeatureSpace(features=(FeatureSpec.categorical("A", ("0", "1")),))
        combos = expand_grid(space)
        perm = tree_order(combos, ["A"])
        assert [combos.rows[i] for i in perm] == [("1",), ("0",)]

    def test_reversed_ranking(self, ab_combos):
        perm = tree_order(ab_combos, ["B", "A"])
        assert [ab_combos.rows[i] for i in perm] == [
            ("1", "1"), ("0", "1"), ("1", "0"), ("0", "0"),
        ]

    def test_is_permutation(self, ab_combos):
        perm = tree_order(ab_combos, ["A", "B"])
        assert sorted(perm) == list(range(len(ab_combos.rows)))


class TestLayoutType1:
    def test_hand_trace_tiles(self, ab_space, ab_combos, ab_outputs):
        rules = derive_rules(ab_combos, ab_outputs, ranking_ab(), 0.5)
        layout = layout_type1(ab_space, rules)
        positive, negative = layout.panels
        assert positive.role == "positive_tile"
        assert negative.role == "negative_tile"
        # rows: A above B (descending score)
        assert positive.y_ticks == ((0.0, "A"), (1.0, "B"))
        pos_tiles = [e for e in positive.elements if isinstance(e, Tile)]
        assert (0, 0, CYAN) == (pos_tiles[0].col, pos_tiles[0].row, pos_tiles[0].color)  # A=1
        assert {(t.col, t.row, t.color) for t in pos_tiles[1:]} == {
            (1, 0, RED),   # A=0
            (1, 1, CYAN),  # B=1
        }
        neg_tiles = [e for e in negative.elements if isinstance(e, Tile)]
        assert {(t.col, t.row, t.color) for t in neg_tiles} == {(0, 1, RED), (0, 0, RED)}
        # the single negative column belongs to iteration 2
        assert negative.x_ticks == ((0.5, "2"),)

    def test_empty_panel_placeholder(self, ab_space, ab_combos):
        outputs = OutputVector(kind="probability", values=(0.9, 0.9, 0.9, 0.9))
        rules = derive_rules(ab_combos, outputs, ranking_ab(), 0.5)
        layout = layout_type1(ab_space, rules)
        negative = layout.panels[1]
        assert [type(e) for e in negative.elements] == [Text]
        assert "no negative" in negative.elements[0].text

    def test_single_feature_columns(self):
        space = FeatureSpace(features=(FeatureSpec.categorical("A", ("0", "1")),))
        combos = expand_grid(space)
        outputs = OutputVector(kind="probability", values=(0.2, 0.9))
        ranking = PredictorRanking(entries=(("A", 1.0),))
        rules = derive_rules(combos, outputs, ranking, 0.5)
        layout = layout_type1(space, rules)
        for panel in layout.panels:
            tiles = [e for e in panel.elements if isinstance(e, Tile)]
            assert len(tiles) == 1 and tiles[0].col == 0
            assert panel.x_ticks == ((0.5, "1"),)

    def test_two_panels_always(self, ab_space, ab_combos, ab_outputs):
        rules = derive_rules(ab_combos, ab_outputs, ranking_ab(), 0.5)
        layout = layout_type1(ab_space, rules)
        assert layout.kind is NomogramKind.CAT_BIN
        assert len(layout.panels) == 2


class TestLayoutTabular:
    def test_cat_bin_prob_structure(self, ab_combos, ab_outputs, ab_shap):
        ranking = max_explainability(ab_shap)
        layout = layout_tabular(
            NomogramKind.CAT_BIN_PROB, ab_combos, ab_outputs,
            shap=ab_shap, ranking=ranking, threshold=0.5,
        )
        assert [p.role for p in layout.panels] == ["tile", "output", "explainability"]
        assert layout.n_rows == len(ab_combos.rows)
        output = layout.panels[1]
        markers = [e for e in output.elements if isinstance(e, Marker)]
        reflines = [e for e in output.elements if isinstance(e, ReferenceLine)]
        assert len(markers) == 4
        assert len(reflines) == 1 and reflines[0].x == 0.5

    def test_cat_est_has_no_threshold_line(self, ab_combos, ab_shap):
        outputs = OutputVector(kind="estimate", values=(2.1, 3.4, 3.9, 4.6))
        ranking = max_explainability(ab_shap)
        layout = layout_tabular(
            NomogramKind.CAT_EST, ab_combos, outputs, shap=ab_shap, ranking=ranking,
        )
        assert not any(
            isinstance(e, ReferenceLine) for p in layout.panels for e in p.elements
        )

    def test_mixed_polylines_per_categorical_combo(self):
        space = FeatureSpace(features=(
            FeatureSpec.categorical("A", ("0", "1")),
            FeatureSpec.numeric("q", 16, 18, 1),
        ))
        combos = expand_grid(space)
        outputs = OutputVector(kind="probability", values=(0.1, 0.2, 0.3, 0.6, 0.7, 0.8))
        shap = None
        ranking = PredictorRanking(entries=(("A", 1.0), ("q", 0.5)))
        layout = layout_tabular(
            NomogramKind.MIXED_BIN_PROB, combos, outputs,
            shap=shap, ranking=ranking, threshold=0.5,
        )
        assert layout.n_rows == 2  # categorical sub-product only
        output = layout.panels[1]
        polys = [e for e in output.elements if isinstance(e, PolyLine)]
        assert len(polys) == 2
        assert all(len(p.points) == 3 for p in polys)
        # gradient marker per grid point per row
        assert sum(isinstance(e, Marker) for e in output.elements) == 6

    def test_two_panels_without_shap(self, ab_combos, ab_outputs):
        layout = layout_tabular(
            NomogramKind.CAT_BIN_PROB, ab_combos, ab_outputs,
            ranking=ranking_ab(), threshold=0.5,
        )
        assert [p.role for p in layout.panels] == ["tile", "output"]

    def test_missing_explainability(self, ab_combos, ab_outputs):
        with pytest.raises(MissingExplainability):
            layout_tabular(
                NomogramKind.CAT_BIN_PROB, ab_combos, ab_outputs,
                ranking=ranking_ab(), threshold=0.5, include_explainability=True,
            )

    def test_tile_colors_follow_level_polarity(self, ab_combos, ab_outputs, ab_shap):
        ranking = max_explainability(ab_shap)
        layout = layout_tabular(
            NomogramKind.CAT_BIN_PROB, ab_combos, ab_outputs,
            shap=ab_shap, ranking=ranking, threshold=0.5,
        )
        tile_panel = layout.panels[0]
        ranked = [label for _, label in tile_panel.x_ticks]
        perm = tree_order(ab_combos, ranked)
        for tile in tile_panel.elements:
            row = ab_combos.rows[perm[tile.row]]
            level = row[ab_combos.space.index(ranked[tile.col])]
            assert tile.color == (CYAN if level == "1" else RED)

    def test_rows_share_y_across_panels(self, mixed_inputs):
        space, combos, outputs, shap = mixed_inputs
        ranking = max_explainability(shap)
        layout = layout_tabular(
            NomogramKind.MIXED_BIN_PROB, combos, outputs,
            shap=shap, ranking=ranking, threshold=0.5,
        )
        for panel in layout.panels:
            for e in panel.elements:
                rows = [e.row] if hasattr(e, "row") else [r for _, r in getattr(e, "points", [])]
                for r in rows:
                    assert 0 <= r < layout.n_rows


class TestRowCounts:
    def test_full_rows_for_categorical_kinds(self, ab_combos, ab_outputs, ab_shap):
        ranking = max_explainability(ab_shap)
        for kind, out in (
            (NomogramKind.CAT_BIN_PROB, ab_outputs),
            (NomogramKind.CAT_EST, OutputVector(kind="estimate", values=(1.0, 2.0, 3.0, 4.0))),
        ):
            layout = layout_tabular(
                kind, ab_combos, out, shap=ab_shap, ranking=ranking,
                threshold=0.5 if kind.has_threshold_line else None,
            )
            assert layout.n_rows == 4

    def test_categorical_subproduct_for_mixed(self, mixed_inputs):
        space, combos, outputs, shap = mixed_inputs
        ranking = max_explainability(shap)
        layout = layout_tabular(
            NomogramKind.MIXED_BIN_PROB, combos, outputs,
            shap=shap, ranking=ranking, threshold=0.5,
        )
        n_cat_combos = 1
        for f in space.categorical:
            n_cat_combos *= len(f.levels)
        assert layout.n_rows == n_cat_combos == 4
