"""Renderer-independent scene descriptions for the five nomogram kinds.

A layout is a list of panels; panel elements carry coordinates in
panel-local units. Tile panels use column indices on x, all panels use
row indices on y (row 0 at the top), and continuous panels map x through
their declared domain. The SVG emitter is the only consumer that turns
these units into pixels, which keeps layouts easy to assert on in tests
and easy to ship to the browser as JSON.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import MissingExplainability, UnsupportedKind
from .explain import PredictorRanking, rank_predictors
from .rules import Rule, RuleList
from .tabular import (
    PROBABILITY,
    CombinationTable,
    ExplainabilityTable,
    FeatureSpace,
    NomogramKind,
    OutputVector,
)

# Two-class palette: negative level red, positive level cyan.
RED = "#F8766D"
CYAN = "#00BFC4"

MARKER_COLOR = "#4D4D4D"
LINE_COLOR = "#9E9E9E"

# Per-predictor colors for the explainability panel, cycled by position.
PREDICTOR_PALETTE = (
    "#1F77B4", "#FF7F0E", "#2CA02C", "#D62728", "#9467BD",
    "#8C564B", "#E377C2", "#7F7F7F", "#BCBD22", "#17BECF",
)

# Endpoints of the numeric-value marker gradient.
GRADIENT_LO = "#DEEBF7"
GRADIENT_HI = "#08306B"

CANVAS_WIDTH = 960.0
ROW_HEIGHT = 24.0
_TOP_MARGIN = 48.0
_BOTTOM_MARGIN = 86.0


@dataclass(frozen=True)
class Tile:
    col: int
    row: int
    color: str

    def to_json_dict(self):
        return {"type": "tile", "col": self.col, "row": self.row, "color": self.color}


@dataclass(frozen=True)
class Marker:
    x: float
    row: float
    color: str

    def to_json_dict(self):
        return {"type": "marker", "x": self.x, "row": self.row, "color": self.color}


@dataclass(frozen=True)
class PolyLine:
    points: tuple[tuple[float, float], ...]  # (x, row) pairs
    color: str

    def to_json_dict(self):
        return {"type": "polyline", "points": [[x, r] for x, r in self.points], "color": self.color}


@dataclass(frozen=True)
class ReferenceLine:
    x: float

    def to_json_dict(self):
        return {"type": "reference_line", "x": self.x}


@dataclass(frozen=True)
class Text:
    x: float
    row: float
    text: str

    def to_json_dict(self):
        return {"type": "text", "x": self.x, "row": self.row, "text": self.text}


Element = Union[Tile, Marker, PolyLine, ReferenceLine, Text]

# Panel roles.
TILE = "tile"
OUTPUT = "output"
EXPLAINABILITY = "explainability"
POSITIVE_TILE = "positive_tile"
NEGATIVE_TILE = "negative_tile"


@dataclass(frozen=True)
class Panel:
    role: str
    title: str
    x_label: str
    x_domain: tuple[float, float]
    n_cols: int  # >0: tile panel indexed by column; 0: continuous x
    x_ticks: tuple[tuple[float, str], ...] = ()
    y_ticks: tuple[tuple[float, str], ...] = ()
    elements: tuple[Element, ...] = ()

    def __post_init__(self):
        if self.role in (TILE, POSITIVE_TILE, NEGATIVE_TILE):
            bad = [e for e in self.elements if not isinstance(e, (Tile, Text))]
            if bad:
                raise ValueError(f"tile panel {self.title!r} holds non-tile elements: {bad[:1]}")
        if any(isinstance(e, ReferenceLine) for e in self.elements) and self.role != OUTPUT:
            raise ValueError("reference lines belong to output panels only")

    def to_json_dict(self):
        return {
            "role": self.role,
            "title": self.title,
            "x_label": self.x_label,
            "x_domain": list(self.x_domain),
            "n_cols": self.n_cols,
            "x_ticks": [[v, label] for v, label in self.x_ticks],
            "y_ticks": [[v, label] for v, label in self.y_ticks],
            "elements": [e.to_json_dict() for e in self.elements],
        }


@dataclass(frozen=True)
class NomogramLayout:
    kind: NomogramKind
    title: str
    panels: tuple[Panel, ...]
    n_rows: int
    legend: tuple[tuple[str, str], ...] = ()
    # combination index -> display row, for the tabular kinds (None for kind 1);
    # lets clients map a matched combination back onto the chart
    row_map: Optional[tuple[int, ...]] = None
    width: float = CANVAS_WIDTH
    height: float = field(default=0.0)

    def __post_init__(self):
        if self.height == 0.0:
            object.__setattr__(
                self, "height",
                _TOP_MARGIN + max(self.n_rows, 1) * ROW_HEIGHT + _BOTTOM_MARGIN,
            )
        if self.kind is NomogramKind.CAT_BIN:
            if len(self.panels) != 2:
                raise ValueError("the rule nomogram has exactly two panels")
        elif not 2 <= len(self.panels) <= 3:
            raise ValueError("tabular nomograms have two or three panels")

    def to_json_dict(self):
        return {
            "kind": self.kind.value,
            "title": self.title,
            "panels": [p.to_json_dict() for p in self.panels],
            "n_rows": self.n_rows,
            "legend": [[label, color] for label, color in self.legend],
            "row_map": list(self.row_map) if self.row_map is not None else None,
            "width": self.width,
            "height": self.height,
        }


def _level_color(space: FeatureSpace, name: str, level: str) -> str:
    return CYAN if level == space.feature(name).positive_level else RED


def _gradient_color(t: float) -> str:
    """Linear interpolation between the gradient endpoints, t in [0, 1]."""
    lo = [int(GRADIENT_LO[i:i + 2], 16) for i in (1, 3, 5)]
    hi = [int(GRADIENT_HI[i:i + 2], 16) for i in (1, 3, 5)]
    rgb = [round(a + (b - a) * t) for a, b in zip(lo, hi)]
    return "#{:02X}{:02X}{:02X}".format(*rgb)


def _padded(values) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if hi == lo:
        return lo - 0.5, hi + 0.5
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _continuous_ticks(lo: float, hi: float) -> tuple[tuple[float, str], ...]:
    mid = (lo + hi) / 2.0
    return ((lo, f"{lo:.2f}"), (mid, f"{mid:.2f}"), (hi, f"{hi:.2f}"))


def tree_order(combos: CombinationTable, ranked_features: list[str]) -> list[int]:
    """Row permutation: lexicographic by the ranked columns, positive first.

    Adjacent rows then share the longest possible prefixes, which is what
    makes the tile panel read like a tree.
    """
    space = combos.space
    cols = []
    for name in ranked_features:
        f = space.feature(name)
        if f.is_numeric:
            raise UnsupportedKind("tree ordering is defined over categorical columns only")
        cols.append((space.index(name), f.positive_level))

    def key(i: int):
        row = combos.rows[i]
        return tuple(0 if row[j] == pos else 1 for j, pos in cols)

    return sorted(range(len(combos.rows)), key=key)


def _iteration_ticks(rules: tuple[Rule, ...]) -> tuple[tuple[float, str], ...]:
    ticks = []
    for iteration, group in itertools.groupby(enumerate(rules), key=lambda ir: ir[1].iteration):
        cols = [i for i, _ in group]
        ticks.append(((cols[0] + cols[-1] + 1) / 2.0, str(iteration)))
    return tuple(ticks)


def layout_type1(
    space: FeatureSpace,
    rules: RuleList,
    ranking: Optional[PredictorRanking] = None,
) -> NomogramLayout:
    """Two tile panels (positive left, negative right), one column per rule.

    Columns group by iteration left-to-right; rows are the predictors from
    highest to lowest score. A tile appears where a rule assigns a
    predictor, cyan for its positive level and red for its negative one.
    """
    ranking = ranking if ranking is not None else rules.ranking
    predictors = rank_predictors(ranking, descending=True)
    row_of = {name: i for i, name in enumerate(predictors)}
    y_ticks = tuple((float(i), name) for i, name in enumerate(predictors))

    def tile_panel(role: str, title: str, panel_rules: tuple[Rule, ...], empty_note: str) -> Panel:
        if not panel_rules:
            return Panel(
                role=role, title=title, x_label="iteration",
                x_domain=(0.0, 1.0), n_cols=1, y_ticks=y_ticks,
                elements=(Text(x=0.5, row=(len(predictors) - 1) / 2.0, text=empty_note),),
            )
        elements = []
        for col, rule in enumerate(panel_rules):
            for name, level in rule.assignments:
                elements.append(Tile(col=col, row=row_of[name], color=_level_color(space, name, level)))
        return Panel(
            role=role, title=title, x_label="iteration",
            x_domain=(0.0, float(len(panel_rules))), n_cols=len(panel_rules),
            x_ticks=_iteration_ticks(panel_rules), y_ticks=y_ticks,
            elements=tuple(elements),
        )

    panels = (
        tile_panel(POSITIVE_TILE, "positive prediction", rules.positive, "no positive rules"),
        tile_panel(NEGATIVE_TILE, "negative prediction", rules.negative, "no negative rules"),
    )
    return NomogramLayout(
        kind=NomogramKind.CAT_BIN,
        title="rule nomogram (binary outcome)",
        panels=panels,
        n_rows=len(predictors),
        legend=(("positive value", CYAN), ("negative value", RED)),
    )


def layout_tabular(
    kind: NomogramKind,
    combos: CombinationTable,
    outputs: OutputVector,
    shap: Optional[ExplainabilityTable] = None,
    ranking: Optional[PredictorRanking] = None,
    threshold: Optional[float] = None,
    include_explainability: Optional[bool] = None,
) -> NomogramLayout:
    """Tile panel + output panel, plus an explainability panel when given.

    Rows are full combinations for the all-categorical kinds; for the
    mixed kinds each row is one categorical combination whose outputs over
    the numeric grid are drawn as a polyline with gradient markers.
    """
    if kind is NomogramKind.CAT_BIN:
        raise UnsupportedKind("the rule nomogram is built by layout_type1")
    if include_explainability is None:
        include_explainability = shap is not None
    if include_explainability and shap is None:
        raise MissingExplainability("an explainability panel was requested without explainability values")
    if ranking is None:
        raise ValueError("a predictor ranking is required")

    space = combos.space
    ranked = rank_predictors(ranking, descending=True)
    cat_ranked = [n for n in ranked if not space.feature(n).is_numeric]

    if kind.is_mixed:
        layout_rows, row_of_combo = _mixed_rows(combos, cat_ranked)
    else:
        perm = tree_order(combos, cat_ranked)
        layout_rows = [{name: combos.rows[i][space.index(name)] for name in cat_ranked} for i in perm]
        row_of_combo = {i: r for r, i in enumerate(perm)}
    n_rows = len(layout_rows)

    tiles = []
    for r, assignment in enumerate(layout_rows):
        for c, name in enumerate(cat_ranked):
            tiles.append(Tile(col=c, row=r, color=_level_color(space, name, assignment[name])))
    tile = Panel(
        role=TILE, title="feature values", x_label="predictor",
        x_domain=(0.0, float(len(cat_ranked))), n_cols=len(cat_ranked),
        x_ticks=tuple((c + 0.5, name) for c, name in enumerate(cat_ranked)),
        elements=tuple(tiles),
    )

    output_panel = _output_panel(kind, combos, outputs, row_of_combo, threshold)

    panels = [tile, output_panel]
    legend = [("positive value", CYAN), ("negative value", RED)]
    if kind.is_mixed:
        q = space.numeric
        legend.append((f"{q.name} = {q.vmin:g}", GRADIENT_LO))
        legend.append((f"{q.name} = {q.vmax:g}", GRADIENT_HI))
    if include_explainability:
        panels.append(_explainability_panel(space, shap, row_of_combo))
        for j, name in enumerate(space.names):
            legend.append((name, PREDICTOR_PALETTE[j % len(PREDICTOR_PALETTE)]))

    titles = {
        NomogramKind.CAT_BIN_PROB: "probability nomogram",
        NomogramKind.CAT_EST: "estimate nomogram",
        NomogramKind.MIXED_BIN_PROB: "probability nomogram (numeric predictor)",
        NomogramKind.MIXED_EST: "estimate nomogram (numeric predictor)",
    }
    return NomogramLayout(
        kind=kind,
        title=titles[kind],
        panels=tuple(panels),
        n_rows=n_rows,
        legend=tuple(legend),
        row_map=tuple(row_of_combo[i] for i in range(len(combos.rows))),
    )


def _mixed_rows(combos: CombinationTable, cat_ranked: list[str]):
    """Tree-ordered categorical sub-rows plus full-row -> display-row map."""
    space = combos.space
    cat_specs = [space.feature(n) for n in cat_ranked]
    sub_rows = [
        dict(zip(cat_ranked, values))
        for values in itertools.product(*[f.levels for f in cat_specs])
    ]
    sub_rows.sort(key=lambda a: tuple(0 if a[f.name] == f.positive_level else 1 for f in cat_specs))
    row_index = {tuple(a[n] for n in cat_ranked): r for r, a in enumerate(sub_rows)}
    cat_cols = [space.index(n) for n in cat_ranked]
    row_of_combo = {
        i: row_index[tuple(row[c] for c in cat_cols)]
        for i, row in enumerate(combos.rows)
    }
    return sub_rows, row_of_combo


def _output_panel(kind, combos, outputs, row_of_combo, threshold) -> Panel:
    space = combos.space
    is_probability = outputs.kind == PROBABILITY
    if is_probability:
        lo, hi = 0.0, 1.0
        ticks = tuple((v, f"{v:.2f}") for v in (0.0, 0.25, 0.5, 0.75, 1.0))
        x_label = "predicted probability"
    else:
        lo, hi = _padded(outputs.values)
        ticks = _continuous_ticks(lo, hi)
        x_label = "estimated value"

    elements: list[Element] = []
    if kind.has_threshold_line:
        if threshold is None:
            raise ValueError("binary kinds need a threshold for the reference line")
        elements.append(ReferenceLine(x=threshold))

    if kind.is_mixed:
        q = space.numeric
        qcol = space.index(q.name)
        span = (q.vmax - q.vmin) or 1.0
        by_row: dict[int, list[tuple[float, float]]] = {}
        for i, row in enumerate(combos.rows):
            by_row.setdefault(row_of_combo[i], []).append((float(row[qcol]), outputs.values[i]))
        for r in sorted(by_row):
            points = sorted(by_row[r])
            elements.append(PolyLine(
                points=tuple((y, float(r)) for _, y in points), color=LINE_COLOR,
            ))
            for qv, y in points:
                elements.append(Marker(x=y, row=float(r), color=_gradient_color((qv - q.vmin) / span)))
    else:
        for i in range(len(combos.rows)):
            elements.append(Marker(x=outputs.values[i], row=float(row_of_combo[i]), color=MARKER_COLOR))

    return Panel(
        role=OUTPUT, title="model output", x_label=x_label,
        x_domain=(lo, hi), n_cols=0, x_ticks=ticks,
        elements=tuple(elements),
    )


def _explainability_panel(space, shap, row_of_combo) -> Panel:
    all_values = [v for row in shap.values for v in row]
    lo, hi = _padded(all_values)
    elements = []
    for j, name in enumerate(space.names):
        color = PREDICTOR_PALETTE[j % len(PREDICTOR_PALETTE)]
        column = shap.column(name)
        for i, value in enumerate(column):
            elements.append(Marker(x=value, row=float(row_of_combo[i]), color=color))
    return Panel(
        role=EXPLAINABILITY, title="explainability", x_label="explainability value",
        x_domain=(lo, hi), n_cols=0, x_ticks=_continuous_ticks(lo, hi),
        elements=tuple(elements),
    )
