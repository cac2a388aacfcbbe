"""End-to-end nomogram construction: validate, rank, merge, lay out, render."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import KindMismatch, ValidationFailed
from .explain import PredictorRanking, fallback_explainability, max_explainability
from .layout import NomogramLayout, layout_tabular, layout_type1
from .rules import RuleList, derive_rules
from .svg import render_svg
from .tabular import (
    ESTIMATE,
    PROBABILITY,
    CombinationTable,
    ExplainabilityTable,
    FeatureSpace,
    NomogramKind,
    OutputVector,
    classify_kind,
    validate_inputs,
)

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class NomogramArtifacts:
    kind: NomogramKind
    ranking: PredictorRanking
    rules: Optional[RuleList]
    layout: NomogramLayout
    svg: bytes


def build_nomogram(
    space: FeatureSpace,
    combos: CombinationTable,
    outputs: OutputVector,
    shap: Optional[ExplainabilityTable] = None,
    probability: bool = False,
    estimate: bool = False,
    threshold: float = DEFAULT_THRESHOLD,
    use_absolute: bool = False,
    validate: bool = True,
) -> NomogramArtifacts:
    """Run the full pipeline for one input bundle.

    Raises ValidationFailed when the structural gate reports findings, and
    lets kind/feature-mix errors from the stages propagate.
    """
    kind = classify_kind(space, wants_probability=probability, wants_estimate=estimate)

    expected_kind = ESTIMATE if estimate else PROBABILITY
    if outputs.kind != expected_kind:
        raise KindMismatch(f"outputs are {outputs.kind}, but the flags imply {expected_kind}")

    if validate:
        report = validate_inputs(space, combos, outputs, shap)
        if not report.ok:
            raise ValidationFailed(report)

    if shap is not None:
        ranking = max_explainability(shap, use_absolute=use_absolute)
    else:
        ranking = fallback_explainability(
            combos, outputs,
            threshold=threshold if outputs.kind == PROBABILITY else None,
        )

    rules: Optional[RuleList] = None
    if kind is NomogramKind.CAT_BIN:
        rules = derive_rules(combos, outputs, ranking, threshold)
        layout = layout_type1(space, rules, ranking)
    else:
        layout = layout_tabular(
            kind, combos, outputs, shap=shap, ranking=ranking,
            threshold=threshold if kind.has_threshold_line else None,
        )
    return NomogramArtifacts(
        kind=kind, ranking=ranking, rules=rules, layout=layout, svg=render_svg(layout),
    )
