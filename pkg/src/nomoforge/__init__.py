"""nomoforge: explainable nomograms for any prediction model.

Feed it the model's exhaustive combination table, the matching outputs,
and (optionally) per-predictor explainability values; get back validated
inputs, merged decision rules, deterministic SVG nomograms, and a
programmatic reader.
"""

from .errors import (
    GridTooLarge,
    InputFormatError,
    InvalidFeatureSpace,
    KindMismatch,
    MissingExplainability,
    NomoforgeError,
    OutOfRange,
    PartitionViolation,
    UnsupportedKind,
    ValidationFailed,
)
from .explain import PredictorRanking, fallback_explainability, max_explainability, rank_predictors
from .layout import NomogramLayout, Panel, layout_tabular, layout_type1, tree_order
from .pipeline import NomogramArtifacts, build_nomogram
from .reader import ReadTrace, read_tabular, read_type1, snap_to_grid
from .rules import Rule, RuleList, derive_rules, derive_rules_oracle, match_rule
from .svg import render_svg
from .tabular import (
    CombinationTable,
    ExplainabilityTable,
    FeatureSpace,
    FeatureSpec,
    Finding,
    NomogramKind,
    OutputVector,
    ValidationReport,
    classify_kind,
    expand_grid,
    validate_inputs,
)

__version__ = "0.1.0"

__all__ = [
    "CombinationTable",
    "ExplainabilityTable",
    "FeatureSpace",
    "FeatureSpec",
    "Finding",
    "GridTooLarge",
    "InputFormatError",
    "InvalidFeatureSpace",
    "KindMismatch",
    "MissingExplainability",
    "NomogramArtifacts",
    "NomogramKind",
    "NomogramLayout",
    "NomoforgeError",
    "OutOfRange",
    "OutputVector",
    "Panel",
    "PartitionViolation",
    "PredictorRanking",
    "ReadTrace",
    "Rule",
    "RuleList",
    "UnsupportedKind",
    "ValidationFailed",
    "ValidationReport",
    "build_nomogram",
    "classify_kind",
    "derive_rules",
    "derive_rules_oracle",
    "expand_grid",
    "fallback_explainability",
    "layout_tabular",
    "layout_type1",
    "match_rule",
    "max_explainability",
    "rank_predictors",
    "read_tabular",
    "read_type1",
    "render_svg",
    "snap_to_grid",
    "tree_order",
    "validate_inputs",
]
