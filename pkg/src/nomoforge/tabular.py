"""Feature space, combination table, and the structural validation gate.

The data model is deliberately immutable: every type is a frozen dataclass
over tuples, so instances are safe for shared concurrent reads.

A combination table is only meaningful when its row set equals the full
Cartesian expansion of the feature space; `validate_inputs` is the single
gatekeeper that establishes this, reporting findings instead of raising so
callers can show all problems at once.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

from .errors import GridTooLarge, UnsupportedKind

Cell = Union[str, float]

# Output kinds.
PROBABILITY = "probability"
ESTIMATE = "estimate"

# Comparison tolerances for numeric grid membership. CSV round-trips add
# decimal noise, so cells are matched to grid points within these bounds.
REL_TOL = 1e-9
ABS_TOL = 1e-12

DEFAULT_MAX_GRID_POINTS = 10_000


@dataclass(frozen=True)
class FeatureSpec:
    """One predictor: either a two-level categorical or a stepped numeric range.

    Categorical levels are ordered (negative, positive); the second label is
    the one drawn in cyan and treated as the "positive" value everywhere.
    """

    name: str
    levels: Optional[tuple[str, str]] = None
    vmin: Optional[float] = None
    vmax: Optional[float] = None
    step: Optional[float] = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("feature name must be non-empty")
        if self.levels is not None:
            if self.vmin is not None or self.vmax is not None or self.step is not None:
                raise ValueError(f"feature {self.name!r}: categorical and numeric fields are exclusive")
            if len(self.levels) != 2 or self.levels[0] == self.levels[1]:
                raise ValueError(
                    f"feature {self.name!r} must have exactly two distinct levels, got {self.levels!r}"
                )
        else:
            if self.vmin is None or self.vmax is None or self.step is None:
                raise ValueError(f"feature {self.name!r}: numeric features need min, max and step")
            if not (self.vmin <= self.vmax):
                raise ValueError(f"feature {self.name!r}: min must not exceed max")
            if not (self.step > 0):
                raise ValueError(f"feature {self.name!r}: step must be positive")

    @property
    def is_numeric(self) -> bool:
        return self.levels is None

    @property
    def negative_level(self) -> str:
        return self.levels[0]

    @property
    def positive_level(self) -> str:
        return self.levels[1]

    def grid_values(self) -> list[float]:
        """The ascending value grid {min, min+step, ...} truncated at max."""
        if not self.is_numeric:
            raise ValueError(f"feature {self.name!r} is categorical")
        return [self.vmin + i * self.step for i in range(self.grid_size())]

    def grid_size(self) -> int:
        if not self.is_numeric:
            raise ValueError(f"feature {self.name!r} is categorical")
        return int(math.floor((self.vmax - self.vmin) / self.step + REL_TOL)) + 1

    def grid_index(self, value: float) -> Optional[int]:
        """Index of `value` on the grid, or None if it is off-grid."""
        i = round((value - self.vmin) / self.step)
        if i < 0 or i >= self.grid_size():
            return None
        target = self.vmin + i * self.step
        tol = max(REL_TOL * max(abs(value), abs(target)), ABS_TOL)
        return i if abs(value - target) <= tol else None

    @staticmethod
    def categorical(name: str, levels: Sequence[str]) -> "FeatureSpec":
        return FeatureSpec(name=name, levels=tuple(levels))

    @staticmethod
    def numeric(name: str, vmin: float, vmax: float, step: float) -> "FeatureSpec":
        return FeatureSpec(name=name, vmin=float(vmin), vmax=float(vmax), step=float(step))

    def to_json_dict(self) -> dict:
        if self.is_numeric:
            return {"name": self.name, "kind": "numeric", "min": self.vmin, "max": self.vmax, "step": self.step}
        return {"name": self.name, "kind": "categorical", "levels": list(self.levels)}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FeatureSpec":
        if d["kind"] == "numeric":
            return cls.numeric(d["name"], d["min"], d["max"], d["step"])
        return cls.categorical(d["name"], d["levels"])


@dataclass(frozen=True)
class FeatureSpace:
    """Ordered predictor definitions: >=1 categorical, <=1 numeric."""

    features: tuple[FeatureSpec, ...]

    def __post_init__(self):
        names = [f.name for f in self.features]
        if len(set(names)) != len(names):
            raise ValueError(f"feature names must be unique, got {names}")
        n_cat = sum(1 for f in self.features if not f.is_numeric)
        n_num = sum(1 for f in self.features if f.is_numeric)
        if n_cat < 1:
            raise ValueError("at least one categorical feature is required")
        if n_num > 1:
            raise ValueError("at most one numeric feature is supported")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f.name for f in self.features)

    @property
    def categorical(self) -> tuple[FeatureSpec, ...]:
        return tuple(f for f in self.features if not f.is_numeric)

    @property
    def numeric(self) -> Optional[FeatureSpec]:
        for f in self.features:
            if f.is_numeric:
                return f
        return None

    def feature(self, name: str) -> FeatureSpec:
        for f in self.features:
            if f.name == name:
                return f
        raise KeyError(name)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def to_json_dict(self) -> dict:
        return {"features": [f.to_json_dict() for f in self.features]}

    @classmethod
    def from_json_dict(cls, d: dict) -> "FeatureSpace":
        return cls(features=tuple(FeatureSpec.from_json_dict(f) for f in d["features"]))


@dataclass(frozen=True)
class CombinationTable:
    """Rows of predictor-value tuples, one cell per feature in space order.

    Construction is permissive: completeness against the Cartesian expansion
    is checked by `validate_inputs`, not here.
    """

    space: FeatureSpace
    rows: tuple[tuple[Cell, ...], ...]

    def __post_init__(self):
        width = len(self.space.features)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list[Cell]:
        j = self.space.index(name)
        return [row[j] for row in self.rows]


@dataclass(frozen=True)
class OutputVector:
    """Model outputs aligned index-for-index with a combination table."""

    kind: str  # PROBABILITY or ESTIMATE
    values: tuple[float, ...]

    def __post_init__(self):
        if self.kind not in (PROBABILITY, ESTIMATE):
            raise ValueError(f"unknown output kind {self.kind!r}")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ExplainabilityTable:
    """Per-combination, per-predictor attribution values (e.g. SHAP)."""

    columns: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        for i, row in enumerate(self.values):
            if len(row) != len(self.columns):
                raise ValueError(f"explainability row {i} has {len(row)} cells, expected {len(self.columns)}")

    def __len__(self) -> int:
        return len(self.values)

    def column(self, name: str) -> list[float]:
        j = self.columns.index(name)
        return [row[j] for row in self.values]

    def scaled(self, factor: float) -> "ExplainabilityTable":
        return ExplainabilityTable(
            columns=self.columns,
            values=tuple(tuple(v * factor for v in row) for row in self.values),
        )


class NomogramKind(Enum):
    """The five chart types, keyed by feature mix and output flavour."""

    CAT_BIN = 1         # categorical only, binary outcome, no probability axis
    CAT_BIN_PROB = 2    # categorical only, binary outcome with probability axis
    CAT_EST = 3         # categorical only, continuous outcome
    MIXED_BIN_PROB = 4  # one numeric predictor, binary outcome with probability
    MIXED_EST = 5       # one numeric predictor, continuous outcome

    @property
    def is_mixed(self) -> bool:
        return self in (NomogramKind.MIXED_BIN_PROB, NomogramKind.MIXED_EST)

    @property
    def has_threshold_line(self) -> bool:
        return self in (NomogramKind.CAT_BIN_PROB, NomogramKind.MIXED_BIN_PROB)


# ---------------------------------------------------------------------------
# Validation findings
# ---------------------------------------------------------------------------

DUPLICATE_ROW = "DuplicateRow"
MISSING_COMBINATION = "MissingCombination"
EXTRA_COMBINATION = "ExtraCombination"
LENGTH_MISMATCH = "LengthMismatch"
COLUMN_ORDER_MISMATCH = "ColumnOrderMismatch"
NON_BINARY_CATEGORICAL = "NonBinaryCategorical"
NON_GRID_NUMERIC = "NonGridNumeric"
PROBABILITY_OUT_OF_RANGE = "ProbabilityOutOfRange"


@dataclass(frozen=True)
class Finding:
    code: str
    message: str
    rows: tuple[int, ...] = ()
    columns: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "code": self.code,
            "message": self.message,
            "rows": list(self.rows),
            "columns": list(self.columns),
        }


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.findings

    def codes(self) -> set[str]:
        return {f.code for f in self.findings}

    def to_json_dict(self) -> dict:
        return {"ok": self.ok, "findings": [f.to_json_dict() for f in self.findings]}


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def expand_grid(space: FeatureSpace, max_grid_points: int = DEFAULT_MAX_GRID_POINTS) -> CombinationTable:
    """Full Cartesian product of all predictor values.

    Row order is row-major over features in declaration order with the last
    feature varying fastest. Categorical values follow the (negative,
    positive) level order; numeric values ascend from min by step.
    """
    axes: list[list[Cell]] = []
    for f in space.features:
        if f.is_numeric:
            n = f.grid_size()
            if n > max_grid_points:
                raise GridTooLarge(
                    f"feature {f.name!r} would produce {n} grid points (cap {max_grid_points})"
                )
            axes.append(list(f.grid_values()))
        else:
            axes.append(list(f.levels))
    rows = tuple(itertools.product(*axes))
    return CombinationTable(space=space, rows=rows)


def classify_kind(space: FeatureSpace, wants_probability: bool = False, wants_estimate: bool = False) -> NomogramKind:
    """Select the chart type from the feature mix and the output flags."""
    if wants_probability and wants_estimate:
        raise ValueError("probability and estimate flags are mutually exclusive")
    has_numeric = space.numeric is not None
    if not has_numeric:
        if wants_probability:
            return NomogramKind.CAT_BIN_PROB
        if wants_estimate:
            return NomogramKind.CAT_EST
        return NomogramKind.CAT_BIN
    if wants_probability:
        return NomogramKind.MIXED_BIN_PROB
    if wants_estimate:
        return NomogramKind.MIXED_EST
    raise UnsupportedKind(
        "a numeric predictor requires the probability or estimate flag; "
        "rule merging is defined only for all-categorical predictors"
    )


def _row_key(space: FeatureSpace, row: tuple[Cell, ...]):
    """Normalize a row for set comparison: level labels and grid indices.

    Returns (key, ok). Off-grid or unknown cells yield ok=False and a key
    built from the raw values, which can never collide with a grid key.
    """
    key = []
    ok = True
    for f, cell in zip(space.features, row):
        if f.is_numeric:
            idx = f.grid_index(float(cell))
            if idx is None:
                ok = False
                key.append(("offgrid", repr(cell)))
            else:
                key.append(idx)
        else:
            if cell not in f.levels:
                ok = False
                key.append(("badlevel", repr(cell)))
            else:
                key.append(cell)
    return tuple(key), ok


def validate_inputs(
    space: FeatureSpace,
    combos: CombinationTable,
    outputs: OutputVector,
    shap: Optional[ExplainabilityTable] = None,
    max_grid_points: int = DEFAULT_MAX_GRID_POINTS,
) -> ValidationReport:
    """Check every structural precondition; empty report means all hold.

    The combination rows must equal the full Cartesian expansion up to row
    order, outputs must align with the rows (and stay in [0, 1] for
    probabilities), and explainability columns must mirror the feature
    names in order.
    """
    findings: list[Finding] = []

    # Cell-level checks, per column.
    for j, f in enumerate(space.features):
        bad_rows = []
        for i, row in enumerate(combos.rows):
            cell = row[j]
            if f.is_numeric:
                try:
                    on_grid = f.grid_index(float(cell)) is not None
                except (TypeError, ValueError):
                    on_grid = False
                if not on_grid:
                    bad_rows.append(i)
            else:
                if cell not in f.levels:
                    bad_rows.append(i)
        if bad_rows:
            if f.is_numeric:
                findings.append(Finding(
                    NON_GRID_NUMERIC,
                    f"column {f.name!r}: values off the {f.vmin}..{f.vmax} step {f.step} grid",
                    rows=tuple(bad_rows), columns=(f.name,),
                ))
            else:
                findings.append(Finding(
                    NON_BINARY_CATEGORICAL,
                    f"column {f.name!r}: values outside levels {f.levels!r}",
                    rows=tuple(bad_rows), columns=(f.name,),
                ))

    # Row-set comparison against the full expansion.
    seen: dict[tuple, list[int]] = {}
    for i, row in enumerate(combos.rows):
        key, _ = _row_key(space, row)
        seen.setdefault(key, []).append(i)

    dup_rows = sorted(i for idxs in seen.values() if len(idxs) > 1 for i in idxs[1:])
    if dup_rows:
        findings.append(Finding(
            DUPLICATE_ROW,
            f"{len(dup_rows)} duplicated combination row(s)",
            rows=tuple(dup_rows),
        ))

    try:
        expected = expand_grid(space, max_grid_points=max_grid_points)
    except GridTooLarge as exc:
        findings.append(Finding(NON_GRID_NUMERIC, str(exc), columns=(space.numeric.name,)))
        expected = None

    if expected is not None:
        expected_keys = {}
        for row in expected.rows:
            key, _ = _row_key(space, row)
            expected_keys[key] = row
        missing = [row for key, row in expected_keys.items() if key not in seen]
        extra_rows = sorted(
            i for key, idxs in seen.items() if key not in expected_keys for i in idxs
        )
        if missing:
            shown = ", ".join(str(r) for r in missing[:5])
            more = "" if len(missing) <= 5 else f" (+{len(missing) - 5} more)"
            findings.append(Finding(
                MISSING_COMBINATION,
                f"{len(missing)} combination(s) absent from the table: {shown}{more}",
            ))
        if extra_rows:
            findings.append(Finding(
                EXTRA_COMBINATION,
                f"{len(extra_rows)} row(s) not part of the Cartesian expansion",
                rows=tuple(extra_rows),
            ))

    # Output alignment.
    if len(outputs) != len(combos):
        findings.append(Finding(
            LENGTH_MISMATCH,
            f"outputs have {len(outputs)} values for {len(combos)} combinations",
            columns=("output",),
        ))
    if outputs.kind == PROBABILITY:
        out_of_range = tuple(
            i for i, v in enumerate(outputs.values) if not (0.0 <= v <= 1.0)
        )
        if out_of_range:
            findings.append(Finding(
                PROBABILITY_OUT_OF_RANGE,
                f"{len(out_of_range)} probability value(s) outside [0, 1]",
                rows=out_of_range, columns=("output",),
            ))

    # Explainability alignment.
    if shap is not None:
        if shap.columns != space.names:
            findings.append(Finding(
                COLUMN_ORDER_MISMATCH,
                f"explainability columns {list(shap.columns)} do not match features {list(space.names)}",
                columns=shap.columns,
            ))
        if len(shap) != len(combos):
            findings.append(Finding(
                LENGTH_MISMATCH,
                f"explainability table has {len(shap)} rows for {len(combos)} combinations",
                columns=shap.columns,
            ))

    return ValidationReport(findings=tuple(findings))
