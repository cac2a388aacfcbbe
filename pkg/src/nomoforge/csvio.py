"""CSV input contracts and (de)serialization.

Four files describe one problem:

* features:       one column per predictor, all combinations as rows
* outputs:        exactly one column named ``output``
* manifest:       two columns ``feature,category``; a row per categorical
                  level, in (negative, positive) order. Features absent
                  from the manifest are numeric.
* explainability: same header as the features file (optional)

All files are UTF-8, comma-delimited, ``.`` decimal separator, first row
is the header.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Optional, Union

from .errors import InputFormatError, InvalidFeatureSpace
from .tabular import (
    PROBABILITY,
    CombinationTable,
    ExplainabilityTable,
    FeatureSpec,
    FeatureSpace,
    Finding,
    NON_BINARY_CATEGORICAL,
    OutputVector,
)

PathOrText = Union[str, Path]


def _read_table(text: str, what: str) -> tuple[list[str], list[list[str]]]:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row]
    if not rows:
        raise InputFormatError(f"{what}: file is empty")
    header, body = rows[0], rows[1:]
    width = len(header)
    for i, row in enumerate(body):
        if len(row) != width:
            raise InputFormatError(f"{what}: row {i + 1} has {len(row)} cells, header has {width}")
    return header, body


def _read_text(path: PathOrText, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputFormatError(f"cannot read {what} file {path}: {exc}") from exc


def parse_manifest(text: str) -> dict[str, list[str]]:
    """feature -> ordered category labels, deduplicated, file order kept."""
    header, body = _read_table(text, "manifest")
    if [h.strip().lower() for h in header] != ["feature", "category"]:
        raise InputFormatError(
            f"manifest: header must be 'feature,category', got {','.join(header)}"
        )
    out: dict[str, list[str]] = {}
    for feature, category in body:
        feature = feature.strip()
        if not feature:
            raise InputFormatError("manifest: empty feature name")
        levels = out.setdefault(feature, [])
        category = category.strip()
        if category and category not in levels:
            levels.append(category)
    return out


def parse_outputs(text: str, kind: str = PROBABILITY) -> OutputVector:
    header, body = _read_table(text, "outputs")
    if len(header) != 1 or header[0].strip() != "output":
        raise InputFormatError(
            f"outputs: expected a single column named 'output', got {','.join(header)}"
        )
    try:
        values = tuple(float(row[0]) for row in body)
    except ValueError as exc:
        raise InputFormatError(f"outputs: non-numeric value ({exc})") from exc
    return OutputVector(kind=kind, values=values)


def parse_features(text: str) -> tuple[list[str], list[list[str]]]:
    """Raw feature table: header names plus string cells (typing comes later)."""
    header, body = _read_table(text, "features")
    names = [h.strip() for h in header]
    if len(set(names)) != len(names):
        raise InputFormatError(f"features: duplicate column names in {names}")
    return names, body


def parse_explainability(text: str) -> ExplainabilityTable:
    header, body = _read_table(text, "explainability")
    try:
        values = tuple(tuple(float(cell) for cell in row) for row in body)
    except ValueError as exc:
        raise InputFormatError(f"explainability: non-numeric value ({exc})") from exc
    return ExplainabilityTable(columns=tuple(h.strip() for h in header), values=values)


def infer_space(
    names: list[str],
    str_rows: list[list[str]],
    manifest: dict[str, list[str]],
) -> FeatureSpace:
    """Build the feature space from raw columns and the manifest.

    Categorical levels come from the manifest when it lists exactly two;
    otherwise they are the column's distinct values in lexicographic order
    (so "0" sorts before "1"). Numeric min/max/step are inferred from the
    distinct values; an irregular grid is left for validation to flag.
    """
    findings: list[Finding] = []
    specs: list[FeatureSpec] = []
    for j, name in enumerate(names):
        column = [row[j].strip() for row in str_rows]
        if name in manifest:
            declared = manifest[name]
            if len(declared) == 2:
                levels = declared
            else:
                levels = sorted(set(column))
            if len(levels) != 2 or levels[0] == levels[1]:
                findings.append(Finding(
                    NON_BINARY_CATEGORICAL,
                    f"column {name!r}: categorical predictors need exactly two levels, got {levels!r}",
                    columns=(name,),
                ))
                continue
            specs.append(FeatureSpec.categorical(name, levels))
        else:
            try:
                values = sorted({float(cell) for cell in column})
            except ValueError as exc:
                raise InputFormatError(
                    f"features: column {name!r} is not in the manifest but holds "
                    f"non-numeric values ({exc}); declare its categories in the manifest"
                ) from exc
            if not values:
                raise InputFormatError(f"features: column {name!r} has no values")
            step = min((b - a for a, b in zip(values, values[1:])), default=1.0)
            specs.append(FeatureSpec.numeric(name, values[0], values[-1], step))
    if findings:
        raise InvalidFeatureSpace("feature definitions are invalid", findings=findings)
    try:
        return FeatureSpace(features=tuple(specs))
    except ValueError as exc:
        raise InvalidFeatureSpace(str(exc)) from exc


def typed_rows(space: FeatureSpace, str_rows: list[list[str]]) -> CombinationTable:
    """Coerce string cells to labels/floats according to the space."""
    rows = []
    for i, row in enumerate(str_rows):
        cells = []
        for f, cell in zip(space.features, row):
            cell = cell.strip()
            if f.is_numeric:
                try:
                    cells.append(float(cell))
                except ValueError as exc:
                    raise InputFormatError(
                        f"features: row {i + 1}, column {f.name!r}: not a number ({cell!r})"
                    ) from exc
            else:
                cells.append(cell)
        rows.append(tuple(cells))
    return CombinationTable(space=space, rows=tuple(rows))


def load_inputs(
    features_path: PathOrText,
    outputs_path: PathOrText,
    manifest_path: PathOrText,
    shap_path: Optional[PathOrText] = None,
    output_kind: str = PROBABILITY,
):
    """Load and type the full input bundle from files.

    Returns (space, combos, outputs, shap-or-None).
    """
    return parse_inputs(
        _read_text(features_path, "features"),
        _read_text(outputs_path, "outputs"),
        _read_text(manifest_path, "manifest"),
        _read_text(shap_path, "explainability") if shap_path is not None else None,
        output_kind=output_kind,
    )


def parse_inputs(
    features_text: str,
    outputs_text: str,
    manifest_text: str,
    shap_text: Optional[str] = None,
    output_kind: str = PROBABILITY,
):
    names, str_rows = parse_features(features_text)
    manifest = parse_manifest(manifest_text)
    unknown = sorted(set(manifest) - set(names))
    if unknown:
        raise InputFormatError(f"manifest lists unknown feature(s): {unknown}")
    space = infer_space(names, str_rows, manifest)
    combos = typed_rows(space, str_rows)
    outputs = parse_outputs(outputs_text, kind=output_kind)
    shap = parse_explainability(shap_text) if shap_text is not None else None
    return space, combos, outputs, shap


# ---------------------------------------------------------------------------
# Serialization (round-trip partners of the parsers above)
# ---------------------------------------------------------------------------


def _format_cell(cell) -> str:
    if isinstance(cell, float):
        return repr(cell) if cell != int(cell) else str(int(cell))
    return str(cell)


def serialize_features(combos: CombinationTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(combos.space.names)
    for row in combos.rows:
        writer.writerow([_format_cell(c) for c in row])
    return buf.getvalue()


def serialize_outputs(outputs: OutputVector) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["output"])
    for v in outputs.values:
        writer.writerow([repr(v)])
    return buf.getvalue()


def serialize_manifest(space: FeatureSpace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["feature", "category"])
    for f in space.categorical:
        for level in f.levels:
            writer.writerow([f.name, level])
    return buf.getvalue()


def serialize_explainability(shap: ExplainabilityTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(shap.columns)
    for row in shap.values:
        writer.writerow([repr(v) for v in row])
    return buf.getvalue()
