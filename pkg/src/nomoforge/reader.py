"""Programmatic nomogram reading: trace the lookup a human would perform.

For the rule nomogram the trace mirrors the manual procedure (start from
the highest-impact positive-valued predictor, scan iterations left to
right, fall through to the all-negative shortcut) and always lands on the
same rule as `match_rule`. For the tabular kinds reading is a row lookup,
with numeric values snapped to the nearest grid point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import OutOfRange
from .rules import POSITIVE, Rule, RuleList, match_rule
from .tabular import CombinationTable, FeatureSpace, OutputVector


@dataclass(frozen=True)
class TraceStep:
    description: str
    focus_kind: str  # "predictor" | "iteration" | "row"
    focus: Union[str, int]

    def to_json_dict(self):
        return {"description": self.description, "focus_kind": self.focus_kind, "focus": self.focus}


@dataclass(frozen=True)
class ReadTrace:
    steps: tuple[TraceStep, ...]
    matched_rule: Optional[Rule] = None
    matched_row: Optional[int] = None
    polarity: Optional[str] = None
    output: Optional[float] = None

    def __post_init__(self):
        if not self.steps:
            raise ValueError("a read trace holds at least one step")
        if self.matched_rule is None and self.matched_row is None:
            raise ValueError("a read trace ends on a matched rule or row")

    @property
    def result(self):
        return self.polarity if self.polarity is not None else self.output

    def to_json_dict(self):
        return {
            "steps": [s.to_json_dict() for s in self.steps],
            "matched_rule": self.matched_rule.to_json_dict() if self.matched_rule else None,
            "matched_row": self.matched_row,
            "polarity": self.polarity,
            "output": self.output,
        }


def _check_sample(space: FeatureSpace, sample: Mapping) -> None:
    missing = [f.name for f in space.features if f.name not in sample]
    if missing:
        raise ValueError(f"sample is missing feature(s): {missing}")
    unknown = sorted(set(sample) - set(space.names))
    if unknown:
        raise ValueError(f"sample assigns unknown feature(s): {unknown}")
    for f in space.categorical:
        if sample[f.name] not in f.levels:
            raise ValueError(
                f"sample value {sample[f.name]!r} for {f.name!r} is not one of {f.levels!r}"
            )


def read_type1(space: FeatureSpace, rules: RuleList, sample: Mapping[str, str]) -> ReadTrace:
    """Walk the rule nomogram for one sample and return the trace."""
    _check_sample(space, sample)
    steps: list[TraceStep] = []

    positives = [
        name for name in rules.ranking.names
        if sample[name] == space.feature(name).positive_level
    ]
    positives.sort(key=lambda n: -rules.ranking.score(n))
    if positives:
        steps.append(TraceStep(
            f"positive-valued predictors by impact: {', '.join(positives)}; start at {positives[0]}",
            "predictor", positives[0],
        ))
        scan = rules.positive + rules.negative
    else:
        steps.append(TraceStep(
            "no predictor has a positive value; scan for an all-negative iteration",
            "iteration", 1,
        ))
        scan = rules.negative + rules.positive

    matched = None
    for rule in scan:
        panel = "positive" if rule.polarity == POSITIVE else "negative"
        if rule.matches(sample):
            steps.append(TraceStep(
                f"iteration {rule.iteration}: all rectangle colors match; the column "
                f"belongs to the {panel} panel",
                "iteration", rule.iteration,
            ))
            matched = rule
            break
        steps.append(TraceStep(
            f"iteration {rule.iteration} ({panel} panel): colors do not match, move right",
            "iteration", rule.iteration,
        ))

    # The scan and the direct lookup must agree; both raise on a partition bug.
    rule, polarity = match_rule(rules, sample)
    assert matched is not None and matched.key() == rule.key()
    return ReadTrace(steps=tuple(steps), matched_rule=rule, polarity=polarity)


def snap_to_grid(space: FeatureSpace, value: float) -> tuple[float, float]:
    """Nearest grid point for the numeric feature; ties resolve toward min.

    Returns (snapped value, delta = value - snapped). Raises OutOfRange
    when the value lies outside [min, max].
    """
    q = space.numeric
    if q is None:
        raise ValueError("the feature space has no numeric feature")
    v = float(value)
    tol = max(1e-9 * max(abs(q.vmin), abs(q.vmax), abs(v)), 1e-12)
    if v < q.vmin - tol or v > q.vmax + tol:
        raise OutOfRange(f"{q.name} = {v} lies outside [{q.vmin}, {q.vmax}]")
    n = q.grid_size()
    i = math.ceil((v - q.vmin) / q.step - 0.5)
    i = max(0, min(n - 1, i))
    snapped = q.vmin + i * q.step
    return snapped, v - snapped


def read_tabular(
    combos: CombinationTable,
    outputs: OutputVector,
    sample: Mapping[str, Union[str, float]],
) -> ReadTrace:
    """Locate the unique row equal to the sample; the result is its output."""
    space = combos.space
    _check_sample(space, sample)
    steps: list[TraceStep] = []

    lookup = dict(sample)
    q = space.numeric
    if q is not None:
        snapped, delta = snap_to_grid(space, float(sample[q.name]))
        lookup[q.name] = snapped
        steps.append(TraceStep(
            f"{q.name} = {float(sample[q.name]):g} snaps to grid point {snapped:g} (delta {delta:g})",
            "predictor", q.name,
        ))

    target = []
    for f in space.features:
        if f.is_numeric:
            target.append(f.grid_index(float(lookup[f.name])))
        else:
            target.append(lookup[f.name])
    target = tuple(target)

    for i, row in enumerate(combos.rows):
        key = tuple(
            f.grid_index(float(cell)) if f.is_numeric else cell
            for f, cell in zip(space.features, row)
        )
        if key == target:
            steps.append(TraceStep(f"matched combination row {i}", "row", i))
            return ReadTrace(steps=tuple(steps), matched_row=i, output=outputs.values[i])
    raise ValueError(f"no combination row matches the sample {dict(sample)!r}")
