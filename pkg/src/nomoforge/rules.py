"""Merge the combination space into minimal positive and negative rules.

A rule is a prefix over the ranked predictors: positive rules use the
descending explainability order and are accepted when every completion of
the prefix predicts at or above the threshold; negative rules use the
ascending order and require every completion to predict below it. Each
pass keeps only prefixes that do not extend an already-accepted one, so
the accepted rules partition the combination space.

`derive_rules` walks the prefix tree with per-prefix output aggregates;
`derive_rules_oracle` re-derives the same rules by brute-force scanning
each combination's prefixes, and exists purely to cross-check the walk.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import KindMismatch, PartitionViolation, UnsupportedKind
from .explain import PredictorRanking, rank_predictors
from .tabular import PROBABILITY, CombinationTable, OutputVector

POSITIVE = "positive"
NEGATIVE = "negative"


@dataclass(frozen=True)
class Rule:
    """An ordered partial assignment; iteration == number of assignments."""

    assignments: tuple[tuple[str, str], ...]
    polarity: str
    iteration: int

    def __post_init__(self):
        if self.iteration != len(self.assignments):
            raise ValueError("iteration must equal the number of assignments")
        if self.polarity not in (POSITIVE, NEGATIVE):
            raise ValueError(f"unknown polarity {self.polarity!r}")

    def matches(self, sample: Mapping[str, str]) -> bool:
        return all(sample.get(f) == level for f, level in self.assignments)

    def key(self) -> tuple:
        return (self.assignments, self.polarity)

    def to_json_dict(self) -> dict:
        return {
            "assignments": [[f, level] for f, level in self.assignments],
            "polarity": self.polarity,
            "iteration": self.iteration,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "Rule":
        return cls(
            assignments=tuple((f, level) for f, level in d["assignments"]),
            polarity=d["polarity"],
            iteration=int(d["iteration"]),
        )


@dataclass(frozen=True)
class RuleList:
    positive: tuple[Rule, ...]
    negative: tuple[Rule, ...]
    threshold: float
    ranking: PredictorRanking

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self.positive + self.negative

    def rule_keys(self) -> set[tuple]:
        return {r.key() for r in self.rules}

    def to_json_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "ranking": self.ranking.to_json_dict(),
            "positive": [r.to_json_dict() for r in self.positive],
            "negative": [r.to_json_dict() for r in self.negative],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "RuleList":
        return cls(
            positive=tuple(Rule.from_json_dict(r) for r in d["positive"]),
            negative=tuple(Rule.from_json_dict(r) for r in d["negative"]),
            threshold=float(d["threshold"]),
            ranking=PredictorRanking.from_json_dict(d["ranking"]),
        )


def _check_rule_inputs(combos: CombinationTable, outputs: OutputVector, threshold: float):
    if combos.space.numeric is not None:
        raise UnsupportedKind("rule merging is defined only for categorical predictors")
    if outputs.kind != PROBABILITY:
        raise KindMismatch("rule merging needs probability outputs")
    if not (0.0 < threshold < 1.0):
        raise ValueError(f"threshold must lie strictly between 0 and 1, got {threshold}")


def _canonical_levels(space, name: str) -> tuple[str, str]:
    # Positive level first, for stable display order within an iteration.
    f = space.feature(name)
    return (f.positive_level, f.negative_level)


def _prefix_extrema(combos: CombinationTable, outputs: OutputVector, order: list[str]):
    """Per-level dicts mapping each prefix under `order` to (min, max) output.

    levels[s] has keys of length s+1; built bottom-up from the full rows so
    the whole table is O(rows * features).
    """
    cols = [combos.space.index(name) for name in order]
    k = len(order)
    full: dict[tuple, list[float]] = {}
    for row, y in zip(combos.rows, outputs.values):
        key = tuple(row[c] for c in cols)
        agg = full.get(key)
        if agg is None:
            full[key] = [y, y]
        else:
            agg[0] = min(agg[0], y)
            agg[1] = max(agg[1], y)
    levels = [None] * k
    levels[k - 1] = full
    for s in range(k - 1, 0, -1):
        shorter: dict[tuple, list[float]] = {}
        for key, (lo, hi) in levels[s].items():
            parent = key[:-1]
            agg = shorter.get(parent)
            if agg is None:
                shorter[parent] = [lo, hi]
            else:
                agg[0] = min(agg[0], lo)
                agg[1] = max(agg[1], hi)
        levels[s - 1] = shorter
    return levels


def _merge_pass(combos, outputs, order, polarity, threshold) -> list[Rule]:
    space = combos.space
    extrema = _prefix_extrema(combos, outputs, order)
    if polarity == POSITIVE:
        accepts = lambda lo, hi: lo >= threshold
    else:
        accepts = lambda lo, hi: hi < threshold
    accepted: list[Rule] = []
    alive: list[tuple] = [()]
    for s, name in enumerate(order):
        level_pair = _canonical_levels(space, name)
        next_alive: list[tuple] = []
        for prefix in alive:
            for level in level_pair:
                candidate = prefix + (level,)
                lo, hi = extrema[s][candidate]
                if accepts(lo, hi):
                    accepted.append(Rule(
                        assignments=tuple(zip(order[: s + 1], candidate)),
                        polarity=polarity,
                        iteration=s + 1,
                    ))
                else:
                    next_alive.append(candidate)
        alive = next_alive
    return accepted


def derive_rules(
    combos: CombinationTable,
    outputs: OutputVector,
    ranking: PredictorRanking,
    threshold: float,
) -> RuleList:
    """Run both merge passes and return positive rules before negative ones.

    Rules within a pass are ordered by (iteration, prefix), the prefix
    compared with each feature's positive level sorting first.
    """
    _check_rule_inputs(combos, outputs, threshold)
    desc = rank_predictors(ranking, descending=True)
    asc = rank_predictors(ranking, descending=False)
    # the level-by-level walk already yields (iteration, canonical prefix) order
    positive = _merge_pass(combos, outputs, desc, POSITIVE, threshold)
    negative = _merge_pass(combos, outputs, asc, NEGATIVE, threshold)
    return RuleList(
        positive=tuple(positive),
        negative=tuple(negative),
        threshold=threshold,
        ranking=ranking,
    )


def _rule_sort_key(space):
    def key(rule: Rule):
        canon = tuple(
            _canonical_levels(space, f).index(level) for f, level in rule.assignments
        )
        return (rule.iteration, canon)
    return key


def derive_rules_oracle(
    combos: CombinationTable,
    outputs: OutputVector,
    ranking: PredictorRanking,
    threshold: float,
) -> RuleList:
    """Brute-force re-derivation for verification; intended for few features.

    For every combination, scan its prefixes (under the order matching its
    own polarity) from shortest to longest and record the first prefix all
    of whose completions share that polarity.
    """
    _check_rule_inputs(combos, outputs, threshold)
    desc = rank_predictors(ranking, descending=True)
    asc = rank_predictors(ranking, descending=False)
    space = combos.space
    k = len(space.features)

    desc_cols = [space.index(n) for n in desc]
    asc_cols = [space.index(n) for n in asc]
    desc_rows = [tuple(row[c] for c in desc_cols) for row in combos.rows]
    asc_rows = [tuple(row[c] for c in asc_cols) for row in combos.rows]
    polarity_of = [y >= threshold for y in outputs.values]

    recorded: dict[tuple, Rule] = {}
    for i in range(len(combos.rows)):
        wanted = polarity_of[i]
        order, reordered = (desc, desc_rows) if wanted else (asc, asc_rows)
        mine = reordered[i]
        for s in range(1, k + 1):
            prefix = mine[:s]
            agree = all(
                polarity_of[j] == wanted
                for j in range(len(reordered))
                if reordered[j][:s] == prefix
            )
            if agree:
                rule = Rule(
                    assignments=tuple(zip(order[:s], prefix)),
                    polarity=POSITIVE if wanted else NEGATIVE,
                    iteration=s,
                )
                recorded[rule.key()] = rule
                break

    sort_key = _rule_sort_key(space)
    positive = sorted((r for r in recorded.values() if r.polarity == POSITIVE), key=sort_key)
    negative = sorted((r for r in recorded.values() if r.polarity == NEGATIVE), key=sort_key)
    return RuleList(
        positive=tuple(positive),
        negative=tuple(negative),
        threshold=threshold,
        ranking=ranking,
    )


def match_rule(rules: RuleList, sample: Mapping[str, str]) -> tuple[Rule, str]:
    """The unique rule whose assignments the sample satisfies."""
    hits = [r for r in rules.rules if r.matches(sample)]
    if len(hits) != 1:
        raise PartitionViolation(
            f"sample {dict(sample)!r} matched {len(hits)} rules; expected exactly 1"
        )
    return hits[0], hits[0].polarity
