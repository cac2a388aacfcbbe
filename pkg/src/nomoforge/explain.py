"""Per-predictor explainability scores and deterministic orderings.

The score of a predictor is the signed maximum of its attribution column.
When no attribution table is available, a univariate-regression substitute
is computed per predictor: the upper 95% Wald bound of the odds ratio
(binary outcome, logistic fit) or of the slope (continuous outcome, OLS).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tabular import (
    ESTIMATE,
    PROBABILITY,
    CombinationTable,
    ExplainabilityTable,
    OutputVector,
)

# Upper 95% Wald bound multiplier.
Z95 = 1.959964

_IRLS_MAX_ITER = 50
_IRLS_TOL = 1e-10


@dataclass(frozen=True)
class PredictorRanking:
    """(feature, score) pairs in feature-space order, plus fit warnings."""

    entries: tuple[tuple[str, float], ...]
    warnings: tuple[str, ...] = ()

    def score(self, name: str) -> float:
        for f, s in self.entries:
            if f == name:
                return s
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(f for f, _ in self.entries)

    def to_json_dict(self) -> dict:
        return {
            "entries": [{"feature": f, "score": s} for f, s in self.entries],
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PredictorRanking":
        return cls(
            entries=tuple((e["feature"], float(e["score"])) for e in d["entries"]),
            warnings=tuple(d.get("warnings", ())),
        )


def max_explainability(shap: ExplainabilityTable, use_absolute: bool = False) -> PredictorRanking:
    """Signed column maximum per predictor.

    `use_absolute` switches to max |value| for tables whose columns are
    predominantly negative; the default is the plain signed maximum.
    """
    entries = []
    for name in shap.columns:
        column = shap.column(name)
        if use_absolute:
            entries.append((name, max(abs(v) for v in column)))
        else:
            entries.append((name, max(column)))
    return PredictorRanking(entries=tuple(entries))


def rank_predictors(ranking: PredictorRanking, descending: bool = True) -> list[str]:
    """Total order by score; ties keep feature-space declaration order."""
    indexed = list(enumerate(ranking.entries))
    indexed.sort(key=lambda item: (-item[1][1] if descending else item[1][1], item[0], item[1][0]))
    return [name for _, (name, _) in indexed]


# ---------------------------------------------------------------------------
# Fallback scores from univariate fits
# ---------------------------------------------------------------------------


def _logit_2x2(a: float, b: float, c: float, d: float) -> tuple[float, float, bool]:
    """MLE slope and Wald SE of a univariate logistic fit on a binary x.

    The fit is saturated, so the estimates are the closed forms of the 2x2
    table with cells a=(x=1,y=1), b=(x=1,y=0), c=(x=0,y=1), d=(x=0,y=0).
    A zero cell (separation or a constant margin) gets the Haldane-Anscombe
    correction: +0.5 to every cell.
    """
    corrected = False
    if min(a, b, c, d) == 0:
        a, b, c, d = a + 0.5, b + 0.5, c + 0.5, d + 0.5
        corrected = True
    beta = math.log((a * d) / (b * c))
    se = math.sqrt(1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d)
    return beta, se, corrected


def _logit_irls(x: np.ndarray, y: np.ndarray) -> tuple[float, float, bool]:
    """Two-parameter logistic fit by Newton iterations.

    Returns (slope, slope SE, converged). Used for the single numeric
    predictor, where no closed form exists.
    """
    X = np.column_stack([np.ones_like(x), x])
    beta = np.zeros(2)
    converged = False

    def sigmoid(eta):
        # tanh form saturates without overflow under separation
        return 0.5 * (1.0 + np.tanh(eta / 2.0))

    for _ in range(_IRLS_MAX_ITER):
        mu = sigmoid(X @ beta)
        w = mu * (1.0 - mu)
        info = X.T @ (X * w[:, None])
        try:
            delta = np.linalg.solve(info, X.T @ (y - mu))
        except np.linalg.LinAlgError:
            break
        beta = beta + delta
        if float(np.max(np.abs(delta))) < _IRLS_TOL:
            converged = True
            break
    mu = sigmoid(X @ beta)
    w = np.clip(mu * (1.0 - mu), 1e-12, None)
    cov = np.linalg.inv(X.T @ (X * w[:, None]))
    return float(beta[1]), float(math.sqrt(cov[1, 1])), converged


def _ols_slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float, bool]:
    """OLS slope and its SE; degenerate=True when x has no variance."""
    n = len(x)
    sxx = float(np.sum((x - x.mean()) ** 2))
    if sxx <= 0.0:
        return 0.0, 0.0, True
    beta = float(np.sum((x - x.mean()) * (y - y.mean())) / sxx)
    alpha = float(y.mean() - beta * x.mean())
    rss = float(np.sum((y - alpha - beta * x) ** 2))
    if n <= 2 or rss <= 0.0:
        return beta, 0.0, False
    sigma2 = rss / (n - 2)
    return beta, math.sqrt(sigma2 / sxx), False


def fallback_explainability(
    combos: CombinationTable,
    outputs: OutputVector,
    threshold: float | None = None,
) -> PredictorRanking:
    """Upper 95% bound of each predictor's univariate effect.

    Binary outcome: outputs are thresholded into classes, a logistic
    regression of class on the single predictor is fit, and the score is
    exp(slope + z*SE), the upper bound of the odds ratio. Continuous
    outcome: the score is slope + z*SE from an OLS fit. Categorical
    predictors enter as 0/1 in (negative, positive) level order; the
    numeric predictor enters with its raw values.
    """
    if outputs.kind == PROBABILITY:
        if threshold is None:
            raise ValueError("probability outputs need a threshold for the fallback fit")
        y_class = np.array([1.0 if v >= threshold else 0.0 for v in outputs.values])
    elif outputs.kind == ESTIMATE:
        if threshold is not None:
            raise ValueError("estimate outputs take no threshold")
    y_raw = np.array(outputs.values, dtype=float)

    entries = []
    warnings: list[str] = []
    for f in combos.space.features:
        column = combos.column(f.name)
        if f.is_numeric:
            x = np.array([float(v) for v in column])
        else:
            x = np.array([1.0 if v == f.positive_level else 0.0 for v in column])

        if outputs.kind == PROBABILITY:
            if f.is_numeric:
                beta, se, converged = _logit_irls(x, y_class)
                if not converged:
                    warnings.append(
                        f"{f.name}: logistic fit did not converge (separation on a numeric predictor)"
                    )
                score = math.exp(beta + Z95 * se)
            else:
                a = float(np.sum((x == 1.0) & (y_class == 1.0)))
                b = float(np.sum((x == 1.0) & (y_class == 0.0)))
                c = float(np.sum((x == 0.0) & (y_class == 1.0)))
                d = float(np.sum((x == 0.0) & (y_class == 0.0)))
                beta, se, corrected = _logit_2x2(a, b, c, d)
                if corrected:
                    warnings.append(f"{f.name}: zero cell in the 2x2 table, +0.5 correction applied")
                score = math.exp(beta + Z95 * se)
        else:
            beta, se, degenerate = _ols_slope(x, y_raw)
            if degenerate:
                warnings.append(f"{f.name}: zero predictor variance, score set to 0")
                score = 0.0
            else:
                score = beta + Z95 * se
        entries.append((f.name, score))
    return PredictorRanking(entries=tuple(entries), warnings=tuple(warnings))
