import itertools
import random
from pathlib import Path

import pytest


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    rows = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance" in nodeid and "::" in nodeid:
                rows.append((nodeid.split("::")[-1], outcome))
    if rows:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, outcome in rows:
            flag = "PASS" if outcome == "passed" else "FAIL"
            terminalreporter.write_line(f"{flag} {name}")

from nomoforge import (
    CombinationTable,
    ExplainabilityTable,
    FeatureSpace,
    FeatureSpec,
    OutputVector,
    expand_grid,
)
from nomoforge.csvio import load_inputs

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def ab_space():
    return FeatureSpace(features=(
        FeatureSpec.categorical("A", ("0", "1")),
        FeatureSpec.categorical("B", ("0", "1")),
    ))


@pytest.fixture
def ab_combos(ab_space):
    return expand_grid(ab_space)


@pytest.fixture
def ab_outputs():
    # aligned with expand_grid order (0,0),(0,1),(1,0),(1,1)
    return OutputVector(kind="probability", values=(0.2, 0.7, 0.8, 0.9))


@pytest.fixture
def ab_shap():
    return ExplainabilityTable(
        columns=("A", "B"),
        values=((-0.2, -0.15), (-0.1, 0.25), (0.4, -0.2), (0.5, 0.3)),
    )


@pytest.fixture
def catbin_files():
    d = FIXTURES / "catbin"
    return {
        "features": d / "features.csv",
        "outputs": d / "outputs.csv",
        "outputs_est": d / "outputs_est.csv",
        "manifest": d / "manifest.csv",
        "shap": d / "shap.csv",
    }


@pytest.fixture
def mixed_files():
    d = FIXTURES / "mixed"
    return {
        "features": d / "features.csv",
        "outputs": d / "outputs.csv",
        "outputs_est": d / "outputs_est.csv",
        "manifest": d / "manifest.csv",
        "shap": d / "shap.csv",
    }


@pytest.fixture
def mixed_inputs(mixed_files):
    return load_inputs(
        mixed_files["features"], mixed_files["outputs"], mixed_files["manifest"],
        mixed_files["shap"],
    )


def random_instance(rng: random.Random, k: int):
    """A full binary table with uniform outputs and a random attribution table."""
    space = FeatureSpace(features=tuple(
        FeatureSpec.categorical(f"x{i}", ("0", "1")) for i in range(k)
    ))
    combos = expand_grid(space)
    outputs = OutputVector(
        kind="probability", values=tuple(rng.random() for _ in combos.rows),
    )
    shap = ExplainabilityTable(
        columns=space.names,
        values=tuple(
            tuple(rng.uniform(-1.0, 1.0) for _ in range(k)) for _ in combos.rows
        ),
    )
    return space, combos, outputs, shap
