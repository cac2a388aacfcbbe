"""Capture genuine service responses as JSON fixtures for the UI tests.

Run from the repository root with the Python package installed:

    python frontend/scripts/capture_fixtures.py
"""

import itertools
import json
from pathlib import Path

from fastapi.testclient import TestClient

from nomoforge.service import LimitPolicy, create_app

ROOT = Path(__file__).resolve().parents[2]
FIXTURES = ROOT / "tests" / "fixtures"
OUT = ROOT / "frontend" / "tests" / "fixtures"


def payload(d: Path, shap: bool):
    files = {
        "features": ("features.csv", (d / "features.csv").read_bytes(), "text/csv"),
        "outputs": ("outputs.csv", (d / "outputs.csv").read_bytes(), "text/csv"),
        "manifest": ("manifest.csv", (d / "manifest.csv").read_bytes(), "text/csv"),
    }
    if shap:
        files["shap"] = ("shap.csv", (d / "shap.csv").read_bytes(), "text/csv")
    return files


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app(limits=LimitPolicy()))

    def save(name: str, response):
        OUT.joinpath(name).write_text(json.dumps(response.json(), indent=1) + "\n")
        print(f"{name}: status {response.status_code}")

    catbin = FIXTURES / "catbin"
    r1 = client.post("/api/v1/nomogram", files=payload(catbin, shap=True))
    save("nomogram_type1.json", r1)
    context = r1.json()["read_context"]

    for name, sample in (
        ("read_a1_b0.json", {"A": "1", "B": "0"}),
        ("read_a0_b1.json", {"A": "0", "B": "1"}),
        ("read_a0_b0.json", {"A": "0", "B": "0"}),
    ):
        save(name, client.post(
            "/api/v1/read", json={"read_context": context, "sample": sample},
        ))

    mixed = FIXTURES / "mixed"
    r4 = client.post(
        "/api/v1/nomogram", files=payload(mixed, shap=True), data={"prob": "true"},
    )
    save("nomogram_type4.json", r4)
    save("read_mixed.json", client.post(
        "/api/v1/read",
        json={"read_context": r4.json()["read_context"], "sample": {"A": "1", "B": "1", "q": 17}},
    ))

    # a 16-predictor upload, rejected by the published limit
    names = [f"x{i}" for i in range(16)]
    rows = ["0," * 15 + "0", "1," * 15 + "1"]
    features = (",".join(names) + "\n" + "\n".join(rows) + "\n").encode()
    manifest = ("feature,category\n" + "".join(
        f"{n},{v}\n" for n in names for v in "01"
    )).encode()
    r_limit = client.post("/api/v1/nomogram", files={
        "features": ("f.csv", features, "text/csv"),
        "outputs": ("o.csv", b"output\n0.9\n0.9\n", "text/csv"),
        "manifest": ("m.csv", manifest, "text/csv"),
    })
    save("limit_16_predictors.json", r_limit)
    assert r_limit.status_code == 422


if __name__ == "__main__":
    main()
