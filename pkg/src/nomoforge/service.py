"""HTTP API: validation, nomogram creation, reading, and UI asset hosting.

The service is stateless: every upload is parsed, rendered, and discarded.
The nomogram response therefore includes a `read_context` blob that the
client echoes back verbatim to `/api/v1/read` for what-if queries.

Published size limits are enforced before any expensive computation:
15 predictors for the rule nomogram, 5 predictors and 3,200 combinations
for the other kinds. Set NOMOFORGE_LIMITS=off to disable them locally.
"""

from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import csvio
from .errors import (
    InputFormatError,
    InvalidFeatureSpace,
    NomoforgeError,
    OutOfRange,
    ValidationFailed,
)
from .pipeline import build_nomogram
from .reader import read_tabular, read_type1
from .rules import RuleList
from .svg import panel_frames
from .tabular import ESTIMATE, PROBABILITY, CombinationTable, FeatureSpace, OutputVector

DEFAULT_BYTE_CAP = 10 * 1024 * 1024  # uploads above this get 413

LIMITS_ENV_VAR = "NOMOFORGE_LIMITS"


@dataclass(frozen=True)
class LimitPolicy:
    """Published service limits; `disabled()` lifts them for local use."""

    max_predictors_type1: int = 15
    max_predictors_other: int = 5
    max_combinations: int = 3200
    enabled: bool = True

    @classmethod
    def from_env(cls) -> "LimitPolicy":
        if os.environ.get(LIMITS_ENV_VAR, "").strip().lower() == "off":
            return cls.disabled()
        return cls()

    @classmethod
    def disabled(cls) -> "LimitPolicy":
        return cls(enabled=False)

    def violations(self, is_type1: bool, n_predictors: int, n_combinations: int) -> list[str]:
        if not self.enabled:
            return []
        out = []
        if is_type1:
            if n_predictors > self.max_predictors_type1:
                out.append(
                    f"{n_predictors} predictors exceed the maximum of "
                    f"{self.max_predictors_type1} for the rule nomogram"
                )
        else:
            if n_predictors > self.max_predictors_other:
                out.append(
                    f"{n_predictors} predictors exceed the maximum of "
                    f"{self.max_predictors_other} for this nomogram type"
                )
            if n_combinations > self.max_combinations:
                out.append(
                    f"{n_combinations} combinations exceed the maximum of {self.max_combinations}"
                )
        return out


def _findings_response(findings) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"findings": [f.to_json_dict() for f in findings]},
    )


def _message_response(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"message": message})


def create_app(
    limits: Optional[LimitPolicy] = None,
    byte_cap: int = DEFAULT_BYTE_CAP,
    static_dir: Optional[str] = None,
) -> FastAPI:
    limits = limits if limits is not None else LimitPolicy.from_env()
    app = FastAPI(title="nomoforge", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def cap_payload(request: Request, call_next):
        length = request.headers.get("content-length")
        if length is not None and length.isdigit() and int(length) > byte_cap:
            return _message_response(413, f"payload exceeds the {byte_cap} byte cap")
        return await call_next(request)

    @app.get("/healthz")
    async def healthz() -> PlainTextResponse:
        return PlainTextResponse("ok")

    @app.post("/api/v1/nomogram")
    async def create_nomogram(
        features: UploadFile = File(...),
        outputs: UploadFile = File(...),
        manifest: UploadFile = File(...),
        shap: Optional[UploadFile] = File(None),
        prob: bool = Form(False),
        estimate: bool = Form(False),
        threshold: float = Form(0.5),
    ):
        if prob and estimate:
            return _message_response(400, "prob and estimate are mutually exclusive")
        try:
            features_text = (await features.read()).decode("utf-8")
            outputs_text = (await outputs.read()).decode("utf-8")
            manifest_text = (await manifest.read()).decode("utf-8")
            shap_text = (await shap.read()).decode("utf-8") if shap is not None else None
        except UnicodeDecodeError:
            return _message_response(400, "uploads must be UTF-8 encoded CSV")

        # Cheap header/row counts gate the published limits before any
        # validation or rendering work happens.
        try:
            names, str_rows = csvio.parse_features(features_text)
        except InputFormatError as exc:
            return _message_response(400, str(exc))
        is_type1 = not prob and not estimate
        violations = limits.violations(is_type1, len(names), len(str_rows))
        if violations:
            return JSONResponse(status_code=422, content={"limit_violations": violations})

        output_kind = ESTIMATE if estimate else PROBABILITY
        try:
            space, combos, out_vec, shap_table = csvio.parse_inputs(
                features_text, outputs_text, manifest_text, shap_text, output_kind=output_kind,
            )
        except InputFormatError as exc:
            return _message_response(400, str(exc))
        except InvalidFeatureSpace as exc:
            if exc.findings:
                return _findings_response(exc.findings)
            return _message_response(422, str(exc))

        try:
            artifacts = build_nomogram(
                space, combos, out_vec, shap=shap_table,
                probability=prob, estimate=estimate, threshold=threshold,
            )
        except ValidationFailed as exc:
            return _findings_response(exc.report.findings)
        except NomoforgeError as exc:
            return _message_response(422, str(exc))

        svg_text = artifacts.svg.decode("utf-8")
        read_context = {
            "space": space.to_json_dict(),
            "rules": artifacts.rules.to_json_dict() if artifacts.rules else None,
            "table": None if artifacts.rules else {
                "rows": [list(row) for row in combos.rows],
                "outputs": {"kind": out_vec.kind, "values": list(out_vec.values)},
            },
            "threshold": threshold,
        }
        layout_json = artifacts.layout.to_json_dict()
        layout_json["frames"] = panel_frames(artifacts.layout)
        body = {
            "kind": artifacts.kind.value,
            "svg": svg_text,
            "layout": layout_json,
            "rules": artifacts.rules.to_json_dict() if artifacts.rules else None,
            "ranking": artifacts.ranking.to_json_dict(),
            "read_context": read_context,
        }
        digest = hashlib.sha256(artifacts.svg).hexdigest()
        return JSONResponse(content=body, headers={"X-Content-Hash": digest})

    @app.post("/api/v1/read")
    async def read_nomogram(payload: dict):
        context = payload.get("read_context") or {}
        sample = payload.get("sample")
        if not isinstance(sample, dict) or not sample:
            return _message_response(400, "body must carry a non-empty 'sample' object")
        try:
            space = FeatureSpace.from_json_dict(context["space"])
        except (KeyError, TypeError, ValueError):
            return _message_response(400, "body must carry the 'read_context' from a nomogram response")

        try:
            if context.get("rules"):
                rules = RuleList.from_json_dict(context["rules"])
                trace = read_type1(space, rules, sample)
            elif context.get("table"):
                table = context["table"]
                combos = CombinationTable(
                    space=space, rows=tuple(tuple(row) for row in table["rows"]),
                )
                out_vec = OutputVector(
                    kind=table["outputs"]["kind"],
                    values=tuple(float(v) for v in table["outputs"]["values"]),
                )
                trace = read_tabular(combos, out_vec, sample)
            else:
                return _message_response(400, "read_context holds neither rules nor a table")
        except (OutOfRange, ValueError) as exc:
            return _message_response(422, str(exc))

        return JSONResponse(content=trace.to_json_dict())

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
