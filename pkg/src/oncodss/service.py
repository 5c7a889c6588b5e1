"""HTTP JSON API over a completed bundle.

Read-only endpoints under /api expose the feature schemas, the model
roster, interactive prediction, persisted metrics, KM curves and
enrichment results. Responses use canonical JSON (sorted keys, shortest
round-trip floats) so parity checks against on-disk reports are
byte-stable. Error bodies are {code, message, fields[]}.

The port comes from the --port flag or the ONCODSS_PORT environment
variable (default 8080). A bundle whose files no longer match the
manifest digests refuses to load (the documented 409 condition).
"""

from __future__ import annotations

import json
import os
import typing
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .errors import SchemaMismatchError
from .models import predict
from .pipeline import Bundle, load_bundle

PORT_ENV_VAR = "ONCODSS_PORT"
CORS_ENV_VAR = "ONCODSS_CORS_ORIGIN"
DEFAULT_PORT = 8080


class CanonicalJSONResponse(Response):
    media_type = "application/json"

    def render(self, content: typing.Any) -> bytes:
        return (
            json.dumps(content, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        ).encode("utf-8")


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str, fields: list[str] | None = None):
        super().__init__(message)
        self.status_code = status_code
        self.code = code
        self.message = message
        self.fields = fields or []


class PredictRequest(BaseModel):
    scenario: str
    algorithm: str
    features: dict[str, typing.Union[str, float, int, bool]]


def _validate_features(schema: list[dict], features: dict) -> list[str]:
    """Collect every field error; empty list means the request is clean."""
    errors: list[str] = []
    declared = {entry["name"] for entry in schema}
    for name in features:
        if name not in declared:
            errors.append(name)
    for entry in schema:
        name = entry["name"]
        if name not in features:
            errors.append(name)
            continue
        value = features[name]
        if entry["kind"] == "numeric":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                errors.append(name)
        elif not isinstance(value, str):
            errors.append(name)
    return errors


def create_app(
    bundle: Bundle,
    cors_origins: list[str] | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="oncodss", default_response_class=CanonicalJSONResponse)

    origins = cors_origins or [os.environ.get(CORS_ENV_VAR, "*")]
    app.add_middleware(
        CORSMiddleware,
        allow_origins=origins,
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(_: Request, exc: ApiError):
        return CanonicalJSONResponse(
            {"code": exc.code, "message": exc.message, "fields": exc.fields},
            status_code=exc.status_code,
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(_: Request, exc: RequestValidationError):
        fields = sorted(
            {".".join(str(p) for p in err["loc"] if p != "body") for err in exc.errors()}
        )
        return CanonicalJSONResponse(
            {"code": "MALFORMED_BODY", "message": "request body failed validation", "fields": fields},
            status_code=400,
        )

    def schema_or_404(scenario: str) -> list[dict]:
        schema = bundle.feature_schema(scenario)
        if schema is None:
            raise ApiError(404, "UNKNOWN_SCENARIO", f"no scenario {scenario!r}", ["scenario"])
        return schema

    @app.get("/api/health")
    async def health():
        return {"status": "ok", "bundle_digest": bundle.digest, "version": __version__}

    @app.get("/api/models")
    async def models():
        return {
            "models": [
                {"scenario": scenario, "algorithm": kind}
                for scenario, kind in sorted(bundle.models)
            ]
        }

    @app.get("/api/features")
    async def features(scenario: str):
        return {"scenario": scenario, "features": schema_or_404(scenario)}

    @app.get("/api/metrics")
    async def metrics(scenario: str, algorithm: str):
        schema_or_404(scenario)
        cell = bundle.reports.get((scenario, algorithm))
        if cell is None:
            raise ApiError(404, "UNKNOWN_MODEL", f"no model {algorithm!r} for {scenario!r}", ["algorithm"])
        return cell.as_dict()

    @app.get("/api/survival")
    async def survival(parameter: str):
        entry = bundle.survival_curves.get(parameter)
        if entry is None:
            raise ApiError(
                404, "UNKNOWN_PARAMETER", f"no survival curves for {parameter!r}", ["parameter"]
            )
        return entry

    @app.get("/api/enrichment")
    async def enrichment(library: str):
        entry = bundle.enrichment.get(library)
        if entry is None:
            raise ApiError(404, "UNKNOWN_LIBRARY", f"no enrichment library {library!r}", ["library"])
        return {"library": library, "results": entry}

    @app.post("/api/predict")
    async def predict_endpoint(request: PredictRequest):
        schema = schema_or_404(request.scenario)
        model = bundle.models.get((request.scenario, request.algorithm))
        if model is None:
            raise ApiError(
                404,
                "UNKNOWN_MODEL",
                f"no model {request.algorithm!r} for scenario {request.scenario!r}",
                ["algorithm"],
            )
        bad_fields = _validate_features(schema, request.features)
        if bad_fields:
            raise ApiError(
                400,
                "BAD_FEATURES",
                "missing, unknown or mistyped features",
                sorted(set(bad_fields)),
            )
        try:
            result = predict(model, request.features)
        except SchemaMismatchError as exc:
            raise ApiError(400, "BAD_FEATURES", str(exc), [exc.feature]) from exc
        cell = bundle.reports[(request.scenario, request.algorithm)]
        return {
            "label": result.label,
            "score": result.score,
            "warnings": result.warnings,
            "algorithm": {
                "kind": model.kind,
                "hyperparameters": model.hyperparameters,
                "seed": model.seed,
            },
            "metrics": cell.as_dict(),
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="console")

    return app


def serve(
    bundle_dir: str | Path,
    port: int | None = None,
    host: str = "127.0.0.1",
    static_dir: str | Path | None = None,
) -> None:
    """Load, verify and serve a bundle (blocking)."""
    import uvicorn

    bundle = load_bundle(bundle_dir)
    if port is None:
        port = int(os.environ.get(PORT_ENV_VAR, DEFAULT_PORT))
    app = create_app(bundle, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
