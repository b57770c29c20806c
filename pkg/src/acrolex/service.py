"""HTTP JSON API tying identification, glossary lookup, and expansion.

Artifacts (glossary, chunk models, static UI bundle) are loaded once at
startup and never mutated, so request handling is stateless and safe to
run concurrently. Responses are built with fixed key order and the
default compact JSON encoding, which keeps byte-level golden fixtures
stable.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .glossary import Glossary
from .identify import AIAnnotation, identify
from .model import ModelRegistry, RankedPrediction, predict_sequence
from .tokenize import tokenize

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

DEFAULT_TEXT_LIMIT = 1_048_576  # bytes of UTF-8
DEFAULT_TOP_K = 10


@dataclass
class ServiceConfig:
    glossary_path: str | None = None
    models_dir: str | None = None
    static_dir: str | None = None
    text_limit: int = DEFAULT_TEXT_LIMIT
    port: int = 5000
    cues_path: str | None = None
    env: dict = field(default_factory=lambda: dict(os.environ))

    @classmethod
    def load(cls, path: str | None = None, env: dict | None = None) -> "ServiceConfig":
        """TOML config with ACROLEX_* environment overrides."""
        env = dict(os.environ) if env is None else env
        section: dict = {}
        if path:
            with open(path, "rb") as fh:
                section = tomllib.load(fh).get("service", {})
        cfg = cls(
            glossary_path=section.get("glossary"),
            models_dir=section.get("models"),
            static_dir=section.get("static"),
            text_limit=int(section.get("text_limit", DEFAULT_TEXT_LIMIT)),
            port=int(section.get("port", 5000)),
            cues_path=section.get("cues"),
            env=env,
        )
        cfg.glossary_path = env.get("ACROLEX_GLOSSARY", cfg.glossary_path)
        cfg.models_dir = env.get("ACROLEX_MODELS", cfg.models_dir)
        cfg.static_dir = env.get("ACROLEX_STATIC", cfg.static_dir)
        if "ACROLEX_TEXT_LIMIT" in env:
            cfg.text_limit = int(env["ACROLEX_TEXT_LIMIT"])
        if "ACROLEX_PORT" in env:
            cfg.port = int(env["ACROLEX_PORT"])
        return cfg


class ProcessRequest(BaseModel):
    text: str
    expand: bool = False
    top_k: int = DEFAULT_TOP_K


SOURCE_LOCAL = "local"
SOURCE_MODEL = "model"
SOURCE_DICTIONARY = "dictionary"


def _occurrence_key(text: str, start: int) -> str:
    return f"{text}@{start}"


def _expansions(
    ann: AIAnnotation,
    glossary: Glossary,
    registry: ModelRegistry,
    top_k: int,
) -> dict[str, RankedPrediction]:
    """Predictions for occurrences without a local definition."""
    del top_k  # truncation happens at serialization
    seq = tokenize(ann.text)
    covered = [
        (p.acronym.start, p.acronym.end) for p in ann.pairs
    ]
    out: dict[str, RankedPrediction] = {}
    for acr in ann.acronyms:
        if any(s <= acr.start and acr.end <= e for s, e in covered):
            continue
        if seq[acr.token_idx].text != acr.text:
            continue  # merged surfaces are only expandable via their pair
        prediction = predict_sequence(seq, acr.token_idx, glossary, registry)
        if prediction is not None:
            out[_occurrence_key(acr.text, acr.start)] = prediction
    return out


def _glossary_rows(
    ann: AIAnnotation, expansions: dict[str, RankedPrediction]
) -> list[dict]:
    """One row per distinct acronym: local pair, expansion, or unknown."""
    local = {a: (lf, SOURCE_LOCAL) for a, lf, _ in ann.glossary_rows()}
    rows: dict[str, tuple[str | None, str | None]] = {}
    for acr in sorted({a.text for a in ann.acronyms}):
        if acr in local:
            rows[acr] = local[acr]
            continue
        chosen = next(
            (
                (pred.chosen, SOURCE_MODEL if pred.method == "model" else SOURCE_DICTIONARY)
                for key, pred in expansions.items()
                if key.rsplit("@", 1)[0] == acr
            ),
            (None, None),
        )
        rows[acr] = chosen
    return [
        {"acronym": acr, "long_form": lf, "source": src}
        for acr, (lf, src) in rows.items()
    ]


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    cfg = config or ServiceConfig()
    glossary = Glossary.load(cfg.glossary_path) if cfg.glossary_path else Glossary()
    registry = (
        ModelRegistry.load_dir(cfg.models_dir) if cfg.models_dir else ModelRegistry()
    )

    app = FastAPI(title="acrolex", docs_url=None, redoc_url=None)
    app.state.config = cfg
    app.state.glossary = glossary
    app.state.registry = registry

    @app.exception_handler(RequestValidationError)
    async def malformed_body(_: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.post("/process")
    def process(req: ProcessRequest) -> JSONResponse:
        if len(req.text.encode("utf-8")) > cfg.text_limit:
            raise HTTPException(status_code=413, detail="text too large")
        if req.expand and len(registry) == 0:
            raise HTTPException(status_code=503, detail="expansion models not loaded")
        ann = identify(req.text)
        expansions = (
            _expansions(ann, glossary, registry, req.top_k) if req.expand else {}
        )
        body = {
            "annotations": ann.to_dict(),
            "expansions": {
                key: pred.to_dict(top_k=req.top_k) for key, pred in expansions.items()
            },
            "glossary": _glossary_rows(ann, expansions),
        }
        return JSONResponse(content=body)

    @app.get("/glossary/{acronym}")
    def glossary_entry(acronym: str) -> JSONResponse:
        entry = glossary.lookup(acronym)
        if entry is None:
            raise HTTPException(status_code=404, detail="unknown acronym")
        return JSONResponse(
            content={
                "acronym": entry.acronym,
                "candidates": [
                    {
                        "long_form": c.long_form,
                        "frequency": c.frequency,
                        "sources": sorted(c.sources),
                    }
                    for c in entry.sorted_candidates()
                ],
            }
        )

    @app.get("/health")
    def health() -> JSONResponse:
        return JSONResponse(
            content={
                "status": "ok",
                "models_loaded": len(registry),
                "glossary_entries": len(glossary),
            }
        )

    if cfg.static_dir and os.path.isdir(cfg.static_dir):
        app.mount("/", StaticFiles(directory=cfg.static_dir, html=True), name="ui")

    return app


def serve(config_path: str | None, port: int | None = None) -> None:
    """Run the API with uvicorn (blocking)."""
    import uvicorn

    cfg = ServiceConfig.load(config_path)
    if port is not None:
        cfg.port = port
    uvicorn.run(create_app(cfg), host="0.0.0.0", port=cfg.port)
