"""Shared builders for service tests and their golden fixtures.

Run ``python tests/support.py`` to regenerate the golden request/response
files under tests/data/service/ after an intentional contract change.
The fixture texts only exercise deterministic paths (rule cascade and
dictionary expansion), so the bytes do not depend on model weights.
"""

from __future__ import annotations

import json
import os

from acrolex.glossary import Glossary
from acrolex.model import EmbeddingTable, init_params, save_model
from acrolex.service import ServiceConfig, create_app

HERE = os.path.dirname(os.path.abspath(__file__))
SERVICE_DATA = os.path.join(HERE, "data", "service")

PROCESS_TEXT = "Raw supply futures (RSF) dipped while GDP held steady."

PROCESS_NOEXPAND_REQUEST = {"text": PROCESS_TEXT, "expand": False, "top_k": 10}
PROCESS_EXPAND_REQUEST = {"text": PROCESS_TEXT, "expand": True, "top_k": 10}


def build_glossary(path: str) -> None:
    g = Glossary()
    g.add_pair("GDP", "gross domestic product", "demo")
    g.add_pair("GDP", "gross domestic product", "demo")
    g.add_pair("MCC", "merchant category code", "demo")
    g.add_pair("MCC", "merchant category code", "demo")
    g.add_pair("MCC", "mobile country code", "demo")
    g.save(path)


def build_model_dir(directory: str) -> None:
    """One deterministic (untrained) chunk model so expansion is enabled."""
    os.makedirs(directory, exist_ok=True)
    emb = EmbeddingTable.random_table([f"w{i}" for i in range(10)], dim=8, seed=5)
    params = init_params(
        embedding=emb,
        hidden=4,
        ffn=4,
        label_space=("merchant category code", "mobile country code"),
        seed=7,
        chunk_id="chunk-000",
        acronyms=("MCC",),
    )
    save_model(params, os.path.join(directory, "chunk-000.npz"))


def build_service_env(root: str) -> tuple[ServiceConfig, ServiceConfig]:
    """(config without models, config with models) over one glossary."""
    glossary_path = os.path.join(root, "glossary.json")
    models_dir = os.path.join(root, "models")
    build_glossary(glossary_path)
    build_model_dir(models_dir)
    bare = ServiceConfig(glossary_path=glossary_path, models_dir=None)
    full = ServiceConfig(glossary_path=glossary_path, models_dir=models_dir)
    return bare, full


FIXTURES = (
    ("process_noexpand", "bare", "POST", "/process", PROCESS_NOEXPAND_REQUEST),
    ("process_expand", "full", "POST", "/process", PROCESS_EXPAND_REQUEST),
    ("glossary_gdp", "full", "GET", "/glossary/GDP", None),
    ("glossary_mcc", "full", "GET", "/glossary/MCC", None),
    ("health_full", "full", "GET", "/health", None),
    ("health_bare", "bare", "GET", "/health", None),
)


def fixture_paths(name: str) -> tuple[str, str]:
    return (
        os.path.join(SERVICE_DATA, f"{name}.request.json"),
        os.path.join(SERVICE_DATA, f"{name}.response.bin"),
    )


def regenerate(root: str) -> None:
    from fastapi.testclient import TestClient

    bare_cfg, full_cfg = build_service_env(root)
    apps = {
        "bare": TestClient(create_app(bare_cfg)),
        "full": TestClient(create_app(full_cfg)),
    }
    os.makedirs(SERVICE_DATA, exist_ok=True)
    for name, which, method, path, body in FIXTURES:
        client = apps[which]
        if method == "POST":
            response = client.post(path, json=body)
        else:
            response = client.get(path)
        assert response.status_code == 200, (name, response.status_code)
        req_path, resp_path = fixture_paths(name)
        with open(req_path, "w", encoding="utf-8") as fh:
            json.dump(
                {"method": method, "path": path, "body": body}, fh, indent=2
            )
            fh.write("\n")
        with open(resp_path, "wb") as fh:
            fh.write(response.content)
        print(f"wrote {resp_path} ({len(response.content)} bytes)")


if __name__ == "__main__":
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        regenerate(tmp)
