"""Walkthrough: the HTTP API surface, exercised in-process.

Run with: python demos/05_run_service.py

For a real server use the CLI instead:
    acrolex serve --config cfg.toml --port 5000
"""

import json
import tempfile

from fastapi.testclient import TestClient

from acrolex import Glossary
from acrolex.service import ServiceConfig, create_app

# =============================================================================
# Build a small glossary artifact and boot the app around it
# =============================================================================

glossary = Glossary()
glossary.add_pair("GDP", "gross domestic product", "demo")
glossary.add_pair("MCC", "merchant category code", "demo")
glossary.add_pair("MCC", "mobile country code", "demo")

with tempfile.NamedTemporaryFile(suffix=".json", mode="w", delete=False) as fh:
    glossary_path = fh.name
glossary.save(glossary_path)

app = create_app(ServiceConfig(glossary_path=glossary_path))
client = TestClient(app)

print("GET /health ->", client.get("/health").json())

# =============================================================================
# POST /process highlights acronyms; expand=false never touches models
# =============================================================================

body = {"text": "Raw supply futures (RSF) dipped while GDP held steady.", "expand": False}
data = client.post("/process", json=body).json()

print("\nAnnotations:")
for acr in data["annotations"]["acronyms"]:
    print(f"  {acr['text']} at [{acr['start']}, {acr['end']})")
for pair in data["annotations"]["pairs"]:
    print(f"  pair: {pair['acronym']['text']} = {pair['long_form']['rendered']} ({pair['rule']})")

print("\nEnd-of-text glossary rows:")
for row in data["glossary"]:
    print(f"  {row['acronym']}: {row['long_form']} (source: {row['source']})")

# =============================================================================
# Lookup endpoint with case-insensitive fallback, 404 for unknown keys
# =============================================================================

print("\nGET /glossary/mcc ->")
print(json.dumps(client.get("/glossary/mcc").json(), indent=2))
print("GET /glossary/ZZZZ ->", client.get("/glossary/ZZZZ").status_code)

# =============================================================================
# Guard rails: 413 for oversize text, 503 for expansion without models
# =============================================================================

tiny = create_app(ServiceConfig(glossary_path=glossary_path, text_limit=16))
print("\noversize text ->", TestClient(tiny).post("/process", json={"text": "x" * 50}).status_code)
print("expand without models ->", client.post(
    "/process", json={"text": "GDP", "expand": True}
).status_code)
