"""Chunk-routed prediction with candidate masking.

An unambiguous glossary entry is answered straight from the dictionary.
Ambiguous acronyms route to the chunk model that owns them; its logits
are masked down to the glossary candidates and softmaxed, so the chosen
long form can never leave the candidate set. Acronyms without a usable
model fall back to the glossary's frequency ranking, flagged as such.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ..glossary import Glossary, GlossaryEntry
from ..identify import is_acronym_token
from ..tokenize import TokenSequence, tokenize
from .network import ModelParams, classify, encode, load_model

METHOD_MODEL = "model"
METHOD_DICTIONARY = "dictionary"
METHOD_FREQUENCY_FALLBACK = "frequency-fallback"


@dataclass(frozen=True)
class RankedPrediction:
    """Candidates sorted by score (descending); scores sum to one."""

    candidates: tuple[tuple[str, float], ...]
    method: str

    @property
    def chosen(self) -> str:
        return self.candidates[0][0]

    def to_dict(self, top_k: int | None = None) -> dict:
        shown = self.candidates if top_k is None else self.candidates[:top_k]
        return {
            "candidates": [{"long_form": lf, "score": s} for lf, s in shown],
            "chosen": self.chosen,
            "method": self.method,
        }


class ModelRegistry:
    """Loaded chunk models plus the acronym -> chunk routing they define."""

    def __init__(self, models: dict[str, ModelParams] | None = None):
        self.models: dict[str, ModelParams] = {}
        self._routing: dict[str, str] = {}
        for params in (models or {}).values():
            self.add(params)

    def add(self, params: ModelParams) -> None:
        if not params.chunk_id:
            raise ValueError("model has no chunk id")
        self.models[params.chunk_id] = params
        for acr in params.acronyms:
            self._routing[acr] = params.chunk_id

    def model_for(self, acronym: str) -> ModelParams | None:
        chunk = self._routing.get(acronym)
        return self.models.get(chunk) if chunk else None

    def __len__(self) -> int:
        return len(self.models)

    @classmethod
    def load_dir(cls, directory: str) -> "ModelRegistry":
        registry = cls()
        if not os.path.isdir(directory):
            return registry
        for name in sorted(os.listdir(directory)):
            if name.endswith(".npz"):
                registry.add(load_model(os.path.join(directory, name)))
        return registry


def _frequency_prediction(entry: GlossaryEntry) -> RankedPrediction:
    cands = entry.sorted_candidates()
    total = sum(c.frequency for c in cands)
    return RankedPrediction(
        tuple((c.long_form, c.frequency / total) for c in cands),
        METHOD_FREQUENCY_FALLBACK,
    )


def _masked_scores(
    params: ModelParams, logits: np.ndarray, entry: GlossaryEntry
) -> RankedPrediction | None:
    index = {lf: i for i, lf in enumerate(params.label_space)}
    present = [c.long_form for c in entry.sorted_candidates() if c.long_form in index]
    if not present:
        return None
    masked = np.array([logits[index[lf]] for lf in present])
    masked -= masked.max()
    probs = np.exp(masked)
    probs /= probs.sum()
    ranked = sorted(zip(present, probs), key=lambda p: (-p[1], p[0]))
    return RankedPrediction(tuple((lf, float(s)) for lf, s in ranked), METHOD_MODEL)


def predict_sequence(
    seq: TokenSequence,
    acronym_idx: int,
    glossary: Glossary,
    registry: ModelRegistry | None = None,
) -> RankedPrediction | None:
    """Expansion for the acronym token at ``acronym_idx``.

    Returns None when the acronym is unknown to the glossary (the caller
    shows no expansion). Every occurrence is predicted independently.
    """
    if not 0 <= acronym_idx < len(seq):
        raise ValueError(f"token index {acronym_idx} out of range")
    token = seq[acronym_idx]
    if not is_acronym_token(token.text):
        raise ValueError(f"token {token.text!r} fails the acronym detector")

    entry = glossary.lookup(token.text)
    if entry is None:
        return None
    cands = entry.sorted_candidates()
    if len(cands) == 1:
        return RankedPrediction(((cands[0].long_form, 1.0),), METHOD_DICTIONARY)

    params = registry.model_for(entry.acronym) if registry else None
    if params is None:
        return _frequency_prediction(entry)

    texts = [t.text for t in seq.tokens]
    state = encode(params, texts, acronym_idx)
    logits = classify(params, state)
    ranked = _masked_scores(params, logits, entry)
    if ranked is None:
        return _frequency_prediction(entry)
    return ranked


def predict(
    text: str,
    acronym_idx: int,
    glossary: Glossary,
    registry: ModelRegistry | None = None,
) -> RankedPrediction | None:
    """Tokenize ``text`` and expand the acronym at token ``acronym_idx``."""
    return predict_sequence(tokenize(text), acronym_idx, glossary, registry)
