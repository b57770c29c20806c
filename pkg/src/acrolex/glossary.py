"""Acronym dictionary: candidate long forms with frequencies and sources.

Keys preserve case ("AD" and "Ad" are distinct entries) with a
case-insensitive fallback at lookup time. Long forms are normalized on
insertion: token-joined (hyphens become " - "), whitespace collapsed,
and lowercased word by word except for words that themselves look like
embedded acronyms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .identify import is_acronym_token
from .tokenize import tokenize

FORMAT_VERSION = 1


class GlossaryError(Exception):
    """Invalid glossary operation (e.g. adding a non-acronym key)."""


class GlossaryFormatError(Exception):
    """Unreadable or wrong-version glossary file."""


def _mostly_upper(word: str) -> bool:
    letters = [c for c in word if c.isalpha()]
    if not letters:
        return False
    upper = sum(1 for c in letters if c.isupper())
    return upper * 5 >= len(letters) * 3


def normalize_long_form(long_form: str) -> str:
    """Canonical long-form key: tokenized, space-joined, mostly lowercase.

    Words with >= 60% uppercase letters keep their case so embedded
    acronyms ("BiLSTM models") survive normalization.
    """
    words = []
    for tok in tokenize(long_form).tokens:
        text = tok.text
        words.append(text if _mostly_upper(text) else text.lower())
    return " ".join(words)


@dataclass
class Candidate:
    long_form: str
    frequency: int = 1
    sources: set[str] = field(default_factory=set)


@dataclass
class GlossaryEntry:
    acronym: str
    candidates: dict[str, Candidate] = field(default_factory=dict)

    @property
    def ambiguous(self) -> bool:
        return len(self.candidates) >= 2

    def sorted_candidates(self) -> list[Candidate]:
        """Highest frequency first; ties broken lexicographically."""
        return sorted(
            self.candidates.values(), key=lambda c: (-c.frequency, c.long_form)
        )


class Glossary:
    """Mutable acronym -> candidate long-form map."""

    def __init__(self) -> None:
        self.entries: dict[str, GlossaryEntry] = {}

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Glossary):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def add_pair(self, acronym: str, long_form: str, source: str = "") -> None:
        """Record one observed (acronym, long form) pair.

        Raises GlossaryError when the acronym fails the detector
        thresholds; mined input should never contain such keys.
        """
        if not is_acronym_token(acronym):
            raise GlossaryError(f"not an acronym by detector thresholds: {acronym!r}")
        normalized = normalize_long_form(long_form)
        if not normalized:
            raise GlossaryError("empty long form")
        entry = self.entries.setdefault(acronym, GlossaryEntry(acronym))
        cand = entry.candidates.get(normalized)
        if cand is None:
            entry.candidates[normalized] = cand = Candidate(normalized, 0)
        cand.frequency += 1
        if source:
            cand.sources.add(source)

    def lookup(self, acronym: str) -> GlossaryEntry | None:
        """Exact-key match, then a case-insensitive fallback."""
        entry = self.entries.get(acronym)
        if entry is not None:
            return entry
        folded = acronym.casefold()
        matches = sorted(k for k in self.entries if k.casefold() == folded)
        if matches:
            return self.entries[matches[0]]
        return None

    def merge(self, other: "Glossary") -> None:
        """Fold another glossary in; frequencies add, sources union."""
        for entry in other.entries.values():
            target = self.entries.setdefault(entry.acronym, GlossaryEntry(entry.acronym))
            for cand in entry.candidates.values():
                mine = target.candidates.get(cand.long_form)
                if mine is None:
                    target.candidates[cand.long_form] = mine = Candidate(
                        cand.long_form, 0
                    )
                mine.frequency += cand.frequency
                mine.sources |= cand.sources

    def stats(self) -> dict:
        """Counts over the current entries.

        ``unique_long_forms`` counts long forms with per-acronym
        multiplicity (a long form shared by two acronyms counts twice),
        so avg_long_forms_per_acronym * unique_acronyms equals it exactly.
        """
        unique_acronyms = len(self.entries)
        unique_long_forms = sum(len(e.candidates) for e in self.entries.values())
        ambiguous = sum(1 for e in self.entries.values() if e.ambiguous)
        avg = unique_long_forms / unique_acronyms if unique_acronyms else 0.0
        return {
            "unique_acronyms": unique_acronyms,
            "unique_long_forms": unique_long_forms,
            "ambiguous_acronyms": ambiguous,
            "avg_long_forms_per_acronym": avg,
        }

    def to_dict(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "entries": {
                acr: {
                    "candidates": [
                        {
                            "lf": c.long_form,
                            "freq": c.frequency,
                            "sources": sorted(c.sources),
                        }
                        for c in self.entries[acr].sorted_candidates()
                    ]
                }
                for acr in sorted(self.entries)
            },
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_dict(cls, data: dict) -> "Glossary":
        if not isinstance(data, dict):
            raise GlossaryFormatError("glossary file must hold a JSON object")
        version = data.get("version")
        if version != FORMAT_VERSION:
            raise GlossaryFormatError(f"unsupported glossary version: {version!r}")
        entries = data.get("entries")
        if not isinstance(entries, dict):
            raise GlossaryFormatError("missing 'entries' object")
        g = cls()
        for acr, body in entries.items():
            candidates = body.get("candidates") if isinstance(body, dict) else None
            if not isinstance(candidates, list) or not candidates:
                raise GlossaryFormatError(f"entry {acr!r}: empty or missing candidates")
            entry = GlossaryEntry(acr)
            for cand in candidates:
                try:
                    lf = cand["lf"]
                    freq = int(cand["freq"])
                    sources = set(cand.get("sources", []))
                except (TypeError, KeyError, ValueError) as exc:
                    raise GlossaryFormatError(
                        f"entry {acr!r}: malformed candidate {cand!r}"
                    ) from exc
                if freq < 1:
                    raise GlossaryFormatError(f"entry {acr!r}: frequency < 1")
                entry.candidates[lf] = Candidate(lf, freq, sources)
            g.entries[acr] = entry
        return g

    @classmethod
    def load(cls, path: str) -> "Glossary":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GlossaryFormatError(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data)


def build_from_dictionary(mapping: dict[str, list[str]], source: str = "") -> Glossary:
    """Glossary from a plain {acronym: [long forms]} mapping."""
    g = Glossary()
    for acr, lfs in mapping.items():
        for lf in lfs:
            g.add_pair(acr, lf, source)
    return g
