"""Corpus mining: glossary pairs, self-labeled samples, chunks, splits.

Documents arrive as JSONL records {"id", "text", "corpus"}. Every locally
defined acronym yields a glossary pair and one labeled disambiguation
sample whose context is the surrounding sentence (padded with neighbors
up to a token budget) with the defining long form cut out, so the label
cannot leak into the input.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .identify import AIAnnotation, Pair, identify
from .tokenize import TokenSequence, sentence_boundaries, sequence_from_texts

CONTEXT_TOKEN_BUDGET = 128


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    corpus: str = ""


@dataclass(frozen=True)
class ADSample:
    """One disambiguation training sample (token context + gold label)."""

    id: str
    acronym: str
    acronym_idx: int
    tokens: TokenSequence
    gold_long_form: str
    doc_id: str = ""

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "acronym": self.acronym,
            "acronym_idx": self.acronym_idx,
            "tokens": [t.text for t in self.tokens.tokens],
            "gold_long_form": self.gold_long_form,
            "doc_id": self.doc_id,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "ADSample":
        return cls(
            id=rec["id"],
            acronym=rec["acronym"],
            acronym_idx=int(rec["acronym_idx"]),
            tokens=sequence_from_texts(list(rec["tokens"])),
            gold_long_form=rec["gold_long_form"],
            doc_id=rec.get("doc_id", ""),
        )


def read_documents_jsonl(path: str) -> list[Document]:
    docs: list[Document] = []
    seen: set[tuple[str, str]] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                doc = Document(str(rec["id"]), str(rec["text"]), str(rec.get("corpus", "")))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad document record ({exc})") from exc
            key = (doc.corpus, doc.id)
            if key in seen:
                raise ValueError(f"{path}:{lineno}: duplicate document id {doc.id!r}")
            seen.add(key)
            docs.append(doc)
    return docs


def _sentence_segments(seq: TokenSequence) -> list[range]:
    """Token-index ranges of sentences, split at final punctuation."""
    bounds = sentence_boundaries(seq)
    segments: list[range] = []
    start = 0
    for b in bounds:
        segments.append(range(start, b + 1))
        start = b + 1
    if start < len(seq):
        segments.append(range(start, len(seq)))
    return segments or [range(0, len(seq))]


def _excised_idxs(seq: TokenSequence, pair: Pair) -> set[int]:
    """Tokens to cut from a sample: the long form and its paren shell."""
    cut = set(range(pair.long_form.start_idx, pair.long_form.end_idx))
    acr_first = pair.acronym.token_idx
    acr_last = acr_first
    while acr_last + 1 < len(seq) and seq[acr_last].end < pair.acronym.end:
        acr_last += 1
    # Template "long form (ACR)": parens hug the acronym.
    if (
        acr_first > 0
        and seq[acr_first - 1].text == "("
        and acr_last + 1 < len(seq)
        and seq[acr_last + 1].text == ")"
    ):
        cut.update({acr_first - 1, acr_last + 1})
    # Template "ACR (long form)": parens hug the long form.
    lf = pair.long_form
    if (
        lf.start_idx > 0
        and seq[lf.start_idx - 1].text == "("
        and lf.end_idx < len(seq)
        and seq[lf.end_idx].text == ")"
    ):
        cut.update({lf.start_idx - 1, lf.end_idx})
    return cut


def _sample_context(
    seq: TokenSequence, pair: Pair, budget: int = CONTEXT_TOKEN_BUDGET
) -> tuple[list[str], int] | None:
    """Kept token texts around the acronym and its new index."""
    segments = _sentence_segments(seq)
    cut = _excised_idxs(seq, pair)
    acr_idx = pair.acronym.token_idx

    home = next((k for k, seg in enumerate(segments) if acr_idx in seg), None)
    if home is None:
        return None

    def kept_size(seg: range) -> int:
        return sum(1 for i in seg if i not in cut)

    chosen = {home}
    total = kept_size(segments[home])
    offset = 1
    while True:
        grew = False
        for k in (home + offset, home - offset):
            if 0 <= k < len(segments) and k not in chosen:
                size = kept_size(segments[k])
                if total + size <= budget:
                    chosen.add(k)
                    total += size
                    grew = True
        if not grew:
            break
        offset += 1

    texts: list[str] = []
    new_idx = -1
    for k in sorted(chosen):
        for i in segments[k]:
            if i in cut:
                continue
            if i == acr_idx:
                new_idx = len(texts)
            texts.append(seq[i].text)
    if new_idx < 0 or not texts:
        return None
    return texts, new_idx


def mine_document(
    doc: Document, annotation: AIAnnotation | None = None
) -> tuple[list[tuple[str, str]], list[ADSample]]:
    """Glossary pairs and labeled samples from one document.

    Unpaired acronyms produce nothing: self-labeling requires a local
    definition. Returned pair long forms are raw (token-joined); the
    glossary applies its own normalization, and sample labels use the
    same normalized form.
    """
    from .glossary import normalize_long_form
    from .tokenize import tokenize

    ann = annotation if annotation is not None else identify(doc.text)
    pairs: list[tuple[str, str]] = []
    samples: list[ADSample] = []
    seq = tokenize(doc.text)
    for n, pair in enumerate(ann.pairs):
        rendered = pair.long_form.rendered
        pairs.append((pair.acronym.text, rendered))
        context = _sample_context(seq, pair)
        if context is None:
            continue
        texts, acr_idx = context
        samples.append(
            ADSample(
                id=f"{doc.id}#{n}",
                acronym=pair.acronym.text,
                acronym_idx=acr_idx,
                tokens=sequence_from_texts(texts),
                gold_long_form=normalize_long_form(rendered),
                doc_id=doc.id,
            )
        )
    return pairs, samples


@dataclass(frozen=True)
class ChunkSpec:
    chunk_id: str
    acronyms: tuple[str, ...]
    label_space: tuple[str, ...]
    sample_counts: dict[str, int]
    size: int

    def to_dict(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "acronyms": list(self.acronyms),
            "label_space": list(self.label_space),
            "sample_counts": dict(sorted(self.sample_counts.items())),
            "size": self.size,
            "samples_file": f"samples-{self.chunk_id}.jsonl",
        }


@dataclass
class ChunkManifest:
    chunks: list[ChunkSpec]
    chunk_size_limit: int
    seed: int = 0
    _routing: dict[str, str] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self._routing:
            for chunk in self.chunks:
                for acr in chunk.acronyms:
                    self._routing[acr] = chunk.chunk_id

    def chunk_of(self, acronym: str) -> str | None:
        return self._routing.get(acronym)

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "seed": self.seed,
            "chunk_size_limit": self.chunk_size_limit,
            "chunks": [c.to_dict() for c in self.chunks],
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "ChunkManifest":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        chunks = [
            ChunkSpec(
                chunk_id=c["chunk_id"],
                acronyms=tuple(c["acronyms"]),
                label_space=tuple(c["label_space"]),
                sample_counts={k: int(v) for k, v in c["sample_counts"].items()},
                size=int(c["size"]),
            )
            for c in data["chunks"]
        ]
        return cls(chunks, int(data["chunk_size_limit"]), int(data.get("seed", 0)))


def assign_chunks(
    samples: list[ADSample], chunk_size_limit: int, seed: int = 0
) -> ChunkManifest:
    """First-fit-decreasing packing of per-acronym sample groups.

    All samples of one acronym land in the same chunk. The size limit is
    advisory per group: a single group larger than the limit still gets
    its own chunk.
    """
    groups: dict[str, list[ADSample]] = {}
    for s in samples:
        groups.setdefault(s.acronym, []).append(s)

    order = sorted(groups, key=lambda a: (-len(groups[a]), a))
    members_per_bin: list[list[str]] = []
    used_per_bin: list[int] = []
    for acr in order:
        size = len(groups[acr])
        for b, used in enumerate(used_per_bin):
            if used + size <= chunk_size_limit:
                members_per_bin[b].append(acr)
                used_per_bin[b] += size
                break
        else:
            members_per_bin.append([acr])
            used_per_bin.append(size)

    chunks: list[ChunkSpec] = []
    for k, (members, used) in enumerate(zip(members_per_bin, used_per_bin)):
        counts: dict[str, int] = {}
        for acr in members:
            for s in groups[acr]:
                counts[s.gold_long_form] = counts.get(s.gold_long_form, 0) + 1
        chunks.append(
            ChunkSpec(
                chunk_id=f"chunk-{k:03d}",
                acronyms=tuple(sorted(members)),
                label_space=tuple(sorted(counts)),
                sample_counts=counts,
                size=used,
            )
        )
    return ChunkManifest(chunks, chunk_size_limit, seed)


@dataclass(frozen=True)
class SplitAssignment:
    train: tuple[str, ...]
    dev: tuple[str, ...]
    test: tuple[str, ...]
    seed: int = 0

    def of(self, sample_id: str) -> str | None:
        for name in ("train", "dev", "test"):
            if sample_id in getattr(self, name):
                return name
        return None

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "seed": self.seed,
            "train": list(self.train),
            "dev": list(self.dev),
            "test": list(self.test),
        }

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, ensure_ascii=False, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "SplitAssignment":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(
            tuple(data["train"]),
            tuple(data["dev"]),
            tuple(data["test"]),
            int(data.get("seed", 0)),
        )


def split_samples(samples: list[ADSample], seed: int = 13) -> SplitAssignment:
    """Per-long-form 80/10/10 split with floor/remainder handling.

    Train and dev take the floors of 0.8n and 0.1n; the remainder goes to
    test. From n >= 10 on, one sample moves from test back to train when
    the remainder would leave test more than one sample above 0.1n, which
    keeps every split within one sample of its exact share. Long forms
    with fewer than three samples put one in train, the rest in test.
    Each long form's ids are shuffled with a seed derived from the long
    form itself, so assignment is independent of input order.
    """
    by_lf: dict[str, list[str]] = {}
    for s in samples:
        by_lf.setdefault(s.gold_long_form, []).append(s.id)

    train: list[str] = []
    dev: list[str] = []
    test: list[str] = []
    for lf in sorted(by_lf):
        ids = sorted(by_lf[lf])
        random.Random(f"{seed}:{lf}").shuffle(ids)
        n = len(ids)
        if n < 3:
            train.extend(ids[:1])
            test.extend(ids[1:])
            continue
        n_train = (n * 8) // 10
        n_dev = n // 10
        n_test = n - n_train - n_dev
        if n >= 10 and n_test * 10 - n > 10:
            n_train += 1
            n_test -= 1
        train.extend(ids[:n_train])
        dev.extend(ids[n_train : n_train + n_dev])
        test.extend(ids[n_train + n_dev :])
    return SplitAssignment(tuple(train), tuple(dev), tuple(test), seed)


def mine_corpus(
    docs: list[Document], chunk_size_limit: int = 100_000, seed: int = 13
):
    """Mine documents into a glossary, samples, chunks, and splits.

    Document outputs merge associatively, so callers may fan the mining
    loop out across workers and merge; this reference path is serial.
    """
    from .glossary import Glossary

    glossary = Glossary()
    samples: list[ADSample] = []
    for doc in docs:
        pairs, doc_samples = mine_document(doc)
        for acr, lf in pairs:
            glossary.add_pair(acr, lf, doc.corpus)
        samples.extend(doc_samples)
    manifest = assign_chunks(samples, chunk_size_limit, seed)
    splits = split_samples(samples, seed)
    return glossary, samples, manifest, splits


def write_mining_outputs(out_dir, glossary, samples, manifest, splits) -> None:
    """glossary.json, manifest.json, splits.json, samples-<chunk>.jsonl."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    glossary.save(os.path.join(out_dir, "glossary.json"))
    manifest.save(os.path.join(out_dir, "manifest.json"))
    splits.save(os.path.join(out_dir, "splits.json"))
    by_acronym: dict[str, str] = {}
    for chunk in manifest.chunks:
        for acr in chunk.acronyms:
            by_acronym[acr] = chunk.chunk_id
    files: dict[str, list[ADSample]] = {c.chunk_id: [] for c in manifest.chunks}
    for s in samples:
        files[by_acronym[s.acronym]].append(s)
    for chunk in manifest.chunks:
        path = os.path.join(out_dir, f"samples-{chunk.chunk_id}.jsonl")
        with open(path, "w", encoding="utf-8") as fh:
            for s in files[chunk.chunk_id]:
                fh.write(json.dumps(s.to_record(), ensure_ascii=False) + "\n")


def read_samples_jsonl(path: str) -> list[ADSample]:
    samples: list[ADSample] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                samples.append(ADSample.from_record(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: bad sample record ({exc})") from exc
    return samples
