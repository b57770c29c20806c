"""Scoring for span identification and expansion choice.

Identification is scored by exact span match: a predicted acronym or
long-form span counts only when its token boundaries equal a gold span.
Expansion is scored per long-form class and macro-averaged over the
classes present in the gold labels. 0/0 precision or recall is defined
as 0 throughout.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .identify import AIAnnotation, AcronymSpan, LongFormSpan, Pair, identify_sequence
from .mining import ADSample
from .tokenize import sequence_from_texts

Span = tuple[int, int]


class AlignmentError(Exception):
    """Gold and predictions disagree on which documents/samples exist."""


def f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _prf(tp: int, n_pred: int, n_gold: int) -> tuple[float, float, float]:
    p = tp / n_pred if n_pred else 0.0
    r = tp / n_gold if n_gold else 0.0
    return p, r, f1(p, r)


@dataclass(frozen=True)
class AIScore:
    acronym: tuple[float, float, float]  # (P, R, F1)
    long_form: tuple[float, float, float]
    macro_f1: float

    def to_dict(self) -> dict:
        return {
            "acronym": dict(zip(("precision", "recall", "f1"), self.acronym)),
            "long_form": dict(zip(("precision", "recall", "f1"), self.long_form)),
            "macro_f1": self.macro_f1,
        }


@dataclass(frozen=True)
class ADScore:
    precision: float
    recall: float
    f1: float

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def macro_f1_of(f1_a: float, f1_b: float) -> float:
    """Macro F1 as the arithmetic mean of the two task F1s."""
    return (f1_a + f1_b) / 2.0


@dataclass(frozen=True)
class DocSpans:
    """Char-offset spans of one document's annotation."""

    acronyms: frozenset[Span]
    long_forms: frozenset[Span]

    @classmethod
    def from_annotation(cls, ann: AIAnnotation) -> "DocSpans":
        return cls(
            frozenset((a.start, a.end) for a in ann.acronyms),
            frozenset((p.long_form.start, p.long_form.end) for p in ann.pairs),
        )

    @classmethod
    def from_dict(cls, data: dict) -> "DocSpans":
        acrs = frozenset(
            (int(a["start"]), int(a["end"])) for a in data.get("acronyms", [])
        )
        lfs = frozenset(
            (int(p["long_form"]["start"]), int(p["long_form"]["end"]))
            for p in data.get("pairs", [])
        )
        return cls(acrs, lfs)


def score_ai(
    gold: dict[str, DocSpans], pred: dict[str, DocSpans]
) -> AIScore:
    """Span-level P/R/F1 for acronyms and long forms, plus their mean F1.

    Inputs are keyed by document id and must cover the same documents.
    """
    missing = sorted(set(gold) ^ set(pred))
    if missing:
        raise AlignmentError(f"documents not present on both sides: {missing}")
    tp_a = n_pred_a = n_gold_a = 0
    tp_l = n_pred_l = n_gold_l = 0
    for doc_id, g in gold.items():
        p = pred[doc_id]
        tp_a += len(g.acronyms & p.acronyms)
        n_pred_a += len(p.acronyms)
        n_gold_a += len(g.acronyms)
        tp_l += len(g.long_forms & p.long_forms)
        n_pred_l += len(p.long_forms)
        n_gold_l += len(g.long_forms)
    acr = _prf(tp_a, n_pred_a, n_gold_a)
    lf = _prf(tp_l, n_pred_l, n_gold_l)
    return AIScore(acr, lf, macro_f1_of(acr[2], lf[2]))


def score_ad(gold: dict[str, str], pred: dict[str, str]) -> ADScore:
    """Macro P/R/F1 over the long-form classes present in the gold labels.

    ``gold`` and ``pred`` map sample ids to chosen long forms. Samples
    without a prediction count against recall.
    """
    extra = sorted(set(pred) - set(gold))
    if extra:
        raise AlignmentError(f"predictions for unknown samples: {extra}")
    classes = sorted(set(gold.values()))
    ps, rs, f1s = [], [], []
    for cls in classes:
        tp = sum(1 for sid, g in gold.items() if g == cls and pred.get(sid) == cls)
        n_pred = sum(1 for sid in gold if pred.get(sid) == cls)
        n_gold = sum(1 for g in gold.values() if g == cls)
        p, r, f = _prf(tp, n_pred, n_gold)
        ps.append(p)
        rs.append(r)
        f1s.append(f)
    n = len(classes)
    if not n:
        return ADScore(0.0, 0.0, 0.0)
    return ADScore(sum(ps) / n, sum(rs) / n, sum(f1s) / n)


# ---------------------------------------------------------------------------
# Benchmark adapters


@dataclass(frozen=True)
class BenchmarkAIRecord:
    id: str
    tokens: tuple[str, ...]
    annotation: AIAnnotation


def _read_records(path: str) -> list[dict]:
    """A JSON array or JSONL file of record objects."""
    with open(path, encoding="utf-8") as fh:
        head = fh.read(1)
        fh.seek(0)
        if head == "[":
            data = json.load(fh)
            if not isinstance(data, list):
                raise ValueError(f"{path}: expected a JSON array")
            return data
        records = []
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if line:
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise ValueError(f"{path}:{lineno}: bad JSON ({exc})") from exc
        return records


def _bio_spans(labels: list[str], kind: str, record_id: str) -> list[Span]:
    """Token-index spans of one BIO kind ("short" or "long").

    A bare "I-x" without a preceding "B-x" is repaired to "B-x" with a
    warning; unknown tags raise.
    """
    spans: list[Span] = []
    start: int | None = None
    for i, tag in enumerate(labels):
        if tag not in ("O",) and not (
            tag.startswith("B-") or tag.startswith("I-")
        ):
            raise ValueError(f"record {record_id}: unknown BIO tag {tag!r}")
        inside = tag == f"I-{kind}"
        begin = tag == f"B-{kind}"
        if inside and start is None:
            warnings.warn(
                f"record {record_id}: I-{kind} at token {i} without B-{kind}; "
                "treating it as B-" + kind,
                stacklevel=2,
            )
            begin, inside = True, False
        if begin:
            if start is not None:
                spans.append((start, i))
            start = i
        elif not inside and start is not None:
            spans.append((start, i))
            start = None
    if start is not None:
        spans.append((start, len(labels)))
    return spans


def load_benchmark_ai(path: str) -> list[BenchmarkAIRecord]:
    """BIO-tagged identification records: {"id", "tokens", "labels"}."""
    out: list[BenchmarkAIRecord] = []
    for k, rec in enumerate(_read_records(path)):
        try:
            rid = str(rec.get("id", k))
            tokens = [str(t) for t in rec["tokens"]]
            labels = [str(t) for t in rec["labels"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"{path}: record {k}: missing tokens/labels") from exc
        if len(tokens) != len(labels):
            raise ValueError(f"{path}: record {rid}: tokens/labels length mismatch")
        seq = sequence_from_texts(tokens)
        acrs = []
        for s, e in _bio_spans(labels, "short", rid):
            acrs.append(
                AcronymSpan(s, seq.rendered(s, e), seq[s].start, seq[e - 1].end)
            )
        pairs = []
        for s, e in _bio_spans(labels, "long", rid):
            lf = LongFormSpan(
                s, e, seq.text_of(s, e), seq.rendered(s, e), seq[s].start, seq[e - 1].end
            )
            anchor = acrs[0] if acrs else AcronymSpan(s, seq.rendered(s, e), seq[s].start, seq[e - 1].end)
            pairs.append(Pair(anchor, lf, "gold"))
        out.append(
            BenchmarkAIRecord(
                rid, tuple(tokens), AIAnnotation(seq.source, tuple(acrs), tuple(pairs))
            )
        )
    return out


def load_benchmark_ad(path: str) -> list[ADSample]:
    """Expansion records: {"id", "tokens", "acronym": index, "expansion"}."""
    from .glossary import normalize_long_form

    samples: list[ADSample] = []
    for k, rec in enumerate(_read_records(path)):
        try:
            rid = str(rec.get("id", k))
            tokens = [str(t) for t in rec["tokens"]]
            idx = int(rec["acronym"])
            label = rec.get("expansion", rec.get("label"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}: record {k}: malformed ({exc})") from exc
        if label is None:
            raise ValueError(f"{path}: record {rid}: no expansion/label field")
        if not 0 <= idx < len(tokens):
            raise ValueError(f"{path}: record {rid}: acronym index out of range")
        samples.append(
            ADSample(
                id=rid,
                acronym=tokens[idx],
                acronym_idx=idx,
                tokens=sequence_from_texts(tokens),
                gold_long_form=normalize_long_form(str(label)),
            )
        )
    return samples


def run_ai_benchmark(records: list[BenchmarkAIRecord]) -> AIScore:
    """Identify over each record's tokens and score against its gold spans."""
    gold = {}
    pred = {}
    for rec in records:
        gold[rec.id] = DocSpans.from_annotation(rec.annotation)
        seq = sequence_from_texts(list(rec.tokens))
        pred[rec.id] = DocSpans.from_annotation(identify_sequence(seq))
    return score_ai(gold, pred)


def format_ai_report(score: AIScore) -> str:
    """Identification report, percentages to two decimals."""
    a, lf = score.acronym, score.long_form
    lines = [
        "            P       R       F1",
        f"acronym     {100 * a[0]:6.2f}  {100 * a[1]:6.2f}  {100 * a[2]:6.2f}",
        f"long form   {100 * lf[0]:6.2f}  {100 * lf[1]:6.2f}  {100 * lf[2]:6.2f}",
        f"macro F1    {100 * score.macro_f1:6.2f}",
    ]
    return "\n".join(lines)


def format_ad_report(score: ADScore) -> str:
    lines = [
        "            P       R       F1",
        f"expansion   {100 * score.precision:6.2f}  {100 * score.recall:6.2f}  {100 * score.f1:6.2f}",
    ]
    return "\n".join(lines)
