"""Per-chunk training loop and the finite-difference gradient check."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from ..mining import ADSample
from .embeddings import EmbeddingTable
from .network import (
    Batch,
    ModelParams,
    forward,
    init_params,
    loss_and_grads,
    make_batch,
)


class TrainingDiverged(Exception):
    """Loss became non-finite; lower the learning rate."""


@dataclass
class TrainConfig:
    embed_dim: int = 50
    hidden: int = 64
    ffn: int = 64
    learning_rate: float = 0.05
    batch_size: int = 32
    max_len: int = 128
    max_epochs: int = 30
    patience: int = 3
    seed: int = 13
    embeddings_path: str | None = None

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown training options: {sorted(unknown)}")
        return cls(**data)


@dataclass
class EpochLog:
    epoch: int
    train_loss: float
    dev_accuracy: float | None


@dataclass
class TrainResult:
    params: ModelParams
    log: list[EpochLog] = field(default_factory=list)
    best_dev_accuracy: float | None = None


def _sample_arrays(samples: list[ADSample], label_index: dict[str, int]):
    texts = [[t.text for t in s.tokens.tokens] for s in samples]
    acr = [s.acronym_idx for s in samples]
    gold = [label_index[s.gold_long_form] for s in samples]
    return texts, acr, gold


def _accuracy(params: ModelParams, samples: list[ADSample], label_index: dict) -> float:
    if not samples:
        return 0.0
    texts, acr, gold = _sample_arrays(samples, label_index)
    correct = 0
    bs = 256
    for i in range(0, len(samples), bs):
        batch = make_batch(params, texts[i : i + bs], acr[i : i + bs])
        logits = forward(params, batch).logits
        correct += int((logits.argmax(axis=1) == np.asarray(gold[i : i + bs])).sum())
    return correct / len(samples)


def train_chunk(
    train_samples: list[ADSample],
    dev_samples: list[ADSample],
    label_space: tuple[str, ...],
    config: TrainConfig,
    *,
    chunk_id: str = "",
    acronyms: tuple[str, ...] = (),
    embedding: EmbeddingTable | None = None,
) -> TrainResult:
    """Minimize cross-entropy over the full chunk label space with SGD.

    Early stopping keeps the parameters of the best dev-accuracy epoch;
    without a dev split the loop simply runs max_epochs. Candidate
    masking is an inference-time concern only.
    """
    if not train_samples:
        raise ValueError("empty training split")
    label_index = {lf: i for i, lf in enumerate(label_space)}
    for s in train_samples + dev_samples:
        if s.gold_long_form not in label_index:
            raise ValueError(f"sample {s.id}: label {s.gold_long_form!r} not in label space")

    if embedding is None:
        if config.embeddings_path:
            embedding = EmbeddingTable.from_text_file(config.embeddings_path)
        else:
            words = [t.text for s in train_samples for t in s.tokens.tokens]
            embedding = EmbeddingTable.random_table(
                words, dim=config.embed_dim, seed=config.seed
            )

    params = init_params(
        embedding=embedding,
        hidden=config.hidden,
        ffn=config.ffn,
        label_space=tuple(label_space),
        seed=config.seed,
        chunk_id=chunk_id,
        acronyms=acronyms,
        max_len=config.max_len,
    )

    rng = np.random.default_rng(config.seed)
    texts, acr, gold = _sample_arrays(train_samples, label_index)
    n = len(train_samples)

    result = TrainResult(params=params)
    best: ModelParams | None = None
    best_acc = -1.0
    stale = 0

    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(n)
        total_loss = 0.0
        for i in range(0, n, config.batch_size):
            idx = order[i : i + config.batch_size]
            batch = make_batch(
                params,
                [texts[j] for j in idx],
                [acr[j] for j in idx],
                [gold[j] for j in idx],
            )
            cache = forward(params, batch)
            loss, grads = loss_and_grads(params, cache)
            if not np.isfinite(loss):
                raise TrainingDiverged(
                    f"chunk {chunk_id or '?'}: non-finite loss at epoch {epoch}"
                )
            total_loss += loss * len(idx)
            for name, arr in params.trainable().items():
                arr -= config.learning_rate * grads[name]

        dev_acc = _accuracy(params, dev_samples, label_index) if dev_samples else None
        result.log.append(EpochLog(epoch, total_loss / n, dev_acc))

        if dev_samples:
            if dev_acc > best_acc:
                best_acc = dev_acc
                best = copy.deepcopy(params)
                stale = 0
            else:
                stale += 1
            if best_acc >= 1.0 or stale > config.patience:
                break

    if dev_samples and best is not None:
        result.params = best
        result.best_dev_accuracy = best_acc
    return result


def gradient_check(
    params: ModelParams,
    batch: Batch,
    epsilon: float = 1e-5,
    groups: list[str] | None = None,
) -> float:
    """Max relative error of analytic vs central-difference gradients.

    Walks every element of every trainable parameter group (or just the
    named ``groups``). The batch must carry gold labels. The denominator
    is floored at 1e-6: central differences on an O(1) loss carry ~1e-11
    of float64 roundoff, so elements with near-zero gradients are
    compared on that absolute scale instead of a meaningless ratio.
    """

    def batch_loss() -> float:
        cache = forward(params, batch)
        B = cache.logits.shape[0]
        logp = cache.logits - cache.logits.max(axis=1, keepdims=True)
        logp = logp - np.log(np.exp(logp).sum(axis=1, keepdims=True))
        return float(-logp[np.arange(B), batch.gold].mean())

    _, grads = loss_and_grads(params, forward(params, batch))
    worst = 0.0
    for name, arr in params.trainable().items():
        if groups is not None and name not in groups:
            continue
        grad = grads[name]
        flat = arr.reshape(-1)
        gflat = grad.reshape(-1)
        for k in range(flat.size):
            orig = flat[k]
            flat[k] = orig + epsilon
            hi = batch_loss()
            flat[k] = orig - epsilon
            lo = batch_loss()
            flat[k] = orig
            numeric = (hi - lo) / (2.0 * epsilon)
            denom = max(abs(numeric) + abs(gflat[k]), 1e-6)
            rel = abs(numeric - gflat[k]) / denom
            worst = max(worst, rel)
    return worst
