"""Walkthrough: training per-chunk expansion models and predicting.

Run with: python demos/03_train_expansion_model.py  (about 15 seconds)
"""

import numpy as np

from acrolex import Glossary, TrainConfig, train_chunk
from acrolex.mining import ADSample, assign_chunks, split_samples
from acrolex.model import ModelRegistry, gradient_check, make_batch, predict_sequence
from acrolex.tokenize import sequence_from_texts, tokenize

rng = np.random.default_rng(7)

# =============================================================================
# Synthetic ambiguous acronym: two senses with distinct context vocabulary
# =============================================================================

glossary = Glossary()
samples = []
topics = {
    "gross domestic product": ["economy", "quarter", "growth", "inflation", "fiscal"],
    "guided data plan": ["storage", "backup", "quota", "billing", "tier"],
}
for label, vocab in topics.items():
    glossary.add_pair("GDP", label)
    for i in range(120):
        words = [vocab[j] for j in rng.integers(0, len(vocab), size=8)]
        pos = int(rng.integers(0, 9))
        samples.append(
            ADSample(
                id=f"{label[:5]}-{i}", acronym="GDP", acronym_idx=pos,
                tokens=sequence_from_texts(words[:pos] + ["GDP"] + words[pos:]),
                gold_long_form=label,
            )
        )

manifest = assign_chunks(samples, chunk_size_limit=1000, seed=7)
splits = split_samples(samples, seed=7)
train_ids, dev_ids = set(splits.train), set(splits.dev)
chunk = manifest.chunks[0]
print(f"{chunk.chunk_id}: {chunk.size} samples, labels {chunk.label_space}")

# =============================================================================
# Training: SGD on cross-entropy. With a dev split the loop early-stops on
# dev accuracy and returns the best-dev parameters; without one (as here)
# it runs a fixed number of epochs, which trains the scores to sharpness.
# =============================================================================

config = TrainConfig(
    embed_dim=24, hidden=16, ffn=16, learning_rate=0.2,
    batch_size=16, max_epochs=15, patience=3, seed=11,
)
result = train_chunk(
    [s for s in samples if s.id in train_ids | dev_ids],
    [],
    chunk.label_space,
    config,
    chunk_id=chunk.chunk_id,
    acronyms=chunk.acronyms,
)
for entry in result.log:
    print(f"  epoch {entry.epoch:2d}  loss {entry.train_loss:.4f}")

# =============================================================================
# The gradients behind that loop check out against finite differences
# =============================================================================

probe = make_batch(
    result.params,
    [["economy", "GDP", "growth"]],
    [1],
    [0],
)
err = gradient_check(result.params, probe, epsilon=1e-5)
print(f"max relative gradient error on a probe batch: {err:.2e}")

# =============================================================================
# Prediction routes through the glossary: unambiguous acronyms skip the
# model entirely; ambiguous ones get masked, sorted candidate scores
# =============================================================================

registry = ModelRegistry()
registry.add(result.params)

for sentence in [
    "fiscal quarter growth saw GDP inflation economy shifts",
    "storage backup quota for GDP billing tier limits",
]:
    seq = tokenize(sentence)
    idx = next(i for i, t in enumerate(seq.tokens) if t.text == "GDP")
    pred = predict_sequence(seq, idx, glossary, registry)
    print(f"\n{sentence!r}")
    for lf, score in pred.candidates:
        print(f"  {score:.3f}  {lf}")
    print(f"  chosen: {pred.chosen} (method: {pred.method})")
