"""Walkthrough: mining a corpus into a glossary and labeled samples.

Run with: python demos/02_build_glossary.py
"""

import tempfile

from acrolex import Document, Glossary, mine_corpus

# =============================================================================
# A miniature corpus. Real input is JSONL: {"id", "text", "corpus"} per line.
# =============================================================================

docs = [
    Document("w1", "The gross domestic product (GDP) rose last quarter.", "wiki"),
    Document("w2", "Analysts watch the gross domestic product (GDP) closely.", "wiki"),
    Document("r1", "My guided data plan (GDP) for the quarter is ready.", "reddit"),
    Document("m1", "We applied deep learning (DL) to the scans.", "medline"),
    Document("m2", "No definitions here, just DL and GDP mentions."),
]

glossary, samples, manifest, splits = mine_corpus(docs, chunk_size_limit=100, seed=13)

# =============================================================================
# The glossary accumulates candidates with frequencies and sources
# =============================================================================

entry = glossary.lookup("GDP")
print(f"GDP is ambiguous: {entry.ambiguous}")
for cand in entry.sorted_candidates():
    print(f"  {cand.long_form!r}: frequency {cand.frequency}, sources {sorted(cand.sources)}")

print("\nStats:", glossary.stats())

# =============================================================================
# Every locally defined occurrence becomes a labeled sample whose context
# has the definition cut out (the label must not leak into the input)
# =============================================================================

print("\nSamples:")
for s in samples:
    context = " ".join(t.text for t in s.tokens.tokens)
    print(f"  [{s.gold_long_form!r}] {context!r} (acronym at token {s.acronym_idx})")

# Documents without a local definition contribute nothing ("m2" above):
assert not any(s.doc_id == "m2" for s in samples)

# =============================================================================
# Chunks keep all samples of one acronym together; splits are per long form
# =============================================================================

for chunk in manifest.chunks:
    print(f"\n{chunk.chunk_id}: acronyms {chunk.acronyms}, {chunk.size} samples")
    print(f"  label space: {chunk.label_space}")

print(f"\nsplit sizes: train {len(splits.train)}, dev {len(splits.dev)}, test {len(splits.test)}")

# =============================================================================
# Persistence round-trips exactly; keys are sorted for stable diffs
# =============================================================================

with tempfile.NamedTemporaryFile(suffix=".json", mode="w", delete=False) as fh:
    path = fh.name
glossary.save(path)
assert Glossary.load(path) == glossary
print(f"\nsaved and reloaded {path}")
