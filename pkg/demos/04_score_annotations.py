"""Walkthrough: scoring span identification and expansion choices.

Run with: python demos/04_score_annotations.py
"""

from acrolex.evaluate import (
    DocSpans,
    format_ad_report,
    format_ai_report,
    score_ad,
    score_ai,
)
from acrolex import identify

# =============================================================================
# Span identification scores: exact-match P/R/F1 per task, then macro F1
# =============================================================================

gold_texts = {
    "d1": "deep learning (DL) came first.",
    "d2": "then machine learning (ML) and GDP.",
}
gold = {k: DocSpans.from_annotation(identify(t)) for k, t in gold_texts.items()}

# a deliberately imperfect "prediction": d2 misses the ML long form
pred = {
    "d1": gold["d1"],
    "d2": DocSpans(gold["d2"].acronyms, frozenset()),
}

score = score_ai(gold, pred)
print(format_ai_report(score))
print(f"\nmacro F1 is the mean of the two task F1s: {score.macro_f1:.4f}")

# =============================================================================
# Expansion scores: per-class P/R/F1, macro-averaged over gold classes
# =============================================================================

gold_choices = {
    "s1": "gross domestic product",
    "s2": "gross domestic product",
    "s3": "guided data plan",
    "s4": "guided data plan",
}
pred_choices = {
    "s1": "gross domestic product",
    "s2": "gross domestic product",
    "s3": "gross domestic product",  # wrong
    # s4 missing entirely: counts against recall
}

print()
print(format_ad_report(score_ad(gold_choices, pred_choices)))

# =============================================================================
# External benchmark files plug in through adapters; see the CLI:
#   acrolex eval sciai --data dev.json
#   acrolex eval sciad --data dev.json --dictionary diction.json
# The BIO adapter repairs orphan "I-" tags with a warning instead of failing.
# =============================================================================
