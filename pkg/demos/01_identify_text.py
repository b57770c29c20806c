"""Walkthrough: finding acronyms and their local definitions in text.

Run with: python demos/01_identify_text.py
"""

from acrolex import identify

# =============================================================================
# The one-call API
# =============================================================================

text = (
    "Seed posts were collected by the User-guided Social Media Crawling "
    "method (USMC) and stored for review. Ranking falls back to the most "
    "frequent (MF) sense. We also track GDP mentions."
)

annotation = identify(text)

print("Acronym occurrences (with character offsets):")
for acr in annotation.acronyms:
    print(f"  {acr.text!r:10} at [{acr.start}, {acr.end})")

print("\nResolved pairs and the rule that matched:")
for pair in annotation.pairs:
    print(f"  {pair.acronym.text:6} -> {pair.long_form.rendered!r}  ({pair.rule})")

# GDP has no local definition, so it appears above but in no pair.

# =============================================================================
# The glossary table (one row per distinct acronym, first pair wins)
# =============================================================================

print("\nGlossary rows:")
for acronym, long_form, rule in annotation.glossary_rows():
    print(f"  {acronym:6} | {long_form:40} | {rule}")

# =============================================================================
# Why three rules? Each one covers a failure mode of the previous.
# =============================================================================

cases = [
    # every word contributes its initial -> Character Match
    "we ran Analyzing Avatar Boundary Matching (AABM) today",
    # the word "of" contributes nothing -> Initial Capitals skips it
    "we ran Analysis of Avatar Boundary Matching (AABM) today",
    # characters match inside words -> Bounded Schwartz
    "try the Abbreviation Expander (ABBREX) on this",
    # cue templates work without parentheses
    "CNN stands for convolution neural network.",
    # hyphenated acronyms with a roman-numeral suffix
    "The Advanced Boundary Computation II (ABC-II) pass runs last.",
]

print("\nRule showcase:")
for case in cases:
    ann = identify(case)
    for pair in ann.pairs:
        print(f"  [{pair.rule:15}] {pair.acronym.text} = {pair.long_form.rendered}")

# =============================================================================
# Offsets always index the original string exactly
# =============================================================================

pair = annotation.pairs[0]
surface = text[pair.long_form.start : pair.long_form.end]
print(f"\nSurface check: text[{pair.long_form.start}:{pair.long_form.end}] == {surface!r}")
assert surface == pair.long_form.text
