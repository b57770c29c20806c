"""Rule cascade for finding acronyms and their locally defined long forms.

The detector marks short, mostly-uppercase tokens as acronyms. For every
parenthesized template ("long form (ACR)" or "ACR (long form)") a
candidate window is carved out and the matching rules are tried in a
fixed order; the first rule that matches supplies the pair and its
provenance. Cue templates ("ACR stands for ...") and hyphenated or
roman-suffixed acronyms are handled by dedicated special rules.

Rule order note: Character Match is credited whenever a span in which
every word contributes its initial exists; Initial Capitals is the
fallback for spans that need lowercase words skipped. Checking Character
Match first keeps that provenance stable, because any all-capitalized
Character Match span would otherwise also satisfy Initial Capitals.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .tokenize import ParenSite, TokenSequence, find_paren_sites, tokenize

RULE_CHARACTER_MATCH = "CharacterMatch"
RULE_INITIAL_CAPITALS = "InitialCapitals"
RULE_BOUNDED_SCHWARTZ = "BoundedSchwartz"
RULE_SPECIAL_TEMPLATE = "SpecialTemplate"
RULE_SPECIAL_HYPHEN = "SpecialHyphen"
RULE_SPECIAL_ROMAN = "SpecialRoman"

RULE_NAMES = (
    RULE_CHARACTER_MATCH,
    RULE_INITIAL_CAPITALS,
    RULE_BOUNDED_SCHWARTZ,
    RULE_SPECIAL_TEMPLATE,
    RULE_SPECIAL_HYPHEN,
    RULE_SPECIAL_ROMAN,
)

MIN_ACRONYM_CHARS = 2
MAX_ACRONYM_CHARS = 10
UPPER_RATIO_NUM = 3  # >= 60% upper-cased, as the exact fraction 3/5
UPPER_RATIO_DEN = 5

# Tokens a candidate window never crosses.
WINDOW_STOP = {".", "!", "?", "(", ")"}

DEFAULT_CUES = ("stands for", ", short for", "( abbreviated")

_ROMAN_RE = re.compile(r"^M{0,3}(CM|CD|D?C{0,3})(XC|XL|L?X{0,3})(IX|IV|V?I{0,3})$")


def is_acronym_token(text: str) -> bool:
    """Detector thresholds: 2-10 characters, >= 60% upper-cased letters.

    The ratio denominator counts letters and digits only, so tokens like
    "e.g." never qualify; the length bound counts all characters.
    """
    if not (MIN_ACRONYM_CHARS <= len(text) <= MAX_ACRONYM_CHARS):
        return False
    alnum = [c for c in text if c.isalnum()]
    if not alnum:
        return False
    upper = sum(1 for c in alnum if c.isupper())
    return upper * UPPER_RATIO_DEN >= len(alnum) * UPPER_RATIO_NUM


def is_roman_numeral(text: str) -> bool:
    return bool(text) and _ROMAN_RE.match(text) is not None


@dataclass(frozen=True)
class AcronymSpan:
    """One acronym occurrence; hyphenated surfaces may span several tokens."""

    token_idx: int
    text: str
    start: int
    end: int

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "start": self.start,
            "end": self.end,
            "token_idx": self.token_idx,
        }


@dataclass(frozen=True)
class LongFormSpan:
    """Token range [start_idx, end_idx) of a long form.

    ``text`` is the raw source substring; ``rendered`` joins the token
    texts with single spaces ("User-guided" renders as "User - guided").
    """

    start_idx: int
    end_idx: int
    text: str
    rendered: str
    start: int
    end: int

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "rendered": self.rendered,
            "start": self.start,
            "end": self.end,
            "start_idx": self.start_idx,
            "end_idx": self.end_idx,
        }


@dataclass(frozen=True)
class Pair:
    acronym: AcronymSpan
    long_form: LongFormSpan
    rule: str

    def to_dict(self) -> dict:
        return {
            "acronym": self.acronym.to_dict(),
            "long_form": self.long_form.to_dict(),
            "rule": self.rule,
        }


@dataclass(frozen=True)
class AIAnnotation:
    """All acronym occurrences of one text plus the resolved pairs."""

    text: str
    acronyms: tuple[AcronymSpan, ...]
    pairs: tuple[Pair, ...]

    def glossary_rows(self) -> list[tuple[str, str, str]]:
        """(acronym, long form, rule) per distinct acronym, sorted.

        When an acronym is defined more than once, the first pair in
        document order wins.
        """
        rows: dict[str, tuple[str, str, str]] = {}
        for pair in sorted(self.pairs, key=lambda p: p.acronym.start):
            key = pair.acronym.text
            if key not in rows:
                rows[key] = (key, pair.long_form.rendered, pair.rule)
        return [rows[k] for k in sorted(rows)]

    def to_dict(self) -> dict:
        return {
            "acronyms": [a.to_dict() for a in self.acronyms],
            "pairs": [p.to_dict() for p in self.pairs],
            "glossary": [
                {"acronym": a, "long_form": lf, "rule": rule}
                for a, lf, rule in self.glossary_rows()
            ],
        }


def detect_acronyms(seq: TokenSequence) -> list[AcronymSpan]:
    """Every token passing the detector thresholds, in token order."""
    return [
        AcronymSpan(i, tok.text, tok.start, tok.end)
        for i, tok in enumerate(seq.tokens)
        if tok.is_word and is_acronym_token(tok.text)
    ]


def _window_word_limit(acronym_text: str) -> int:
    n = sum(1 for c in acronym_text if c.isalnum())
    return min(n + 5, 2 * n)


@dataclass(frozen=True)
class Window:
    """A candidate span of tokens; ``word_idxs`` are its word tokens."""

    start_idx: int
    end_idx: int
    word_idxs: tuple[int, ...]


def _window_before(seq: TokenSequence, open_idx: int, limit: int) -> Window | None:
    """Up to ``limit`` word tokens walking left from the "(" token."""
    words: list[int] = []
    i = open_idx - 1
    while i >= 0 and len(words) < limit:
        text = seq[i].text
        if text in WINDOW_STOP:
            break
        if seq[i].is_word:
            words.append(i)
        i -= 1
    if not words:
        return None
    words.reverse()
    return Window(words[0], words[-1] + 1, tuple(words))


def _window_after(seq: TokenSequence, start: int, limit: int) -> Window | None:
    """Up to ``limit`` word tokens walking right from token ``start``."""
    words: list[int] = []
    i = start
    while i < len(seq) and len(words) < limit:
        text = seq[i].text
        if text in WINDOW_STOP:
            break
        if seq[i].is_word:
            words.append(i)
        i += 1
    if not words:
        return None
    return Window(words[0], words[-1] + 1, tuple(words))


def _window_of_range(seq: TokenSequence, idxs: range, limit: int) -> Window | None:
    words = [i for i in idxs if seq[i].is_word][:limit]
    if not words:
        return None
    return Window(words[0], words[-1] + 1, tuple(words))


def candidate_window(
    seq: TokenSequence, acronym_text: str, site: ParenSite
) -> Window | None:
    """Candidate long-form window for an acronym inside parentheses.

    Takes min(|A| + 5, 2|A|) words immediately before "(", fewer when the
    text start, a sentence end, or another parenthesis intervenes.
    """
    return _window_before(seq, site.open_idx, _window_word_limit(acronym_text))


def _acr_chars(acronym_text: str) -> list[str]:
    return [c.lower() for c in acronym_text if c.isalnum()]


def _make_span(seq: TokenSequence, start_idx: int, end_idx: int) -> LongFormSpan:
    return LongFormSpan(
        start_idx=start_idx,
        end_idx=end_idx,
        text=seq.text_of(start_idx, end_idx),
        rendered=seq.rendered(start_idx, end_idx),
        start=seq[start_idx].start,
        end=seq[end_idx - 1].end,
    )


def match_character(
    seq: TokenSequence, acronym_text: str, window: Window, anchor: str = "right"
) -> LongFormSpan | None:
    """Every word of the span contributes its initial, case-insensitively.

    The span is pinned to the window edge named by ``anchor``, so the
    number of words is fixed by the acronym length.
    """
    chars = _acr_chars(acronym_text)
    words = window.word_idxs
    k = len(chars)
    if k == 0 or k > len(words):
        return None
    picked = words[-k:] if anchor == "right" else words[:k]
    initials = [seq[i].text[0].lower() for i in picked]
    if initials != chars:
        return None
    return _make_span(seq, picked[0], picked[-1] + 1)


def match_initial_capitals(
    seq: TokenSequence, acronym_text: str, window: Window, anchor: str = "right"
) -> LongFormSpan | None:
    """Initials of the capitalized words form the acronym.

    Lowercase-initial words are skipped for matching but retained when
    they fall inside the returned span; non-contributing words outside
    the first/last capitalized word are trimmed. The longest window
    stretch (suffix for right anchor, prefix for left) wins.
    """
    chars = _acr_chars(acronym_text)
    if not chars:
        return None
    words = window.word_idxs
    n = len(words)
    if anchor == "right":
        stretches = (words[start:] for start in range(n))
    else:
        stretches = (words[:end] for end in range(n, 0, -1))
    for stretch in stretches:
        caps = [i for i in stretch if seq[i].text[0].isupper()]
        if len(caps) != len(chars):
            continue
        if [seq[i].text[0].lower() for i in caps] == chars:
            return _make_span(seq, caps[0], caps[-1] + 1)
    return None


def _joined_chars(seq: TokenSequence, window: Window) -> tuple[str, list[int]]:
    """Window tokens joined by spaces plus a char -> token index map."""
    parts: list[str] = []
    owner: list[int] = []
    for idx in range(window.start_idx, window.end_idx):
        if parts:
            parts.append(" ")
            owner.append(-1)
        text = seq[idx].text
        parts.append(text)
        owner.extend([idx] * len(text))
    return "".join(parts), owner


def match_bounded_schwartz(
    seq: TokenSequence, acronym_text: str, window: Window, anchor: str = "right"
) -> LongFormSpan | None:
    """Subsequence matching bounded to contributing edge words.

    The acronym's characters must appear in order within the candidate,
    the first character at the start of a word. Unlike the classic
    variant, the span is cut at the first and last word that actually
    contribute a character, so trailing words such as "method" in
    "User-guided Social Media Crawling method (USMC)" are dropped.
    """
    chars = _acr_chars(acronym_text)
    if not chars:
        return None
    joined, owner = _joined_chars(seq, window)
    if anchor == "right":
        si = len(chars) - 1
        li = len(joined) - 1
        first_pos = last_pos = -1
        while si >= 0:
            c = chars[si]
            while li >= 0 and (
                joined[li].lower() != c
                or (si == 0 and li > 0 and joined[li - 1].isalnum())
            ):
                li -= 1
            if li < 0:
                return None
            if last_pos < 0:
                last_pos = li
            first_pos = li
            li -= 1
            si -= 1
    else:
        if not joined or joined[0].lower() != chars[0]:
            return None
        first_pos = 0
        li = 1
        for c in chars[1:]:
            while li < len(joined) and joined[li].lower() != c:
                li += 1
            if li >= len(joined):
                return None
            last_pos = li
            li += 1
        last_pos = first_pos if len(chars) == 1 else last_pos
    start_tok, end_tok = owner[first_pos], owner[last_pos]
    if start_tok < 0 or end_tok < 0:
        return None
    return _make_span(seq, start_tok, end_tok + 1)


_CASCADE = (
    (RULE_CHARACTER_MATCH, match_character),
    (RULE_INITIAL_CAPITALS, match_initial_capitals),
    (RULE_BOUNDED_SCHWARTZ, match_bounded_schwartz),
)


def _run_cascade(
    seq: TokenSequence, acronym_text: str, window: Window, anchor: str
) -> tuple[str, LongFormSpan] | None:
    for rule, matcher in _CASCADE:
        span = matcher(seq, acronym_text, window, anchor)
        if span is not None:
            return rule, span
    return None


# ---------------------------------------------------------------------------
# Cue templates and merged (hyphenated / roman-suffixed) acronyms


def _tokenize_cue(cue: str) -> tuple[str, ...]:
    return tuple(t.text.lower() for t in tokenize(cue).tokens)


def load_cues(path: str) -> list[tuple[str, ...]]:
    """Cue phrases from a JSON config file: {"cues": ["stands for", ...]}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    cues = data.get("cues")
    if not isinstance(cues, list) or not all(isinstance(c, str) for c in cues):
        raise ValueError(f"{path}: expected a JSON object with a 'cues' string list")
    return [_tokenize_cue(c) for c in cues]


def default_cues() -> list[tuple[str, ...]]:
    return [_tokenize_cue(c) for c in DEFAULT_CUES]


def _cue_at(seq: TokenSequence, idx: int, cue: tuple[str, ...]) -> bool:
    if idx + len(cue) > len(seq):
        return False
    return all(seq[idx + k].text.lower() == cue[k] for k in range(len(cue)))


@dataclass(frozen=True)
class _MergedAcronym:
    """A detected "WORD - WORD" sequence read as one acronym surface."""

    span: AcronymSpan
    match_text: str  # acronym text used for matching (roman suffix stripped)
    roman_suffix: str | None
    last_idx: int  # token index of the final surface token


def _merged_at(seq: TokenSequence, idx: int) -> _MergedAcronym | None:
    if idx + 2 >= len(seq):
        return None
    t0, t1, t2 = seq[idx], seq[idx + 1], seq[idx + 2]
    if not (t0.is_word and t1.text == "-" and t2.is_word):
        return None
    surface = seq.source[t0.start : t2.end]
    if not is_acronym_token(surface):
        return None
    span = AcronymSpan(idx, surface, t0.start, t2.end)
    if is_roman_numeral(t2.text):
        if not is_acronym_token(t0.text):
            return None
        return _MergedAcronym(span, t0.text, t2.text, idx + 2)
    return _MergedAcronym(span, surface, None, idx + 2)


def _strip_roman_tail(
    seq: TokenSequence, window: Window, roman: str
) -> tuple[Window, int] | None:
    """Drop a trailing roman-numeral word from the window.

    Returns the reduced window and the original end index so the numeral
    can be re-appended to the matched span verbatim.
    """
    words = window.word_idxs
    if not words or seq[words[-1]].text != roman:
        return None
    if len(words) == 1:
        return None
    reduced = Window(words[0], words[-2] + 1, words[:-1])
    return reduced, window.end_idx


def _match_merged_site(
    seq: TokenSequence, merged: _MergedAcronym, site: ParenSite
) -> tuple[str, LongFormSpan] | None:
    window = candidate_window(seq, merged.match_text, site)
    if window is None:
        return None
    extend_to: int | None = None
    if merged.roman_suffix is not None:
        stripped = _strip_roman_tail(seq, window, merged.roman_suffix)
        if stripped is not None:
            window, extend_to = stripped
    matched = _run_cascade(seq, merged.match_text, window, "right")
    if matched is None:
        return None
    _, span = matched
    if extend_to is not None and span.end_idx == window.end_idx:
        span = _make_span(seq, span.start_idx, extend_to)
    rule = RULE_SPECIAL_ROMAN if merged.roman_suffix else RULE_SPECIAL_HYPHEN
    return rule, span


def apply_special_rules(
    seq: TokenSequence,
    acronyms: list[AcronymSpan],
    paired_idxs: set[int] | None = None,
    cues: list[tuple[str, ...]] | None = None,
) -> list[Pair]:
    """Pairs from cue templates and hyphenated/roman-suffixed acronyms.

    Covers occurrences the parenthesis templates left unpaired: "ACR
    stands for ..."-style cues (the cue list is configurable) plus paren
    sites whose interior is a merged "WORD - WORD" acronym.
    """
    paired = set(paired_idxs or ())
    cue_list = cues if cues is not None else default_cues()
    inline_cues = [c for c in cue_list if c and c[0] != "("]
    paren_cues = [c[1:] for c in cue_list if len(c) > 1 and c[0] == "("]
    pairs: list[Pair] = []

    # Merged-interior paren sites: "Advanced Boundary Computation II (ABC-II)".
    for site in find_paren_sites(seq):
        interior = list(site.inside)
        if len(interior) != 3:
            continue
        merged = _merged_at(seq, interior[0])
        if merged is None or merged.last_idx != interior[-1]:
            continue
        if merged.span.token_idx in paired:
            continue
        matched = _match_merged_site(seq, merged, site)
        if matched is None:
            continue
        rule, span = matched
        pairs.append(Pair(merged.span, span, rule))
        paired.add(merged.span.token_idx)

    # Cue templates, for single-token and merged acronym surfaces.
    occurrences: list[tuple[AcronymSpan, str, str | None, int]] = []
    for acr in acronyms:
        merged = _merged_at(seq, acr.token_idx)
        if merged is not None and merged.span.token_idx == acr.token_idx:
            occurrences.append(
                (merged.span, merged.match_text, merged.roman_suffix, merged.last_idx)
            )
        occurrences.append((acr, acr.text, None, acr.token_idx))

    for span, match_text, roman, last_idx in occurrences:
        if span.token_idx in paired:
            continue
        for cue in inline_cues:
            if not _cue_at(seq, last_idx + 1, cue):
                continue
            window = _window_after(
                seq, last_idx + 1 + len(cue), _window_word_limit(match_text)
            )
            if window is None:
                continue
            matched = _run_cascade(seq, match_text, window, "left")
            if matched is None:
                continue
            _, lf = matched
            if roman is not None:
                nxt = lf.end_idx
                if nxt < len(seq) and seq[nxt].is_word and seq[nxt].text == roman:
                    lf = _make_span(seq, lf.start_idx, nxt + 1)
            pairs.append(Pair(span, lf, RULE_SPECIAL_TEMPLATE))
            paired.add(span.token_idx)
            break

    # Paren cues: "ACR ( abbreviated long form )".
    for site in find_paren_sites(seq):
        before = site.before_idx
        if before < 0 or not seq[before].is_word:
            continue
        acr_text = seq[before].text
        if not is_acronym_token(acr_text) or before in paired:
            continue
        for cue in paren_cues:
            if not _cue_at(seq, site.open_idx + 1, cue):
                continue
            start = site.open_idx + 1 + len(cue)
            window = _window_of_range(
                seq, range(start, site.close_idx), _window_word_limit(acr_text)
            )
            if window is None:
                continue
            matched = _run_cascade(seq, acr_text, window, "left")
            if matched is None:
                continue
            _, lf = matched
            acr_tok = seq[before]
            pairs.append(
                Pair(
                    AcronymSpan(before, acr_text, acr_tok.start, acr_tok.end),
                    lf,
                    RULE_SPECIAL_TEMPLATE,
                )
            )
            paired.add(before)
            break

    return pairs


# ---------------------------------------------------------------------------
# Full pipeline


def _template_a_acronym(
    seq: TokenSequence, site: ParenSite, by_idx: dict[int, AcronymSpan]
) -> AcronymSpan | None:
    """The acronym of a "long form (ACR)" site, when the interior is one."""
    words = [i for i in site.inside if seq[i].is_word]
    if len(words) != 1:
        return None
    return by_idx.get(words[0])


def identify_sequence(
    seq: TokenSequence, cues: list[tuple[str, ...]] | None = None
) -> AIAnnotation:
    """Run the full cascade over an already tokenized sequence."""
    detected = detect_acronyms(seq)
    by_idx = {a.token_idx: a for a in detected}
    cue_list = cues if cues is not None else default_cues()
    paren_cue_heads = {c[1] for c in cue_list if len(c) > 1 and c[0] == "("}

    pairs: list[Pair] = []
    paired: set[int] = set()

    for site in find_paren_sites(seq):
        interior_words = [i for i in site.inside if seq[i].is_word]

        # Merged interiors ("(ABC-II)") are left to the special rules.
        if len(site.inside) == 3 and _merged_at(seq, site.inside[0]) is not None:
            continue

        acr = _template_a_acronym(seq, site, by_idx)
        if acr is not None:
            # Template: long form (ACR). Preferred when both sides qualify.
            if acr.token_idx in paired:
                continue
            window = candidate_window(seq, acr.text, site)
            if window is None:
                continue
            matched = _run_cascade(seq, acr.text, window, "right")
            if matched is None:
                continue
            rule, span = matched
            pairs.append(Pair(acr, span, rule))
            paired.add(acr.token_idx)
            continue

        before = site.before_idx
        if before in by_idx and before not in paired and interior_words:
            # Template: ACR (long form), unless the interior opens with a
            # configured cue word (then the special template rule owns it).
            if seq[site.inside[0]].text.lower() in paren_cue_heads:
                continue
            acr = by_idx[before]
            window = _window_of_range(
                seq, site.inside, _window_word_limit(acr.text)
            )
            if window is None:
                continue
            matched = _run_cascade(seq, acr.text, window, "left")
            if matched is None:
                continue
            rule, span = matched
            pairs.append(Pair(acr, span, rule))
            paired.add(acr.token_idx)

    special = apply_special_rules(seq, detected, paired, cue_list)
    pairs.extend(special)

    acronyms = list(detected)
    known = {(a.token_idx, a.text) for a in acronyms}
    for pair in special:
        key = (pair.acronym.token_idx, pair.acronym.text)
        if key not in known:
            acronyms.append(pair.acronym)
            known.add(key)
    acronyms.sort(key=lambda a: (a.start, a.end))
    pairs.sort(key=lambda p: p.acronym.start)

    return AIAnnotation(seq.source, tuple(acronyms), tuple(pairs))


def identify(text: str, cues: list[tuple[str, ...]] | None = None) -> AIAnnotation:
    """Tokenize ``text`` and annotate acronyms and local long forms."""
    return identify_sequence(tokenize(text), cues)
