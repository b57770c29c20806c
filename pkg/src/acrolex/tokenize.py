"""Whitespace tokenizer with exact character offsets.

Splitting is deliberately simple and fully reversible: whitespace
delimits chunks, a fixed set of punctuation marks is detached from chunk
edges, and hyphens inside words become their own tokens ("User-guided"
-> "User", "-", "guided"). Every token records its [start, end) offsets
into the source string, so any span can be mapped back to the exact
surface text.
"""

from __future__ import annotations

from dataclasses import dataclass

# Marks detached from the edges of whitespace-delimited chunks. Inner
# occurrences (as in "i.e") stay attached to the word.
DETACHABLE = set('(),.;:!?"')

# Tokens that end a sentence for windowing purposes.
SENTENCE_FINAL = {".", "!", "?"}


@dataclass(frozen=True)
class Token:
    """One token with its exact position in the source text."""

    text: str
    start: int
    end: int
    is_word: bool

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"empty token span [{self.start}, {self.end})")


@dataclass(frozen=True)
class TokenSequence:
    """Tokens of one source string, sorted and non-overlapping."""

    tokens: tuple[Token, ...]
    source: str

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, idx):
        return self.tokens[idx]

    def text_of(self, start_idx: int, end_idx: int) -> str:
        """Raw source substring covering tokens [start_idx, end_idx)."""
        if start_idx >= end_idx:
            return ""
        return self.source[self.tokens[start_idx].start : self.tokens[end_idx - 1].end]

    def rendered(self, start_idx: int, end_idx: int) -> str:
        """Space-joined token texts for tokens [start_idx, end_idx)."""
        return " ".join(t.text for t in self.tokens[start_idx:end_idx])


@dataclass(frozen=True)
class ParenSite:
    """A balanced, innermost "( ... )" pair, by token index."""

    open_idx: int
    close_idx: int

    @property
    def inside(self) -> range:
        return range(self.open_idx + 1, self.close_idx)

    @property
    def before_idx(self) -> int:
        """Token immediately preceding "(", or -1 at text start."""
        return self.open_idx - 1


def _is_word(text: str) -> bool:
    return any(c.isalnum() for c in text)


def _split_run(run: str, offset: int, tokens: list[Token]) -> None:
    """Detach edge punctuation from a paren-free run, split inner hyphens."""
    start, end = 0, len(run)
    leading: list[tuple[str, int]] = []
    trailing: list[tuple[str, int]] = []
    while start < end and run[start] in DETACHABLE:
        leading.append((run[start], start))
        start += 1
    while end > start and run[end - 1] in DETACHABLE:
        trailing.append((run[end - 1], end - 1))
        end -= 1

    for text, pos in leading:
        tokens.append(Token(text, offset + pos, offset + pos + 1, False))

    piece_start = start
    for i in range(start, end):
        if run[i] == "-":
            if piece_start < i:
                text = run[piece_start:i]
                tokens.append(
                    Token(text, offset + piece_start, offset + i, _is_word(text))
                )
            tokens.append(Token("-", offset + i, offset + i + 1, False))
            piece_start = i + 1
    if piece_start < end:
        text = run[piece_start:end]
        tokens.append(Token(text, offset + piece_start, offset + end, _is_word(text)))

    for text, pos in reversed(trailing):
        tokens.append(Token(text, offset + pos, offset + pos + 1, False))


def _split_chunk(chunk: str, offset: int) -> list[Token]:
    """One whitespace-delimited chunk into tokens.

    Parentheses split wherever they occur ("f(x)" -> f ( x )) because the
    template rules treat them structurally; the other detachable marks
    come off word edges only, so "i.e." or "e.g." stay whole.
    """
    tokens: list[Token] = []
    run_start = 0
    for i, c in enumerate(chunk):
        if c in "()":
            if run_start < i:
                _split_run(chunk[run_start:i], offset + run_start, tokens)
            tokens.append(Token(c, offset + i, offset + i + 1, False))
            run_start = i + 1
    if run_start < len(chunk):
        _split_run(chunk[run_start:], offset + run_start, tokens)
    return tokens


def tokenize(text: str) -> TokenSequence:
    """Tokenize ``text`` preserving offsets; empty text yields no tokens."""
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        tokens.extend(_split_chunk(text[i:j], i))
        i = j
    return TokenSequence(tuple(tokens), text)


def detokenize(seq: TokenSequence) -> str:
    """Rebuild the source from token texts and the gaps between them.

    This checks the offset bookkeeping rather than simply returning
    ``seq.source``: every character must be accounted for by either a
    token or a whitespace gap.
    """
    parts: list[str] = []
    pos = 0
    for tok in seq.tokens:
        parts.append(seq.source[pos : tok.start])
        parts.append(tok.text)
        pos = tok.end
    parts.append(seq.source[pos:])
    return "".join(parts)


MAX_PAREN_INTERIOR = 20


def find_paren_sites(seq: TokenSequence) -> list[ParenSite]:
    """Innermost balanced "( ... )" pairs with a short, non-empty interior.

    Nested outer pairs and unbalanced parentheses produce no site.
    """
    sites: list[ParenSite] = []
    stack: list[tuple[int, bool]] = []  # (open_idx, saw_nested)
    for idx, tok in enumerate(seq.tokens):
        if tok.text == "(":
            stack.append((idx, False))
        elif tok.text == ")":
            if not stack:
                continue
            open_idx, saw_nested = stack.pop()
            if stack:
                stack[-1] = (stack[-1][0], True)
            interior = idx - open_idx - 1
            if not saw_nested and 0 < interior <= MAX_PAREN_INTERIOR:
                sites.append(ParenSite(open_idx, idx))
    return sites


def sentence_boundaries(seq: TokenSequence) -> list[int]:
    """Indices of sentence-final punctuation tokens."""
    return [i for i, t in enumerate(seq.tokens) if t.text in SENTENCE_FINAL]


def sequence_from_texts(texts: list[str]) -> TokenSequence:
    """Build a sequence from bare token texts, one space between tokens."""
    tokens: list[Token] = []
    pos = 0
    for text in texts:
        if not text:
            raise ValueError("empty token text")
        if pos:
            pos += 1
        tokens.append(Token(text, pos, pos + len(text), _is_word(text)))
        pos += len(text)
    return TokenSequence(tuple(tokens), " ".join(texts))
