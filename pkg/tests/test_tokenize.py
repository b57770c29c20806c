"""Tokenizer: offsets, round-trips, parenthesis sites."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from acrolex.tokenize import (
    detokenize,
    find_paren_sites,
    sentence_boundaries,
    sequence_from_texts,
    tokenize,
)


def texts(seq):
    return [t.text for t in seq.tokens]


def test_empty_text_yields_empty_sequence():
    assert len(tokenize("")) == 0
    assert len(tokenize("   \n\t ")) == 0


def test_hyphen_splitting_and_punctuation_detachment():
    seq = tokenize("User-guided Social Media Crawling method (USMC)")
    assert texts(seq) == [
        "User", "-", "guided", "Social", "Media", "Crawling", "method", "(", "USMC", ")",
    ]


def test_plain_sentence_token_count():
    seq = tokenize("CNN stands for convolution neural network")
    assert len(seq) == 6
    assert all(t.is_word for t in seq.tokens)
    assert find_paren_sites(seq) == []


def test_inner_punctuation_stays_attached():
    seq = tokenize("problems, i.e., acronym identification (AI),")
    assert "i.e" in texts(seq)
    assert texts(seq).count(",") == 3
    assert texts(seq).count(".") == 1


def test_offsets_index_source_exactly():
    text = 'A quick (brown) fox; "jumps" over-the lazy dog!'
    seq = tokenize(text)
    for tok in seq.tokens:
        assert text[tok.start : tok.end] == tok.text


def test_tokens_sorted_and_non_overlapping():
    seq = tokenize("alpha (beta-gamma), delta.")
    for prev, cur in zip(seq.tokens, seq.tokens[1:]):
        assert prev.end <= cur.start


@given(st.text(max_size=200))
def test_round_trip_reconstructs_any_text(text):
    assert detokenize(tokenize(text)) == text


@given(st.text(alphabet="ab-(). \n", max_size=80))
def test_round_trip_punctuation_heavy(text):
    assert detokenize(tokenize(text)) == text


def test_is_word_classification():
    seq = tokenize("x - ( ) 3D ...")
    flags = {t.text: t.is_word for t in seq.tokens}
    assert flags["x"] and flags["3D"]
    assert not flags["-"] and not flags["("] and not flags[")"]


class TestParenSites:
    def test_single_site(self):
        seq = tokenize("the crawling method (USMC) works")
        sites = find_paren_sites(seq)
        assert len(sites) == 1
        site = sites[0]
        assert texts(seq)[site.open_idx] == "("
        assert texts(seq)[site.close_idx] == ")"
        assert [seq[i].text for i in site.inside] == ["USMC"]
        assert seq[site.before_idx].text == "method"

    def test_math_parens_still_sites(self):
        seq = tokenize("f(x) = y")
        sites = find_paren_sites(seq)
        assert len(sites) == 1
        assert [seq[i].text for i in sites[0].inside] == ["x"]

    def test_nested_keeps_innermost_only(self):
        seq = tokenize("a (b (c) d)")
        sites = find_paren_sites(seq)
        assert len(sites) == 1
        assert [seq[i].text for i in sites[0].inside] == ["c"]

    def test_unbalanced_produces_no_site(self):
        assert find_paren_sites(tokenize("a (b c")) == []
        assert find_paren_sites(tokenize("a b) c")) == []

    def test_empty_interior_skipped(self):
        assert find_paren_sites(tokenize("weird () text")) == []

    def test_oversized_interior_skipped(self):
        inner = " ".join(f"w{i}" for i in range(21))
        assert find_paren_sites(tokenize(f"a ({inner}) b")) == []
        inner = " ".join(f"w{i}" for i in range(20))
        assert len(find_paren_sites(tokenize(f"a ({inner}) b"))) == 1

    def test_sites_strictly_increasing(self):
        seq = tokenize("one (A) two (B) three (C)")
        sites = find_paren_sites(seq)
        opens = [s.open_idx for s in sites]
        assert opens == sorted(opens) and len(set(opens)) == len(opens)


def test_sentence_boundaries():
    seq = tokenize("First one. Second two! Third three? Done")
    marks = [seq[i].text for i in sentence_boundaries(seq)]
    assert marks == [".", "!", "?"]


def test_sequence_from_texts_round_trip():
    seq = sequence_from_texts(["alpha", "-", "beta", "(", "AB", ")"])
    assert seq.source == "alpha - beta ( AB )"
    for tok in seq.tokens:
        assert seq.source[tok.start : tok.end] == tok.text


def test_sequence_from_texts_rejects_empty_token():
    with pytest.raises(ValueError):
        sequence_from_texts(["a", ""])


def test_rendered_and_text_of():
    seq = tokenize("the User-guided method")
    assert seq.rendered(1, 4) == "User - guided"
    assert seq.text_of(1, 4) == "User-guided"
