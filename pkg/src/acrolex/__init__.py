"""acrolex: acronym identification and disambiguation.

A rule cascade finds acronyms and their locally defined long forms;
mining those pairs over corpora builds a multi-domain glossary and a
self-labeled training set; a per-chunk sequence classifier expands
acronyms that carry no local definition. The same pipeline is exposed as
a library, a CLI (``acrolex``), and an HTTP service.
"""

from .glossary import Glossary, GlossaryEntry, GlossaryError, normalize_long_form
from .identify import (
    AIAnnotation,
    AcronymSpan,
    LongFormSpan,
    Pair,
    apply_special_rules,
    candidate_window,
    detect_acronyms,
    identify,
    identify_sequence,
    is_acronym_token,
    match_bounded_schwartz,
    match_character,
    match_initial_capitals,
)
from .mining import (
    ADSample,
    ChunkManifest,
    Document,
    assign_chunks,
    mine_corpus,
    mine_document,
    split_samples,
)
from .model import (
    EmbeddingTable,
    ModelRegistry,
    RankedPrediction,
    TrainConfig,
    encode,
    classify,
    gradient_check,
    predict,
    train_chunk,
)
from .tokenize import Token, TokenSequence, find_paren_sites, tokenize

__version__ = "0.1.0"

__all__ = [
    "ADSample",
    "AIAnnotation",
    "AcronymSpan",
    "ChunkManifest",
    "Document",
    "EmbeddingTable",
    "Glossary",
    "GlossaryEntry",
    "GlossaryError",
    "LongFormSpan",
    "ModelRegistry",
    "Pair",
    "RankedPrediction",
    "Token",
    "TokenSequence",
    "TrainConfig",
    "apply_special_rules",
    "assign_chunks",
    "candidate_window",
    "classify",
    "detect_acronyms",
    "encode",
    "find_paren_sites",
    "gradient_check",
    "identify",
    "identify_sequence",
    "is_acronym_token",
    "match_bounded_schwartz",
    "match_character",
    "match_initial_capitals",
    "mine_corpus",
    "mine_document",
    "normalize_long_form",
    "predict",
    "split_samples",
    "tokenize",
    "train_chunk",
    "__version__",
]
