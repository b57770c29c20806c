"""Frozen word-embedding table with UNK/PAD rows.

Vectors come either from a standard text embedding file (one "word
f1 ... fd" line per word) or from a seeded random table for desk-scale
runs. Row 0 is PAD (all zeros, excluded from pooling), row 1 is UNK.
"""

from __future__ import annotations

import numpy as np

PAD_IDX = 0
UNK_IDX = 1
RESERVED = ("<pad>", "<unk>")


class EmbeddingTable:
    def __init__(self, vocab: dict[str, int], matrix: np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] < len(RESERVED):
            raise ValueError("embedding matrix must be 2-D with PAD/UNK rows")
        for idx in vocab.values():
            if not 0 <= idx < matrix.shape[0]:
                raise ValueError("vocab index outside the matrix")
        self.vocab = vocab
        self.matrix = np.asarray(matrix, dtype=np.float64)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def index_of(self, token: str) -> int:
        idx = self.vocab.get(token)
        if idx is None:
            idx = self.vocab.get(token.lower(), UNK_IDX)
        return idx

    def embed_ids(self, ids: np.ndarray) -> np.ndarray:
        return self.matrix[ids]

    @classmethod
    def random_table(
        cls, words: list[str], dim: int = 50, seed: int = 13, scale: float = 0.5
    ) -> "EmbeddingTable":
        """Seeded random vectors for an explicit vocabulary."""
        rng = np.random.default_rng(seed)
        uniq = sorted({w.lower() for w in words})
        vocab = {w: i + len(RESERVED) for i, w in enumerate(uniq)}
        matrix = rng.uniform(-scale, scale, size=(len(uniq) + len(RESERVED), dim))
        matrix[PAD_IDX] = 0.0
        return cls(vocab, matrix)

    @classmethod
    def from_text_file(cls, path: str, max_words: int | None = None) -> "EmbeddingTable":
        """Load "word f1 ... fd" lines; dimension inferred from the first."""
        vocab: dict[str, int] = {}
        rows: list[np.ndarray] = []
        dim: int | None = None
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                parts = line.rstrip("\n").split(" ")
                if len(parts) < 2:
                    continue
                word, values = parts[0], parts[1:]
                if dim is None:
                    dim = len(values)
                elif len(values) != dim:
                    raise ValueError(f"{path}: inconsistent embedding width for {word!r}")
                if word in vocab:
                    continue
                vocab[word] = len(rows) + len(RESERVED)
                rows.append(np.array(values, dtype=np.float64))
                if max_words is not None and len(rows) >= max_words:
                    break
        if dim is None:
            raise ValueError(f"{path}: no embedding rows found")
        matrix = np.zeros((len(rows) + len(RESERVED), dim))
        if rows:
            matrix[len(RESERVED) :] = np.stack(rows)
            matrix[UNK_IDX] = matrix[len(RESERVED) :].mean(axis=0)
        return cls(vocab, matrix)
