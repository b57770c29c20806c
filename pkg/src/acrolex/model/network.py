"""Sequence classifier: embeddings -> BiLSTM -> max-pool -> feed-forward.

Everything is plain numpy in float64 with hand-written backpropagation,
which keeps the arithmetic transparent and lets the finite-difference
check in training.py validate every gradient. PAD positions carry the
previous state through the recurrence and are masked to -inf before the
max-pool so padding never leaks into the text representation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .embeddings import PAD_IDX, EmbeddingTable

MODEL_FORMAT_VERSION = 1


class ModelFormatError(Exception):
    """Model file failed validation at load time."""


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass
class LSTMWeights:
    """One direction's weights; gate order is input, forget, cell, output."""

    Wx: np.ndarray  # (d, 4h)
    Wh: np.ndarray  # (h, 4h)
    b: np.ndarray  # (4h,)

    @property
    def hidden(self) -> int:
        return self.Wh.shape[0]


@dataclass
class ModelParams:
    embedding: EmbeddingTable
    fwd: LSTMWeights
    bwd: LSTMWeights
    W1: np.ndarray  # (4h, f)
    b1: np.ndarray  # (f,)
    W2: np.ndarray  # (f, L)
    b2: np.ndarray  # (L,)
    label_space: tuple[str, ...]
    chunk_id: str = ""
    acronyms: tuple[str, ...] = ()
    max_len: int = 128

    def __post_init__(self) -> None:
        h = self.fwd.hidden
        if self.bwd.hidden != h:
            raise ModelFormatError("direction hidden sizes differ")
        if self.W1.shape[0] != 4 * h:
            raise ModelFormatError(
                f"W1 expects width {4 * h} (pooled + acronym state), got {self.W1.shape[0]}"
            )
        if self.W1.shape[1] != self.b1.shape[0] or self.W2.shape[0] != self.b1.shape[0]:
            raise ModelFormatError("feed-forward layer widths disagree")
        if self.W2.shape[1] != len(self.label_space) or self.b2.shape[0] != len(
            self.label_space
        ):
            raise ModelFormatError(
                "final layer width must equal the number of long forms"
            )

    @property
    def hidden(self) -> int:
        return self.fwd.hidden

    def trainable(self) -> dict[str, np.ndarray]:
        """Named parameter groups, gradient-checked and updated by SGD."""
        return {
            "fwd.Wx": self.fwd.Wx,
            "fwd.Wh": self.fwd.Wh,
            "fwd.b": self.fwd.b,
            "bwd.Wx": self.bwd.Wx,
            "bwd.Wh": self.bwd.Wh,
            "bwd.b": self.bwd.b,
            "W1": self.W1,
            "b1": self.b1,
            "W2": self.W2,
            "b2": self.b2,
        }


def init_params(
    *,
    embedding: EmbeddingTable,
    hidden: int,
    ffn: int,
    label_space: tuple[str, ...],
    seed: int,
    chunk_id: str = "",
    acronyms: tuple[str, ...] = (),
    max_len: int = 128,
) -> ModelParams:
    rng = np.random.default_rng(seed)
    d = embedding.dim

    def u(rows: int, cols: int) -> np.ndarray:
        scale = 1.0 / np.sqrt(rows)
        return rng.uniform(-scale, scale, size=(rows, cols))

    def direction() -> LSTMWeights:
        return LSTMWeights(u(d, 4 * hidden), u(hidden, 4 * hidden), np.zeros(4 * hidden))

    return ModelParams(
        embedding=embedding,
        fwd=direction(),
        bwd=direction(),
        W1=u(4 * hidden, ffn),
        b1=np.zeros(ffn),
        W2=u(ffn, len(label_space)),
        b2=np.zeros(len(label_space)),
        label_space=tuple(label_space),
        chunk_id=chunk_id,
        acronyms=tuple(acronyms),
        max_len=max_len,
    )


# ---------------------------------------------------------------------------
# Batch assembly


def truncate_window(n: int, acronym_idx: int, max_len: int) -> tuple[int, int]:
    """[start, end) window of at most max_len tokens keeping the acronym.

    Symmetric around the acronym, shifted when one side runs out.
    """
    if n <= max_len:
        return 0, n
    half = max_len // 2
    start = acronym_idx - half
    if start < 0:
        start = 0
    if start + max_len > n:
        start = n - max_len
    return start, start + max_len


@dataclass
class Batch:
    ids: np.ndarray  # (B, T) int embedding rows
    mask: np.ndarray  # (B, T) float 1.0 at real tokens
    acr_idx: np.ndarray  # (B,) int position of the acronym
    gold: np.ndarray | None = None  # (B,) int label indices


def make_batch(
    params: ModelParams,
    token_texts: list[list[str]],
    acronym_idxs: list[int],
    gold: list[int] | None = None,
) -> Batch:
    rows: list[list[int]] = []
    positions: list[int] = []
    for texts, aidx in zip(token_texts, acronym_idxs):
        if not 0 <= aidx < len(texts):
            raise ValueError(f"acronym index {aidx} outside sequence of {len(texts)}")
        start, end = truncate_window(len(texts), aidx, params.max_len)
        rows.append([params.embedding.index_of(t) for t in texts[start:end]])
        positions.append(aidx - start)
    T = max(len(r) for r in rows)
    ids = np.full((len(rows), T), PAD_IDX, dtype=np.intp)
    mask = np.zeros((len(rows), T))
    for i, r in enumerate(rows):
        ids[i, : len(r)] = r
        mask[i, : len(r)] = 1.0
    return Batch(
        ids=ids,
        mask=mask,
        acr_idx=np.asarray(positions, dtype=np.intp),
        gold=None if gold is None else np.asarray(gold, dtype=np.intp),
    )


# ---------------------------------------------------------------------------
# Forward


@dataclass
class _DirectionCache:
    steps: list[tuple]
    H: np.ndarray


@dataclass
class ForwardCache:
    batch: Batch
    X: np.ndarray
    fwd: _DirectionCache
    bwd: _DirectionCache
    H: np.ndarray  # (B, T, 2h)
    argmax: np.ndarray  # (B, 2h) positions chosen by the max-pool
    pooled: np.ndarray
    h_a: np.ndarray
    u: np.ndarray
    r: np.ndarray
    logits: np.ndarray


def _run_direction(
    X: np.ndarray, mask: np.ndarray, w: LSTMWeights
) -> _DirectionCache:
    B, T, _ = X.shape
    h = w.hidden
    H = np.zeros((B, T, h))
    steps: list[tuple] = []
    h_prev = np.zeros((B, h))
    c_prev = np.zeros((B, h))
    for t in range(T):
        x_t = X[:, t, :]
        m = mask[:, t][:, None]
        a = x_t @ w.Wx + h_prev @ w.Wh + w.b
        i = _sigmoid(a[:, :h])
        f = _sigmoid(a[:, h : 2 * h])
        g = np.tanh(a[:, 2 * h : 3 * h])
        o = _sigmoid(a[:, 3 * h :])
        c_new = f * c_prev + i * g
        h_new = o * np.tanh(c_new)
        c_t = m * c_new + (1.0 - m) * c_prev
        h_t = m * h_new + (1.0 - m) * h_prev
        H[:, t] = h_t
        steps.append((x_t, h_prev, c_prev, i, f, g, o, c_new, m))
        h_prev, c_prev = h_t, c_t
    return _DirectionCache(steps, H)


def forward(params: ModelParams, batch: Batch) -> ForwardCache:
    X = params.embedding.embed_ids(batch.ids)  # (B, T, d)
    B, T, _ = X.shape

    fwd = _run_direction(X, batch.mask, params.fwd)
    bwd_rev = _run_direction(X[:, ::-1], batch.mask[:, ::-1], params.bwd)
    Hb = bwd_rev.H[:, ::-1]
    H = np.concatenate([fwd.H, Hb], axis=2)  # (B, T, 2h)

    neg_inf = np.where(batch.mask[:, :, None] > 0, 0.0, -np.inf)
    masked = H + neg_inf
    argmax = masked.argmax(axis=1)  # (B, 2h)
    cols = np.arange(H.shape[2])[None, :]
    pooled = masked[np.arange(B)[:, None], argmax, cols]
    h_a = H[np.arange(B), batch.acr_idx]

    u = np.concatenate([pooled, h_a], axis=1)  # (B, 4h)
    r = np.tanh(u @ params.W1 + params.b1)
    logits = r @ params.W2 + params.b2
    return ForwardCache(
        batch=batch,
        X=X,
        fwd=fwd,
        bwd=bwd_rev,
        H=H,
        argmax=argmax,
        pooled=pooled,
        h_a=h_a,
        u=u,
        r=r,
        logits=logits,
    )


@dataclass(frozen=True)
class EncoderState:
    """Per-position states with the pooled text and acronym vectors."""

    H: np.ndarray  # (n, 2h)
    pooled: np.ndarray  # (2h,)
    acronym_state: np.ndarray  # (2h,)


def encode(params: ModelParams, token_texts: list[str], acronym_idx: int) -> EncoderState:
    """Encode one sample; overlong inputs are truncated around the acronym."""
    batch = make_batch(params, [token_texts], [acronym_idx])
    cache = forward(params, batch)
    return EncoderState(cache.H[0], cache.pooled[0], cache.h_a[0])


def classify(params: ModelParams, state: EncoderState) -> np.ndarray:
    """Logits over the chunk's label space from an encoder state."""
    u = np.concatenate([state.pooled, state.acronym_state])
    if u.shape[0] != params.W1.shape[0]:
        raise ModelFormatError(
            f"encoder width {u.shape[0]} does not match classifier input {params.W1.shape[0]}"
        )
    r = np.tanh(u @ params.W1 + params.b1)
    return r @ params.W2 + params.b2


# ---------------------------------------------------------------------------
# Loss and backward


def log_softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=-1, keepdims=True)
    return z - np.log(np.exp(z).sum(axis=-1, keepdims=True))


def loss_and_grads(
    params: ModelParams, cache: ForwardCache
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy over the batch plus gradients for trainable()."""
    batch = cache.batch
    if batch.gold is None:
        raise ValueError("batch has no gold labels")
    B = cache.logits.shape[0]
    logp = log_softmax(cache.logits)
    loss = float(-logp[np.arange(B), batch.gold].mean())

    dlogits = np.exp(logp)
    dlogits[np.arange(B), batch.gold] -= 1.0
    dlogits /= B

    grads: dict[str, np.ndarray] = {}
    grads["W2"] = cache.r.T @ dlogits
    grads["b2"] = dlogits.sum(axis=0)
    dr = dlogits @ params.W2.T
    dz1 = dr * (1.0 - cache.r**2)
    grads["W1"] = cache.u.T @ dz1
    grads["b1"] = dz1.sum(axis=0)
    du = dz1 @ params.W1.T

    two_h = cache.H.shape[2]
    d_pooled = du[:, :two_h]
    d_ha = du[:, two_h:]

    dH = np.zeros_like(cache.H)
    cols = np.arange(two_h)[None, :]
    dH[np.arange(B)[:, None], cache.argmax, cols] += d_pooled
    dH[np.arange(B), batch.acr_idx] += d_ha

    h = params.hidden
    dWx_f, dWh_f, db_f = _direction_backward(dH[:, :, :h], cache.fwd, params.fwd)
    dWx_b, dWh_b, db_b = _direction_backward(
        dH[:, ::-1, h:], cache.bwd, params.bwd
    )
    grads["fwd.Wx"], grads["fwd.Wh"], grads["fwd.b"] = dWx_f, dWh_f, db_f
    grads["bwd.Wx"], grads["bwd.Wh"], grads["bwd.b"] = dWx_b, dWh_b, db_b
    return loss, grads


def _direction_backward(
    dH: np.ndarray, cache: _DirectionCache, w: LSTMWeights
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    B, T, h = dH.shape
    dWx = np.zeros_like(w.Wx)
    dWh = np.zeros_like(w.Wh)
    db = np.zeros_like(w.b)
    dh_next = np.zeros((B, h))
    dc_next = np.zeros((B, h))
    for t in reversed(range(T)):
        x_t, h_prev, c_prev, i, f, g, o, c_new, m = cache.steps[t]
        dh = dH[:, t] + dh_next
        dc = dc_next
        dh_new = dh * m
        dh_carry = dh * (1.0 - m)
        dc_new = dc * m
        dc_carry = dc * (1.0 - m)
        tanh_c = np.tanh(c_new)
        do = dh_new * tanh_c
        dc_new = dc_new + dh_new * o * (1.0 - tanh_c**2)
        di = dc_new * g
        df = dc_new * c_prev
        dg = dc_new * i
        dc_prev = dc_new * f + dc_carry
        da = np.concatenate(
            [
                di * i * (1.0 - i),
                df * f * (1.0 - f),
                dg * (1.0 - g**2),
                do * o * (1.0 - o),
            ],
            axis=1,
        )
        dWx += x_t.T @ da
        dWh += h_prev.T @ da
        db += da.sum(axis=0)
        dh_next = da @ w.Wh.T + dh_carry
        dc_next = dc_prev
    return dWx, dWh, db


# ---------------------------------------------------------------------------
# Persistence


def save_model(params: ModelParams, path: str) -> None:
    meta = {
        "version": MODEL_FORMAT_VERSION,
        "chunk_id": params.chunk_id,
        "label_space": list(params.label_space),
        "acronyms": list(params.acronyms),
        "max_len": params.max_len,
        "vocab": params.embedding.vocab,
    }
    np.savez(
        path,
        meta=np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8),
        embedding=params.embedding.matrix,
        fwd_Wx=params.fwd.Wx,
        fwd_Wh=params.fwd.Wh,
        fwd_b=params.fwd.b,
        bwd_Wx=params.bwd.Wx,
        bwd_Wh=params.bwd.Wh,
        bwd_b=params.bwd.b,
        W1=params.W1,
        b1=params.b1,
        W2=params.W2,
        b2=params.b2,
    )


def load_model(path: str) -> ModelParams:
    try:
        data = np.load(path)
        meta = json.loads(bytes(data["meta"]).decode("utf-8"))
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"{path}: unreadable model file ({exc})") from exc
    if meta.get("version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(f"{path}: unsupported version {meta.get('version')!r}")
    try:
        embedding = EmbeddingTable(meta["vocab"], data["embedding"])
        params = ModelParams(
            embedding=embedding,
            fwd=LSTMWeights(data["fwd_Wx"], data["fwd_Wh"], data["fwd_b"]),
            bwd=LSTMWeights(data["bwd_Wx"], data["bwd_Wh"], data["bwd_b"]),
            W1=data["W1"],
            b1=data["b1"],
            W2=data["W2"],
            b2=data["b2"],
            label_space=tuple(meta["label_space"]),
            chunk_id=meta.get("chunk_id", ""),
            acronyms=tuple(meta.get("acronyms", ())),
            max_len=int(meta.get("max_len", 128)),
        )
    except (KeyError, ValueError) as exc:
        raise ModelFormatError(f"{path}: missing or invalid arrays ({exc})") from exc
    return params
