"""Trainable expansion model: BiLSTM encoder, per-chunk classifiers."""

from .embeddings import EmbeddingTable
from .inference import (
    METHOD_DICTIONARY,
    METHOD_FREQUENCY_FALLBACK,
    METHOD_MODEL,
    ModelRegistry,
    RankedPrediction,
    predict,
    predict_sequence,
)
from .network import (
    EncoderState,
    ModelFormatError,
    ModelParams,
    classify,
    encode,
    forward,
    init_params,
    load_model,
    make_batch,
    save_model,
)
from .training import (
    EpochLog,
    TrainConfig,
    TrainingDiverged,
    TrainResult,
    gradient_check,
    train_chunk,
)

__all__ = [
    "EmbeddingTable",
    "EncoderState",
    "EpochLog",
    "METHOD_DICTIONARY",
    "METHOD_FREQUENCY_FALLBACK",
    "METHOD_MODEL",
    "ModelFormatError",
    "ModelParams",
    "ModelRegistry",
    "RankedPrediction",
    "TrainConfig",
    "TrainingDiverged",
    "TrainResult",
    "classify",
    "encode",
    "forward",
    "gradient_check",
    "init_params",
    "load_model",
    "make_batch",
    "predict",
    "predict_sequence",
    "save_model",
    "train_chunk",
]
