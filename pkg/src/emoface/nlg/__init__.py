"""Multi-task response generator: word sequences plus an emotion prediction."""

from emoface.nlg.config import NlgConfig, NlgTrainConfig
from emoface.nlg.model import (
    DecoderState,
    EncoderOutput,
    NlgLossParts,
    NlgModel,
    NlgPrediction,
)
from emoface.nlg.data import NlgBatch, NlgDataset, build_context_ids, build_target_ids
from emoface.nlg.train import evaluate, load_nlg_checkpoint, train_nlg

__all__ = [
    "DecoderState",
    "EncoderOutput",
    "NlgBatch",
    "NlgConfig",
    "NlgDataset",
    "NlgLossParts",
    "NlgModel",
    "NlgPrediction",
    "NlgTrainConfig",
    "build_context_ids",
    "build_target_ids",
    "evaluate",
    "load_nlg_checkpoint",
    "train_nlg",
]
