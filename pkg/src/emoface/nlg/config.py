"""Configuration for the response generator and its training run."""

from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class NlgConfig:
    vocab_size: int
    embedding_dim: int = 50
    hidden_dim: int = 200
    max_decode_len: int = 30
    emotion_classes: int = 8
    max_context_turns: int = 3
    max_context_len: int = 90
    emotion_loss_weight: float = 1.0
    # Scheduled sampling: linear decay of the teacher-forcing probability
    # from tf_start to tf_end over tf_decay_epochs.
    tf_start: float = 1.0
    tf_end: float = 0.5
    tf_decay_epochs: int = 100

    def __post_init__(self):
        for name in ("vocab_size", "embedding_dim", "hidden_dim", "emotion_classes",
                     "max_context_turns", "max_context_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_decode_len < 0:
            raise ValueError("max_decode_len must be >= 0")
        for name in ("tf_start", "tf_end"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.tf_decay_epochs < 1:
            raise ValueError("tf_decay_epochs must be >= 1")

    def teacher_forcing_prob(self, epoch: int) -> float:
        """Probability for a 0-based epoch under the linear decay schedule."""
        if self.tf_decay_epochs == 1:
            return self.tf_end if epoch >= 1 else self.tf_start
        frac = min(epoch / (self.tf_decay_epochs - 1), 1.0)
        return self.tf_start + (self.tf_end - self.tf_start) * frac

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "NlgConfig":
        return cls(**d)


@dataclass
class NlgTrainConfig:
    """Optimization settings. Defaults: minibatch Adam, batch 256, 100 epochs."""

    batch_size: int = 256
    epochs: int = 100
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be >= 1")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "NlgTrainConfig":
        return cls(**d)
