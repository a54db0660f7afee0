"""Attention-masked conditional GAN for Action-Unit-driven face editing."""

from emoface.face_gan.config import GanConfig, GanHyperParams
from emoface.face_gan.networks import (
    Critic,
    Generator,
    MaskPair,
    compose_edit,
    generator_forward,
)
from emoface.face_gan.losses import (
    AdversarialLoss,
    ConditionLoss,
    LossTerms,
    adversarial_loss,
    attention_loss,
    attention_term,
    condition_loss,
    cycle_loss,
    full_objective,
    gradient_penalty,
    total_variation,
)
from emoface.face_gan.train import FaceGanTrainer, load_face_checkpoint

__all__ = [
    "AdversarialLoss",
    "ConditionLoss",
    "Critic",
    "FaceGanTrainer",
    "GanConfig",
    "GanHyperParams",
    "Generator",
    "LossTerms",
    "MaskPair",
    "adversarial_loss",
    "attention_loss",
    "attention_term",
    "compose_edit",
    "condition_loss",
    "cycle_loss",
    "full_objective",
    "generator_forward",
    "gradient_penalty",
    "load_face_checkpoint",
    "total_variation",
]
