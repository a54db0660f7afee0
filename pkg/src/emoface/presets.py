"""Named desk-scale configurations.

Two bundles are pinned here so training runs are reproducible from the CLI
and the test suite alike: the response-generator overfit recipe for the
10-dialogue corpus, and the face-editor overfit recipe for the 16-image
procedural set. Matching JSON files live under configs/ for CLI use.
"""

from __future__ import annotations

from emoface.face_gan.config import GanConfig, GanHyperParams
from emoface.nlg.config import NlgConfig, NlgTrainConfig


def nlg_overfit_config(vocab_size: int) -> tuple[NlgConfig, NlgTrainConfig]:
    """Memorize the 10-dialogue corpus: default layer sizes, 300 epochs."""
    model = NlgConfig(vocab_size=vocab_size)
    train = NlgTrainConfig(batch_size=10, epochs=300, learning_rate=1e-3, seed=0)
    return model, train


def face_overfit_config() -> GanConfig:
    """Overfit the 16-face procedural set at 64x64 on a small CPU budget.

    Narrow networks keep a full train step affordable; the attention-norm
    weight is small so the mask can keep background pixels copied while the
    condition and cycle terms shape the edit.
    """
    return GanConfig(
        image_size=64,
        gen_base_channels=8,
        gen_res_blocks=2,
        critic_base_channels=8,
        critic_layers=3,
        hyper=GanHyperParams(
            lambda_gp=10.0,
            lambda_attention=0.001,
            lambda_tv=1e-5,
            lambda_condition=160.0,
            lambda_cycle=30.0,
            critic_steps=5,
            lr_generator=2e-4,
            lr_critic=2e-4,
            batch_size=16,
        ),
    )


FACE_OVERFIT_STEPS = 2000
FACE_OVERFIT_SEED = 0
