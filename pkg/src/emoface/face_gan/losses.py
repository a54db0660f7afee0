"""Loss terms for the face-editing GAN.

Four terms combine into the full objective:
  adversarial   Wasserstein critic gap with a gradient penalty that pushes
                the critic's input-gradient norm toward 1 on samples drawn
                uniformly along real-fake segments;
  attention     total-variation smoothness plus an l2-norm penalty on the
                attention masks of both the editing and reconstruction pass
                (the norm is penalized positively so the mask cannot cheaply
                saturate to all-ones and copy the input);
  condition     squared regression error of the critic's AU head against the
                desired vector on edited images and the annotated vector on
                real images;
  cycle         mean absolute error of editing back to the original
                attributes, preserving identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch

from emoface.errors import NumericalError
from emoface.face_gan.config import GanHyperParams
from emoface.face_gan.networks import Critic, Generator, MaskPair


@dataclass
class AdversarialLoss:
    critic_loss: torch.Tensor     # E[D(fake)] - E[D(real)] + lambda_gp * penalty
    generator_loss: torch.Tensor  # -E[D(fake)]
    wasserstein_gap: torch.Tensor
    penalty: torch.Tensor


@dataclass
class ConditionLoss:
    total: torch.Tensor      # fake_term + real_term
    fake_term: torch.Tensor  # E[||D_z(edited) - z_desired||^2], trains the generator
    real_term: torch.Tensor  # E[||D_z(real) - z_orig||^2], trains the critic


@dataclass
class LossTerms:
    adversarial: torch.Tensor
    attention: torch.Tensor
    condition: torch.Tensor
    cycle: torch.Tensor


def _per_image_score(critic: Critic, images: torch.Tensor) -> torch.Tensor:
    """Patch scores mean-reduced to one scalar per image."""
    patch, _ = critic(images)
    return patch.mean(dim=(1, 2, 3))


def _check_finite(scores: torch.Tensor, what: str) -> None:
    finite = torch.isfinite(scores)
    if not bool(finite.all()):
        bad = int(torch.nonzero(~finite)[0, 0])
        raise NumericalError(f"non-finite critic output on {what}, batch index {bad}")


def gradient_penalty(
    critic: Critic,
    real: torch.Tensor,
    fake: torch.Tensor,
    epsilon: torch.Tensor | None = None,
    rng: torch.Generator | None = None,
) -> torch.Tensor:
    """E[(||grad_x D(x_hat)||_2 - 1)^2] on per-sample real/fake interpolates.

    epsilon can be passed explicitly (shape (B, 1, 1, 1)) for reproducible
    evaluation; otherwise one uniform draw per sample.
    """
    if epsilon is None:
        epsilon = torch.rand(
            real.shape[0], 1, 1, 1, generator=rng, dtype=real.dtype, device=real.device
        )
    interpolated = (epsilon * real + (1.0 - epsilon) * fake.detach()).requires_grad_(True)
    scores = _per_image_score(critic, interpolated)
    grads = torch.autograd.grad(
        outputs=scores.sum(), inputs=interpolated, create_graph=True
    )[0]
    norms = grads.flatten(start_dim=1).norm(2, dim=1)
    return ((norms - 1.0) ** 2).mean()


def adversarial_loss(
    critic: Critic,
    real: torch.Tensor,
    fake: torch.Tensor,
    lambda_gp: float,
    epsilon: torch.Tensor | None = None,
    rng: torch.Generator | None = None,
) -> AdversarialLoss:
    """Critic-form loss and the generator's adversarial term on one batch."""
    fake_scores = _per_image_score(critic, fake)
    real_scores = _per_image_score(critic, real)
    _check_finite(fake_scores, "generated images")
    _check_finite(real_scores, "real images")
    gap = fake_scores.mean() - real_scores.mean()
    penalty = gradient_penalty(critic, real, fake, epsilon=epsilon, rng=rng)
    return AdversarialLoss(
        critic_loss=gap + lambda_gp * penalty,
        generator_loss=-fake_scores.mean(),
        wasserstein_gap=gap,
        penalty=penalty,
    )


def total_variation(mask: torch.Tensor) -> torch.Tensor:
    """Per-sample sum of squared neighbor differences along both axes.

    Accepts (B, 1, H, W) or (B, H, W) or (H, W).
    """
    if mask.ndim == 2:
        mask = mask.unsqueeze(0)
    dh = mask[..., 1:, :] - mask[..., :-1, :]
    dw = mask[..., :, 1:] - mask[..., :, :-1]
    return (dh ** 2).flatten(start_dim=1).sum(dim=1) + (dw ** 2).flatten(start_dim=1).sum(dim=1)


def attention_term(mask: torch.Tensor, lambda_tv: float, norm_sign: float = 1.0) -> torch.Tensor:
    """Batch-mean of lambda_tv * TV(A) + sign * ||A||_2 for one mask."""
    if mask.ndim == 2:
        mask = mask.unsqueeze(0)
    tv = total_variation(mask)
    norms = mask.flatten(start_dim=1).norm(2, dim=1)
    return (lambda_tv * tv + norm_sign * norms).mean()


def attention_loss(
    attention_fake: torch.Tensor,
    attention_cycle: torch.Tensor,
    lambda_tv: float,
    norm_sign: float = 1.0,
) -> torch.Tensor:
    """Attention regularizer summed over the editing and reconstruction masks."""
    return (
        attention_term(attention_fake, lambda_tv, norm_sign)
        + attention_term(attention_cycle, lambda_tv, norm_sign)
    )


def condition_loss(
    critic: Critic,
    fake: torch.Tensor,
    z_desired: torch.Tensor,
    real: torch.Tensor,
    z_orig: torch.Tensor,
) -> ConditionLoss:
    """Squared AU regression error on edited and real images.

    Only the fake term has the generator in its graph, so generator updates
    receive gradient exclusively through it.
    """
    _, au_fake = critic(fake)
    _, au_real = critic(real)
    fake_term = ((au_fake - z_desired) ** 2).sum(dim=1).mean()
    real_term = ((au_real - z_orig) ** 2).sum(dim=1).mean()
    return ConditionLoss(total=fake_term + real_term, fake_term=fake_term, real_term=real_term)


def edit_and_reconstruct(
    generator: Generator,
    images: torch.Tensor,
    z_desired: torch.Tensor,
    z_orig: torch.Tensor,
) -> tuple[MaskPair, torch.Tensor, MaskPair, torch.Tensor]:
    """Edit to z_desired, then edit the result back to z_orig."""
    masks_fake, fake = generator.edit(images, z_desired)
    masks_cycle, reconstructed = generator.edit(fake, z_orig)
    return masks_fake, fake, masks_cycle, reconstructed


def cycle_loss(
    generator: Generator,
    images: torch.Tensor,
    z_orig: torch.Tensor,
    z_desired: torch.Tensor,
) -> torch.Tensor:
    """Mean absolute per-pixel error of the round-trip reconstruction."""
    _, _, _, reconstructed = edit_and_reconstruct(generator, images, z_desired, z_orig)
    return (reconstructed - images).abs().mean()


def full_objective(terms: LossTerms, hp: GanHyperParams) -> torch.Tensor:
    """Weighted sum of the four loss terms."""
    return (
        terms.adversarial
        + hp.lambda_attention * terms.attention
        + hp.lambda_condition * terms.condition
        + hp.lambda_cycle * terms.cycle
    )
