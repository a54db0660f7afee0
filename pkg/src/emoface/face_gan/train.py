"""Minimax training loop for the face-editing GAN.

Each train_step runs critic_steps critic updates followed by one generator
update on the same batch. The critic minimizes the Wasserstein gap with
gradient penalty plus the AU regression error on real images; the generator
minimizes its adversarial term, the AU regression error of its edits, the
attention regularizer, and the cycle reconstruction error. Desired AU targets
are drawn by permuting the batch's annotated vectors, which keeps them on the
data manifold.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import torch

from emoface.au_bridge import AU_NAMES
from emoface.errors import CheckpointError, NumericalError
from emoface.face_gan.config import GanConfig
from emoface.face_gan.losses import (
    LossTerms,
    adversarial_loss,
    attention_loss,
    edit_and_reconstruct,
    full_objective,
)
from emoface.face_gan.networks import Critic, Generator

WEIGHTS_FILE = "weights.pt"
MANIFEST_FILE = "manifest.json"


def build_networks(config: GanConfig, seed: int) -> tuple[Generator, Critic]:
    torch.manual_seed(seed)
    generator = Generator(
        au_dim=config.au_dim,
        base_channels=config.gen_base_channels,
        res_blocks=config.gen_res_blocks,
    )
    critic = Critic(
        au_dim=config.au_dim,
        base_channels=config.critic_base_channels,
        layers=config.critic_layers,
        max_channels=config.critic_max_channels,
    )
    return generator, critic


class FaceGanTrainer:
    def __init__(self, config: GanConfig, seed: int = 0):
        self.config = config
        self.hp = config.hyper
        self.seed = seed
        self.generator, self.critic = build_networks(config, seed)
        self.rng = torch.Generator().manual_seed(seed + 1)
        self.opt_generator = torch.optim.Adam(
            self.generator.parameters(), lr=self.hp.lr_generator, betas=self.hp.adam_betas
        )
        self.opt_critic = torch.optim.Adam(
            self.critic.parameters(), lr=self.hp.lr_critic, betas=self.hp.adam_betas
        )
        self.step_count = 0

    def _abort_if_not_finite(self, value: torch.Tensor, name: str, parts: dict) -> None:
        if not bool(torch.isfinite(value)):
            detail = ", ".join(f"{k}={v:.4g}" for k, v in parts.items())
            raise NumericalError(
                f"non-finite {name} at train step {self.step_count}: {detail}"
            )

    def train_step(self, images: torch.Tensor, z_orig: torch.Tensor) -> dict[str, float]:
        """One critic phase plus one generator update; returns all metrics."""
        hp = self.hp
        batch = images.shape[0]
        perm = torch.randperm(batch, generator=self.rng)
        z_desired = z_orig[perm]

        # The generator is frozen during the critic phase, so its edit of this
        # batch is computed once and reused for every critic update.
        with torch.no_grad():
            _, fake_fixed = self.generator.edit(images, z_desired)

        adv = None
        condition_real = None
        for _ in range(hp.critic_steps):
            adv = adversarial_loss(
                self.critic, images, fake_fixed, hp.lambda_gp, rng=self.rng
            )
            _, au_real = self.critic(images)
            condition_real = ((au_real - z_orig) ** 2).sum(dim=1).mean()
            critic_total = adv.critic_loss + hp.lambda_condition * condition_real
            self._abort_if_not_finite(critic_total, "critic loss", {
                "wasserstein_gap": float(adv.wasserstein_gap.detach()),
                "gradient_penalty": float(adv.penalty.detach()),
                "condition_real": float(condition_real.detach()),
            })
            self.opt_critic.zero_grad(set_to_none=True)
            critic_total.backward()
            self.opt_critic.step()

        masks_fake, fake, masks_cycle, reconstructed = edit_and_reconstruct(
            self.generator, images, z_desired, z_orig
        )
        patch_fake, au_fake = self.critic(fake)
        adv_generator = -patch_fake.mean(dim=(1, 2, 3)).mean()
        condition_fake = ((au_fake - z_desired) ** 2).sum(dim=1).mean()
        attention = attention_loss(
            masks_fake.attention, masks_cycle.attention,
            hp.lambda_tv, hp.attention_norm_sign,
        )
        cycle = (reconstructed - images).abs().mean()
        generator_total = (
            adv_generator
            + hp.lambda_condition * condition_fake
            + hp.lambda_attention * attention
            + hp.lambda_cycle * cycle
        )
        self._abort_if_not_finite(generator_total, "generator loss", {
            "adversarial": float(adv_generator.detach()),
            "condition_fake": float(condition_fake.detach()),
            "attention": float(attention.detach()),
            "cycle": float(cycle.detach()),
        })
        self.opt_generator.zero_grad(set_to_none=True)
        generator_total.backward()
        self.opt_generator.step()

        objective = full_objective(
            LossTerms(
                adversarial=adv.critic_loss.detach(),
                attention=attention.detach(),
                condition=(condition_fake + condition_real).detach(),
                cycle=cycle.detach(),
            ),
            hp,
        )
        self.step_count += 1
        return {
            "step": self.step_count,
            "critic_loss": float((adv.critic_loss + hp.lambda_condition * condition_real).detach()),
            "wasserstein_gap": float(adv.wasserstein_gap.detach()),
            "gradient_penalty": float(adv.penalty.detach()),
            "condition_real": float(condition_real.detach()),
            "generator_loss": float(generator_total.detach()),
            "generator_adversarial": float(adv_generator.detach()),
            "condition_fake": float(condition_fake.detach()),
            "attention_loss": float(attention.detach()),
            "cycle_loss": float(cycle.detach()),
            "full_objective": float(objective),
        }

    def _batches(self, count: int) -> list[torch.Tensor]:
        order = torch.randperm(count, generator=self.rng)
        size = min(self.hp.batch_size, count)
        return [order[i:i + size] for i in range(0, count, size)]

    def fit_steps(self, images: torch.Tensor, z_orig: torch.Tensor, steps: int,
                  log_every: int = 0) -> list[dict[str, float]]:
        """Run a fixed number of train steps, cycling over shuffled batches."""
        history = []
        pending: list[torch.Tensor] = []
        for _ in range(steps):
            if not pending:
                pending = self._batches(images.shape[0])
            idx = pending.pop(0)
            metrics = self.train_step(images[idx], z_orig[idx])
            history.append(metrics)
            if log_every and metrics["step"] % log_every == 0:
                print(
                    f"step {metrics['step']}: critic={metrics['critic_loss']:.4f} "
                    f"generator={metrics['generator_loss']:.4f} "
                    f"cycle={metrics['cycle_loss']:.4f}"
                )
        return history

    def fit_epochs(self, images: torch.Tensor, z_orig: torch.Tensor, epochs: int,
                   log_every: int = 0) -> list[dict[str, float]]:
        history = []
        for _ in range(epochs):
            for idx in self._batches(images.shape[0]):
                history.append(self.train_step(images[idx], z_orig[idx]))
                if log_every and history[-1]["step"] % log_every == 0:
                    print(f"step {history[-1]['step']}: "
                          f"critic={history[-1]['critic_loss']:.4f} "
                          f"generator={history[-1]['generator_loss']:.4f}")
        return history

    def save(self, out_dir: str | Path) -> None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        torch.save(
            {"generator": self.generator.state_dict(), "critic": self.critic.state_dict()},
            out_dir / WEIGHTS_FILE,
        )
        manifest = {
            "kind": "face_gan",
            "config": self.config.to_dict(),
            "au_names": list(AU_NAMES),
            "image_size": self.config.image_size,
            "seed": self.seed,
            "step": self.step_count,
        }
        (out_dir / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def checkpoint_hash(checkpoint_dir: str | Path) -> str:
    return hashlib.sha256((Path(checkpoint_dir) / WEIGHTS_FILE).read_bytes()).hexdigest()


def load_face_checkpoint(checkpoint_dir: str | Path) -> tuple[Generator, Critic, GanConfig, dict]:
    checkpoint_dir = Path(checkpoint_dir)
    manifest_path = checkpoint_dir / MANIFEST_FILE
    weights_path = checkpoint_dir / WEIGHTS_FILE
    if not manifest_path.exists() or not weights_path.exists():
        raise CheckpointError(f"no face checkpoint under {checkpoint_dir}")
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("kind") != "face_gan":
        raise CheckpointError(f"{checkpoint_dir} is not a face checkpoint")
    if manifest.get("au_names") != list(AU_NAMES):
        raise CheckpointError("checkpoint AU ordering does not match this build")
    config = GanConfig.from_dict(manifest["config"])
    generator, critic = build_networks(config, manifest.get("seed", 0))
    state = torch.load(weights_path, map_location="cpu", weights_only=True)
    generator.load_state_dict(state["generator"])
    critic.load_state_dict(state["critic"])
    generator.eval()
    critic.eval()
    return generator, critic, config, manifest
