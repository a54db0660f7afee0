"""Generator and critic networks for attention-masked face editing.

The generator consumes an RGB image in [-1, 1] plus a target AU vector
broadcast over the spatial grid, and emits two masks through parallel last
layers on a shared trunk: a single-channel attention mask A in [0, 1]
selecting which pixels to preserve, and a three-channel color mask C in
[-1, 1] supplying repainted content. The edited image is the convex
composition (1 - A) * C + A * I, so its pixels always lie between C and I.

The critic shares one strided conv trunk between a patch-level realism head
and an AU regression head.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import torch
from torch import nn


def compose_edit(attention, color, image):
    """Blend repainted content with the input: (1 - A) * C + A * I.

    Elementwise on torch tensors or numpy arrays. When attention lacks the
    trailing channel axis of a channel-last image it is expanded; for
    channel-first tensors pass attention with its singleton channel dim.
    """
    if attention.ndim == image.ndim - 1:
        attention = attention[..., None]
    return (1 - attention) * color + attention * image


@dataclass
class MaskPair:
    attention: object  # (..., 1 channel) in [0, 1]
    color: object      # (..., 3 channels) in [-1, 1]


class CriticOutput(NamedTuple):
    patch_scores: torch.Tensor  # (B, 1, h', w'), unbounded
    au_estimate: torch.Tensor   # (B, au_dim), unbounded


class ResidualBlock(nn.Module):
    def __init__(self, channels: int):
        super().__init__()
        self.block = nn.Sequential(
            nn.Conv2d(channels, channels, 3, 1, 1),
            nn.InstanceNorm2d(channels, affine=True),
            nn.ReLU(inplace=True),
            nn.Conv2d(channels, channels, 3, 1, 1),
            nn.InstanceNorm2d(channels, affine=True),
        )

    def forward(self, x):
        return x + self.block(x)


class Generator(nn.Module):
    """Shared trunk with parallel attention and color output layers."""

    def __init__(self, au_dim: int = 17, base_channels: int = 64, res_blocks: int = 6):
        super().__init__()
        self.au_dim = au_dim
        b = base_channels
        trunk = [
            nn.Conv2d(3 + au_dim, b, 7, 1, 3),
            nn.InstanceNorm2d(b, affine=True),
            nn.ReLU(inplace=True),
            nn.Conv2d(b, b * 2, 4, 2, 1),
            nn.InstanceNorm2d(b * 2, affine=True),
            nn.ReLU(inplace=True),
            nn.Conv2d(b * 2, b * 4, 4, 2, 1),
            nn.InstanceNorm2d(b * 4, affine=True),
            nn.ReLU(inplace=True),
        ]
        trunk += [ResidualBlock(b * 4) for _ in range(res_blocks)]
        trunk += [
            nn.ConvTranspose2d(b * 4, b * 2, 4, 2, 1),
            nn.InstanceNorm2d(b * 2, affine=True),
            nn.ReLU(inplace=True),
            nn.ConvTranspose2d(b * 2, b, 4, 2, 1),
            nn.InstanceNorm2d(b, affine=True),
            nn.ReLU(inplace=True),
        ]
        self.trunk = nn.Sequential(*trunk)
        self.attention_head = nn.Conv2d(b, 1, 7, 1, 3)
        self.color_head = nn.Conv2d(b, 3, 7, 1, 3)

    def _check_inputs(self, images: torch.Tensor, au: torch.Tensor) -> None:
        if images.ndim != 4 or images.shape[1] != 3:
            raise ValueError(f"expected images of shape (B, 3, H, W), got {tuple(images.shape)}")
        _, _, h, w = images.shape
        if h != w or h % 4 != 0 or h < 8:
            raise ValueError(
                f"images must be square, at least 8 px, with dims divisible by 4; got {h}x{w}"
            )
        if au.ndim != 2 or au.shape != (images.shape[0], self.au_dim):
            raise ValueError(
                f"expected au of shape ({images.shape[0]}, {self.au_dim}), got {tuple(au.shape)}"
            )

    def forward(self, images: torch.Tensor, au: torch.Tensor) -> MaskPair:
        self._check_inputs(images, au)
        b, _, h, w = images.shape
        au_map = au.view(b, self.au_dim, 1, 1).expand(b, self.au_dim, h, w)
        features = self.trunk(torch.cat([images, au_map], dim=1))
        return MaskPair(
            attention=torch.sigmoid(self.attention_head(features)),
            color=torch.tanh(self.color_head(features)),
        )

    def edit(self, images: torch.Tensor, au: torch.Tensor) -> tuple[MaskPair, torch.Tensor]:
        """Full editing pass: masks plus the composed output image."""
        masks = self(images, au)
        edited = compose_edit(masks.attention, masks.color, images)
        return masks, edited


class Critic(nn.Module):
    """Strided conv trunk feeding a patch realism map and an AU regressor.

    No normalization layers: the gradient penalty assumes per-sample critic
    outputs.
    """

    def __init__(self, au_dim: int = 17, base_channels: int = 64, layers: int = 6,
                 max_channels: int = 512):
        super().__init__()
        self.au_dim = au_dim
        blocks = []
        in_ch = 3
        out_ch = base_channels
        for _ in range(layers):
            blocks += [nn.Conv2d(in_ch, out_ch, 4, 2, 1), nn.LeakyReLU(0.01, inplace=True)]
            in_ch = out_ch
            out_ch = min(out_ch * 2, max_channels)
        self.trunk = nn.Sequential(*blocks)
        self.patch_head = nn.Conv2d(in_ch, 1, 3, 1, 1)
        self.au_head = nn.Linear(in_ch, au_dim)

    def forward(self, images: torch.Tensor) -> CriticOutput:
        features = self.trunk(images)
        patch = self.patch_head(features)
        pooled = features.mean(dim=(2, 3))
        return CriticOutput(patch_scores=patch, au_estimate=self.au_head(pooled))


def generator_forward(generator: Generator, image_hwc, au) -> tuple[MaskPair, object]:
    """Edit one channel-last numpy image; returns numpy masks and output.

    Convenience wrapper for inference paths; training code works on batched
    tensors via Generator.edit.
    """
    import numpy as np

    image_hwc = np.asarray(image_hwc, dtype=np.float32)
    if image_hwc.ndim != 3 or image_hwc.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) image, got shape {image_hwc.shape}")
    au = np.asarray(au, dtype=np.float32).reshape(-1)
    device = next(generator.parameters()).device
    images = torch.from_numpy(image_hwc).permute(2, 0, 1).unsqueeze(0).to(device)
    au_t = torch.from_numpy(au).unsqueeze(0).to(device)
    with torch.no_grad():
        masks, edited = generator.edit(images, au_t)
    return (
        MaskPair(
            attention=masks.attention[0, 0].cpu().numpy(),
            color=masks.color[0].permute(1, 2, 0).cpu().numpy(),
        ),
        edited[0].permute(1, 2, 0).cpu().numpy(),
    )
