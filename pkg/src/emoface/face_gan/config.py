"""Face-GAN architecture and training hyperparameters."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from emoface.au_bridge import AU_DIM


@dataclass
class GanHyperParams:
    """Loss weights and optimization settings.

    Defaults follow the usual gradient-penalty critic convention with loss
    weights chosen for desk-scale runs; all of them live in config files and
    none is privileged. attention_norm_sign flips the mask-norm penalty to
    its alternative (negative) form.
    """

    lambda_gp: float = 10.0
    lambda_attention: float = 0.1
    lambda_tv: float = 1e-5
    lambda_condition: float = 160.0
    lambda_cycle: float = 10.0
    critic_steps: int = 5
    lr_generator: float = 1e-4
    lr_critic: float = 1e-4
    adam_betas: tuple[float, float] = (0.5, 0.999)
    batch_size: int = 16
    attention_norm_sign: float = 1.0

    def __post_init__(self):
        for name in ("lambda_gp", "lambda_attention", "lambda_tv",
                     "lambda_condition", "lambda_cycle"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.critic_steps < 1:
            raise ValueError("critic_steps must be >= 1")
        if self.lr_generator < 0 or self.lr_critic < 0:
            raise ValueError("learning rates must be non-negative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        self.adam_betas = tuple(self.adam_betas)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["adam_betas"] = list(self.adam_betas)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GanHyperParams":
        return cls(**d)


@dataclass
class GanConfig:
    """Network shapes. Images are square RGB with spatial dims divisible by 4
    (the generator has two 2x down/up-sampling stages)."""

    image_size: int = 64
    au_dim: int = AU_DIM
    gen_base_channels: int = 64
    gen_res_blocks: int = 6
    critic_base_channels: int = 64
    critic_layers: int = 6
    critic_max_channels: int = 512
    hyper: GanHyperParams = field(default_factory=GanHyperParams)

    def __post_init__(self):
        if self.image_size < 8 or self.image_size % 4 != 0:
            raise ValueError("image_size must be a multiple of 4, at least 8")
        if self.image_size > 128:
            raise ValueError("image_size above 128 is unsupported")
        if 2 ** self.critic_layers > self.image_size:
            raise ValueError(
                f"critic_layers={self.critic_layers} too deep for image_size={self.image_size}"
            )
        if isinstance(self.hyper, dict):
            self.hyper = GanHyperParams.from_dict(self.hyper)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["hyper"] = self.hyper.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GanConfig":
        return cls(**d)
