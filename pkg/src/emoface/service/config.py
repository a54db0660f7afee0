"""Service configuration: artifact paths plus RNG seeding."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass
from pathlib import Path

SEED_ENV_VAR = "EMOFACE_SEED"


def resolve_seed(config_seed: int) -> int:
    """The EMOFACE_SEED environment variable overrides the configured seed."""
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else config_seed


@dataclass
class ServiceConfig:
    nlg_checkpoint: str
    face_checkpoint: str
    face_index: str
    face_au_csv: str
    face_image_root: str
    au_table: str | None = None  # None -> built-in default table
    seed: int = 0
    persist_dir: str | None = None
    # When true the agent's last synthesized face becomes the next edit input;
    # default re-edits the neutral base every turn to avoid drift.
    reedit_last_face: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ServiceConfig":
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | Path) -> "ServiceConfig":
        raw = json.loads(Path(path).read_text())
        config = cls.from_dict(raw)
        # Relative artifact paths resolve against the config file's directory.
        base = Path(path).resolve().parent
        for field_name in ("nlg_checkpoint", "face_checkpoint", "face_index",
                           "face_au_csv", "face_image_root", "au_table", "persist_dir"):
            value = getattr(config, field_name)
            if value is not None and not Path(value).is_absolute():
                setattr(config, field_name, str(base / value))
        return config

    def to_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
