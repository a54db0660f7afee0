"""Deterministic train/valid/test splitting of dialogues and face corpora.

Dialogues are split whole (no dialogue straddles splits) and faces are split
by model identity so the same person never appears in two splits. Each
dialogue contributes one training example per non-initial turn: the full
preceding context paired with that turn as the target.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from emoface.data_prep.dialogues import Dialogue, DialogueTurn
from emoface.data_prep.faces import FaceRecord


@dataclass(frozen=True)
class Example:
    context: tuple[DialogueTurn, ...]
    target: DialogueTurn

    @property
    def emotion(self):
        return self.target.emotion


@dataclass
class Split:
    dialogues: list[Dialogue]
    examples: list[Example]
    faces: list[FaceRecord]


@dataclass
class DatasetSplits:
    train: Split
    valid: Split
    test: Split


def examples_from_dialogues(dialogues: list[Dialogue]) -> list[Example]:
    """One example per non-initial turn: full preceding context as input."""
    out = []
    for dialogue in dialogues:
        for i in range(1, len(dialogue)):
            out.append(Example(context=tuple(dialogue[:i]), target=dialogue[i]))
    return out


def _sizes(n: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    # Valid and test round down; the remainder goes to train.
    n_valid = math.floor(ratios[1] * n)
    n_test = math.floor(ratios[2] * n)
    return n - n_valid - n_test, n_valid, n_test


def make_splits(
    dialogues: list[Dialogue],
    faces: list[FaceRecord],
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> DatasetSplits:
    """Split deterministically given the seed; raise if any split is empty."""
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ValueError(f"ratios must be three positive numbers, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must sum to 1, got sum {sum(ratios)!r}")

    rng = random.Random(seed)

    order = list(range(len(dialogues)))
    rng.shuffle(order)
    n_train, n_valid, n_test = _sizes(len(dialogues), ratios)
    parts = (
        sorted(order[:n_train]),
        sorted(order[n_train:n_train + n_valid]),
        sorted(order[n_train + n_valid:]),
    )
    dialogue_parts = [[dialogues[i] for i in part] for part in parts]

    model_ids = list(dict.fromkeys(r.model_id for r in faces))
    rng.shuffle(model_ids)
    m_train, m_valid, m_test = _sizes(len(model_ids), ratios)
    model_sets = (
        set(model_ids[:m_train]),
        set(model_ids[m_train:m_train + m_valid]),
        set(model_ids[m_train + m_valid:]),
    )
    face_parts = [[r for r in faces if r.model_id in ids] for ids in model_sets]

    splits = DatasetSplits(*(
        Split(dialogues=d, examples=examples_from_dialogues(d), faces=f)
        for d, f in zip(dialogue_parts, face_parts)
    ))
    for name, split in (("train", splits.train), ("valid", splits.valid), ("test", splits.test)):
        if not split.dialogues or not split.faces:
            raise ValueError(f"{name} split is empty; need more dialogues or face models")
    return splits
