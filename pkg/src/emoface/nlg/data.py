"""Turning (context, target) examples into padded id batches."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import torch

from emoface.data_prep.dialogues import DialogueTurn
from emoface.data_prep.splits import Example
from emoface.data_prep.vocab import EOS_ID, PAD_ID
from emoface.nlg.config import NlgConfig


def build_context_ids(context: Sequence[DialogueTurn], max_turns: int, max_len: int) -> list[int]:
    """Concatenate the last max_turns turns, eos-separated, keeping the tail."""
    ids: list[int] = []
    for i, turn in enumerate(context[-max_turns:]):
        if i:
            ids.append(EOS_ID)
        ids.extend(turn.tokens)
    return ids[-max_len:]


def build_target_ids(target: DialogueTurn, max_decode_len: int) -> list[int]:
    """Response ids truncated to max_decode_len with the eos kept."""
    return list(target.tokens[:max_decode_len - 1]) + [EOS_ID]


@dataclass
class NlgBatch:
    context_ids: torch.Tensor  # (B, Tc) long, pad-padded
    target_ids: torch.Tensor   # (B, Tt) long, pad-padded, each row ends in eos
    emotions: torch.Tensor     # (B,) long


def _pad_rows(rows: list[list[int]]) -> torch.Tensor:
    width = max(len(r) for r in rows)
    out = torch.full((len(rows), width), PAD_ID, dtype=torch.long)
    for i, row in enumerate(rows):
        out[i, :len(row)] = torch.tensor(row, dtype=torch.long)
    return out


class NlgDataset:
    """Precomputed id sequences for a list of training examples."""

    def __init__(self, examples: Sequence[Example], config: NlgConfig):
        if not examples:
            raise ValueError("no training examples")
        self.items = [
            (
                build_context_ids(ex.context, config.max_context_turns, config.max_context_len),
                build_target_ids(ex.target, config.max_decode_len),
                int(ex.target.emotion),
            )
            for ex in examples
        ]

    def __len__(self) -> int:
        return len(self.items)

    def batch_for(self, indices: Sequence[int]) -> NlgBatch:
        rows = [self.items[i] for i in indices]
        return NlgBatch(
            context_ids=_pad_rows([r[0] for r in rows]),
            target_ids=_pad_rows([r[1] for r in rows]),
            emotions=torch.tensor([r[2] for r in rows], dtype=torch.long),
        )

    def batches(
        self,
        batch_size: int,
        rng: torch.Generator | None = None,
        shuffle: bool = True,
    ) -> Iterator[NlgBatch]:
        n = len(self.items)
        order = torch.randperm(n, generator=rng) if shuffle else torch.arange(n)
        for start in range(0, n, batch_size):
            yield self.batch_for(order[start:start + batch_size].tolist())
