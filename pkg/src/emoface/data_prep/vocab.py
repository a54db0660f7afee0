"""Token vocabulary with reserved control ids and frequency-based pruning."""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

from emoface.data_prep.tokenizer import tokenize

RESERVED_TOKENS = ("<pad>", "<bos>", "<eos>", "<unk>")
PAD_ID, BOS_ID, EOS_ID, UNK_ID = 0, 1, 2, 3


class Vocabulary:
    """Bijective token<->id map over non-reserved tokens; ids 0-3 reserved."""

    def __init__(self, tokens: Sequence[str], min_freq: int = 1):
        if len(set(tokens)) != len(tokens):
            raise ValueError("duplicate tokens in vocabulary")
        if any(t in RESERVED_TOKENS for t in tokens):
            raise ValueError("reserved token listed as a corpus token")
        self.min_freq = int(min_freq)
        self._id_to_token: list[str] = list(RESERVED_TOKENS) + list(tokens)
        self._token_to_id = {t: i for i, t in enumerate(self._id_to_token)}

    def __len__(self) -> int:
        return len(self._id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def token_id(self, token: str) -> int:
        """Id of a token; unknown tokens map to the unk id."""
        return self._token_to_id.get(token, UNK_ID)

    def token(self, token_id: int) -> str:
        return self._id_to_token[token_id]

    def encode(self, tokens: Iterable[str]) -> list[int]:
        return [self.token_id(t) for t in tokens]

    def decode(self, ids: Iterable[int], *, skip_reserved: bool = True) -> list[str]:
        out = []
        for i in ids:
            if skip_reserved and i < len(RESERVED_TOKENS):
                continue
            out.append(self._id_to_token[i])
        return out

    @property
    def tokens(self) -> list[str]:
        """Non-reserved tokens in id order."""
        return self._id_to_token[len(RESERVED_TOKENS):]

    def to_json_bytes(self) -> bytes:
        payload = {"min_freq": self.min_freq, "tokens": self.tokens}
        return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("utf-8")

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_json_bytes())

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(payload["tokens"], min_freq=payload["min_freq"])

    def content_hash(self) -> str:
        return hashlib.sha256(self.to_json_bytes()).hexdigest()


def build_vocab(dialogues, min_freq: int = 2) -> Vocabulary:
    """Build the vocabulary from a dialogue corpus.

    Tokens with corpus frequency below min_freq are dropped. Ordering is
    deterministic: frequency descending, ties broken lexicographically.
    """
    if min_freq < 1:
        raise ValueError(f"min_freq must be >= 1, got {min_freq}")
    counts: Counter[str] = Counter()
    for dialogue in dialogues:
        for turn in dialogue:
            counts.update(tokenize(turn.text))
    if not counts:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    kept = [t for t, c in counts.items() if c >= min_freq]
    kept.sort(key=lambda t: (-counts[t], t))
    return Vocabulary(kept, min_freq=min_freq)
