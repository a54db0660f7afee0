"""Deterministic word tokenizer: lowercase, punctuation detached."""

from __future__ import annotations

import re

# A token is either a run of word characters or one punctuation character.
_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def detokenize(tokens: list[str]) -> str:
    return " ".join(tokens)


def normalize_text(text: str) -> str:
    """Canonical text form: lowercased with punctuation space-separated.

    tokenize(normalize_text(t)) == tokenize(t) for every input.
    """
    return detokenize(tokenize(text))
