"""Loading and serializing emotion-labeled dialogue corpora.

Corpus format: one JSON object per line,
{"dialogue_id": str, "turns": [{"speaker": str, "text": str, "emotion": str}]}.

Turns come out of the loader with empty token ids; encode_dialogues attaches
ids once a vocabulary exists.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from emoface.data_prep.tokenizer import tokenize
from emoface.data_prep.vocab import Vocabulary
from emoface.errors import DialogueParseError, UnknownLabelError
from emoface.labels import EmotionLabel


@dataclass(frozen=True)
class DialogueTurn:
    speaker_id: str
    text: str
    tokens: tuple[int, ...]
    emotion: EmotionLabel


Dialogue = tuple[DialogueTurn, ...]


def load_dialogues(path: str | Path) -> list[Dialogue]:
    """Load a JSONL dialogue corpus, preserving file order.

    Raises DialogueParseError (naming the line) for malformed records and
    UnknownLabelError for emotion strings outside the 8-label set.
    """
    dialogues: list[Dialogue] = []
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DialogueParseError(f"line {line_no}: invalid JSON: {exc}") from None
            try:
                raw_turns = record["turns"]
            except (KeyError, TypeError):
                raise DialogueParseError(f"line {line_no}: missing 'turns' field") from None
            turns = []
            for turn_no, raw in enumerate(raw_turns):
                try:
                    speaker = raw["speaker"]
                    text = raw["text"]
                    emotion_name = raw["emotion"]
                except (KeyError, TypeError):
                    raise DialogueParseError(
                        f"line {line_no}: turn {turn_no} missing speaker/text/emotion"
                    ) from None
                try:
                    emotion = EmotionLabel.from_name(emotion_name)
                except UnknownLabelError as exc:
                    raise UnknownLabelError(f"line {line_no}: {exc}") from None
                if not tokenize(text):
                    raise DialogueParseError(
                        f"line {line_no}: turn {turn_no} has no tokens after tokenization"
                    )
                turns.append(DialogueTurn(
                    speaker_id=str(speaker), text=str(text), tokens=(), emotion=emotion,
                ))
            dialogues.append(tuple(turns))
    return dialogues


def save_dialogues(dialogues, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for i, dialogue in enumerate(dialogues):
            record = {
                "dialogue_id": f"d{i:04d}",
                "turns": [
                    {"speaker": t.speaker_id, "text": t.text, "emotion": t.emotion.label}
                    for t in dialogue
                ],
            }
            f.write(json.dumps(record, sort_keys=True) + "\n")


def encode_dialogues(dialogues, vocab: Vocabulary) -> list[Dialogue]:
    """Attach token ids to every turn; unknown words map to the unk id."""
    encoded = []
    for dialogue in dialogues:
        encoded.append(tuple(
            dataclasses.replace(turn, tokens=tuple(vocab.encode(tokenize(turn.text))))
            for turn in dialogue
        ))
    return encoded
