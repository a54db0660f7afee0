"""Emotion and facial-expression label sets and the mapping between them.

Dialogue corpora label utterances with 8 emotions (six basic emotions plus
neutral and non-neutral, where non-neutral marks annotator disagreement).
Face corpora label posed photographs with 8 prototypical expressions. The two
vocabularies are aligned by name, with the non-neutral dialogue label falling
back to a neutral face because it carries no specific emotion content.
"""

from __future__ import annotations

from enum import IntEnum

from emoface.errors import UnknownLabelError


class EmotionLabel(IntEnum):
    """Dialogue-side emotion labels with a fixed 0-7 integer encoding."""

    ANGER = 0
    DISGUST = 1
    FEAR = 2
    HAPPINESS = 3
    SADNESS = 4
    SURPRISE = 5
    NEUTRAL = 6
    NON_NEUTRAL = 7

    @classmethod
    def from_name(cls, name: str) -> "EmotionLabel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            known = ", ".join(m.name.lower() for m in cls)
            raise UnknownLabelError(
                f"unknown emotion label {name!r}; expected one of: {known}"
            ) from None

    @property
    def label(self) -> str:
        return self.name.lower()


class Expression(IntEnum):
    """Face-side posed expression labels."""

    SAD = 0
    NEUTRAL = 1
    ANGRY = 2
    CONTEMPTUOUS = 3
    DISGUSTED = 4
    SURPRISED = 5
    FEARFUL = 6
    HAPPY = 7

    @classmethod
    def from_name(cls, name: str) -> "Expression":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            known = ", ".join(m.name.lower() for m in cls)
            raise UnknownLabelError(
                f"unknown expression label {name!r}; expected one of: {known}"
            ) from None

    @property
    def label(self) -> str:
        return self.name.lower()


_NAME_MATCHED = {
    EmotionLabel.ANGER: Expression.ANGRY,
    EmotionLabel.DISGUST: Expression.DISGUSTED,
    EmotionLabel.FEAR: Expression.FEARFUL,
    EmotionLabel.HAPPINESS: Expression.HAPPY,
    EmotionLabel.SADNESS: Expression.SAD,
    EmotionLabel.SURPRISE: Expression.SURPRISED,
    EmotionLabel.NEUTRAL: Expression.NEUTRAL,
}


def align_labels(
    emotion: EmotionLabel,
    non_neutral: Expression = Expression.NEUTRAL,
) -> Expression:
    """Map a dialogue emotion to the face expression used to render it.

    Seven labels map by name. NON_NEUTRAL means the annotators split between
    several emotions, so by default it renders as a neutral face rather than
    asserting an expression the label does not contain; pass ``non_neutral``
    to choose a different fallback. Total over all 8 inputs, never raises.
    """
    if emotion is EmotionLabel.NON_NEUTRAL:
        return non_neutral
    return _NAME_MATCHED[emotion]
