"""Tabular mapping from emotion labels to facial Action Unit targets.

The conditioning attribute for the face generator is a 17-dimensional vector
of Action Unit activations in [0, 1], ordered like the annotation tool's
intensity columns. Each emotion gets one row; the shipped default table uses
prototypical FACS combinations at full activation and can be replaced by an
edited JSON file.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from emoface.labels import EmotionLabel

AU_NAMES: tuple[str, ...] = (
    "AU01", "AU02", "AU04", "AU05", "AU06", "AU07", "AU09", "AU10", "AU12",
    "AU14", "AU15", "AU17", "AU20", "AU23", "AU25", "AU26", "AU45",
)
AU_DIM = len(AU_NAMES)
_AU_INDEX = {name: i for i, name in enumerate(AU_NAMES)}

# Prototypical activations per emotion. Neutral and non-neutral are all-zero:
# non-neutral marks annotator disagreement, so no specific muscles fire.
DEFAULT_ACTIVATIONS: dict[str, dict[str, float]] = {
    "anger": {"AU04": 1.0, "AU05": 1.0, "AU07": 1.0, "AU23": 1.0},
    "disgust": {"AU09": 1.0, "AU15": 1.0},
    "fear": {
        "AU01": 1.0, "AU02": 1.0, "AU04": 1.0, "AU05": 1.0,
        "AU07": 1.0, "AU20": 1.0, "AU26": 1.0,
    },
    "happiness": {"AU06": 1.0, "AU12": 1.0},
    "sadness": {"AU01": 1.0, "AU04": 1.0, "AU15": 1.0},
    "surprise": {"AU01": 1.0, "AU02": 1.0, "AU05": 1.0, "AU26": 1.0},
    "neutral": {},
    "non_neutral": {},
}


def au_vector_from_dict(activations: dict[str, float]) -> np.ndarray:
    """Dense 17-dim vector from a sparse {AU name: activation} mapping.

    Omitted AUs default to 0. Unknown AU names raise ValueError.
    """
    vec = np.zeros(AU_DIM, dtype=np.float64)
    for name, value in activations.items():
        if name not in _AU_INDEX:
            raise ValueError(f"unknown Action Unit name {name!r}")
        vec[_AU_INDEX[name]] = float(value)
    return vec


def au_vector_to_dict(vec: np.ndarray, *, include_zeros: bool = False) -> dict[str, float]:
    vec = np.asarray(vec, dtype=np.float64)
    if vec.shape != (AU_DIM,):
        raise ValueError(f"expected shape ({AU_DIM},), got {vec.shape}")
    return {
        name: float(v)
        for name, v in zip(AU_NAMES, vec)
        if include_zeros or v != 0.0
    }


def validate_au_values(vec: np.ndarray) -> None:
    """Raise ValueError unless vec is a finite 17-dim vector in [0, 1]."""
    vec = np.asarray(vec)
    if vec.shape != (AU_DIM,):
        raise ValueError(f"AU vector must have shape ({AU_DIM},), got {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("AU vector contains non-finite values")
    if vec.min() < 0.0 or vec.max() > 1.0:
        bad = int(np.argmax((vec < 0.0) | (vec > 1.0)))
        raise ValueError(
            f"AU activation out of range [0, 1]: {AU_NAMES[bad]}={vec[bad]:g}"
        )


class AuMappingTable:
    """One AU target vector per emotion label, immutable after construction."""

    def __init__(self, rows: dict[EmotionLabel, np.ndarray]):
        self._rows = {
            label: np.array(vec, dtype=np.float64, copy=True)
            for label, vec in rows.items()
        }
        for vec in self._rows.values():
            vec.setflags(write=False)

    @classmethod
    def default(cls) -> "AuMappingTable":
        return cls({
            EmotionLabel.from_name(name): au_vector_from_dict(act)
            for name, act in DEFAULT_ACTIVATIONS.items()
        })

    @classmethod
    def from_json(cls, path: str | Path) -> "AuMappingTable":
        with open(path, encoding="utf-8") as f:
            raw = json.load(f)
        violations = validate_table(raw)
        if violations:
            raise ValueError(
                f"invalid AU mapping table {path}: " + "; ".join(violations)
            )
        return cls({
            EmotionLabel.from_name(name): au_vector_from_dict(act)
            for name, act in raw.items()
        })

    def to_json(self, path: str | Path) -> None:
        raw = {
            label.label: au_vector_to_dict(vec)
            for label, vec in sorted(self._rows.items())
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(raw, f, indent=2, sort_keys=True)
            f.write("\n")

    def lookup(self, emotion: EmotionLabel) -> np.ndarray:
        """Return a fresh copy so callers cannot corrupt the table."""
        return self._rows[emotion].copy()

    def rows(self) -> dict[EmotionLabel, np.ndarray]:
        return {label: vec.copy() for label, vec in self._rows.items()}


def map_emotion_to_au(emotion: EmotionLabel, table: AuMappingTable) -> np.ndarray:
    """Look up the AU target vector for an emotion. Total over all 8 labels."""
    return table.lookup(emotion)


def validate_table(raw: dict) -> list[str]:
    """Check a raw {emotion: {AU: value}} table; return violations, not raise.

    Reported problems: missing or unknown emotion rows, unknown AU names,
    activations outside [0, 1], and a non-zero neutral row.
    """
    violations: list[str] = []
    known = {label.label for label in EmotionLabel}
    for name in sorted(known - set(raw)):
        violations.append(f"missing row for emotion {name!r}")
    for name in sorted(set(raw) - known):
        violations.append(f"unknown emotion row {name!r}")
    for name in sorted(set(raw) & known):
        activations = raw[name]
        if not isinstance(activations, dict):
            violations.append(f"row {name!r} is not an object of AU activations")
            continue
        for au, value in sorted(activations.items()):
            if au not in _AU_INDEX:
                violations.append(f"row {name!r}: unknown Action Unit {au!r}")
                continue
            if not isinstance(value, (int, float)) or not np.isfinite(value):
                violations.append(f"row {name!r}: {au} has non-numeric value {value!r}")
            elif value < 0.0 or value > 1.0:
                violations.append(
                    f"row {name!r}: {au}={value:g} outside [0, 1]"
                )
    if "neutral" in raw and isinstance(raw["neutral"], dict):
        nonzero = [au for au, v in raw["neutral"].items()
                   if isinstance(v, (int, float)) and v != 0.0]
        if nonzero:
            violations.append(
                "neutral row must be all-zero, has " + ", ".join(sorted(nonzero))
            )
    return violations
