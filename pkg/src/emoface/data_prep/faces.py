"""Ingestion of face image indexes joined with Action Unit annotations.

Inputs are an index CSV (image_path, model_id, expression, gaze, camera_angle)
and an AU intensity CSV in the annotation tool's layout: a face_id column that
matches the index's image_path plus 17 AU??_r columns with intensities on a
0-5 scale. Activations are stored rescaled to [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from emoface.au_bridge import AU_NAMES
from emoface.errors import FaceDataError, FaceJoinError
from emoface.labels import Expression

AU_CSV_COLUMNS = tuple(f"{name}_r" for name in AU_NAMES)
INDEX_COLUMNS = ("image_path", "model_id", "expression", "gaze", "camera_angle")

AU_INTENSITY_MAX = 5.0


@dataclass(frozen=True, eq=False)
class FaceRecord:
    image_path: str
    model_id: str
    expression: Expression
    au: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.au.setflags(write=False)


def load_face_corpus(
    index_path: str | Path,
    au_csv_path: str | Path,
    *,
    frontal_only: bool = True,
) -> list[FaceRecord]:
    """Join the face index with AU annotations, preserving index row order.

    By default only frontal-camera, frontal-gaze rows are kept. Intensities
    are divided by 5 and clipped into [0, 1]. A missing AU row raises
    FaceJoinError; NaN intensities raise FaceDataError.
    """
    index = pd.read_csv(index_path, dtype=str)
    missing_cols = [c for c in INDEX_COLUMNS if c not in index.columns]
    if missing_cols:
        raise FaceDataError(f"face index missing columns: {missing_cols}")

    aus = pd.read_csv(au_csv_path)
    aus.columns = [c.strip() for c in aus.columns]
    if "face_id" not in aus.columns:
        raise FaceDataError("AU CSV has no face_id column")
    missing_au_cols = [c for c in AU_CSV_COLUMNS if c not in aus.columns]
    if missing_au_cols:
        raise FaceDataError(f"AU CSV missing intensity columns: {missing_au_cols}")
    if aus["face_id"].duplicated().any():
        dup = aus.loc[aus["face_id"].duplicated(), "face_id"].iloc[0]
        raise FaceJoinError(f"duplicate AU rows for face_id {dup!r}")
    by_face = aus.set_index(aus["face_id"].astype(str))

    if frontal_only:
        keep = (index["camera_angle"].str.strip() == "frontal") & (
            index["gaze"].str.strip() == "frontal"
        )
        index = index[keep]

    records: list[FaceRecord] = []
    for row in index.itertuples(index=False):
        image_path = str(row.image_path)
        if image_path not in by_face.index:
            raise FaceJoinError(f"no AU annotation row for image {image_path!r}")
        raw = by_face.loc[image_path, list(AU_CSV_COLUMNS)].to_numpy(dtype=np.float64)
        if np.isnan(raw).any():
            bad = AU_CSV_COLUMNS[int(np.argmax(np.isnan(raw)))]
            raise FaceDataError(f"NaN intensity in column {bad} for image {image_path!r}")
        activations = np.clip(raw / AU_INTENSITY_MAX, 0.0, 1.0)
        records.append(FaceRecord(
            image_path=image_path,
            model_id=str(row.model_id),
            expression=Expression.from_name(str(row.expression)),
            au=activations,
        ))
    return records


def save_face_table(records: list[FaceRecord], path: str | Path) -> None:
    """Write joined records as a flat CSV with rescaled activations."""
    rows = []
    for r in records:
        row = {
            "image_path": r.image_path,
            "model_id": r.model_id,
            "expression": r.expression.label,
        }
        row.update({name: r.au[i] for i, name in enumerate(AU_NAMES)})
        rows.append(row)
    pd.DataFrame(rows).to_csv(path, index=False)


def load_face_table(path: str | Path) -> list[FaceRecord]:
    """Read back a CSV written by save_face_table."""
    df = pd.read_csv(path)
    records = []
    for row in df.itertuples(index=False):
        au = np.array([getattr(row, name) for name in AU_NAMES], dtype=np.float64)
        records.append(FaceRecord(
            image_path=str(row.image_path),
            model_id=str(row.model_id),
            expression=Expression.from_name(str(row.expression)),
            au=au,
        ))
    return records
