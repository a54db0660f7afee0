"""Emotion -> Action Unit mapping table behavior."""

import json

import numpy as np
import pytest

from emoface.au_bridge import (
    AU_DIM,
    AU_NAMES,
    AuMappingTable,
    au_vector_from_dict,
    map_emotion_to_au,
    validate_au_values,
    validate_table,
)
from emoface.labels import EmotionLabel

AU = {name: i for i, name in enumerate(AU_NAMES)}


@pytest.fixture
def table():
    return AuMappingTable.default()


def test_neutral_is_zero_vector(table):
    assert map_emotion_to_au(EmotionLabel.NEUTRAL, table).tolist() == [0.0] * AU_DIM


def test_happiness_prototype(table):
    vec = map_emotion_to_au(EmotionLabel.HAPPINESS, table)
    expected = np.zeros(AU_DIM)
    expected[AU["AU06"]] = 1.0
    expected[AU["AU12"]] = 1.0
    assert np.array_equal(vec, expected)


def test_non_neutral_matches_neutral(table):
    assert np.array_equal(
        map_emotion_to_au(EmotionLabel.NON_NEUTRAL, table),
        map_emotion_to_au(EmotionLabel.NEUTRAL, table),
    )


def test_total_pure_and_in_range(table):
    for emotion in EmotionLabel:
        vec = map_emotion_to_au(emotion, table)
        assert vec.shape == (AU_DIM,)
        assert vec.min() >= 0.0 and vec.max() <= 1.0


def test_lookup_returns_a_defensive_copy(table):
    vec = map_emotion_to_au(EmotionLabel.HAPPINESS, table)
    vec[:] = 9.0
    again = map_emotion_to_au(EmotionLabel.HAPPINESS, table)
    assert again.max() <= 1.0


def test_default_table_validates_clean():
    from emoface.au_bridge import DEFAULT_ACTIVATIONS
    assert validate_table(DEFAULT_ACTIVATIONS) == []


def test_out_of_range_entry_names_row_and_au():
    raw = {e.label: {} for e in EmotionLabel}
    raw["anger"]["AU04"] = 1.2
    violations = validate_table(raw)
    assert len(violations) == 1
    assert "anger" in violations[0] and "AU04" in violations[0]


def test_missing_row_reported():
    raw = {e.label: {} for e in EmotionLabel if e is not EmotionLabel.FEAR}
    violations = validate_table(raw)
    assert any("fear" in v and "missing" in v for v in violations)


def test_nonzero_neutral_reported():
    raw = {e.label: {} for e in EmotionLabel}
    raw["neutral"] = {"AU12": 0.5}
    assert any("neutral" in v for v in validate_table(raw))


def test_validation_idempotent():
    raw = {e.label: {} for e in EmotionLabel}
    raw["disgust"] = {"AU99": 1.0, "AU09": -0.1}
    assert validate_table(raw) == validate_table(raw)


def test_json_round_trip(tmp_path, table):
    table.to_json(tmp_path / "t.json")
    loaded = AuMappingTable.from_json(tmp_path / "t.json")
    for emotion in EmotionLabel:
        assert np.array_equal(loaded.lookup(emotion), table.lookup(emotion))


def test_from_json_rejects_bad_table(tmp_path):
    (tmp_path / "bad.json").write_text(json.dumps({"anger": {"AU04": 2.0}}))
    with pytest.raises(ValueError, match="AU04"):
        AuMappingTable.from_json(tmp_path / "bad.json")


def test_au_vector_helpers():
    vec = au_vector_from_dict({"AU12": 0.5})
    assert vec[AU["AU12"]] == 0.5 and vec.sum() == 0.5
    validate_au_values(vec)
    with pytest.raises(ValueError):
        au_vector_from_dict({"AU00": 1.0})
    with pytest.raises(ValueError):
        validate_au_values(np.full(AU_DIM, 1.5))
