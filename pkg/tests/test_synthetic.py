"""Shipped stand-in corpora: structure and annotation-by-construction checks."""

import numpy as np

from emoface.au_bridge import AU_NAMES
from emoface.data_prep import build_vocab, load_dialogues, load_face_corpus
from emoface.labels import EmotionLabel, Expression
from emoface.synthetic import (
    draw_procedural_face,
    make_overfit_dialogues,
    make_synthetic_corpora,
    procedural_face_arrays,
)

AU = {name: i for i, name in enumerate(AU_NAMES)}


def test_overfit_corpus_shape():
    dialogues = make_overfit_dialogues()
    assert len(dialogues) == 10
    assert all(len(d) == 2 for d in dialogues)
    emotions = {d[1].emotion for d in dialogues}
    assert emotions == set(EmotionLabel)  # all 8 labels covered
    # responses are distinct, so greedy memorization is well defined
    responses = [d[1].text for d in dialogues]
    assert len(set(responses)) == len(responses)


def test_face_set_structure():
    images, activations, specs = procedural_face_arrays(32)
    assert len(images) == 16
    assert activations.shape == (16, 17)
    assert activations.min() >= 0.0 and activations.max() <= 1.0
    assert len({s["model_id"] for s in specs}) == 4
    neutral = [s for s in specs if s["expression"] == "neutral"]
    assert len(neutral) == 4
    for s in neutral:
        assert not s["au"].any()


def test_drawing_responds_to_each_control():
    base = draw_procedural_face(32)
    assert base.shape == (32, 32, 3)
    assert base.min() >= -1.0 and base.max() <= 1.0
    for kwargs in ({"smile": 1.0}, {"brow_raise": 1.0}, {"brow_lower": 1.0}):
        variant = draw_procedural_face(32, **kwargs)
        assert np.abs(variant - base).max() > 0.1


def test_drawing_is_deterministic():
    a = draw_procedural_face(32, smile=0.7, brow_raise=0.3)
    b = draw_procedural_face(32, smile=0.7, brow_raise=0.3)
    assert np.array_equal(a, b)


def test_written_corpora_load_through_ingestion(tmp_path):
    make_synthetic_corpora(tmp_path, size=32)
    dialogues = load_dialogues(tmp_path / "dialogues.jsonl")
    assert len(dialogues) == 10
    vocab = build_vocab(dialogues, min_freq=1)
    assert len(vocab) > 20

    records = load_face_corpus(tmp_path / "faces" / "index.csv", tmp_path / "faces" / "au.csv")
    assert len(records) == 16
    _, activations, _ = procedural_face_arrays(32)
    for rec, expected in zip(records, activations):
        # intensity -> activation round trip through the 0-5 CSV scale
        assert np.allclose(rec.au, expected, atol=2e-4)
    smiles = [r for r in records if r.au[AU["AU12"]] > 0]
    assert all(r.expression is Expression.HAPPY for r in smiles)
