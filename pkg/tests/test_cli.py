"""CLI surface: prep, table validation, training entry points, synthesize."""

import json

import pytest

from emoface.au_bridge import AuMappingTable
from emoface.cli import main
from emoface.data_prep import Vocabulary, load_dialogues
from emoface.face_gan.image_io import load_png


@pytest.fixture(scope="module")
def synthetic_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("synthetic")
    assert main(["make-synthetic", "--out", str(out), "--size", "32"]) == 0
    return out


def test_prep_writes_splits_and_vocab(synthetic_dir, tmp_path):
    out = tmp_path / "prep"
    code = main([
        "prep",
        "--dialogues", str(synthetic_dir / "dialogues.jsonl"),
        "--faces", str(synthetic_dir / "faces"),
        "--au", str(synthetic_dir / "faces" / "au.csv"),
        "--out", str(out),
        "--seed", "1",
        "--min-freq", "1",
        "--ratios", "0.5", "0.25", "0.25",
    ])
    assert code == 0
    vocab = Vocabulary.load(out / "vocab.json")
    assert len(vocab) > 20
    train = load_dialogues(out / "train.jsonl")
    valid = load_dialogues(out / "valid.jsonl")
    test = load_dialogues(out / "test.jsonl")
    assert len(train) + len(valid) + len(test) == 10
    manifest = json.loads((out / "prep_manifest.json").read_text())
    assert sum(manifest["counts"]["faces"]) == 16
    assert (out / "faces_train.csv").exists()


def test_validate_au_table_ok_and_violations(tmp_path, capsys):
    good = tmp_path / "good.json"
    AuMappingTable.default().to_json(good)
    assert main(["validate-au-table", str(good)]) == 0
    assert "ok" in capsys.readouterr().out

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"anger": {"AU04": 7}}))
    assert main(["validate-au-table", str(bad)]) == 1
    out = capsys.readouterr().out
    assert "violation" in out and "AU04" in out


def test_demo_bundle_has_all_artifacts(demo_bundle):
    for rel in ("config.json", "au_table.json", "nlg/weights.pt", "nlg/manifest.json",
                "nlg/vocab.json", "face/weights.pt", "face/manifest.json",
                "data/dialogues.jsonl", "data/faces/index.csv"):
        assert (demo_bundle / rel).exists(), rel


def test_eval_nlg_reports_metrics(demo_bundle, tmp_path, capsys):
    # the demo corpus is not split; evaluate on a prep split instead
    out = tmp_path / "prep"
    main([
        "prep",
        "--dialogues", str(demo_bundle / "data" / "dialogues.jsonl"),
        "--faces", str(demo_bundle / "data" / "faces"),
        "--au", str(demo_bundle / "data" / "faces" / "au.csv"),
        "--out", str(out),
        "--seed", "0",
        "--min-freq", "1",
        "--ratios", "0.5", "0.25", "0.25",
    ])
    capsys.readouterr()
    code = main(["eval-nlg", "--data", str(out), "--checkpoint",
                 str(demo_bundle / "nlg"), "--split", "train"])
    assert code == 0
    metrics = json.loads(capsys.readouterr().out)
    assert metrics["perplexity"] >= 1.0
    assert 0.0 <= metrics["emotion_accuracy"] <= 1.0


def test_train_face_and_synthesize_round_trip(demo_bundle, tmp_path, capsys):
    config = tmp_path / "face.json"
    config.write_text(json.dumps({
        "gan": {
            "image_size": 64,
            "gen_base_channels": 2, "gen_res_blocks": 1,
            "critic_base_channels": 2, "critic_layers": 2,
            "hyper": {"batch_size": 4, "critic_steps": 1},
        },
        "steps": 2,
        "seed": 0,
    }))
    ckpt = tmp_path / "ckpt"
    code = main(["train-face", "--data", str(demo_bundle / "data" / "faces"),
                 "--config", str(config), "--out", str(ckpt)])
    assert code == 0

    out_png = tmp_path / "edited.png"
    base = demo_bundle / "data" / "faces" / "images" / "face_00.png"
    code = main(["synthesize", "--checkpoint", str(ckpt), "--image", str(base),
                 "--au", "happiness", "--out", str(out_png)])
    assert code == 0
    edited = load_png(out_png)
    assert edited.shape == (64, 64, 3)

    # explicit AU JSON spec routes through validation
    code = main(["synthesize", "--checkpoint", str(ckpt), "--image", str(base),
                 "--au", '{"AU12": 1.0}', "--out", str(out_png)])
    assert code == 0


def test_synthesize_rejects_bad_au_values(demo_bundle, tmp_path):
    base = demo_bundle / "data" / "faces" / "images" / "face_00.png"
    with pytest.raises(ValueError):
        main(["synthesize", "--checkpoint", str(demo_bundle / "face"),
              "--image", str(base), "--au", '{"AU12": 2.0}',
              "--out", str(tmp_path / "x.png")])
