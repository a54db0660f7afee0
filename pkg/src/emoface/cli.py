"""Command-line entry points.

    emoface prep            ingest corpora, build vocab and splits
    emoface make-synthetic  write the shipped stand-in corpora
    emoface validate-au-table
    emoface train-nlg / eval-nlg
    emoface train-face / synthesize
    emoface serve / chat    HTTP service and terminal REPL
    emoface make-demo       synthetic data + small checkpoints + service config
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import torch

from emoface.au_bridge import AU_NAMES, AuMappingTable, validate_table
from emoface.data_prep import (
    Vocabulary,
    build_vocab,
    encode_dialogues,
    examples_from_dialogues,
    load_dialogues,
    load_face_corpus,
    make_splits,
    save_dialogues,
)
from emoface.data_prep.faces import load_face_table, save_face_table
from emoface.face_gan.config import GanConfig, GanHyperParams
from emoface.face_gan.image_io import load_png, save_png, stack_images
from emoface.face_gan.networks import generator_forward
from emoface.face_gan.train import FaceGanTrainer, load_face_checkpoint
from emoface.labels import EmotionLabel
from emoface.nlg.config import NlgConfig, NlgTrainConfig
from emoface.nlg.data import NlgDataset
from emoface.nlg.train import evaluate, load_nlg_checkpoint, train_nlg
from emoface.service.config import ServiceConfig
from emoface.synthetic import make_overfit_dialogues, make_synthetic_corpora

PREP_MANIFEST = "prep_manifest.json"


def _load_json(path: str | None) -> dict:
    if not path:
        return {}
    return json.loads(Path(path).read_text())


# ---- prep ----

def cmd_prep(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dialogues = load_dialogues(args.dialogues)
    faces_dir = Path(args.faces)
    records = load_face_corpus(faces_dir / "index.csv", args.au)
    vocab = build_vocab(dialogues, min_freq=args.min_freq)
    vocab.save(out / "vocab.json")
    splits = make_splits(dialogues, records, ratios=tuple(args.ratios), seed=args.seed)
    for name, split in (("train", splits.train), ("valid", splits.valid), ("test", splits.test)):
        save_dialogues(split.dialogues, out / f"{name}.jsonl")
        save_face_table(split.faces, out / f"faces_{name}.csv")
    manifest = {
        "image_root": str(faces_dir.resolve()),
        "seed": args.seed,
        "ratios": list(args.ratios),
        "min_freq": args.min_freq,
        "counts": {
            "dialogues": [len(splits.train.dialogues), len(splits.valid.dialogues),
                          len(splits.test.dialogues)],
            "faces": [len(splits.train.faces), len(splits.valid.faces),
                      len(splits.test.faces)],
        },
    }
    (out / PREP_MANIFEST).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    print(f"wrote splits to {out} "
          f"(dialogues {manifest['counts']['dialogues']}, faces {manifest['counts']['faces']})")
    return 0


# ---- AU table ----

def cmd_validate_au_table(args) -> int:
    raw = json.loads(Path(args.table).read_text())
    violations = validate_table(raw)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return 1
    print("ok")
    return 0


# ---- NLG ----

def _nlg_examples(data_dir: Path, vocab: Vocabulary, split: str):
    dialogues = load_dialogues(data_dir / f"{split}.jsonl")
    return examples_from_dialogues(encode_dialogues(dialogues, vocab))


def cmd_train_nlg(args) -> int:
    data_dir = Path(args.data)
    overrides = _load_json(args.config)
    vocab = Vocabulary.load(data_dir / "vocab.json")
    config = NlgConfig(vocab_size=len(vocab), **overrides.get("model", {}))
    train_config = NlgTrainConfig(**overrides.get("train", {}))
    examples = _nlg_examples(data_dir, vocab, "train")
    _, history = train_nlg(examples, vocab, config, train_config,
                           out_dir=args.out, log_every=args.log_every)
    print(f"trained {train_config.epochs} epochs, final loss {history[-1]['total']:.4f}; "
          f"checkpoint at {args.out}")
    return 0


def cmd_eval_nlg(args) -> int:
    model, vocab, _ = load_nlg_checkpoint(args.checkpoint)
    examples = _nlg_examples(Path(args.data), vocab, args.split)
    metrics = evaluate(model, NlgDataset(examples, model.config))
    print(json.dumps(metrics, indent=2, sort_keys=True))
    return 0


# ---- face GAN ----

def _load_face_training_data(data_dir: Path):
    if (data_dir / "faces_train.csv").exists():
        records = load_face_table(data_dir / "faces_train.csv")
        manifest = _load_json(str(data_dir / PREP_MANIFEST))
        image_root = Path(manifest.get("image_root", data_dir))
    elif (data_dir / "index.csv").exists():
        records = load_face_corpus(data_dir / "index.csv", data_dir / "au.csv")
        image_root = data_dir
    else:
        raise FileNotFoundError(
            f"{data_dir} has neither faces_train.csv (prep output) nor index.csv"
        )
    images = stack_images([load_png(image_root / r.image_path) for r in records])
    activations = torch.tensor(np.stack([r.au for r in records]), dtype=torch.float32)
    return images, activations


def cmd_train_face(args) -> int:
    overrides = _load_json(args.config)
    config = GanConfig.from_dict(overrides.get("gan", {}))
    seed = overrides.get("seed", 0)
    images, activations = _load_face_training_data(Path(args.data))
    trainer = FaceGanTrainer(config, seed=seed)
    if "steps" in overrides:
        history = trainer.fit_steps(images, activations, overrides["steps"],
                                    log_every=args.log_every)
    else:
        history = trainer.fit_epochs(images, activations, overrides.get("epochs", 1),
                                     log_every=args.log_every)
    trainer.save(args.out)
    print(f"trained {len(history)} steps on {images.shape[0]} images; "
          f"final critic={history[-1]['critic_loss']:.4f} "
          f"generator={history[-1]['generator_loss']:.4f}; checkpoint at {args.out}")
    return 0


def _parse_au_spec(spec: str, table: AuMappingTable) -> np.ndarray:
    try:
        emotion = EmotionLabel.from_name(spec)
    except Exception:
        pass
    else:
        return table.lookup(emotion)
    if Path(spec).exists():
        raw = json.loads(Path(spec).read_text())
    else:
        raw = json.loads(spec)
    from emoface.au_bridge import au_vector_from_dict, validate_au_values
    vec = au_vector_from_dict(raw)
    validate_au_values(vec)
    return vec


def cmd_synthesize(args) -> int:
    generator, _, _, _ = load_face_checkpoint(args.checkpoint)
    table = AuMappingTable.from_json(args.au_table) if args.au_table else AuMappingTable.default()
    target = _parse_au_spec(args.au, table)
    base = load_png(args.image)
    _, edited = generator_forward(generator, base, target)
    save_png(edited, args.out)
    active = {name: float(v) for name, v in zip(AU_NAMES, target) if v}
    print(f"wrote {args.out} (targets: {active or 'neutral'})")
    return 0


# ---- synthetic data and demo ----

def cmd_make_synthetic(args) -> int:
    make_synthetic_corpora(args.out, size=args.size)
    print(f"wrote synthetic corpora under {args.out}")
    return 0


def cmd_make_demo(args) -> int:
    out = Path(args.out)
    data_dir = out / "data"
    make_synthetic_corpora(data_dir, size=64)

    dialogues = make_overfit_dialogues()
    vocab = build_vocab(dialogues, min_freq=1)
    examples = examples_from_dialogues(encode_dialogues(dialogues, vocab))
    if args.quick:
        nlg_config = NlgConfig(vocab_size=len(vocab), embedding_dim=8, hidden_dim=16)
        nlg_train = NlgTrainConfig(batch_size=10, epochs=10, learning_rate=5e-3, seed=args.seed)
    else:
        nlg_config = NlgConfig(vocab_size=len(vocab), embedding_dim=32, hidden_dim=64)
        nlg_train = NlgTrainConfig(batch_size=10, epochs=250, learning_rate=5e-3, seed=args.seed)
    train_nlg(examples, vocab, nlg_config, nlg_train, out_dir=out / "nlg")
    print(f"trained demo response generator ({nlg_train.epochs} epochs)")

    gan_config = GanConfig(
        image_size=64, gen_base_channels=8, gen_res_blocks=2,
        critic_base_channels=8, critic_layers=4,
        hyper=GanHyperParams(batch_size=16),
    )
    images, activations = _load_face_training_data(data_dir / "faces")
    trainer = FaceGanTrainer(gan_config, seed=args.seed)
    trainer.fit_steps(images, activations, 30 if args.quick else 400)
    trainer.save(out / "face")
    print(f"trained demo face generator ({trainer.step_count} steps)")

    AuMappingTable.default().to_json(out / "au_table.json")
    config = ServiceConfig(
        nlg_checkpoint="nlg",
        face_checkpoint="face",
        face_index="data/faces/index.csv",
        face_au_csv="data/faces/au.csv",
        face_image_root="data/faces",
        au_table="au_table.json",
        seed=args.seed,
    )
    config.to_json(out / "config.json")
    print(f"demo bundle ready: emoface serve --config {out / 'config.json'}")
    return 0


# ---- service ----

def cmd_serve(args) -> int:
    import uvicorn

    from emoface.service.app import create_app
    from emoface.service.core import PipelineService

    service = PipelineService(ServiceConfig.from_json(args.config))
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_chat(args) -> int:
    from emoface.service.repl import run_chat

    run_chat(ServiceConfig.from_json(args.config), args.out)
    return 0


# ---- parser ----

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emoface", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="ingest corpora and write splits")
    p.add_argument("--dialogues", required=True)
    p.add_argument("--faces", required=True, help="directory containing index.csv and images")
    p.add_argument("--au", required=True, help="AU intensity CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-freq", type=int, default=2)
    p.add_argument("--ratios", type=float, nargs=3, default=(0.8, 0.1, 0.1))
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("validate-au-table", help="check an AU mapping table file")
    p.add_argument("table")
    p.set_defaults(func=cmd_validate_au_table)

    p = sub.add_parser("train-nlg", help="train the response generator")
    p.add_argument("--data", required=True, help="prep output directory")
    p.add_argument("--config", default=None, help="JSON with model/train overrides")
    p.add_argument("--out", required=True)
    p.add_argument("--log-every", type=int, default=0)
    p.set_defaults(func=cmd_train_nlg)

    p = sub.add_parser("eval-nlg", help="perplexity and emotion accuracy")
    p.add_argument("--data", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--split", default="test")
    p.set_defaults(func=cmd_eval_nlg)

    p = sub.add_parser("train-face", help="train the face generator")
    p.add_argument("--data", required=True, help="prep output or raw face directory")
    p.add_argument("--config", default=None, help="JSON with gan/steps/epochs/seed")
    p.add_argument("--out", required=True)
    p.add_argument("--log-every", type=int, default=0)
    p.set_defaults(func=cmd_train_face)

    p = sub.add_parser("synthesize", help="edit one face image")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--image", required=True)
    p.add_argument("--au", required=True,
                   help="emotion name, JSON file, or inline {\"AU12\": 1.0} JSON")
    p.add_argument("--au-table", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("make-synthetic", help="write the stand-in corpora")
    p.add_argument("--out", required=True)
    p.add_argument("--size", type=int, default=64)
    p.set_defaults(func=cmd_make_synthetic)

    p = sub.add_parser("make-demo", help="synthetic data + demo checkpoints + config")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true", help="minimal training, for tests")
    p.set_defaults(func=cmd_make_demo)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("chat", help="terminal chat REPL")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="directory for per-turn face PNGs")
    p.set_defaults(func=cmd_chat)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
