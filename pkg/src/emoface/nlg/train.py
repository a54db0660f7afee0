"""Training, evaluation, and checkpointing for the response generator."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Sequence

import torch

from emoface.data_prep.splits import Example
from emoface.data_prep.vocab import PAD_ID, Vocabulary
from emoface.errors import CheckpointError
from emoface.nlg.config import NlgConfig, NlgTrainConfig
from emoface.nlg.data import NlgDataset
from emoface.nlg.model import NlgModel

WEIGHTS_FILE = "weights.pt"
MANIFEST_FILE = "manifest.json"
VOCAB_FILE = "vocab.json"


def train_nlg(
    examples: Sequence[Example],
    vocab: Vocabulary,
    config: NlgConfig,
    train_config: NlgTrainConfig,
    out_dir: str | Path | None = None,
    log_every: int = 0,
) -> tuple[NlgModel, list[dict[str, float]]]:
    """Train from scratch; deterministic given the seed. Returns the model
    and per-epoch loss history; saves a checkpoint when out_dir is given."""
    torch.manual_seed(train_config.seed)
    model = NlgModel(config)
    dataset = NlgDataset(examples, config)
    optimizer = torch.optim.Adam(model.parameters(), lr=train_config.learning_rate)
    rng = torch.Generator().manual_seed(train_config.seed + 1)

    history: list[dict[str, float]] = []
    for epoch in range(train_config.epochs):
        tf_prob = config.teacher_forcing_prob(epoch)
        total = seq = emo = 0.0
        batches = 0
        for batch in dataset.batches(train_config.batch_size, rng):
            loss = model.nlg_loss(
                batch.context_ids, batch.target_ids, batch.emotions, tf_prob, rng=rng
            )
            optimizer.zero_grad(set_to_none=True)
            loss.total.backward()
            optimizer.step()
            total += float(loss.total.detach())
            seq += float(loss.seq_ce.detach())
            emo += float(loss.emo_ce.detach())
            batches += 1
        history.append({
            "epoch": epoch,
            "teacher_forcing_prob": tf_prob,
            "total": total / batches,
            "seq_ce": seq / batches,
            "emo_ce": emo / batches,
        })
        if log_every and (epoch + 1) % log_every == 0:
            h = history[-1]
            print(f"epoch {epoch + 1}/{train_config.epochs}: "
                  f"loss={h['total']:.4f} seq={h['seq_ce']:.4f} emo={h['emo_ce']:.4f}")

    if out_dir is not None:
        save_nlg_checkpoint(model, vocab, out_dir,
                            epoch=train_config.epochs, seed=train_config.seed)
    return model, history


def save_nlg_checkpoint(model: NlgModel, vocab: Vocabulary, out_dir: str | Path,
                        epoch: int, seed: int) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / WEIGHTS_FILE)
    vocab.save(out_dir / VOCAB_FILE)
    manifest = {
        "kind": "nlg",
        "config": model.config.to_dict(),
        "vocab_sha256": vocab.content_hash(),
        "epoch": epoch,
        "seed": seed,
    }
    (out_dir / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def checkpoint_hash(checkpoint_dir: str | Path) -> str:
    return hashlib.sha256((Path(checkpoint_dir) / WEIGHTS_FILE).read_bytes()).hexdigest()


def load_nlg_checkpoint(checkpoint_dir: str | Path) -> tuple[NlgModel, Vocabulary, dict]:
    checkpoint_dir = Path(checkpoint_dir)
    manifest_path = checkpoint_dir / MANIFEST_FILE
    weights_path = checkpoint_dir / WEIGHTS_FILE
    vocab_path = checkpoint_dir / VOCAB_FILE
    for p in (manifest_path, weights_path, vocab_path):
        if not p.exists():
            raise CheckpointError(f"missing checkpoint file {p}")
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("kind") != "nlg":
        raise CheckpointError(f"{checkpoint_dir} is not a response-generator checkpoint")
    vocab = Vocabulary.load(vocab_path)
    if vocab.content_hash() != manifest["vocab_sha256"]:
        raise CheckpointError("vocabulary file does not match the manifest hash")
    config = NlgConfig.from_dict(manifest["config"])
    if config.vocab_size != len(vocab):
        raise CheckpointError(
            f"config vocab_size {config.vocab_size} != vocabulary size {len(vocab)}"
        )
    model = NlgModel(config)
    model.load_state_dict(torch.load(weights_path, map_location="cpu", weights_only=True))
    model.eval()
    return model, vocab, manifest


@torch.no_grad()
def evaluate(model: NlgModel, dataset: NlgDataset, batch_size: int = 64) -> dict[str, float]:
    """Teacher-forced perplexity and emotion accuracy over a dataset."""
    model.eval()
    logp_sum = 0.0
    token_count = 0
    emo_correct = 0
    emo_ce_sum = 0.0
    count = 0
    for batch in dataset.batches(batch_size, shuffle=False):
        loss = model.nlg_loss(batch.context_ids, batch.target_ids, batch.emotions,
                              teacher_forcing_prob=1.0)
        tokens = int((batch.target_ids != PAD_ID).sum())
        logp_sum += float(loss.seq_ce) * tokens
        token_count += tokens
        encoded = model.encode_context(batch.context_ids)
        _, labels = model.predict_emotion(encoded.summary)
        emo_correct += int((labels == batch.emotions).sum())
        emo_ce_sum += float(loss.emo_ce) * batch.emotions.shape[0]
        count += batch.emotions.shape[0]
    seq_ce = logp_sum / token_count
    return {
        "seq_ce": seq_ce,
        "perplexity": float(torch.exp(torch.tensor(seq_ce))),
        "emo_ce": emo_ce_sum / count,
        "emotion_accuracy": emo_correct / count,
    }
