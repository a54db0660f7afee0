"""Encoder-decoder response generator with a shared emotion head.

A bidirectional GRU encodes the concatenated dialogue context; the summary
vector (final forward and backward states concatenated) feeds both a linear
emotion classifier and, through a learned projection, the initial state of a
GRU decoder that emits the response word by word. Training uses scheduled
sampling: at each step the gold previous token is fed with probability
teacher_forcing_prob, otherwise the model's own previous argmax.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn.functional as F
from torch import nn

from emoface.data_prep.vocab import BOS_ID, EOS_ID, PAD_ID
from emoface.labels import EmotionLabel
from emoface.nlg.config import NlgConfig


@dataclass
class EncoderOutput:
    summary: torch.Tensor      # (B, 2 * hidden_dim)
    step_states: torch.Tensor  # (B, T, 2 * hidden_dim), zero past each length


@dataclass
class DecoderState:
    hidden: torch.Tensor              # (B, hidden_dim)
    logits: torch.Tensor | None = None  # (B, vocab) from the previous step


@dataclass
class NlgLossParts:
    total: torch.Tensor
    seq_ce: torch.Tensor  # mean over non-pad target tokens
    emo_ce: torch.Tensor  # mean over batch


@dataclass
class NlgPrediction:
    tokens: tuple[int, ...]
    emotion: EmotionLabel
    emotion_logits: torch.Tensor  # (emotion_classes,)


class NlgModel(nn.Module):
    def __init__(self, config: NlgConfig):
        super().__init__()
        if config.emotion_classes != len(EmotionLabel):
            raise ValueError(
                f"emotion_classes must be {len(EmotionLabel)} to match the label set"
            )
        self.config = config
        self.embedding = nn.Embedding(config.vocab_size, config.embedding_dim,
                                      padding_idx=PAD_ID)
        self.encoder = nn.GRU(config.embedding_dim, config.hidden_dim,
                              batch_first=True, bidirectional=True)
        self.summary_to_hidden = nn.Linear(2 * config.hidden_dim, config.hidden_dim)
        self.emotion_head = nn.Linear(2 * config.hidden_dim, config.emotion_classes)
        self.decoder_cell = nn.GRUCell(config.embedding_dim, config.hidden_dim)
        self.output_head = nn.Linear(config.hidden_dim, config.vocab_size)

    def _check_ids(self, ids: torch.Tensor) -> None:
        if ids.numel() == 0:
            raise ValueError("empty token id sequence")
        if int(ids.min()) < 0 or int(ids.max()) >= self.config.vocab_size:
            raise ValueError(
                f"token id out of range [0, {self.config.vocab_size}): "
                f"min={int(ids.min())}, max={int(ids.max())}"
            )

    def encode_context(self, context_ids: torch.Tensor) -> EncoderOutput:
        """Encode padded context ids (B, T); rows must have >= 1 non-pad id."""
        self._check_ids(context_ids)
        lengths = (context_ids != PAD_ID).sum(dim=1)
        if int(lengths.min()) == 0:
            raise ValueError("context row is all padding")
        embedded = self.embedding(context_ids)
        packed = nn.utils.rnn.pack_padded_sequence(
            embedded, lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        packed_out, final = self.encoder(packed)
        step_states, _ = nn.utils.rnn.pad_packed_sequence(
            packed_out, batch_first=True, total_length=context_ids.shape[1]
        )
        summary = torch.cat([final[0], final[1]], dim=1)
        return EncoderOutput(summary=summary, step_states=step_states)

    def predict_emotion(self, summary: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor]:
        """Emotion logits and argmax labels (ties break to the lowest index)."""
        logits = self.emotion_head(summary)
        return logits, torch.argmax(logits, dim=1)

    def init_decoder(self, summary: torch.Tensor) -> DecoderState:
        return DecoderState(hidden=self.summary_to_hidden(summary), logits=None)

    def decode_step(self, state: DecoderState,
                    prev_ids: torch.Tensor) -> tuple[DecoderState, torch.Tensor]:
        self._check_ids(prev_ids)
        hidden = self.decoder_cell(self.embedding(prev_ids), state.hidden)
        logits = self.output_head(hidden)
        return DecoderState(hidden=hidden, logits=logits), logits

    def nlg_loss(
        self,
        context_ids: torch.Tensor,
        target_ids: torch.Tensor,
        emotions: torch.Tensor,
        teacher_forcing_prob: float,
        rng: torch.Generator | None = None,
    ) -> NlgLossParts:
        """Joint loss: masked sequence cross-entropy plus emotion cross-entropy.

        target_ids are gold responses padded with the pad id; pad positions are
        excluded from the sequence loss. With teacher_forcing_prob == 1 the
        stochastic branch is never sampled and the pass is pure teacher forcing.
        """
        if not 0.0 <= teacher_forcing_prob <= 1.0:
            raise ValueError(f"teacher_forcing_prob must be in [0, 1], got {teacher_forcing_prob}")
        target_mask = target_ids != PAD_ID
        if not bool(target_mask.any()):
            raise ValueError("all target tokens are padding")

        encoded = self.encode_context(context_ids)
        state = self.init_decoder(encoded.summary)
        batch = context_ids.shape[0]
        device = context_ids.device

        token_logp_sum = torch.zeros((), dtype=torch.get_default_dtype(), device=device)
        prev_ids = torch.full((batch,), BOS_ID, dtype=torch.long, device=device)
        for t in range(target_ids.shape[1]):
            if t > 0:
                gold_prev = target_ids[:, t - 1]
                if teacher_forcing_prob >= 1.0:
                    prev_ids = gold_prev
                else:
                    model_prev = torch.argmax(state.logits, dim=1)
                    if teacher_forcing_prob <= 0.0:
                        prev_ids = model_prev
                    else:
                        coins = torch.rand(batch, generator=rng, device=device)
                        use_gold = coins < teacher_forcing_prob
                        prev_ids = torch.where(use_gold, gold_prev, model_prev)
            state, logits = self.decode_step(state, prev_ids)
            log_probs = F.log_softmax(logits, dim=1)
            gathered = log_probs.gather(1, target_ids[:, t:t + 1]).squeeze(1)
            token_logp_sum = token_logp_sum + (gathered * target_mask[:, t]).sum()

        seq_ce = -token_logp_sum / target_mask.sum()
        emotion_logits, _ = self.predict_emotion(encoded.summary)
        emo_ce = F.cross_entropy(emotion_logits, emotions)
        total = seq_ce + self.config.emotion_loss_weight * emo_ce
        return NlgLossParts(total=total, seq_ce=seq_ce, emo_ce=emo_ce)

    @torch.no_grad()
    def generate(self, context_ids: torch.Tensor, max_len: int | None = None) -> NlgPrediction:
        """Greedy decode for one context (1-D ids), stopping at eos or max_len.

        The pad logit is masked out, so outputs never contain pad tokens. The
        emotion comes from the same context encoding.
        """
        if max_len is None:
            max_len = self.config.max_decode_len
        if context_ids.ndim != 1:
            raise ValueError("generate expects a single unbatched id sequence")
        encoded = self.encode_context(context_ids.unsqueeze(0))
        emotion_logits, label_idx = self.predict_emotion(encoded.summary)
        state = self.init_decoder(encoded.summary)
        prev = torch.tensor([BOS_ID], dtype=torch.long, device=context_ids.device)
        tokens: list[int] = []
        for _ in range(max_len):
            state, logits = self.decode_step(state, prev)
            logits = logits.clone()
            logits[:, PAD_ID] = float("-inf")
            next_id = int(torch.argmax(logits, dim=1))
            if next_id == EOS_ID:
                break
            tokens.append(next_id)
            prev = torch.tensor([next_id], dtype=torch.long, device=context_ids.device)
        return NlgPrediction(
            tokens=tuple(tokens),
            emotion=EmotionLabel(int(label_idx[0])),
            emotion_logits=emotion_logits[0],
        )
