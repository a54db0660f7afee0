"""Shared test utilities: finite-difference gradient checking and the
independent teacher-forced decoding oracle.

The finite-difference side only ever calls the loss forward, so it stays
independent of autograd no matter what the loss does internally.
"""

from __future__ import annotations

from typing import Callable, Iterable

import torch
import torch.nn.functional as F
from torch import nn

from emoface.data_prep.vocab import BOS_ID, PAD_ID


def fd_gradients(loss_fn: Callable[[], torch.Tensor],
                 params: list[torch.Tensor], eps: float = 1e-4) -> list[torch.Tensor]:
    """Central finite differences of loss_fn w.r.t. every entry of params.

    Parameters are perturbed through .data so the loss forward still runs in
    grad mode (some losses differentiate internally, e.g. gradient penalties).
    """
    grads = []
    for p in params:
        g = torch.zeros_like(p)
        flat = p.data.view(-1)
        gflat = g.view(-1)
        for i in range(flat.numel()):
            orig = float(flat[i])
            flat[i] = orig + eps
            up = float(loss_fn().detach())
            flat[i] = orig - eps
            down = float(loss_fn().detach())
            flat[i] = orig
            gflat[i] = (up - down) / (2.0 * eps)
        grads.append(g)
    return grads


def relative_error(a: torch.Tensor, b: torch.Tensor) -> float:
    denom = max(float(a.norm() + b.norm()), 1e-12)
    return float((a - b).norm()) / denom


def max_gradient_error(
    loss_fn: Callable[[], torch.Tensor],
    params: Iterable[torch.Tensor],
    eps: float = 1e-4,
    atol: float = 1e-6,
) -> float:
    """Worst per-tensor relative error between autograd and finite differences.

    Parameters the loss does not touch are compared against zero gradients.
    Tensors where both sides are below atol count as matching: relative error
    is undefined for exactly-zero gradients (e.g. a conv bias feeding a
    normalization layer), where finite differences return pure float noise.
    """
    params = [p for p in params if p.requires_grad]
    loss = loss_fn()
    autograd = torch.autograd.grad(loss, params, allow_unused=True)
    numeric = fd_gradients(loss_fn, params, eps)
    worst = 0.0
    for p, ga, gn in zip(params, autograd, numeric):
        ga = torch.zeros_like(p) if ga is None else ga.detach().reshape(p.shape)
        if float(ga.norm()) < atol and float(gn.norm()) < atol:
            continue
        worst = max(worst, relative_error(ga.reshape(-1), gn.reshape(-1)))
    return worst


def sampled_gradient_error(
    loss_fn: Callable[[], torch.Tensor],
    params: Iterable[torch.Tensor],
    eps: float = 1e-4,
    per_tensor: int = 8,
    seed: int = 0,
    atol: float = 1e-6,
) -> float:
    """Like max_gradient_error but differencing a random coordinate sample of
    every parameter tensor, for checks that must fit a runtime budget."""
    params = [p for p in params if p.requires_grad]
    loss = loss_fn()
    autograd = torch.autograd.grad(loss, params, allow_unused=True)
    rng = torch.Generator().manual_seed(seed)
    worst = 0.0
    for p, ga in zip(params, autograd):
        ga = torch.zeros_like(p) if ga is None else ga.detach()
        count = min(per_tensor, p.numel())
        idx = torch.randperm(p.numel(), generator=rng)[:count]
        flat = p.data.view(-1)
        fd = torch.zeros(count, dtype=p.dtype)
        for j, i in enumerate(idx.tolist()):
            orig = float(flat[i])
            flat[i] = orig + eps
            up = float(loss_fn().detach())
            flat[i] = orig - eps
            down = float(loss_fn().detach())
            flat[i] = orig
            fd[j] = (up - down) / (2.0 * eps)
        analytic = ga.reshape(-1)[idx]
        if float(analytic.norm()) < atol and float(fd.norm()) < atol:
            continue
        worst = max(worst, relative_error(analytic, fd))
    return worst


def teacher_forced_oracle(model, context, target, emotions):
    """Independent decode path for the scheduled-sampling boundary check:
    a batched nn.GRU over the gold-shifted input sequence with masked
    cross-entropy, instead of the model's stepwise cell loop."""
    encoded = model.encode_context(context)
    h0 = model.summary_to_hidden(encoded.summary).unsqueeze(0)
    gru = nn.GRU(model.config.embedding_dim, model.config.hidden_dim,
                 batch_first=True).to(model.embedding.weight.dtype)
    with torch.no_grad():
        gru.weight_ih_l0.copy_(model.decoder_cell.weight_ih)
        gru.weight_hh_l0.copy_(model.decoder_cell.weight_hh)
        gru.bias_ih_l0.copy_(model.decoder_cell.bias_ih)
        gru.bias_hh_l0.copy_(model.decoder_cell.bias_hh)
    inputs = torch.cat([torch.full_like(target[:, :1], BOS_ID), target[:, :-1]], dim=1)
    states, _ = gru(model.embedding(inputs), h0)
    logits = model.output_head(states)
    mask = target != PAD_ID
    flat_ce = F.cross_entropy(logits.reshape(-1, model.config.vocab_size),
                              target.reshape(-1), reduction="none")
    seq_ce = (flat_ce * mask.reshape(-1)).sum() / mask.sum()
    emo_logits, _ = model.predict_emotion(encoded.summary)
    emo_ce = F.cross_entropy(emo_logits, emotions)
    total = seq_ce + model.config.emotion_loss_weight * emo_ce
    return total, seq_ce, emo_ce
