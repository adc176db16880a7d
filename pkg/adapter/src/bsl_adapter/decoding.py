"""Decoding loops: beam, contrastive, top-k, top-p and temperature sampling.

All strategies share the probability ordering used for scoring (descending
probability, ties broken by ascending token id), so the truncation sets
they sample from match the sets the analyzer reconstructs from ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .specs import GenSpec


@dataclass(frozen=True)
class Generation:
    prompt: str
    text: str
    prompt_ids: tuple[int, ...]
    token_ids: tuple[int, ...]
    strategy: str
    config: str
    seed: int


def _ordered_probs(model, prefix_ids):
    logits = np.asarray(model.next_logits(prefix_ids), dtype=np.float64)
    logprobs = logits - logsumexp(logits)
    probs = np.exp(logprobs)
    order = np.lexsort((np.arange(len(probs)), -probs))
    return order, probs, logprobs


def _sample_truncated(model, prefix_ids, spec: GenSpec, rng, steps):
    ids = list(prefix_ids)
    out = []
    for _ in range(steps):
        order, probs, _ = _ordered_probs(model, ids)
        if spec.strategy == "topk":
            keep = order[: spec.params["k"]]
        elif spec.strategy == "topp":
            cum = np.cumsum(probs[order])
            cut = int(np.searchsorted(cum, spec.params["p"])) + 1
            keep = order[:cut]
        else:  # temperature: rescale the full distribution
            t = spec.params["t"]
            logits = np.log(np.maximum(probs, 1e-300)) / t
            probs = np.exp(logits - logsumexp(logits))
            keep = order
        w = probs[keep]
        tok = int(keep[rng.choice(len(keep), p=w / w.sum())])
        ids.append(tok)
        out.append(tok)
    return out


def _beam(model, prefix_ids, spec: GenSpec, steps):
    width = spec.params["width"]
    beams = [(0.0, tuple(prefix_ids))]
    for _ in range(steps):
        candidates = []
        for score, ids in beams:
            order, _, logprobs = _ordered_probs(model, ids)
            for tok in order[:width]:
                candidates.append((score + float(logprobs[tok]), ids + (int(tok),)))
        # deterministic: best score first, ties by the sequence itself
        candidates.sort(key=lambda c: (-c[0], c[1]))
        beams = candidates[:width]
    best = beams[0][1]
    return list(best[len(prefix_ids):])


def _contrastive(model, prefix_ids, spec: GenSpec, steps):
    k, alpha = spec.params["k"], spec.params["alpha"]

    def unit(v):
        v = np.asarray(v, dtype=np.float64)
        n = np.linalg.norm(v)
        return v / n if n > 0 else v

    ids = list(prefix_ids)
    context = [unit(model.token_embedding(t)) for t in ids]
    out = []
    for _ in range(steps):
        order, probs, _ = _ordered_probs(model, ids)
        best_tok, best_score = None, -np.inf
        for tok in order[:k]:
            emb = unit(model.token_embedding(int(tok)))
            penalty = max((float(emb @ c) for c in context), default=0.0)
            score = (1.0 - alpha) * float(probs[tok]) - alpha * penalty
            if score > best_score:
                best_tok, best_score = int(tok), score
        ids.append(best_tok)
        context.append(unit(model.token_embedding(best_tok)))
        out.append(best_tok)
    return out


def generate_texts(model, spec: GenSpec, prompts: Sequence[str]) -> list[Generation]:
    """One continuation per prompt; deterministic for beam and contrastive,
    seed-reproducible for the samplers (one child seed per prompt)."""
    children = np.random.SeedSequence(spec.seed).spawn(len(prompts))
    results = []
    for prompt, child in zip(prompts, children):
        prompt_ids = model.encode(prompt)
        steps = min(spec.max_new_tokens,
                    max(model.context_window - len(prompt_ids), 0))
        if spec.strategy == "beam":
            new = _beam(model, prompt_ids, spec, steps)
        elif spec.strategy == "contrastive":
            new = _contrastive(model, prompt_ids, spec, steps)
        else:
            rng = np.random.Generator(np.random.PCG64(child))
            new = _sample_truncated(model, prompt_ids, spec, rng, steps)
        results.append(Generation(
            prompt=prompt,
            text=model.decode(new),
            prompt_ids=tuple(int(t) for t in prompt_ids),
            token_ids=tuple(new),
            strategy=spec.strategy,
            config=spec.config_string(),
            seed=spec.seed,
        ))
    return results


def greedy(model, prompt: str, steps: int) -> list[int]:
    """Greedy continuation, equivalent to top-k sampling with k = 1."""
    spec = GenSpec(model=model.model_id, strategy="topk", params={"k": 1},
                   max_new_tokens=steps)
    return list(generate_texts(model, spec, [prompt])[0].token_ids)
