"""A tiny deterministic language model used for tests and dry runs.

Vocabulary tokens are named ``t0 .. t{V-1}``; texts are space-joined token
names. Next-token logits are a fixed nonlinear function of the last few
token embeddings, so generation is nontrivial but fully reproducible.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ModelLoadError


class DummyModel:
    def __init__(self, vocab_size: int = 64, seed: int = 0, dim: int = 16,
                 context_window: int = 512, sharpness: float = 4.0):
        if vocab_size < 2:
            raise ModelLoadError(f"dummy:{vocab_size}", "vocab must be >= 2")
        self.model_id = f"dummy:v{vocab_size}-s{seed}"
        self.tokenizer_id = f"dummy-tok-v{vocab_size}"
        self.vocab_size = vocab_size
        self.context_window = context_window
        rng = np.random.default_rng(seed)
        self._emb = rng.normal(size=(vocab_size, dim))
        self._w = rng.normal(size=(dim, dim)) / np.sqrt(dim)
        self._b = rng.normal(size=dim)
        self._sharp = sharpness

    def encode(self, text: str) -> list[int]:
        ids = []
        for word in text.split():
            name = word[1:] if word.startswith("t") else word
            try:
                tid = int(name)
            except ValueError:
                raise ModelLoadError(self.model_id, f"unknown token {word!r}") from None
            if not 0 <= tid < self.vocab_size:
                raise ModelLoadError(self.model_id, f"token id {tid} out of range")
            ids.append(tid)
        return ids

    def token_surface(self, token_id: int) -> str:
        return f"t{token_id}"

    def decode(self, token_ids: Sequence[int]) -> str:
        return " ".join(self.token_surface(t) for t in token_ids)

    def next_logits(self, prefix_ids: Sequence[int]) -> np.ndarray:
        recent = list(prefix_ids)[-3:]
        h = self._b if not recent else self._b + self._w @ self._emb[recent].mean(axis=0)
        return self._sharp * (self._emb @ np.tanh(h))

    def token_embedding(self, token_id: int) -> np.ndarray:
        return self._emb[token_id]


def load_dummy(model_id: str) -> DummyModel:
    """Parse ids like ``dummy:v64-s0`` (both parts optional)."""
    spec = model_id.split(":", 1)[1] if ":" in model_id else ""
    vocab, seed = 64, 0
    for part in filter(None, spec.split("-")):
        try:
            if part.startswith("v"):
                vocab = int(part[1:])
            elif part.startswith("s"):
                seed = int(part[1:])
            else:
                raise ValueError
        except ValueError:
            raise ModelLoadError(model_id, f"bad dummy spec part {part!r}") from None
    return DummyModel(vocab_size=vocab, seed=seed)
