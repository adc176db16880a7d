"""Abstract model interface the scoring and decoding loops run against.

Any object with these methods works: the bundled deterministic test model,
the Hugging Face wrapper, or anything else that can turn a token prefix
into next-token logits.
"""

from __future__ import annotations

from typing import Protocol, Sequence, runtime_checkable

import numpy as np


@runtime_checkable
class LanguageModel(Protocol):
    model_id: str
    tokenizer_id: str
    vocab_size: int
    context_window: int

    def encode(self, text: str) -> list[int]:
        ...

    def token_surface(self, token_id: int) -> str:
        ...

    def decode(self, token_ids: Sequence[int]) -> str:
        ...

    def next_logits(self, prefix_ids: Sequence[int]) -> np.ndarray:
        """Unnormalized next-token logits, shape (vocab_size,)."""
        ...

    def token_embedding(self, token_id: int) -> np.ndarray:
        """Input-embedding vector; needed only for contrastive search."""
        ...
