"""Hugging Face wrapper implementing the LanguageModel interface.

torch and transformers are imported lazily so the rest of the package
works without them.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import ModelLoadError


class HFModel:
    def __init__(self, model_id: str, device: str = "cpu"):
        try:
            import torch
            from transformers import AutoModelForCausalLM, AutoTokenizer
        except ImportError as e:
            raise ModelLoadError(model_id, f"missing dependency: {e}") from None
        try:
            self._tok = AutoTokenizer.from_pretrained(model_id)
            self._model = AutoModelForCausalLM.from_pretrained(model_id)
        except Exception as e:  # transformers raises many concrete types here
            raise ModelLoadError(model_id, str(e)) from None
        self._torch = torch
        self._device = device
        self._model.to(device)
        self._model.eval()
        self.model_id = model_id
        self.tokenizer_id = f"{model_id}-tokenizer"
        self.vocab_size = int(self._model.get_input_embeddings().weight.shape[0])
        self.context_window = int(getattr(self._model.config,
                                          "max_position_embeddings", 1024))
        self._bos = self._tok.bos_token_id
        if self._bos is None:
            self._bos = self._tok.eos_token_id

    def encode(self, text: str) -> list[int]:
        return self._tok.encode(text, add_special_tokens=False)

    def token_surface(self, token_id: int) -> str:
        return self._tok.decode([token_id])

    def decode(self, token_ids: Sequence[int]) -> str:
        return self._tok.decode(list(token_ids))

    def _forward(self, ids: list[int]) -> np.ndarray:
        torch = self._torch
        with torch.no_grad():
            out = self._model(torch.tensor([ids], device=self._device))
        return out.logits[0].float().cpu().numpy()

    def next_logits(self, prefix_ids: Sequence[int]) -> np.ndarray:
        ids = [self._bos] + list(prefix_ids) if self._bos is not None else list(prefix_ids)
        return self._forward(ids)[-1]

    def sequence_logits(self, token_ids: Sequence[int]) -> np.ndarray:
        """Row t holds the logits predicting token_ids[t] from its prefix."""
        ids = list(token_ids)
        if self._bos is not None:
            mat = self._forward([self._bos] + ids)
            return mat[: len(ids)]
        mat = self._forward(ids)
        # without a BOS token the first position has no conditioning
        # context; fall back to uniform logits there
        first = np.zeros((1, mat.shape[1]), dtype=mat.dtype)
        return np.vstack([first, mat[: len(ids) - 1]])

    def token_embedding(self, token_id: int) -> np.ndarray:
        w = self._model.get_input_embeddings().weight[token_id]
        return w.detach().float().cpu().numpy()


def load_model(model_id: str, device: str = "cpu"):
    """Dispatch: ``dummy:...`` ids load the bundled test model, anything
    else goes to transformers."""
    if model_id == "dummy" or model_id.startswith("dummy:"):
        from .dummy import load_dummy

        return load_dummy(model_id)
    return HFModel(model_id, device=device)
