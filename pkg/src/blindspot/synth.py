"""Closed-form unigram pseudo-model used as the oracle for the estimator stack.

The scoring model is a fixed categorical distribution over a toy
vocabulary, sorted descending so that token id i has rank i+1 under the
global tie rule (ascending token id among equal probabilities). Exclusion
rates under any top-k / top-p policy are then exact sums, which
``analytic_exclusion`` computes directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, UnsupportedPolicy
from .events import Corpus, DocRecord, TokenEvent

PRNG_NAME = "numpy-pcg64"


@dataclass(frozen=True)
class SynthModel:
    probs: np.ndarray  # descending, sums to 1
    seed: int = 0

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or p.size < 2:
            raise ValueError("need a probability vector of length >= 2")
        if np.any(p <= 0):
            raise ValueError("all probabilities must be > 0")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1 within 1e-12")
        if np.any(np.diff(p) > 0):
            raise ValueError("probabilities must be sorted descending")

    @property
    def vocab_size(self) -> int:
        return int(self.probs.size)

    def exclusive_cum_mass(self) -> np.ndarray:
        """cum_mass_before for each token id under the tie-broken order."""
        cum = np.cumsum(self.probs)
        return np.concatenate(([0.0], cum[:-1]))


@dataclass(frozen=True)
class HumanDist:
    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or np.any(p < 0):
            raise ValueError("need a nonnegative probability vector")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to 1 within 1e-12")


def make_zipf_model(V: int, s: float, seed: int = 0) -> SynthModel:
    """Zipf(s)-shaped model over V tokens; s=0 gives the uniform model."""
    if V < 2:
        raise ValueError("vocabulary size must be >= 2")
    if s < 0:
        raise ValueError("exponent must be >= 0")
    w = np.arange(1, V + 1, dtype=np.float64) ** (-s)
    p = w / w.sum()
    return SynthModel(probs=p / p.sum(), seed=seed)


def generate_synthetic_corpus(
    model: SynthModel, human: HumanDist, T: int, seed: int, doc_id: str = "synth-0"
) -> Corpus:
    """One document of T i.i.d. draws from the human distribution, scored
    exactly under the model. Deterministic given the seed."""
    if human.probs.size != model.vocab_size:
        raise DimensionMismatch(
            f"human dist has {human.probs.size} entries, model has {model.vocab_size}"
        )
    if T < 1:
        raise ValueError("need T >= 1")
    rng = np.random.default_rng(seed)
    ids = rng.choice(model.vocab_size, size=T, p=human.probs)
    cum = model.exclusive_cum_mass()
    logp = np.log(model.probs)
    events = [
        TokenEvent(
            position=t,
            token_id=int(i),
            surface=f"w{i}",
            logprob=float(logp[i]),
            rank=int(i) + 1,
            cum_mass_before=float(cum[i]),
        )
        for t, i in enumerate(ids)
    ]
    doc = DocRecord(
        doc_id=doc_id,
        origin="human",
        strategy="human",
        config=f"prng={PRNG_NAME};seed={seed}",
        dataset="synthetic",
        generator=None,
        scoring_model=f"unigram-v{model.vocab_size}",
        tokenizer_id=f"synth-v{model.vocab_size}",
        events=events,
        raw_text=" ".join(f"w{i}" for i in ids),
    )
    return Corpus(docs=[doc])


def analytic_exclusion(model: SynthModel, human: HumanDist, policy) -> float:
    """Exact population exclusion rate: the human mass outside the
    truncation set, by direct summation."""
    if human.probs.size != model.vocab_size:
        raise DimensionMismatch(
            f"human dist has {human.probs.size} entries, model has {model.vocab_size}"
        )
    if policy.kind in ("topk", "contrastive"):
        n_in = min(policy.k, model.vocab_size)
    elif policy.kind == "topp":
        n_in = int(np.count_nonzero(model.exclusive_cum_mass() < policy.p))
    else:
        raise UnsupportedPolicy(f"policy kind {policy.kind!r}")
    return float(human.probs[n_in:].sum())
