"""Teacher-forced scoring: exact ranks, masses and top-N candidate lists."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .events import Doc, Event
from .specs import ScoringSpec


@dataclass(frozen=True)
class SkippedDoc:
    doc_id: str
    reason: str


def rank_and_mass(logits: np.ndarray, token_id: int, topn: int):
    """Exact (rank, cum_mass_before, logprob, topn_ids) for one position.

    Ties between equal probabilities are broken by ascending token id, and
    cum_mass_before is the total probability of every token strictly ahead
    of the realized one in that ordering.
    """
    logits = np.asarray(logits, dtype=np.float64)
    logprobs = logits - logsumexp(logits)
    probs = np.exp(logprobs)
    # primary key descending probability, secondary key ascending token id
    order = np.lexsort((np.arange(len(probs)), -probs))
    pos = int(np.nonzero(order == token_id)[0][0])
    cum_before = float(probs[order[:pos]].sum())
    if pos == 0:
        cum_before = 0.0
    cum_before = min(cum_before, np.nextafter(1.0, 0.0))
    return (
        pos + 1,
        cum_before,
        float(min(logprobs[token_id], 0.0)),
        tuple(int(t) for t in order[:topn]),
    )


def _position_logits(model, ids: Sequence[int]) -> np.ndarray:
    """(len(ids), V) matrix; row t holds the logits that predict ids[t]."""
    if hasattr(model, "sequence_logits"):
        return np.asarray(model.sequence_logits(ids), dtype=np.float64)
    return np.stack([np.asarray(model.next_logits(ids[:t]), dtype=np.float64)
                     for t in range(len(ids))])


def score_token_ids(
    model,
    spec: ScoringSpec,
    token_ids: Sequence[int],
    prompt_ids: Sequence[int] = (),
    pos_tags: Sequence[str | None] | None = None,
) -> list[Event]:
    """Score a continuation, conditioning each position on the prompt plus
    all preceding continuation tokens. Only continuation tokens get events.
    """
    full = list(prompt_ids) + list(token_ids)
    mat = _position_logits(model, full)
    events = []
    for i, tid in enumerate(token_ids):
        rank, cb, lp, topn = rank_and_mass(mat[len(prompt_ids) + i], tid, spec.topn)
        events.append(Event(
            position=i,
            token_id=int(tid),
            surface=model.token_surface(int(tid)),
            logprob=lp,
            rank=rank,
            cum_mass_before=cb,
            pos_tag=pos_tags[i] if pos_tags is not None else None,
            topn_ids=topn,
        ))
    return events


def score_texts(
    model,
    spec: ScoringSpec,
    texts: Sequence[str],
    *,
    dataset: str,
    origin: str = "human",
    doc_ids: Sequence[str] | None = None,
    strategy: str | None = None,
    config: str | None = None,
    generator: str | None = None,
    pos_tags: Sequence[Sequence[str | None]] | None = None,
) -> tuple[list[Doc], list[SkippedDoc]]:
    """Teacher-force a batch of texts into event-log documents.

    Documents that tokenize to nothing or exceed the model's context
    window are skipped and reported, not fatal.
    """
    if origin == "human":
        strategy = "human"
    docs: list[Doc] = []
    skipped: list[SkippedDoc] = []
    for j, text in enumerate(texts):
        doc_id = doc_ids[j] if doc_ids is not None else f"{dataset}-{j:06d}"
        ids = model.encode(text)
        if not ids:
            skipped.append(SkippedDoc(doc_id, "tokenizes to zero tokens"))
            continue
        if len(ids) > model.context_window:
            skipped.append(SkippedDoc(
                doc_id, f"{len(ids)} tokens exceed context window {model.context_window}"
            ))
            continue
        events = score_token_ids(
            model, spec, ids,
            pos_tags=pos_tags[j] if pos_tags is not None else None,
        )
        docs.append(Doc(
            doc_id=doc_id,
            origin=origin,
            dataset=dataset,
            scoring_model=spec.model,
            tokenizer_id=model.tokenizer_id,
            events=events,
            generator=generator,
            strategy=strategy,
            config=config,
            raw_text=text,
        ))
    return docs, skipped
