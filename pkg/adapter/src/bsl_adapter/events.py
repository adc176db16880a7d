"""Writer for the ``.bsl.jsonl`` token-event interchange format.

Byte-compatible with the analyzer's codec: a corpus header line, then one
``doc`` header line and one ``ev`` line per token, compact JSON separators,
UTF-8, no ASCII escaping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Event:
    position: int
    token_id: int
    surface: str
    logprob: float
    rank: int
    cum_mass_before: float
    pos_tag: str | None = None
    topn_ids: tuple[int, ...] | None = None


@dataclass
class Doc:
    doc_id: str
    origin: str
    dataset: str
    scoring_model: str
    tokenizer_id: str
    events: list[Event] = field(default_factory=list)
    generator: str | None = None
    strategy: str | None = None
    config: str | None = None
    raw_text: str | None = None


def _emit(fh, obj):
    fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")).encode("utf-8"))
    fh.write(b"\n")


def write_log(docs: list[Doc], path) -> None:
    with open(path, "wb") as fh:
        _emit(fh, {"schema": SCHEMA_VERSION, "kind": "corpus"})
        for doc in docs:
            head = {
                "schema": SCHEMA_VERSION,
                "kind": "doc",
                "doc_id": doc.doc_id,
                "origin": doc.origin,
                "strategy": doc.strategy,
                "config": doc.config,
                "dataset": doc.dataset,
                "generator": doc.generator,
                "scoring_model": doc.scoring_model,
                "tokenizer_id": doc.tokenizer_id,
            }
            if doc.raw_text is not None:
                head["raw_text"] = doc.raw_text
            _emit(fh, head)
            for ev in doc.events:
                _emit(fh, {
                    "kind": "ev",
                    "i": ev.position,
                    "tid": ev.token_id,
                    "s": ev.surface,
                    "lp": ev.logprob,
                    "r": ev.rank,
                    "cb": ev.cum_mass_before,
                    "pos": ev.pos_tag,
                    "topn": list(ev.topn_ids) if ev.topn_ids is not None else None,
                })
