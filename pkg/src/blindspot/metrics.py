"""Per-document proxy features: predictability and n-gram lexical diversity.

Conventions (recorded in CLI manifests): n-grams are whitespace-separated
surface words, case-sensitive, punctuation attached as-is
(ngram_unit=word); any n-gram order with zero total n-grams contributes a
neutral factor of 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import EmptyDoc, MissingSurface
from .events import Corpus, DocRecord

DIVERSITY_ORDERS = (2, 3, 4)


@dataclass
class FeatureRow:
    doc_id: str
    predictability: float  # mean natural-log probability, <= 0
    diversity: float  # in [0, 100]
    label: str  # human | machine
    strategy: str | None = None
    config: str | None = None
    dataset: str | None = None
    generator: str | None = None


def predictability(doc: DocRecord) -> float:
    """Arithmetic mean of the document's token log-probabilities."""
    if not doc.events:
        raise EmptyDoc(f"doc {doc.doc_id!r} has no events")
    return sum(e.logprob for e in doc.events) / len(doc.events)


def diversity(tokens: list[str]) -> float:
    """100 x product over n in 2..4 of unique-to-total n-gram ratios."""
    if not tokens:
        warnings.warn("diversity of empty token list is 100 by the neutral-factor rule")
    value = 100.0
    for n in DIVERSITY_ORDERS:
        total = len(tokens) - n + 1
        if total <= 0:
            continue  # neutral factor for short texts
        unique = len({tuple(tokens[i : i + n]) for i in range(total)})
        value *= unique / total
    return value


def doc_surface_text(doc: DocRecord) -> str:
    """raw_text when present, else the event surfaces concatenated verbatim
    (model tokenizers keep their own spacing markers)."""
    if doc.raw_text is not None:
        return doc.raw_text
    return "".join(e.surface for e in doc.events)


def feature_row(doc: DocRecord) -> FeatureRow:
    text = doc_surface_text(doc)
    if not text.strip():
        raise MissingSurface(doc.doc_id)
    return FeatureRow(
        doc_id=doc.doc_id,
        predictability=predictability(doc),
        diversity=diversity(text.split()),
        label=doc.origin,
        strategy=doc.strategy,
        config=doc.config,
        dataset=doc.dataset,
        generator=doc.generator,
    )


def feature_table(corpus: Corpus) -> list[FeatureRow]:
    """One FeatureRow per document, metadata propagated."""
    return [feature_row(doc) for doc in corpus.docs]


FEATURE_CSV_HEADER = "doc_id,label,strategy,config,dataset,generator,predictability,diversity"


def _csv_field(value) -> str:
    if value is None:
        return ""
    s = str(value)
    if any(c in s for c in ',"\n'):
        s = '"' + s.replace('"', '""') + '"'
    return s


def feature_csv_lines(rows: list[FeatureRow]) -> list[str]:
    lines = [FEATURE_CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _csv_field(r.doc_id),
                    _csv_field(r.label),
                    _csv_field(r.strategy),
                    _csv_field(r.config),
                    _csv_field(r.dataset),
                    _csv_field(r.generator),
                    repr(r.predictability),
                    repr(r.diversity),
                ]
            )
        )
    return lines
