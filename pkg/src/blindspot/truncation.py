"""Truncation-set semantics and the blind-spot estimators.

Membership follows the minimal-prefix reading of nucleus truncation: a
token is in the top-p set iff the cumulative mass strictly before it is
below p, so the cutoff token that first reaches mass p is included.
Contrastive search rescoring operates on the top-k candidates, so its
truncation set is the top-k set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from . import _kernels
from .errors import (
    EmptySelection,
    MissingTopN,
    NoAlignedDocs,
    TokenizerMismatch,
    UnsupportedPolicy,
)
from .events import Corpus, DocRecord, TokenEvent
from .stats import bootstrap_ci

RANK_BINS = ((1, 5), (6, 10), (11, 20), (21, 50), (51, 100), (101, None))
RANK_BIN_LABELS = ("1-5", "6-10", "11-20", "21-50", "51-100", ">100")

DocFilter = Callable[[DocRecord], bool] | None


@dataclass(frozen=True)
class TruncationPolicy:
    kind: str  # topk | topp | contrastive
    k: int | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind in ("topk", "contrastive"):
            if self.k is None or self.p is not None:
                raise UnsupportedPolicy(f"{self.kind} takes exactly k")
            if self.k < 1:
                raise UnsupportedPolicy("k must be >= 1")
        elif self.kind == "topp":
            if self.p is None or self.k is not None:
                raise UnsupportedPolicy("topp takes exactly p")
            if not (0.0 < self.p <= 1.0):
                raise UnsupportedPolicy("p must be in (0, 1]")
        else:
            raise UnsupportedPolicy(f"unknown policy kind {self.kind!r}")

    @classmethod
    def topk(cls, k: int) -> "TruncationPolicy":
        return cls(kind="topk", k=k)

    @classmethod
    def topp(cls, p: float) -> "TruncationPolicy":
        return cls(kind="topp", p=p)

    @classmethod
    def contrastive(cls, k: int) -> "TruncationPolicy":
        return cls(kind="contrastive", k=k)

    @classmethod
    def parse(cls, spec: str) -> "TruncationPolicy":
        """Parse CLI specs like 'topk:10', 'topp:0.9', 'contrastive:4'."""
        kind, _, arg = spec.partition(":")
        if not arg:
            raise UnsupportedPolicy(f"policy spec {spec!r} needs a parameter")
        if kind in ("topk", "contrastive"):
            return cls(kind=kind, k=int(arg))
        if kind == "topp":
            return cls(kind="topp", p=float(arg))
        raise UnsupportedPolicy(f"unknown policy kind {kind!r}")

    @property
    def param(self) -> float:
        return float(self.k if self.kind in ("topk", "contrastive") else self.p)

    def label(self) -> str:
        if self.kind == "topp":
            return f"topp:{self.p:g}"
        return f"{self.kind}:{self.k}"


@dataclass
class RateEstimate:
    point: float
    n_tokens: int
    n_docs: int
    method: str = "pooled"
    ci_low: float | None = None
    ci_high: float | None = None


@dataclass
class RankHistogram:
    bin_labels: tuple[str, ...]
    bin_shares: tuple[float, ...]
    median_rank: float
    mean_rank: float
    rank1_share: float  # diagnostic; backs the topk(1) consistency check
    n_tokens: int

    @property
    def heavy_tail(self) -> bool:
        return self.mean_rank > self.median_rank


@dataclass
class OverlapStat:
    mean_jaccard: float
    std_jaccard: float
    n_positions: int
    n_skipped: int


def membership(event: TokenEvent, policy: TruncationPolicy) -> bool:
    """True iff the event's token lies inside the policy's truncation set."""
    if policy.kind in ("topk", "contrastive"):
        return event.rank <= policy.k
    return event.cum_mass_before < policy.p


def _select_docs(corpus: Corpus, doc_filter: DocFilter) -> list[DocRecord]:
    docs = [d for d in corpus.docs if doc_filter is None or doc_filter(d)]
    if not docs or not any(d.events for d in docs):
        raise EmptySelection("no documents (or no events) after filtering")
    return docs


def _doc_arrays(doc: DocRecord) -> tuple[np.ndarray, np.ndarray]:
    n = len(doc.events)
    ranks = np.fromiter((e.rank for e in doc.events), dtype=np.int64, count=n)
    cb = np.fromiter((e.cum_mass_before for e in doc.events), dtype=np.float64, count=n)
    return ranks, cb


def _kind_code(policy: TruncationPolicy) -> int:
    return _kernels.KIND_MASS if policy.kind == "topp" else _kernels.KIND_RANK


def _doc_tallies(
    docs: list[DocRecord], policy: TruncationPolicy
) -> tuple[np.ndarray, np.ndarray]:
    """(excluded_count, token_count) per document."""
    kind = _kind_code(policy)
    excl = np.empty(len(docs), dtype=np.float64)
    total = np.empty(len(docs), dtype=np.float64)
    for i, doc in enumerate(docs):
        ranks, cb = _doc_arrays(doc)
        excl[i] = _kernels.count_excluded(ranks, cb, kind, policy.param)
        total[i] = ranks.size
    return excl, total


def exclusion_rate(
    corpus: Corpus, policy: TruncationPolicy, doc_filter: DocFilter = None
) -> RateEstimate:
    """Pooled human-token exclusion rate: excluded events / total events."""
    docs = _select_docs(corpus, doc_filter)
    excl, total = _doc_tallies(docs, policy)
    return RateEstimate(
        point=float(excl.sum() / total.sum()),
        n_tokens=int(total.sum()),
        n_docs=len(docs),
    )


def exclusion_rate_ci(
    corpus: Corpus,
    policy: TruncationPolicy,
    B: int = 1000,
    seed: int = 0,
    doc_filter: DocFilter = None,
) -> RateEstimate:
    """Pooled rate with a percentile bootstrap over documents."""
    docs = _select_docs(corpus, doc_filter)
    excl, total = _doc_tallies(docs, policy)
    lo, hi = bootstrap_ci(excl, total, B=B, seed=seed)
    point = float(excl.sum() / total.sum())
    return RateEstimate(
        point=point,
        n_tokens=int(total.sum()),
        n_docs=len(docs),
        method="doc-bootstrap-percentile",
        ci_low=lo,
        ci_high=hi,
    )


def rank_distribution(corpus: Corpus, doc_filter: DocFilter = None) -> RankHistogram:
    """Fixed-bin histogram of pooled token ranks with lower-median and mean."""
    docs = _select_docs(corpus, doc_filter)
    ranks = np.concatenate([_doc_arrays(d)[0] for d in docs])
    n = ranks.size
    shares = []
    for lo, hi in RANK_BINS:
        if hi is None:
            count = np.count_nonzero(ranks >= lo)
        else:
            count = np.count_nonzero((ranks >= lo) & (ranks <= hi))
        shares.append(count / n)
    sorted_ranks = np.sort(ranks)
    median = float(sorted_ranks[(n - 1) // 2])  # lower median
    return RankHistogram(
        bin_labels=RANK_BIN_LABELS,
        bin_shares=tuple(float(s) for s in shares),
        median_rank=median,
        mean_rank=float(ranks.mean()),
        rank1_share=float(np.count_nonzero(ranks == 1) / n),
        n_tokens=int(n),
    )


def _topn_set(event: TokenEvent, policy: TruncationPolicy) -> frozenset | None:
    """The policy's truncation set from the stored top-N prefix, or None if
    undecidable at the stored depth. Top-p sets need per-candidate
    probabilities, which the log format does not store, so they are always
    undecidable here."""
    if policy.kind == "topp":
        return None
    if event.topn_ids is None or len(event.topn_ids) < policy.k:
        return None
    return frozenset(event.topn_ids[: policy.k])


def truncation_overlap(
    corpusA: Corpus, corpusB: Corpus, policy: TruncationPolicy
) -> OverlapStat:
    """Mean/std Jaccard overlap of the two models' truncation sets over
    aligned positions of doc_id-paired documents."""
    tok_a = {d.tokenizer_id for d in corpusA.docs}
    tok_b = {d.tokenizer_id for d in corpusB.docs}
    if tok_a != tok_b or len(tok_a) != 1:
        raise TokenizerMismatch(f"tokenizers differ: {sorted(tok_a)} vs {sorted(tok_b)}")
    by_id = {d.doc_id: d for d in corpusB.docs}
    pairs = [(d, by_id[d.doc_id]) for d in corpusA.docs if d.doc_id in by_id]
    if not pairs:
        raise NoAlignedDocs("no doc_ids in common")
    if not any(
        e.topn_ids for d, _ in pairs for e in d.events
    ) or not any(e.topn_ids for _, d in pairs for e in d.events):
        raise MissingTopN("corpora carry no topn_ids")
    jaccards = []
    n_skipped = 0
    for da, db in pairs:
        for ea, eb in zip(da.events, db.events):
            sa = _topn_set(ea, policy)
            sb = _topn_set(eb, policy)
            if sa is None or sb is None:
                n_skipped += 1
                continue
            union = sa | sb
            jaccards.append(len(sa & sb) / len(union))
    if not jaccards:
        return OverlapStat(0.0, 0.0, 0, n_skipped)
    arr = np.asarray(jaccards)
    return OverlapStat(
        mean_jaccard=float(arr.mean()),
        std_jaccard=float(arr.std()),
        n_positions=int(arr.size),
        n_skipped=n_skipped,
    )
