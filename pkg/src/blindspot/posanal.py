"""Linguistic composition of the blind spot: per-POS exclusion rates and
the frequency-exclusion correlation.

Content and function partitions follow the UD coarse tagset; PUNCT, SYM,
X and INTJ are reported as "other" and excluded from both set means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import NoPosTags, TooFewTags, UnsupportedPolicy
from .events import Corpus
from .stats import pearson
from .truncation import DocFilter, TruncationPolicy, membership

CONTENT_TAGS = frozenset({"NOUN", "PROPN", "VERB", "ADJ", "ADV", "NUM"})
FUNCTION_TAGS = frozenset({"DET", "ADP", "AUX", "CCONJ", "SCONJ", "PRON", "PART"})


def tag_class(tag: str) -> str:
    if tag in CONTENT_TAGS:
        return "content"
    if tag in FUNCTION_TAGS:
        return "function"
    return "other"


@dataclass
class TagStat:
    tag: str
    token_count: int
    excluded_count: int

    @property
    def exclusion_rate(self) -> float:
        return self.excluded_count / self.token_count


@dataclass
class PosProfile:
    policy: TruncationPolicy
    tags: dict[str, TagStat]
    content_mean: float | None  # unweighted over content tags (primary)
    function_mean: float | None
    asymmetry_ratio: float | None
    content_mean_weighted: float | None  # token-weighted companions
    function_mean_weighted: float | None
    degenerate: bool  # a set mean is undefined or the ratio is not finite
    n_tagged: int

    def frequency(self, tag: str) -> float:
        return self.tags[tag].token_count / self.n_tagged

    def weighted_overall_rate(self) -> float:
        """Token-count-weighted mean over all tags; equals the corpus
        exclusion rate when every event is tagged."""
        excluded = sum(t.excluded_count for t in self.tags.values())
        return excluded / self.n_tagged


def _set_means(tags: dict[str, TagStat], members: frozenset) -> tuple[float | None, float | None]:
    present = [t for t in tags.values() if t.tag in members]
    if not present:
        return None, None
    unweighted = sum(t.exclusion_rate for t in present) / len(present)
    total = sum(t.token_count for t in present)
    weighted = sum(t.excluded_count for t in present) / total
    return unweighted, weighted


def pos_exclusion_profile(
    corpus: Corpus, policy: TruncationPolicy, doc_filter: DocFilter = None
) -> PosProfile:
    """Pooled per-tag exclusion rates with content/function asymmetry."""
    if policy.kind not in ("topk", "topp"):
        raise UnsupportedPolicy(f"POS profiling supports topk/topp, got {policy.kind}")
    counts: dict[str, TagStat] = {}
    for doc in corpus.docs:
        if doc_filter is not None and not doc_filter(doc):
            continue
        for ev in doc.events:
            if ev.pos_tag is None:
                continue
            stat = counts.setdefault(ev.pos_tag, TagStat(ev.pos_tag, 0, 0))
            stat.token_count += 1
            if not membership(ev, policy):
                stat.excluded_count += 1
    if not counts:
        raise NoPosTags("no events carry pos_tag")
    content_mean, content_w = _set_means(counts, CONTENT_TAGS)
    function_mean, function_w = _set_means(counts, FUNCTION_TAGS)
    ratio = None
    degenerate = content_mean is None or function_mean is None
    if not degenerate:
        if function_mean == 0.0:
            ratio = math.inf
            degenerate = True
        else:
            ratio = content_mean / function_mean
    return PosProfile(
        policy=policy,
        tags=counts,
        content_mean=content_mean,
        function_mean=function_mean,
        asymmetry_ratio=ratio,
        content_mean_weighted=content_w,
        function_mean_weighted=function_w,
        degenerate=degenerate,
        n_tagged=sum(t.token_count for t in counts.values()),
    )


def frequency_exclusion_correlation(profile: PosProfile) -> tuple[float, float]:
    """Pearson correlation of per-tag corpus frequency vs exclusion rate."""
    tags = [t for t in profile.tags.values() if t.token_count > 0]
    if len(tags) < 3:
        raise TooFewTags(f"need >= 3 tags, got {len(tags)}")
    freqs = [profile.frequency(t.tag) for t in tags]
    rates = [t.exclusion_rate for t in tags]
    return pearson(freqs, rates)


POS_CSV_HEADER = "tag,class,token_count,frequency,exclusion_rate"


def pos_csv_lines(profile: PosProfile) -> list[str]:
    lines = [POS_CSV_HEADER]
    for tag in sorted(profile.tags):
        t = profile.tags[tag]
        lines.append(
            f"{tag},{tag_class(tag)},{t.token_count},"
            f"{profile.frequency(tag)!r},{t.exclusion_rate!r}"
        )
    return lines
