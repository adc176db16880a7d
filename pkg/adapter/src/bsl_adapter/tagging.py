"""Word-level UD coarse tagging and projection onto model tokens.

Two word-tagger backends: spaCy when installed, and a small closed-class
lexicon tagger that needs no external resources. The lexicon tagger is a
most-frequent-class baseline (closed classes + suffix heuristics, default
NOUN); treat its output as approximate.

Projection rule: a model token inherits the tag of the word containing its
first non-whitespace character.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .errors import TaggerUnavailable

_WORD_RE = re.compile(r"\w+(?:['’]\w+)?|[^\w\s]")

_CLOSED = {
    "DET": {"a", "an", "the", "this", "that", "these", "those", "each",
            "every", "either", "neither", "some", "any", "no", "all", "both"},
    "ADP": {"of", "in", "on", "at", "by", "for", "with", "from", "into",
            "over", "under", "between", "through", "during", "about",
            "against", "across", "after", "before", "above", "below",
            "off", "near", "without", "within", "upon", "toward", "towards"},
    "PRON": {"i", "you", "he", "she", "it", "we", "they", "me", "him", "her",
             "us", "them", "my", "your", "his", "its", "our", "their",
             "mine", "yours", "hers", "ours", "theirs", "myself", "yourself",
             "himself", "herself", "itself", "ourselves", "themselves",
             "who", "whom", "whose", "which", "what", "something",
             "anything", "nothing", "everything", "someone", "anyone",
             "everyone"},
    "CCONJ": {"and", "or", "but", "nor", "yet"},
    "SCONJ": {"if", "because", "although", "though", "while", "whereas",
              "unless", "since", "whether", "until", "when", "where", "as"},
    "AUX": {"am", "is", "are", "was", "were", "be", "been", "being", "do",
            "does", "did", "have", "has", "had", "will", "would", "shall",
            "should", "can", "could", "may", "might", "must"},
    "PART": {"not", "n't", "to"},
    "ADV": {"very", "too", "quite", "never", "always", "often", "now",
            "then", "here", "there", "also", "just", "still", "again",
            "soon", "perhaps", "maybe", "however"},
    "NUM": {"zero", "one", "two", "three", "four", "five", "six", "seven",
            "eight", "nine", "ten", "hundred", "thousand", "million",
            "billion"},
}

_COMMON_VERBS = {
    "sat", "ran", "went", "said", "say", "says", "made", "make", "makes",
    "took", "take", "takes", "saw", "see", "sees", "came", "come", "comes",
    "got", "get", "gets", "gave", "give", "gives", "found", "find", "finds",
    "told", "tell", "tells", "left", "leave", "leaves", "felt", "feel",
    "feels", "put", "puts", "brought", "bring", "brings", "began", "begin",
    "begins", "kept", "keep", "keeps", "held", "hold", "holds", "wrote",
    "write", "writes", "stood", "stand", "stands", "heard", "hear", "hears",
    "let", "lets", "meant", "mean", "means", "set", "sets", "met", "meet",
    "meets", "paid", "pay", "pays", "spoke", "speak", "speaks", "lay",
    "lie", "lies", "led", "lead", "leads", "read", "reads", "grew", "grow",
    "grows", "lost", "lose", "loses", "fell", "fall", "falls", "sent",
    "send", "sends", "built", "build", "builds", "drew", "draw", "draws",
    "broke", "break", "breaks", "spent", "spend", "spends", "caught",
    "catch", "catches", "bought", "buy", "buys", "ate", "eat", "eats",
    "slept", "sleep", "sleeps", "knew", "know", "knows", "thought",
    "think", "thinks", "ask", "asks", "asked", "use", "uses", "used",
    "want", "wants", "wanted", "look", "looks", "looked", "seem", "seems",
    "seemed", "go", "goes", "run", "runs", "sit", "sits",
}


@dataclass(frozen=True)
class WordTag:
    start: int
    end: int
    word: str
    tag: str


def word_spans(text: str) -> list[tuple[int, int, str]]:
    return [(m.start(), m.end(), m.group()) for m in _WORD_RE.finditer(text)]


def _lexicon_tag(word: str, index: int) -> str:
    low = word.lower()
    if not any(c.isalnum() for c in word):
        return "PUNCT"
    if re.fullmatch(r"[\d.,]+", word):
        return "NUM"
    for tag, words in _CLOSED.items():
        if low in words:
            return tag
    if low in _COMMON_VERBS:
        return "VERB"
    if low.endswith("ly") and len(low) > 4:
        return "ADV"
    if re.search(r"(?:ing|ed|ize|ise|ify)$", low) and len(low) > 4:
        return "VERB"
    if index > 0 and word[:1].isupper():
        return "PROPN"
    return "NOUN"


def _tag_lexicon(text: str) -> list[WordTag]:
    return [WordTag(s, e, w, _lexicon_tag(w, i))
            for i, (s, e, w) in enumerate(word_spans(text))]


def _tag_spacy(text: str) -> list[WordTag]:
    try:
        import spacy
    except ImportError as e:
        raise TaggerUnavailable("spacy", str(e)) from None
    try:
        nlp = _tag_spacy._nlp
    except AttributeError:
        try:
            nlp = spacy.load("en_core_web_sm", disable=["parser", "ner", "lemmatizer"])
        except OSError as e:
            raise TaggerUnavailable("spacy", f"model load failed: {e}") from None
        _tag_spacy._nlp = nlp
    doc = nlp(text)
    return [WordTag(t.idx, t.idx + len(t.text), t.text, t.pos_)
            for t in doc if not t.is_space]


def tag_text(text: str, backend: str = "auto") -> list[WordTag]:
    """UD coarse tags at word level; empty text gives an empty list."""
    if not text.strip():
        return []
    if backend == "spacy":
        return _tag_spacy(text)
    if backend == "lexicon":
        return _tag_lexicon(text)
    if backend == "auto":
        try:
            return _tag_spacy(text)
        except TaggerUnavailable:
            return _tag_lexicon(text)
    raise TaggerUnavailable(backend, "unknown backend")


def token_offsets(text: str, surfaces: Sequence[str]) -> list[tuple[int, int]]:
    """Character spans of model-token surfaces inside the source text,
    found left to right. Raises ValueError if a surface cannot be located.
    """
    spans = []
    cursor = 0
    for s in surfaces:
        probe = s.strip() or s
        idx = text.find(probe, cursor)
        if idx < 0:
            raise ValueError(f"token surface {s!r} not found after offset {cursor}")
        spans.append((idx, idx + len(probe)))
        cursor = idx + len(probe)
    return spans


def project_tags(
    words: Sequence[WordTag],
    offsets: Sequence[tuple[int, int]],
) -> tuple[list[str | None], list[int | None]]:
    """Project word tags onto model tokens by first-character containment.

    Returns (per-token tags, per-token word index) so the alignment can be
    audited. Tokens whose first character falls inside no word get None.
    """
    tags: list[str | None] = []
    align: list[int | None] = []
    for start, _ in offsets:
        hit = None
        for wi, w in enumerate(words):
            if w.start <= start < w.end:
                hit = wi
                break
        tags.append(words[hit].tag if hit is not None else None)
        align.append(hit)
    return tags, align
