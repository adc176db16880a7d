"""Token-event log data model and its line-delimited JSON codec.

A ``.bsl.jsonl`` file starts with a corpus header line
``{"schema": 1, "kind": "corpus"}``, followed by one ``"kind": "doc"``
header line per document and one ``"kind": "ev"`` line per token event.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Iterator

from .errors import DuplicateDocId, InvariantViolation, MalformedLine

SCHEMA_VERSION = 1

ORIGINS = ("human", "machine")
STRATEGIES = ("beam", "contrastive", "topk", "topp", "temperature", "human")


@dataclass(frozen=True)
class TokenEvent:
    position: int
    token_id: int
    surface: str
    logprob: float
    rank: int
    cum_mass_before: float
    pos_tag: str | None = None
    topn_ids: tuple[int, ...] | None = None


@dataclass
class DocRecord:
    doc_id: str
    origin: str
    dataset: str
    scoring_model: str
    tokenizer_id: str
    events: list[TokenEvent]
    generator: str | None = None
    strategy: str | None = None
    config: str | None = None
    raw_text: str | None = None


@dataclass
class Corpus:
    docs: list[DocRecord]
    schema_version: int = SCHEMA_VERSION


@dataclass(frozen=True)
class Violation:
    doc_id: str
    position: int | None
    rule: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_event(ev: TokenEvent) -> list[str]:
    """Rule names of every invariant the event violates (empty if valid)."""
    rules = []
    if ev.position < 0:
        rules.append("position >= 0")
    if ev.token_id < 0:
        rules.append("token_id >= 0")
    if not ev.logprob <= 0.0:
        rules.append("logprob <= 0")
    if ev.rank < 1:
        rules.append("rank >= 1")
    if not (0.0 <= ev.cum_mass_before < 1.0):
        rules.append("0 <= cum_mass_before < 1")
    else:
        if ev.cum_mass_before + math.exp(min(ev.logprob, 0.0)) > 1.0 + 1e-6:
            rules.append("cum_mass_before + exp(logprob) <= 1 + 1e-6")
        if ev.rank == 1 and ev.cum_mass_before > 1e-9:
            rules.append("rank = 1 implies cum_mass_before = 0")
    if (
        ev.topn_ids is not None
        and 1 <= ev.rank <= len(ev.topn_ids)
        and ev.topn_ids[ev.rank - 1] != ev.token_id
    ):
        rules.append("topn_ids[rank-1] = token_id")
    return rules


def check_doc(doc: DocRecord) -> list[Violation]:
    violations = []
    if doc.origin not in ORIGINS:
        violations.append(Violation(doc.doc_id, None, "origin in {human, machine}"))
    if doc.origin == "human" and doc.strategy != "human":
        violations.append(Violation(doc.doc_id, None, "origin=human implies strategy=human"))
    if not doc.events:
        violations.append(Violation(doc.doc_id, None, "at least one event"))
    for i, ev in enumerate(doc.events):
        if ev.position != i:
            violations.append(Violation(doc.doc_id, ev.position, "positions are exactly 0..T-1"))
        for rule in check_event(ev):
            violations.append(Violation(doc.doc_id, ev.position, rule))
    return violations


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Total validation: collects every violation, never raises."""
    report = ValidationReport()
    seen = set()
    for doc in corpus.docs:
        if doc.doc_id in seen:
            report.violations.append(Violation(doc.doc_id, None, "doc_ids unique"))
        seen.add(doc.doc_id)
        report.violations.extend(check_doc(doc))
    return report


# --- codec ---

def _doc_header(doc: DocRecord) -> dict:
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
    return head


def _event_obj(ev: TokenEvent) -> dict:
    return {
        "kind": "ev",
        "i": ev.position,
        "tid": ev.token_id,
        "s": ev.surface,
        "lp": ev.logprob,
        "r": ev.rank,
        "cb": ev.cum_mass_before,
        "pos": ev.pos_tag,
        "topn": list(ev.topn_ids) if ev.topn_ids is not None else None,
    }


def write_event_log(corpus: Corpus, out: IO[bytes] | None = None) -> bytes | None:
    """Serialize a corpus; returns bytes when no output stream is given."""
    buf = out if out is not None else io.BytesIO()

    def emit(obj):
        line = json.dumps(obj, ensure_ascii=False, separators=(",", ":"))
        buf.write(line.encode("utf-8"))
        buf.write(b"\n")

    emit({"schema": corpus.schema_version, "kind": "corpus"})
    for doc in corpus.docs:
        emit(_doc_header(doc))
        for ev in doc.events:
            emit(_event_obj(ev))
    if out is None:
        return buf.getvalue()
    return None


def _iter_lines(stream) -> Iterator[str]:
    if isinstance(stream, bytes):
        stream = io.BytesIO(stream)
    elif isinstance(stream, str):
        stream = io.StringIO(stream)
    for raw in stream:
        if isinstance(raw, bytes):
            yield raw.decode("utf-8")
        else:
            yield raw


_DOC_KEYS = ("doc_id", "origin", "strategy", "config", "dataset",
             "generator", "scoring_model", "tokenizer_id")
_EV_KEYS = ("i", "tid", "s", "lp", "r", "cb")


def parse_event_log(stream: bytes | str | IO[bytes] | Iterable[str]) -> Corpus:
    """Parse a ``.bsl.jsonl`` stream into a validated Corpus.

    Raises MalformedLine, InvariantViolation (carrying the offending line
    number) or DuplicateDocId on the first problem encountered.
    """
    docs: list[DocRecord] = []
    seen_ids: set[str] = set()
    cur: DocRecord | None = None
    cur_line = 0
    schema = SCHEMA_VERSION

    def finalize(doc: DocRecord, line_no: int):
        for v in check_doc(doc):
            raise InvariantViolation(v.doc_id, v.position, v.rule, line_no)
        docs.append(doc)

    line_no = 0
    for line_no, line in enumerate(_iter_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise MalformedLine(line_no, f"invalid JSON: {e}") from None
        if not isinstance(obj, dict) or "kind" not in obj:
            raise MalformedLine(line_no, "missing 'kind'")
        kind = obj["kind"]
        if kind == "corpus":
            schema = int(obj.get("schema", SCHEMA_VERSION))
        elif kind == "doc":
            if cur is not None:
                finalize(cur, cur_line)
            missing = [k for k in _DOC_KEYS if k not in obj]
            if missing:
                raise MalformedLine(line_no, f"doc line missing keys {missing}")
            if obj["doc_id"] in seen_ids:
                raise DuplicateDocId(obj["doc_id"], line_no)
            seen_ids.add(obj["doc_id"])
            cur = DocRecord(
                doc_id=obj["doc_id"],
                origin=obj["origin"],
                strategy=obj["strategy"],
                config=obj["config"],
                dataset=obj["dataset"],
                generator=obj["generator"],
                scoring_model=obj["scoring_model"],
                tokenizer_id=obj["tokenizer_id"],
                raw_text=obj.get("raw_text"),
                events=[],
            )
            cur_line = line_no
        elif kind == "ev":
            if cur is None:
                raise MalformedLine(line_no, "event line before any doc header")
            missing = [k for k in _EV_KEYS if k not in obj]
            if missing:
                raise MalformedLine(line_no, f"event line missing keys {missing}")
            try:
                ev = TokenEvent(
                    position=int(obj["i"]),
                    token_id=int(obj["tid"]),
                    surface=str(obj["s"]),
                    logprob=float(obj["lp"]),
                    rank=int(obj["r"]),
                    cum_mass_before=float(obj["cb"]),
                    pos_tag=obj.get("pos"),
                    topn_ids=tuple(obj["topn"]) if obj.get("topn") is not None else None,
                )
            except (TypeError, ValueError) as e:
                raise MalformedLine(line_no, f"bad event field: {e}") from None
            rules = check_event(ev)
            if rules:
                raise InvariantViolation(cur.doc_id, ev.position, rules[0], line_no)
            cur.events.append(ev)
        else:
            raise MalformedLine(line_no, f"unknown kind {kind!r}")
    if cur is not None:
        finalize(cur, cur_line)
    return Corpus(docs=docs, schema_version=schema)


def load_event_log(path) -> Corpus:
    with open(path, "rb") as f:
        return parse_event_log(f)


def dump_event_log(corpus: Corpus, path) -> None:
    with open(path, "wb") as f:
        write_event_log(corpus, f)
