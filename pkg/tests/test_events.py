import numpy as np
import pytest

from blindspot import events
from blindspot.errors import DuplicateDocId, InvariantViolation, MalformedLine
from blindspot.events import Corpus, parse_event_log, validate_corpus, write_event_log

from conftest import make_doc, make_event, random_corpus


def test_round_trip_single_doc():
    doc = make_doc(events=[
        make_event(position=0, token_id=3, rank=4, logprob=-2.5, cum_mass_before=0.7),
        make_event(position=1, token_id=0, rank=1, logprob=-0.5, cum_mass_before=0.0),
        make_event(position=2, token_id=1, rank=2, logprob=-1.2, cum_mass_before=0.4,
                   pos_tag="NOUN", topn_ids=(0, 1, 2)),
    ])
    corpus = Corpus(docs=[doc])
    again = parse_event_log(write_event_log(corpus))
    assert len(again.docs) == 1
    assert len(again.docs[0].events) == 3
    assert again.docs[0] == doc


def test_empty_corpus_header_only():
    data = write_event_log(Corpus(docs=[]))
    assert data.count(b"\n") == 1
    assert parse_event_log(data).docs == []


def test_float_round_trip_exact():
    doc = make_doc(events=[make_event(logprob=-2.302585092994046)])
    again = parse_event_log(write_event_log(Corpus(docs=[doc])))
    assert again.docs[0].events[0].logprob == -2.302585092994046


def test_round_trip_random_corpora():
    rng = np.random.default_rng(7)
    for _ in range(50):
        corpus = random_corpus(rng)
        assert parse_event_log(write_event_log(corpus)) == corpus


def test_cum_mass_bound_violation():
    bad = (b'{"schema":1,"kind":"doc","doc_id":"d1","origin":"human","strategy":"human",'
           b'"config":null,"dataset":"x","generator":null,"scoring_model":"m","tokenizer_id":"t"}\n'
           b'{"kind":"ev","i":0,"tid":0,"s":"a","lp":-1.0,"r":2,"cb":1.2,"pos":null,"topn":null}\n')
    with pytest.raises(InvariantViolation) as e:
        parse_event_log(bad)
    assert "cum_mass_before < 1" in e.value.rule


def test_duplicate_doc_id():
    doc = make_doc(doc_id="d1")
    data = write_event_log(Corpus(docs=[doc]))
    body = data.split(b"\n", 1)[1]
    with pytest.raises(DuplicateDocId):
        parse_event_log(data + body)


def test_malformed_line_number():
    with pytest.raises(MalformedLine) as e:
        parse_event_log(b'{"schema":1,"kind":"corpus"}\nnot json\n')
    assert e.value.line_no == 2


def test_event_before_doc():
    with pytest.raises(MalformedLine):
        parse_event_log(b'{"kind":"ev","i":0,"tid":0,"s":"a","lp":-1.0,"r":1,"cb":0.0}\n')


def test_validate_valid_corpus_empty_report():
    assert validate_corpus(Corpus(docs=[make_doc()])).ok


def test_validate_rank1_rule():
    doc = make_doc(events=[make_event(rank=1, cum_mass_before=0.3)])
    report = validate_corpus(Corpus(docs=[doc]))
    assert len(report.violations) == 1
    assert "rank = 1" in report.violations[0].rule


def test_validate_positive_logprob():
    doc = make_doc(events=[make_event(logprob=0.1, rank=2, cum_mass_before=0.5)])
    report = validate_corpus(Corpus(docs=[doc]))
    assert any("logprob" in v.rule for v in report.violations)


def test_validate_position_gap():
    doc = make_doc(events=[make_event(position=0), make_event(position=2)])
    report = validate_corpus(Corpus(docs=[doc]))
    assert any("0..T-1" in v.rule for v in report.violations)


def test_validate_human_strategy_rule():
    doc = make_doc(origin="human", strategy="topk")
    report = validate_corpus(Corpus(docs=[doc]))
    assert any("strategy=human" in v.rule for v in report.violations)


def test_validate_never_raises_on_junk_fields():
    doc = make_doc(events=[make_event(logprob=5.0, rank=0, cum_mass_before=-0.5)])
    report = validate_corpus(Corpus(docs=[doc]))
    assert not report.ok


def test_topn_consistency_rule():
    ev = make_event(rank=2, token_id=7, cum_mass_before=0.4, topn_ids=(3, 4, 5))
    assert "topn_ids[rank-1] = token_id" in events.check_event(ev)
