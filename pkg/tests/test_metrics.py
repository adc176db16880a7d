import math

import pytest

from blindspot.errors import MissingSurface
from blindspot.events import Corpus
from blindspot.metrics import (
    diversity,
    feature_csv_lines,
    feature_table,
    predictability,
)

from conftest import make_doc, make_event


def _doc_with_logprobs(logprobs, doc_id="d0", **kw):
    events = [
        make_event(position=i, logprob=lp, rank=2, cum_mass_before=0.5)
        for i, lp in enumerate(logprobs)
    ]
    return make_doc(doc_id=doc_id, events=events, **kw)


def test_predictability_single():
    assert predictability(_doc_with_logprobs([-2.0])) == -2.0


def test_predictability_mean():
    assert predictability(_doc_with_logprobs([-1.0, -2.0, -3.0])) == pytest.approx(-2.0)


def test_predictability_shift_equivariance():
    logprobs = [-0.3, -1.7, -2.9, -4.1]
    delta = -0.25
    base = predictability(_doc_with_logprobs(logprobs))
    shifted = predictability(_doc_with_logprobs([lp + delta for lp in logprobs]))
    assert shifted == pytest.approx(base + delta, abs=1e-12)


def test_diversity_all_distinct():
    assert diversity(["a", "b", "c", "d"]) == 100.0


def test_diversity_ababab():
    assert diversity("a b a b a b".split()) == pytest.approx(100 * (2 / 5) * (2 / 4) * (2 / 3))


def test_diversity_constant():
    assert diversity(["a"] * 5) == pytest.approx(100 * (1 / 4) * (1 / 3) * (1 / 2))


def test_diversity_short_text_neutral_factors():
    assert diversity(["a"]) == 100.0
    assert diversity(["a", "b"]) == 100.0  # one bigram, unique
    assert diversity(["a", "a"]) == 100.0  # single bigram is trivially unique


def test_diversity_empty_warns():
    with pytest.warns(UserWarning):
        assert diversity([]) == 100.0


def test_diversity_bounds_random():
    import numpy as np

    rng = np.random.default_rng(0)
    for _ in range(200):
        tokens = [f"w{rng.integers(0, 5)}" for _ in range(rng.integers(1, 40))]
        d = diversity(tokens)
        assert 0.0 <= d <= 100.0


def test_diversity_repetition_never_increases():
    tokens = "the cat sat on the mat quite happily today".split()
    base = diversity(tokens)
    repeated = diversity(tokens + tokens[:4])  # repeats an existing 4-gram
    assert repeated <= base


def test_feature_table_rows_and_metadata():
    docs = [
        _doc_with_logprobs([-1.0, -3.0], doc_id="a", raw_text="x y z w x y"),
        _doc_with_logprobs([-2.0], doc_id="b", origin="machine", strategy="topk",
                           config="k=10", generator="toy-gen", raw_text="p q r"),
    ]
    rows = feature_table(Corpus(docs=docs))
    assert [r.doc_id for r in rows] == ["a", "b"]
    assert rows[0].label == "human"
    assert rows[1].label == "machine"
    assert rows[1].strategy == "topk"
    assert rows[1].generator == "toy-gen"
    assert rows[0].predictability == pytest.approx(-2.0)


def test_feature_table_surface_fallback():
    events = [
        make_event(position=0, surface="Hello", logprob=-1.0, rank=2, cum_mass_before=0.5),
        make_event(position=1, surface=" world", logprob=-2.0, rank=2, cum_mass_before=0.5),
        make_event(position=2, surface=" again", logprob=-3.0, rank=2, cum_mass_before=0.5),
    ]
    doc = make_doc(events=events)  # no raw_text
    rows = feature_table(Corpus(docs=[doc]))
    assert rows[0].diversity == 100.0  # "Hello world again" all distinct


def test_feature_table_missing_surface():
    events = [make_event(surface="", logprob=-1.0)]
    doc = make_doc(events=events)
    with pytest.raises(MissingSurface):
        feature_table(Corpus(docs=[doc]))


def test_feature_csv_shape():
    doc = _doc_with_logprobs([-1.0], raw_text="a b c")
    lines = feature_csv_lines(feature_table(Corpus(docs=[doc])))
    assert lines[0] == "doc_id,label,strategy,config,dataset,generator,predictability,diversity"
    assert lines[1].startswith("d0,human,human,")
