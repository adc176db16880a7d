import numpy as np
import pytest

from blindspot.events import Corpus, DocRecord, TokenEvent


def make_event(position=0, token_id=0, surface="w0", logprob=-1.0, rank=1,
               cum_mass_before=0.0, pos_tag=None, topn_ids=None):
    return TokenEvent(position, token_id, surface, logprob, rank,
                      cum_mass_before, pos_tag, topn_ids)


def make_doc(doc_id="d0", events=None, origin="human", strategy="human", **kw):
    if events is None:
        events = [make_event()]
    return DocRecord(
        doc_id=doc_id,
        origin=origin,
        strategy=strategy,
        dataset=kw.pop("dataset", "testset"),
        scoring_model=kw.pop("scoring_model", "toy"),
        tokenizer_id=kw.pop("tokenizer_id", "toy-tok"),
        events=events,
        **kw,
    )


def random_corpus(rng: np.random.Generator, n_docs=3, max_events=12) -> Corpus:
    """A random but invariant-respecting corpus (toy unigram scoring)."""
    docs = []
    for d in range(n_docs):
        vocab = int(rng.integers(4, 40))
        probs = rng.dirichlet(np.ones(vocab))
        probs = np.sort(probs)[::-1]
        cum = np.concatenate(([0.0], np.cumsum(probs)[:-1]))
        T = int(rng.integers(1, max_events + 1))
        ids = rng.integers(0, vocab, size=T)
        events = []
        for t, i in enumerate(ids):
            topn = tuple(range(vocab)) if rng.random() < 0.5 else None
            events.append(
                TokenEvent(
                    position=t,
                    token_id=int(i),
                    surface=f"w{i}",
                    logprob=float(np.log(probs[i])),
                    rank=int(i) + 1,
                    cum_mass_before=float(cum[i]),
                    pos_tag=None,
                    topn_ids=topn,
                )
            )
        origin = "human" if rng.random() < 0.5 else "machine"
        docs.append(
            DocRecord(
                doc_id=f"d{d}",
                origin=origin,
                strategy="human" if origin == "human" else "topk",
                config=None if origin == "human" else "k=10",
                dataset="rand",
                generator=None if origin == "human" else "toy-gen",
                scoring_model="toy",
                tokenizer_id="toy-tok",
                events=events,
                raw_text=" ".join(f"w{i}" for i in ids) if rng.random() < 0.5 else None,
            )
        )
    return Corpus(docs=docs)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
