import pytest

from bsl_adapter.dummy import DummyModel


@pytest.fixture(scope="session")
def model():
    return DummyModel(vocab_size=64, seed=0)


@pytest.fixture(scope="session")
def small_model():
    return DummyModel(vocab_size=8, seed=1)
