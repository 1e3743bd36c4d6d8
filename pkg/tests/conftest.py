from pathlib import Path

import pytest

from treebdy import corpus

DATA = Path(__file__).resolve().parent.parent / "data" / "graphs"


@pytest.fixture
def theta():
    return corpus.theta()


@pytest.fixture
def loop():
    return corpus.single_loop()


@pytest.fixture
def path2():
    return corpus.path(2)


@pytest.fixture
def k6():
    return corpus.complete(6)


@pytest.fixture(scope="session")
def small_corpus():
    return corpus.exhaustive_corpus(3, 4)


@pytest.fixture
def data_dir():
    return DATA
