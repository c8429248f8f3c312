import pytest

from dimerlab.corpus import builtin_corpus, corpus_holes


@pytest.fixture(scope="session")
def corpus():
    return builtin_corpus()


@pytest.fixture(scope="session")
def holes(corpus):
    return {name: corpus_holes(name, g) for name, g in corpus.items()}
