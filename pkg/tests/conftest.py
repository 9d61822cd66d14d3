import sys
from pathlib import Path

import pytest

from qdisco import data, grammar
from qdisco.engine import available_backends, use_backend

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(params=available_backends())
def backend(request):
    """Run the test once per available gate kernel, restoring auto-selection after."""
    use_backend(request.param)
    yield request.param
    use_backend("auto")


@pytest.fixture(scope="session")
def bundled_lexicon():
    return grammar.load_lexicon(data.path("lexicon.tsv"))


@pytest.fixture(scope="session")
def bundled_train():
    return grammar.load_corpus(data.path("train.tsv"))


@pytest.fixture(scope="session")
def bundled_vocab():
    from qdisco.embeddings import load_embeddings

    vocab, missing = load_embeddings(data.path("embeddings_50d.txt"))
    assert not missing
    return vocab
