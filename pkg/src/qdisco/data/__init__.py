"""Bundled desk-scale corpus, lexicon, and a synthetic 50-word embedding file."""
from importlib import resources


def path(name: str):
    """Filesystem path of a bundled data file."""
    return resources.files(__package__) / name
