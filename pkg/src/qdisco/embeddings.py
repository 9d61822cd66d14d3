"""Word-embedding store: GloVe-style text ingestion, similarity queries, and the
deterministic 3-dimensional reduction that feeds the Euler-angle encoder.

The reduction is sign-fixed PCA: project onto the top-3 principal components of
the mean-centered matrix, with each component's sign chosen so its
largest-magnitude loading is positive. The same input always yields the same
map, bit for bit.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

_RANK_TOLERANCE = 1e-10


@dataclass(frozen=True)
class EmbeddingVector:
    word: str
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.values.ndim != 1:
            raise ValueError("embedding values must be a flat vector")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"embedding for {self.word!r} contains non-finite entries")


@dataclass
class Vocabulary:
    """Immutable after load; `reduced` is filled once by reduce_dimensions."""

    dimension: int
    tokens: tuple[str, ...]
    matrix: np.ndarray
    reduced: dict[str, np.ndarray] | None = None
    reduction_rank: int | None = None
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if len(set(self.tokens)) != len(self.tokens):
            raise ValueError("duplicate tokens in vocabulary")
        if self.matrix.shape != (len(self.tokens), self.dimension):
            raise ValueError("embedding matrix shape does not match tokens/dimension")
        self._index = {t: i for i, t in enumerate(self.tokens)}

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def vector(self, token: str) -> np.ndarray:
        try:
            return self.matrix[self._index[token]]
        except KeyError:
            raise KeyError(f"token {token!r} not in vocabulary") from None

    def entry(self, token: str) -> EmbeddingVector:
        return EmbeddingVector(token, self.vector(token))


def load_embeddings(source, tokens: set[str] | None = None) -> tuple[Vocabulary, set[str]]:
    """Parse `token v1 ... vD` lines into a Vocabulary.

    With a `tokens` filter only those words are kept; the second return value is
    the set of requested tokens missing from the stream (never an error: absent
    words are exactly what the OOV machinery deals with downstream).
    """
    wanted = None if tokens is None else {t.lower() for t in tokens}
    found_tokens: list[str] = []
    rows: list[np.ndarray] = []
    dimension = None
    seen: set[str] = set()
    for lineno, line in enumerate(_iter_lines(source), start=1):
        parts = line.rstrip("\n").split(" ")
        if len(parts) < 2:
            if not line.strip():
                continue
            raise ValueError(f"embeddings line {lineno}: expected `token v1 ... vD`")
        token = parts[0].lower()
        if token in seen:
            raise ValueError(f"embeddings line {lineno}: duplicate token {token!r}")
        seen.add(token)
        if wanted is not None and token not in wanted:
            continue
        try:
            values = np.array([float(x) for x in parts[1:]], dtype=float)
        except ValueError:
            raise ValueError(f"embeddings line {lineno}: non-numeric field") from None
        if dimension is None:
            dimension = len(values)
        elif len(values) != dimension:
            raise ValueError(
                f"embeddings line {lineno}: dimension {len(values)} != {dimension} seen earlier"
            )
        found_tokens.append(token)
        rows.append(values)

    if dimension is None:
        raise ValueError("embedding stream is empty (or nothing matched the filter)")

    vocab = Vocabulary(dimension=dimension, tokens=tuple(found_tokens), matrix=np.array(rows))
    missing = set() if wanted is None else wanted - set(found_tokens)
    return vocab, missing


def _iter_lines(source):
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


def inner_product(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if a.values.shape != b.values.shape:
        raise ValueError(f"dimension mismatch: {a.values.shape} vs {b.values.shape}")
    return float(np.dot(a.values, b.values))


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if a.values.shape != b.values.shape:
        raise ValueError(f"dimension mismatch: {a.values.shape} vs {b.values.shape}")
    na, nb = np.linalg.norm(a.values), np.linalg.norm(b.values)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for a zero vector")
    return float(np.dot(a.values, b.values) / (na * nb))


def reduce_dimensions(vocab: Vocabulary, normalize: bool = False) -> dict[str, np.ndarray]:
    """Project every word onto the top-3 principal components and store the map.

    `normalize` first scales each word vector to unit length (the reduction is
    otherwise computed on raw vectors). If the vocabulary spans fewer than 3
    directions, missing coordinates are zero-padded and a warning is emitted.
    """
    if len(vocab) == 0:
        raise ValueError("vocabulary is empty")
    if vocab.dimension < 3:
        raise ValueError("need embedding dimension >= 3 to reduce to 3")

    data = vocab.matrix.astype(float, copy=True)
    if normalize:
        norms = np.linalg.norm(data, axis=1, keepdims=True)
        if np.any(norms == 0.0):
            raise ValueError("cannot normalize a zero vector")
        data /= norms
    centered = data - data.mean(axis=0)

    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(singular > _RANK_TOLERANCE * max(singular[0], 1.0)))
    usable = min(rank, 3)

    components = np.zeros((3, vocab.dimension))
    for c in range(usable):
        row = vt[c]
        pivot = int(np.argmax(np.abs(row)))
        components[c] = row if row[pivot] > 0 else -row

    if usable < 3:
        warnings.warn(
            f"vocabulary spans only {usable} independent directions; "
            "remaining reduced coordinates are zero",
            stacklevel=2,
        )

    coords = centered @ components.T
    reduced = {token: coords[i].copy() for i, token in enumerate(vocab.tokens)}
    vocab.reduced = reduced
    vocab.reduction_rank = usable
    return reduced


def nearest_neighbors(vocab: Vocabulary, word: str, k: int) -> list[str]:
    """The k most cosine-similar tokens to `word`, query excluded, ties broken
    lexicographically."""
    if word not in vocab:
        raise KeyError(f"token {word!r} not in vocabulary")
    if k >= len(vocab):
        raise ValueError(f"k={k} must be smaller than the vocabulary size {len(vocab)}")
    query = vocab.entry(word)
    scored = [
        (-cosine(query, vocab.entry(other)), other)
        for other in vocab.tokens
        if other != word
    ]
    scored.sort()
    return [token for _, token in scored[:k]]


def export_reduced_csv(vocab: Vocabulary, path) -> None:
    if vocab.reduced is None:
        raise ValueError("reduce_dimensions has not been run")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("token,x,y,z\n")
        for token in vocab.tokens:
            x, y, z = vocab.reduced[token]
            handle.write(f"{token},{x:.17g},{y:.17g},{z:.17g}\n")
