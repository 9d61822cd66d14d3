import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import pca_eigh_oracle
from qdisco.embeddings import (
    EmbeddingVector,
    Vocabulary,
    cosine,
    export_reduced_csv,
    inner_product,
    load_embeddings,
    nearest_neighbors,
    reduce_dimensions,
)


def test_load_two_words():
    vocab, missing = load_embeddings(["cat 1 0 0", "dog 0 1 0"])
    assert len(vocab) == 2 and vocab.dimension == 3
    assert missing == set()
    np.testing.assert_array_equal(vocab.vector("cat"), [1, 0, 0])


def test_filter_reports_missing():
    vocab, missing = load_embeddings(["cat 1 0 0", "dog 0 1 0"], tokens={"cat", "fox"})
    assert len(vocab) == 1
    assert missing == {"fox"}


def test_inconsistent_dimension():
    with pytest.raises(ValueError, match="dimension"):
        load_embeddings(["cat 1 0 0", "dog 0 1"])


def test_non_numeric_field():
    with pytest.raises(ValueError, match="non-numeric"):
        load_embeddings(["cat 1 zero 0"])


def test_empty_stream():
    with pytest.raises(ValueError, match="empty"):
        load_embeddings([])


def test_real_sized_slice_against_line_parser():
    rng = np.random.default_rng(0)
    rows = rng.normal(size=(50, 300))
    lines = [f"word{i} " + " ".join(f"{x:.8f}" for x in rows[i]) for i in range(50)]
    vocab, _ = load_embeddings(io.StringIO("\n".join(lines)))
    assert vocab.dimension == 300 and len(vocab) == 50

    # independent parse: split each line by hand and accumulate the dot product
    for a, b in [(0, 1), (10, 37), (42, 49)]:
        fields_a = lines[a].split()
        fields_b = lines[b].split()
        expected = sum(float(x) * float(y) for x, y in zip(fields_a[1:], fields_b[1:]))
        got = inner_product(vocab.entry(f"word{a}"), vocab.entry(f"word{b}"))
        assert got == pytest.approx(expected, abs=1e-12)


def test_inner_product_orthogonal():
    a = EmbeddingVector("a", np.array([1.0, 0.0, 0.0]))
    b = EmbeddingVector("b", np.array([0.0, 1.0, 0.0]))
    assert inner_product(a, b) == 0.0


def test_cosine_self_is_one():
    v = EmbeddingVector("v", np.array([0.3, -0.2, 4.0]))
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)


def test_cosine_zero_vector_rejected():
    z = EmbeddingVector("z", np.zeros(3))
    v = EmbeddingVector("v", np.ones(3))
    with pytest.raises(ValueError, match="zero"):
        cosine(z, v)


def test_dimension_mismatch():
    with pytest.raises(ValueError, match="mismatch"):
        inner_product(EmbeddingVector("a", np.ones(3)), EmbeddingVector("b", np.ones(4)))


@settings(max_examples=50, deadline=None)
@given(
    a=st.lists(st.floats(-10, 10), min_size=4, max_size=4),
    b=st.lists(st.floats(-10, 10), min_size=4, max_size=4),
)
def test_cosine_symmetry_and_range(a, b):
    va = EmbeddingVector("a", np.array(a))
    vb = EmbeddingVector("b", np.array(b))
    if np.linalg.norm(va.values) == 0 or np.linalg.norm(vb.values) == 0:
        return
    assert cosine(va, vb) == pytest.approx(cosine(vb, va), abs=1e-12)
    assert -1 - 1e-12 <= cosine(va, vb) <= 1 + 1e-12


def _vocab_from_matrix(matrix):
    tokens = tuple(f"w{i}" for i in range(len(matrix)))
    return Vocabulary(dimension=matrix.shape[1], tokens=tokens, matrix=np.asarray(matrix, dtype=float))


def test_reduce_rank_deficient_pads_zero():
    rng = np.random.default_rng(1)
    basis = rng.normal(size=(2, 6))
    coeffs = rng.normal(size=(5, 2))
    vocab = _vocab_from_matrix(coeffs @ basis)
    with pytest.warns(UserWarning, match="independent directions"):
        reduced = reduce_dimensions(vocab)
    assert vocab.reduction_rank == 2
    for coords in reduced.values():
        assert coords[2] == 0.0


def test_reduce_injective_on_distinct_inputs():
    vocab = _vocab_from_matrix(np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))
    with pytest.warns(UserWarning):
        reduced = reduce_dimensions(vocab)
    assert not np.allclose(reduced["w0"], reduced["w1"])


def test_reduce_matches_eigendecomposition_oracle():
    rng = np.random.default_rng(2)
    matrix = rng.normal(size=(10, 300))
    vocab = _vocab_from_matrix(matrix)
    reduced = reduce_dimensions(vocab)
    components = pca_eigh_oracle(matrix, components=3)
    centered = matrix - matrix.mean(axis=0)
    expected = centered @ components.T
    got = np.array([reduced[f"w{i}"] for i in range(10)])
    np.testing.assert_allclose(got, expected, atol=1e-8)


def test_reduce_deterministic_bitwise():
    rng = np.random.default_rng(3)
    matrix = rng.normal(size=(8, 20))
    first = reduce_dimensions(_vocab_from_matrix(matrix))
    second = reduce_dimensions(_vocab_from_matrix(matrix.copy()))
    for token in first:
        assert first[token].tobytes() == second[token].tobytes()


def test_reduce_rejects_low_dimension():
    with pytest.raises(ValueError, match=">= 3"):
        reduce_dimensions(_vocab_from_matrix(np.ones((4, 2))))


def test_nearest_neighbors_constructed_geometry():
    vocab = _vocab_from_matrix(np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0]]))
    vocab = Vocabulary(2, ("a", "b", "c"), vocab.matrix)
    assert nearest_neighbors(vocab, "a", 1) == ["b"]
    assert nearest_neighbors(vocab, "a", 2) == ["b", "c"]


def test_nearest_neighbors_errors():
    vocab = Vocabulary(2, ("a", "b"), np.eye(2))
    with pytest.raises(KeyError):
        nearest_neighbors(vocab, "zzz", 1)
    with pytest.raises(ValueError, match="smaller"):
        nearest_neighbors(vocab, "a", 2)


def test_nearest_neighbors_matches_exhaustive_scan(bundled_vocab):
    got = nearest_neighbors(bundled_vocab, "cooks", 5)
    query = bundled_vocab.entry("cooks")
    scored = sorted(
        ((-cosine(query, bundled_vocab.entry(t)), t) for t in bundled_vocab.tokens if t != "cooks"),
    )
    assert got == [t for _, t in scored[:5]]
    assert "bakes" in got or "prepares" in got  # same cooking cluster


def test_export_reduced_csv(tmp_path, bundled_vocab):
    rng = np.random.default_rng(4)
    vocab = _vocab_from_matrix(rng.normal(size=(6, 10)))
    reduce_dimensions(vocab)
    out = tmp_path / "reduced.csv"
    export_reduced_csv(vocab, out)
    lines = out.read_text().splitlines()
    assert lines[0] == "token,x,y,z"
    assert len(lines) == 7
    token, x, y, z = lines[1].split(",")
    np.testing.assert_allclose(
        [float(x), float(y), float(z)], vocab.reduced[token], atol=0
    )
