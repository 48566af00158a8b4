import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from projrep.errors import DimensionCapError
from projrep.glmodules import (
    DominantLabels,
    build_irreducible,
    cached_module,
    dominant_gaps,
    highest_weight_vectors,
    module_from_json,
    module_to_json,
    pieri_index_set,
    tensor_generator,
    tensor_weights,
    validate_module,
    weight_add,
    weight_from_labels,
    weight_indicator_projector,
    weight_of_vector,
    weyl_dimension,
)

SMALL_SWEEP = [
    (1, (), F(0)), (1, (), F(-2)), (1, (), F(1, 2)),
    (2, (0,), F(0)), (2, (1,), F(1)), (2, (2,), F(-1)), (2, (1,), F(1, 2)),
    (3, (0, 0), F(0)), (3, (1, 0), F(1)), (3, (1, 1), F(-2)), (3, (2, 1), F(1, 2)),
]


def test_weight_from_labels_examples():
    assert weight_from_labels(DominantLabels(2, (0,), F(0))) == (0, 0)
    assert weight_from_labels(DominantLabels(2, (1,), F(1))) == (1, 0)
    assert weight_from_labels(DominantLabels(3, (1, 0), F(1))) == (1, 0, 0)


def test_weight_of_vector_examples():
    lab = DominantLabels(2, (1,), F(1))
    assert weight_of_vector(lab, (0,)) == weight_from_labels(lab)
    assert weight_of_vector(lab, (1,)) == (0, 1)
    assert weight_of_vector(DominantLabels(3, (1, 0), F(1)), (1, 0)) == (0, 1, 0)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 4),
    st.data(),
)
def test_weight_of_vector_is_root_shift(n, data):
    dynkin = tuple(data.draw(st.integers(0, 3)) for _ in range(n - 1))
    b = data.draw(st.builds(F, st.integers(-4, 4), st.integers(1, 3)))
    ks = tuple(data.draw(st.integers(0, 3)) for _ in range(n - 1))
    lab = DominantLabels(n, dynkin, b)
    nu = weight_of_vector(lab, ks)
    expected = list(weight_from_labels(lab))
    for i, k in enumerate(ks):
        expected[i] -= k
        expected[i + 1] += k
    assert nu == tuple(expected)


def test_weyl_dimension_examples():
    assert weyl_dimension((0, 0, 0, 0)) == 1
    assert weyl_dimension((7, 0)) == 8
    assert weyl_dimension((1, 1, 0)) == 3
    with pytest.raises(ValueError):
        weyl_dimension((0, 1))
    with pytest.raises(ValueError):
        weyl_dimension((F(1, 2), 0))


def test_pieri_examples():
    assert pieri_index_set((3, 1), 0) == ((0, 0),)
    assert pieri_index_set((1, 0), 1) == ((1, 0), (0, 1))
    assert pieri_index_set((1, 1, 1), 2) == ((2, 0, 0),)


def test_pieri_constraints_hold():
    mu = (F(5, 2), F(3, 2), F(-1, 2))
    for k in range(5):
        for c in pieri_index_set(mu, k):
            assert sum(c) == k
            gaps = dominant_gaps(mu)
            for s in range(len(mu) - 1):
                assert c[s + 1] <= gaps[s]


@pytest.mark.parametrize("n,dynkin,b", SMALL_SWEEP)
def test_pieri_dimension_identity(n, dynkin, b):
    mu = weight_from_labels(DominantLabels(n, dynkin, b))
    for k in range(5):
        lhs = sum(weyl_dimension(weight_add(mu, c)) for c in pieri_index_set(mu, k))
        assert lhs == weyl_dimension(mu) * math.comb(k + n - 1, n - 1)


def test_build_trivial():
    V = build_irreducible(DominantLabels(2, (0,), F(0)))
    assert V.dim == 1
    assert all(V.e(i, j).is_zero() for i in range(2) for j in range(2))


def test_build_vector_rep():
    V = build_irreducible(DominantLabels(2, (1,), F(1)))
    assert V.dim == 2
    assert set(V.basis_weights) == {(1, 0), (0, 1)}
    assert V.highest_weight == (1, 0)


def test_build_sl3_adjoint_shape():
    V = build_irreducible(DominantLabels(3, (1, 1), F(7)))
    assert V.dim == 8


@pytest.mark.parametrize("n,dynkin,b", SMALL_SWEEP)
def test_module_invariants(n, dynkin, b):
    V = cached_module(n, dynkin, b)
    assert validate_module(V)


@pytest.mark.parametrize("n,dynkin,b", SMALL_SWEEP)
def test_labels_roundtrip(n, dynkin, b):
    mu = weight_from_labels(DominantLabels(n, dynkin, b))
    assert tuple(dominant_gaps(mu)) == dynkin
    assert sum(mu) == b


def test_dimension_cap():
    with pytest.raises(DimensionCapError):
        build_irreducible(DominantLabels(3, (9, 9), F(0)), dim_cap=100)


def test_serialization_roundtrip():
    V = cached_module(3, (1, 1), F(1, 2))
    doc = json.loads(json.dumps(module_to_json(V)))
    W = module_from_json(doc)
    assert W.dim == V.dim
    assert W.basis_weights == V.basis_weights
    assert W.labels == V.labels
    assert all(W.e(i, j) == V.e(i, j) for i in range(3) for j in range(3))


def test_highest_weight_vectors_trivial_space():
    vecs = highest_weight_vectors(1, [], weight_indicator_projector([(0,)], (0,)))
    assert vecs == [(F(1),)]


def test_highest_weight_vectors_tensor_square():
    V = cached_module(2, (1,), F(1))
    tw = tensor_weights(V, V)
    raising = [tensor_generator(V, V, 0, 1)]
    top = highest_weight_vectors(4, raising, weight_indicator_projector(tw, (2, 0)))
    assert top == [(F(1), F(0), F(0), F(0))]
    mid = highest_weight_vectors(4, raising, weight_indicator_projector(tw, (1, 1)))
    assert mid == [(F(0), F(1), F(-1), F(0))]
    none = highest_weight_vectors(4, raising, weight_indicator_projector(tw, (0, 2)))
    assert none == []


@pytest.mark.parametrize("n,dynkin,b,k", [
    (2, (1,), F(1), 1),
    (2, (1,), F(1), 2),
    (2, (2,), F(-1), 2),
    (3, (1, 0), F(1), 1),
    (3, (1, 1), F(0), 2),
])
def test_tensor_multiplicity_free(n, dynkin, b, k):
    """Each admissible shift yields exactly one maximal vector; others none."""
    V = cached_module(n, dynkin, b)
    W = cached_module(n, (k,) + (0,) * (n - 2), F(k))  # degree-k symmetric power
    assert W.dim == math.comb(k + n - 1, n - 1)
    mu = V.highest_weight
    dim = V.dim * W.dim
    tw = tensor_weights(V, W)
    raising = [tensor_generator(V, W, i, j) for i in range(n) for j in range(n) if i < j]
    admissible = set(pieri_index_set(mu, k))
    from projrep.action import monomials_of_degree

    for c in monomials_of_degree(n, k):
        target = weight_add(mu, c)
        found = highest_weight_vectors(
            dim, raising, weight_indicator_projector(tw, target)
        )
        assert len(found) == (1 if c in admissible else 0), (c, len(found))
