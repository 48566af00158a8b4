from fractions import Fraction as F

import pytest

from projrep.action import derivative_op, graded_dimension, operator_matrix
from projrep.errors import ConsistencyViolationError
from projrep.glmodules import (
    DominantLabels,
    cached_module,
    weight_from_labels,
)
from projrep.irreducibility import (
    criterion,
    criterion_equivalence_check,
    first_rank_deficiency,
    jordan_holder,
    maximal_vector,
    phi_image,
    q_coefficient,
    q_coefficient_bruteforce,
    residual_summands,
    tensor_action_map,
    up_submodule_matrix,
    up_submodule_rank,
)
from projrep.linalg import Matrix, hstack, kernel_basis, rank
from projrep.selfcheck import (
    check_derivative_escape,
    check_intertwiner,
    check_jordan_holder,
    check_submodule_invariance,
)


def mu_of(n, dynkin, b):
    return weight_from_labels(DominantLabels(n, dynkin, b))


def test_q_closed_form_examples():
    assert q_coefficient((F(1), F(0)), (0, 0)) == 1
    assert q_coefficient((F(1), F(0)), (0, 1)) == 0
    assert q_coefficient((F(1), F(0)), (1, 0)) == 2
    with pytest.raises(ValueError):
        q_coefficient((F(1), F(0)), (0, 2))  # violates the gap constraint


def test_q_bruteforce_examples():
    V = cached_module(2, (1,), F(1))
    assert q_coefficient_bruteforce(V, (0, 0)) == 1
    assert q_coefficient_bruteforce(V, (0, 1)) == 0
    assert q_coefficient_bruteforce(V, (1, 0)) == 2
    T = cached_module(2, (0,), F(0))
    assert q_coefficient_bruteforce(T, (1, 0)) == 0


@pytest.mark.parametrize("n,dynkin,b", [
    (1, (), F(-2)),
    (2, (1,), F(1)),
    (2, (2,), F(1, 2)),
    (3, (1, 0), F(-1)),
    (3, (0, 2), F(0)),
])
def test_q_closed_form_matches_oracle(n, dynkin, b):
    V = cached_module(n, dynkin, b)
    mu = V.highest_weight
    from projrep.glmodules import pieri_index_set

    for j in range(4):
        for c in pieri_index_set(mu, j):
            assert q_coefficient(mu, c) == q_coefficient_bruteforce(V, c), c


def test_q_coefficient_recursion():
    # peeling one unit off coordinate s multiplies by (mu_s + |mu| - s + c_s)
    from projrep.glmodules import pieri_index_set

    for point in [(2, (1,), F(1, 2)), (3, (2, 1), F(-1)), (3, (0, 2), F(2))]:
        mu = mu_of(*point)
        tot = sum(mu)
        for j in range(1, 5):
            for c in pieri_index_set(mu, j):
                for s in range(len(c)):
                    if c[s] == 0:
                        continue
                    prev = c[:s] + (c[s] - 1,) + c[s + 1:]
                    factor = mu[s] + tot - (s + 1) + c[s]
                    assert q_coefficient(mu, c) == factor * q_coefficient(mu, prev)


def test_maximal_vector_normalization():
    V = cached_module(2, (1,), F(1))
    xi = maximal_vector(V, (1, 0))
    assert xi.coords.get(((1, 0), V.highest_index)) == 1
    hat = phi_image(V, xi)
    assert hat.coords.get(((1, 0), V.highest_index)) == q_coefficient(V.highest_weight, (1, 0))


def test_up_submodule_rank_examples():
    V = cached_module(2, (1,), F(1))
    T = cached_module(2, (0,), F(0))
    assert up_submodule_rank(V, 0) == V.dim
    assert up_submodule_rank(T, 1) == 0
    assert up_submodule_rank(V, 1) == 3


def test_up_submodule_matrix_is_square_and_ordered():
    V = cached_module(2, (1,), F(1))
    m1 = up_submodule_matrix(V, 1)
    assert m1.rows == m1.cols == 4
    assert m1.col_labels[0] == ((1, 0), 0) and m1.col_labels[-1] == ((0, 1), 1)
    # frozen degree-one chain columns for the vector module with b = 1
    assert m1 == Matrix.from_rows([
        [2, 0, 0, 0],
        [0, 1, 1, 0],
        [0, 1, 1, 0],
        [0, 0, 0, 2],
    ])


@pytest.mark.parametrize("n,dynkin,b,k", [
    (2, (1,), F(1), 2),
    (2, (2,), F(-1), 3),
    (3, (1, 0), F(1, 2), 2),
])
def test_blocked_rank_matches_direct_rank(n, dynkin, b, k):
    V = cached_module(n, dynkin, b)
    assert up_submodule_rank(V, k) == rank(up_submodule_matrix(V, k))


def test_criterion_examples():
    w = criterion((F(0), F(0)))
    assert w.reducible and w.failing_pairs == ((1, 1),) and w.first_failure_degree == 1
    w2 = criterion(mu_of(2, (0,), F(1, 2)))
    assert not w2.reducible and w2.first_failure_degree is None
    w3 = criterion((F(1), F(0)))
    assert w3.reducible and w3.failing_pairs == ((2, 1),) and w3.first_failure_degree == 1


def test_criterion_eligibility_filter():
    # candidate s exists at i=2 but the gap is too small: stays irreducible
    mu = mu_of(2, (0,), F(2, 3))  # (1/3, 1/3)
    w = criterion(mu)
    assert not w.reducible


@pytest.mark.parametrize("b", [F(-3), F(-2), F(-1), F(0), F(1), F(2), F(3)])
def test_criterion_equivalence_trivial_family(b):
    assert criterion_equivalence_check(mu_of(2, (0,), b))


def test_criterion_equivalence_sweep():
    for n in (1, 2, 3):
        import itertools

        for dynkin in itertools.product(range(2), repeat=n - 1):
            for b in (F(-2), F(-1), F(0), F(1), F(2), F(1, 2)):
                assert criterion_equivalence_check(mu_of(n, dynkin, b)), (n, dynkin, b)
    assert criterion_equivalence_check(mu_of(2, (2,), F(-1)))


def test_residual_summands_examples():
    assert residual_summands((F(1), F(0)), 1) == ((0, 1),)
    assert residual_summands((F(0), F(0)), 1) == ((1, 0),)
    mu = mu_of(2, (0,), F(1, 2))
    for j in range(1, 5):
        assert residual_summands(mu, j) == ()


def test_jordan_holder_trivial():
    T = cached_module(2, (0,), F(0))
    jh = jordan_holder(T)
    assert jh.k == 0 and jh.i0 == 1 and jh.corollary_consistent
    assert jh.residual_index == 1 and jh.residual_weight == (1, 0)
    assert jh.finite_dim_flag and jh.finite_dim_highest_labels == (0, 0)
    assert jh.finite_dim_total == 1
    assert jh.submodule_dims_by_degree[:2] == (1, 0)


def test_jordan_holder_vector_rep():
    V = cached_module(2, (1,), F(1))
    jh = jordan_holder(V)
    assert jh.k == 0 and jh.i0 == 2 and jh.corollary_consistent
    assert jh.residual_weight == (1, 1) and not jh.finite_dim_flag
    assert jh.finite_dim_highest_labels is None and jh.finite_dim_total is None


def test_jordan_holder_deep_failure():
    T = cached_module(2, (0,), F(-2))
    jh = jordan_holder(T)
    assert jh.k == 3 and jh.i0 == 1
    assert criterion(T.highest_weight).first_failure_degree == 4
    assert first_rank_deficiency(T, 5) == 4
    assert jh.submodule_dims_by_degree == (1, 2, 3, 4, 0, 0)
    assert jh.finite_dim_total == 10  # graded dims 1+2+3+4


def test_jordan_holder_finite_nontrivial():
    V = cached_module(2, (1,), F(-1))
    jh = jordan_holder(V, degree_cap=4)
    assert jh.k == 1 and jh.i0 == 1
    assert jh.submodule_dims_by_degree == (2, 4, 2, 0, 0)
    assert jh.finite_dim_highest_labels == (1, 1)
    assert jh.finite_dim_total == 8
    ok, detail = check_jordan_holder(V)
    assert ok, detail


def test_jordan_holder_rational_central_scalar():
    # reducible with non-integer b: gap-2 shift at the second coordinate
    V = cached_module(3, (2, 0), F(1, 2))
    assert V.highest_weight == (F(3, 2), F(-1, 2), F(-1, 2))
    w = criterion(V.highest_weight)
    assert w.reducible and w.failing_pairs == ((2, 2),)
    jh = jordan_holder(V)
    assert jh.k == 1 and jh.i0 == 2 and jh.corollary_consistent
    assert jh.residual_index == 2
    assert not jh.finite_dim_flag


def test_jordan_holder_rank_one_corner():
    # n=1: polynomials in one variable, everything 1-dimensional per degree
    V = cached_module(1, (), F(-2))
    w = criterion(V.highest_weight)
    assert w.reducible and w.first_failure_degree == 5
    jh = jordan_holder(V)
    assert jh.k == 4 and jh.i0 == 1 and jh.corollary_consistent
    assert jh.submodule_dims_by_degree == (1, 1, 1, 1, 1, 0, 0)
    assert jh.finite_dim_highest_labels == (4,)
    assert jh.finite_dim_total == 5


def test_derivative_escape_beyond_first_degree():
    # the residual complement keeps escaping under derivatives further up
    V = cached_module(2, (1,), F(1))  # k = 0
    for j in (2, 3):
        mj = up_submodule_matrix(V, j)
        residual = kernel_basis(mj)
        assert residual
        low = up_submodule_matrix(V, j - 1)
        base = rank(low)
        for l in range(V.n):
            dmat = operator_matrix(derivative_op(V.n, l), V, j)
            cols = [dmat.apply({t: v for t, v in enumerate(vec) if v != 0})
                    for vec in residual]
            from projrep.linalg import Matrix as _M

            assert rank(hstack([low, _M.from_cols(cols, dmat.rows)])) > base


def test_jordan_holder_rejects_irreducible():
    V = cached_module(2, (0,), F(1, 2))
    with pytest.raises(ValueError):
        jordan_holder(V)


def test_tensor_action_map_examples():
    T = cached_module(2, (0,), F(0))
    tm = tensor_action_map(T, 0)
    assert tm.is_zero() and tm.rows == 2 and tm.cols == 2
    # when degree j is fully generated, the image of the map is the whole
    # degree-(j+1) chain span
    V = cached_module(2, (1,), F(1, 2))  # irreducible point
    for j in range(3):
        tj = tensor_action_map(V, j)
        mj1 = up_submodule_matrix(V, j + 1)
        assert rank(tj) == up_submodule_rank(V, j + 1)
        assert rank(hstack([tj, mj1])) == rank(tj)


@pytest.mark.parametrize("n,dynkin,b", [
    (2, (1,), F(1)), (2, (2,), F(1, 2)), (3, (1, 0), F(-1)),
])
def test_intertwiner_identity(n, dynkin, b):
    ok, detail = check_intertwiner(cached_module(n, dynkin, b), j_max=2)
    assert ok, detail


@pytest.mark.parametrize("n,dynkin,b", [
    (2, (0,), F(0)),
    (2, (1,), F(1)),
    (3, (1, 0), F(1)),
])
def test_derivative_escape(n, dynkin, b):
    ok, detail = check_derivative_escape(cached_module(n, dynkin, b))
    assert ok, detail


@pytest.mark.parametrize("n,dynkin,b", [
    (2, (0,), F(0)), (2, (1,), F(1)), (2, (0,), F(1, 2)), (3, (1, 0), F(1)),
])
def test_submodule_invariance(n, dynkin, b):
    ok, detail = check_submodule_invariance(cached_module(n, dynkin, b), j_max=2)
    assert ok, detail


def test_rank_decomposition_identity():
    # chain rank at each degree equals full dimension minus the vanished summands
    from projrep.glmodules import weight_add, weyl_dimension

    for point in [(2, (0,), F(0)), (2, (1,), F(1)), (2, (0,), F(-2)), (3, (1, 0), F(1))]:
        V = cached_module(*point)
        mu = V.highest_weight
        for j in range(5):
            expected = graded_dimension(V, j) - sum(
                weyl_dimension(weight_add(mu, c)) for c in residual_summands(mu, j)
            )
            assert up_submodule_rank(V, j) == expected, (point, j)


def test_residual_complement_is_kernel_of_chain_map():
    # kernel vectors of the chain matrix span the complement; their spans
    # match the vanished summands' total dimension
    from projrep.glmodules import weight_add, weyl_dimension

    V = cached_module(2, (1,), F(1))
    mu = V.highest_weight
    for j in (1, 2):
        mj = up_submodule_matrix(V, j)
        kern = kernel_basis(mj)
        missing = sum(weyl_dimension(weight_add(mu, c)) for c in residual_summands(mu, j))
        assert len(kern) == missing
