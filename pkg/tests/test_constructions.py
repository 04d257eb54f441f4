import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rangedim.bipartite import (
    BipartiteDims,
    is_uncorrelated,
    partial_trace_over_1,
    partial_trace_over_2,
    rank_triple,
    schmidt_rank,
)
from rangedim.constructions import (
    INF,
    LOWER_BOUND_FAIL,
    PRODUCT_MATCH,
    PRODUCT_MISMATCH,
    VIOLATES_INEQ_1,
    VIOLATES_INEQ_2,
    VIOLATES_INEQ_3,
    Kind,
    block_sizes,
    classify_triple,
    classify_triple_extended,
    construct_product_mixture,
    construct_subbasis_mixture,
    construct_uncorrelated,
    construct_witness,
    parse_extended_dim,
    product_mixture_pairs,
    sample_random_state,
    scramble_local,
)
from rangedim.errors import DomainError, InfeasibleError, OrderingError, ShapeError


def brute_exists(d1, d2, d3):
    return d1 <= d2 * d3 and d2 <= d3 * d1 and d3 <= d1 * d2


def eig_ranks(rho):
    """Oracle: count eigenvalues above 1e-9 of the three operators, straight from numpy."""
    mats = (partial_trace_over_2(rho), partial_trace_over_1(rho), rho.matrix)
    return tuple(int(np.count_nonzero(np.linalg.eigvalsh(m) > 1e-9)) for m in mats)


# -- classification -----------------------------------------------------------


def test_classify_examples():
    c = classify_triple(2, 3, 5)
    assert (c.exists, c.correlated_exists, c.uncorrelated_exists) == (True, True, False)
    assert c.reasons == (PRODUCT_MISMATCH,)

    c = classify_triple(1, 3, 3)
    assert (c.exists, c.correlated_exists, c.uncorrelated_exists) == (True, False, True)
    assert LOWER_BOUND_FAIL in c.reasons and PRODUCT_MATCH in c.reasons

    c = classify_triple(2, 2, 5)
    assert not c.exists and VIOLATES_INEQ_3 in c.reasons

    c = classify_triple(1, 1, 1)
    assert (c.exists, c.correlated_exists, c.uncorrelated_exists) == (True, False, True)


def test_classify_lists_every_violation():
    assert classify_triple(5, 1, 1).reasons[:1] == (VIOLATES_INEQ_1,)
    assert classify_triple(1, 5, 1).reasons[:1] == (VIOLATES_INEQ_2,)
    assert classify_triple(1, 1, 5).reasons[:1] == (VIOLATES_INEQ_3,)


def test_classify_domain():
    with pytest.raises(DomainError):
        classify_triple(0, 1, 1)


@given(st.integers(1, 40), st.integers(1, 40), st.integers(1, 40))
def test_classify_matches_brute_force(d1, d2, d3):
    c = classify_triple(d1, d2, d3)
    assert c.exists == brute_exists(d1, d2, d3)
    assert c.correlated_exists == (c.exists and d1 >= 2 and d2 >= 2)
    assert c.uncorrelated_exists == (d3 == d1 * d2)
    if c.uncorrelated_exists:
        assert c.exists
    swapped = classify_triple(d2, d1, d3)
    assert (swapped.exists, swapped.correlated_exists) == (c.exists, c.correlated_exists)


def test_extended_examples():
    assert not classify_triple_extended(INF, 2, 3).exists
    assert classify_triple_extended(INF, INF, 2).exists
    assert classify_triple_extended(INF, INF, INF).exists
    assert classify_triple_extended("inf", "3", 3).exists is False


def test_extended_finite_agrees():
    for t in itertools.product(range(1, 5), repeat=3):
        assert classify_triple_extended(*t).exists == classify_triple(*t).exists


def test_parse_extended_dim():
    assert parse_extended_dim("INF") == INF
    assert parse_extended_dim("4") == 4
    for bad in ("0", "-1", "x", 2.5, 0):
        with pytest.raises(DomainError):
            parse_extended_dim(bad)


# -- construction A -----------------------------------------------------------


def test_product_mixture_pair_sequence():
    assert product_mixture_pairs(2, 2, 3) == [(0, 0), (1, 1), (0, 1)]
    assert product_mixture_pairs(4, 2, 6) == [(0, 0), (1, 1), (2, 0), (3, 0), (0, 1), (1, 0)]
    for d1, d2 in itertools.product(range(1, 6), repeat=2):
        if d2 > d1:
            continue
        for d3 in range(d1, d1 * d2 + 1):
            pairs = product_mixture_pairs(d1, d2, d3)
            assert len(pairs) == len(set(pairs)) == d3
            assert {i for i, _ in pairs} == set(range(d1))
            assert {j for _, j in pairs} == set(range(d2))


def test_product_mixture_223():
    rho = construct_product_mixture(2, 2, 3, [0.5, 0.3, 0.2])
    # |00>, |11>, then the first unused pair |01>
    np.testing.assert_array_equal(np.diag(rho.matrix).real, [0.5, 0.2, 0.0, 0.3])
    assert eig_ranks(rho) == (2, 2, 3)
    assert rank_triple(rho) == (2, 2, 3)


def test_product_mixture_trivial():
    rho = construct_product_mixture(1, 1, 1, [1.0])
    np.testing.assert_array_equal(rho.matrix, [[1.0]])
    assert rank_triple(rho) == (1, 1, 1)


def test_product_mixture_224_correlated():
    w = np.array([4, 3, 2, 1]) / 10
    rho = construct_product_mixture(2, 2, 4, w)
    grid = np.diag(rho.matrix).real.reshape(2, 2)
    # oracle: a 2x2 weight grid factorizes iff its determinant vanishes
    assert abs(np.linalg.det(grid)) > 1e-3
    assert not is_uncorrelated(rho).uncorrelated
    assert rank_triple(rho) == (2, 2, 4)


def test_product_mixture_errors():
    with pytest.raises(OrderingError):
        construct_product_mixture(2, 3, 4)
    with pytest.raises(OrderingError):
        construct_product_mixture(2, 2, 5)
    with pytest.raises(ShapeError):
        construct_product_mixture(2, 2, 3, [0.5, 0.5])


# -- construction B -----------------------------------------------------------


def test_block_sizes():
    assert block_sizes(3, 2) == [2, 1]
    assert block_sizes(7, 3) == [3, 2, 2]
    for d1 in range(1, 13):
        for d3 in range(1, d1 + 1):
            sizes = block_sizes(d1, d3)
            assert sum(sizes) == d1 and len(sizes) == d3
            assert max(sizes) - min(sizes) <= 1 and sizes == sorted(sizes, reverse=True)


def test_subbasis_mixture_322():
    rho = construct_subbasis_mixture(3, 2, 2, amplitude_seed=5)
    dims = BipartiteDims(3, 2)
    w, v = np.linalg.eigh(rho.matrix)
    support = v[:, w > 1e-9]
    assert support.shape[1] == 2
    # oracle: Psi1 lives on {|0,0>, |1,1>}, Psi2 on {|2,0>} (second label wraps)
    allowed = {0 * 2 + 0, 1 * 2 + 1, 2 * 2 + 0}
    assert np.allclose(np.delete(support, sorted(allowed), axis=0), 0, atol=1e-12)
    ranks = sorted(schmidt_rank(support[:, k], dims) for k in range(2))
    assert ranks == [1, 2]
    assert eig_ranks(rho) == (3, 2, 2)
    assert rank_triple(rho) == (3, 2, 2)


def test_subbasis_mixture_222_equal():
    rho = construct_subbasis_mixture(2, 2, 2, [0.5, 0.5], amplitude_seed=None)
    np.testing.assert_allclose(rho.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    assert rank_triple(rho) == (2, 2, 2)


def test_subbasis_mixture_trivial():
    rho = construct_subbasis_mixture(1, 1, 1, [1.0])
    np.testing.assert_allclose(rho.matrix, [[1.0]], atol=1e-15)


def test_subbasis_vectors_orthonormal():
    rho = construct_subbasis_mixture(7, 3, 3, amplitude_seed=11)
    w = np.linalg.eigvalsh(rho.matrix)
    # orthogonal mixture: the nonzero spectrum is exactly the default weights 3/6, 2/6, 1/6
    np.testing.assert_allclose(np.sort(w[w > 1e-9]), [1 / 6, 2 / 6, 3 / 6], atol=1e-14)


def test_subbasis_mixture_errors():
    with pytest.raises(OrderingError):
        construct_subbasis_mixture(2, 3, 1)
    with pytest.raises(OrderingError):
        construct_subbasis_mixture(5, 2, 2)  # 5 > 2*2


# -- product witness ----------------------------------------------------------


def test_uncorrelated_examples():
    rho = construct_uncorrelated(1, 1)
    np.testing.assert_array_equal(rho.matrix, [[1.0]])

    rho = construct_uncorrelated(2, 2, [0.5, 0.5], [0.5, 0.5])
    np.testing.assert_allclose(rho.matrix, np.eye(4) / 4, atol=1e-15)
    assert rank_triple(rho) == (2, 2, 4)

    a, b = [0.6, 0.4], [0.5, 0.3, 0.2]
    rho = construct_uncorrelated(2, 3, a, b)
    assert rank_triple(rho) == (2, 3, 6)
    expected = sorted(x * y for x in a for y in b)
    np.testing.assert_allclose(np.linalg.eigvalsh(rho.matrix), expected, atol=1e-15)
    verdict = is_uncorrelated(rho)
    assert verdict.uncorrelated and verdict.residual < 1e-12

    with pytest.raises(ShapeError):
        construct_uncorrelated(2, 2, [1.0], [0.5, 0.5])


# -- dispatcher ---------------------------------------------------------------


def test_witness_examples():
    rho = construct_witness(2, 2, 3, Kind.CORRELATED, seed=0)
    assert rank_triple(rho) == (2, 2, 3)
    assert is_uncorrelated(rho).residual > 1e-6
    assert np.count_nonzero(rho.matrix - np.diag(np.diag(rho.matrix))) == 0  # construction A

    with pytest.raises(InfeasibleError) as info:
        construct_witness(1, 3, 3, Kind.CORRELATED)
    assert info.value.reasons == [LOWER_BOUND_FAIL]

    rho = construct_witness(4, 2, 2, "any", seed=3)
    assert rank_triple(rho) == (4, 2, 2)
    assert eig_ranks(rho) == (4, 2, 2)

    rho = construct_witness(2, 2, 4, Kind.UNCORRELATED)
    assert is_uncorrelated(rho).residual < 1e-12


def test_witness_swapped_branches():
    for triple in [(2, 4, 2), (2, 3, 5), (3, 6, 4), (1, 3, 3)]:
        rho = construct_witness(*triple, Kind.ANY, seed=1)
        assert rho.dims == BipartiteDims(triple[0], triple[1])
        assert rank_triple(rho) == triple


def test_witness_infeasible_reasons():
    with pytest.raises(InfeasibleError) as info:
        construct_witness(2, 2, 5)
    assert info.value.reasons == [VIOLATES_INEQ_3]
    with pytest.raises(InfeasibleError) as info:
        construct_witness(2, 2, 3, Kind.UNCORRELATED)
    assert info.value.reasons == [PRODUCT_MISMATCH]


def test_witness_deterministic():
    a = construct_witness(5, 3, 2, seed=9)
    b = construct_witness(5, 3, 2, seed=9)
    np.testing.assert_array_equal(a.matrix, b.matrix)


@pytest.mark.parametrize("d", range(1, 6))
def test_witness_every_small_triple(d):
    for d2, d3 in itertools.product(range(1, 7), repeat=2):
        triple = (d, d2, d3)
        cls = classify_triple(*triple)
        for kind in Kind:
            if cls.allows(kind):
                rho = construct_witness(*triple, kind, seed=d2 * 7 + d3)
                assert rank_triple(rho) == triple
                verdict = is_uncorrelated(rho)
                if kind is Kind.CORRELATED:
                    assert verdict.residual > 1e-6
                if kind is Kind.UNCORRELATED:
                    assert verdict.residual < 1e-10
            else:
                with pytest.raises(InfeasibleError):
                    construct_witness(*triple, kind)


# -- samplers -----------------------------------------------------------------


def test_sample_pure():
    dims = BipartiteDims(3, 4)
    for seed in range(20):
        d1, d2, d3 = rank_triple(sample_random_state(dims, 1, seed))
        assert d3 == 1 and d1 == d2 == 3


def test_sample_full_rank():
    dims = BipartiteDims(2, 3)
    for seed in range(100):
        rho = sample_random_state(dims, 6, seed)
        assert eig_ranks(rho) == (2, 3, 6)


def test_sample_domain():
    with pytest.raises(DomainError):
        sample_random_state(BipartiteDims(2, 2), 5, 0)
    with pytest.raises(DomainError):
        sample_random_state(BipartiteDims(2, 2), 0, 0)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_samples_satisfy_cyclic_inequalities(dA, dB, data):
    m = data.draw(st.integers(1, dA * dB))
    seed = data.draw(st.integers(0, 2**32 - 1))
    ranks = rank_triple(sample_random_state(BipartiteDims(dA, dB), m, seed))
    assert ranks.d3 == m
    assert brute_exists(*ranks)


def test_scramble_identity_seed():
    rho = construct_witness(3, 2, 4)
    assert scramble_local(rho, 0) is rho


def test_scramble_preserves_ranks():
    rho = construct_witness(3, 2, 4, Kind.CORRELATED)
    for seed in range(1, 201):
        scrambled = scramble_local(rho, seed)
        assert eig_ranks(scrambled) == (3, 2, 4)


def test_scramble_product_stays_product():
    rho = construct_uncorrelated(3, 2)
    for seed in (1, 2, 3):
        scrambled = scramble_local(rho, seed)
        assert np.count_nonzero(np.abs(scrambled.matrix - rho.matrix) > 1e-3) > 0
        assert is_uncorrelated(scrambled).residual < 1e-10
