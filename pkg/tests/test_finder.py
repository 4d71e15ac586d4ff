import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowdeg.errors import DegenerateInputError, DimensionError
from lowdeg.finder import (
    CountingOracle,
    bound_k,
    bound_k_binary,
    bound_k_binary_many,
    bound_k_many,
    constant_subspace_blackbox,
    degree_reduce_blackbox,
    find_constant_subspace,
    find_constant_subspace_many,
)
from lowdeg.linalg import AffineSubspace, Subspace, span_points_packed, pack
from lowdeg.oracle import brute_max_constant_dim
from lowdeg.poly import BoolFn, Polynomial, anf_from_table, random_polynomial, restrict, table_from_anf

from conftest import poly, random_vector, sparse_random


def is_constant_on(f, S, c):
    r = restrict(f, S)
    return r.degree <= 0 and r.constant_term() == c


def all_points_constant(F: BoolFn, U: Subspace, offset=0):
    pts = span_points_packed(offset, [pack(d) for d in U.directions])
    vals = F.table[pts.astype(np.int64)]
    return bool((vals == vals[0]).all())


# -- bounds ------------------------------------------------------------------------------


def test_bound_examples():
    assert bound_k_binary(10, 2) == 4
    assert bound_k_binary(20, 3) == 4
    assert bound_k_binary(16, 3) == 4
    assert bound_k(20, 3) == 1
    assert bound_k(20, 3, 7) == bound_k(20, 3, 2)


@pytest.mark.parametrize("n", range(0, 40))
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_bound_is_least_solution(n, d):
    def binary_ok(k):
        return n <= k + sum((d - j) * math.comb(k, j) for j in range(d))

    k = bound_k_binary(n, d)
    assert binary_ok(k)
    assert k == 0 or not binary_ok(k - 1)

    def general_ok(k):
        rhs = sum((d - j) * (math.comb(k + j - 1, j) if j else 1) for j in range(d))
        return n <= k + (d + 1) * rhs

    k = bound_k(n, d)
    assert general_ok(k)
    assert k == 0 or not general_ok(k - 1)


def test_bound_many_single_degree_matches():
    for n in range(30):
        assert bound_k_many(n, (3,)) == bound_k(n, 3)
        assert bound_k_binary_many(n, (2,)) == bound_k_binary(n, 2)
    assert bound_k_many(12, (2, 2)) <= bound_k(12, 2)


def test_bound_rejects_negative():
    with pytest.raises(DimensionError):
        bound_k_binary(-1, 2)


# -- white-box finder ------------------------------------------------------------------------


def test_quadratic_example():
    f = poly("p=2 n=4", "x1*x2 + x3*x4")
    rep = find_constant_subspace(f)
    assert rep.dim >= bound_k_binary(4, 2) == 1
    assert is_constant_on(f, rep.subspace, rep.constant)
    assert rep.dim <= brute_max_constant_dim(f)[0] == 2


@pytest.mark.parametrize("p", [2, 3, 5])
def test_affine_polynomial_gives_hyperplane(p):
    f = poly(f"p={p} n=5", "x1 + 2*x3 + 1")
    rep = find_constant_subspace(f, (1, 1, 1, 1, 1))
    assert rep.dim == 4
    assert rep.constant == f((1, 1, 1, 1, 1))
    assert (1, 1, 1, 1, 1) in rep.subspace


def test_constant_polynomial_is_degenerate():
    with pytest.raises(DegenerateInputError):
        find_constant_subspace(Polynomial.constant(2, 3, 1))


def test_u0_length_checked():
    with pytest.raises(DimensionError):
        find_constant_subspace(poly("p=2 n=3", "x1*x2"), (0, 0))


@pytest.mark.parametrize("seed", range(50))
def test_binary_cubic_meets_bound(seed):
    f = random_polynomial(16, 3, 2, seed)
    u0 = random_vector(np.random.default_rng(seed), 2, 16)
    rep = find_constant_subspace(f, u0)
    assert rep.dim >= 4
    assert is_constant_on(f, rep.subspace, rep.constant)
    assert u0 in rep.subspace


@pytest.mark.parametrize("p,n,d", [(3, 10, 2), (3, 8, 3), (5, 7, 2), (7, 5, 2)])
def test_general_field_meets_bound(p, n, d):
    for seed in range(5):
        f = random_polynomial(n, d, p, seed)
        if f.degree <= 0:
            continue
        rep = find_constant_subspace(f, random_vector(np.random.default_rng(seed), p, n))
        assert rep.dim >= bound_k(n, int(f.degree), p)
        assert is_constant_on(f, rep.subspace, rep.constant)


def test_guaranteed_rounds_have_enough_solutions():
    for p, n, d in [(2, 12, 3), (3, 8, 2)]:
        f = random_polynomial(n, d, p, 1)
        rep = find_constant_subspace(f)
        assert len(rep.solution_counts) == len(rep.guaranteed)
        for k, (count, g) in enumerate(zip(rep.solution_counts, rep.guaranteed)):
            if g:
                assert count >= p ** (k + 1)


def test_max_dim_caps_result():
    f = random_polynomial(12, 2, 2, 3)
    rep = find_constant_subspace(f, max_dim=2)
    assert rep.dim == 2
    assert is_constant_on(f, rep.subspace, rep.constant)


def test_report_serializes():
    rep = find_constant_subspace(poly("p=3 n=4", "x1*x2 + x3^2"))
    d = rep.to_dict()
    assert d["dim"] == rep.dim
    assert AffineSubspace.from_dict(d["subspace"], 3) == rep.subspace


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_finder_never_beats_brute_force(seed, d):
    f = sparse_random(5, d, 2, seed, density=0.4)
    if f.degree <= 0:
        return
    u0 = random_vector(np.random.default_rng(seed), 2, 5)
    rep = find_constant_subspace(f, u0)
    assert rep.dim <= brute_max_constant_dim(f, u0)[0]


@given(st.integers(0, 10 ** 6))
def test_finder_over_f3_against_brute_force(seed):
    f = sparse_random(3, 2, 3, seed, density=0.5)
    if f.degree <= 0:
        return
    rep = find_constant_subspace(f)
    assert is_constant_on(f, rep.subspace, rep.constant)
    assert rep.dim <= brute_max_constant_dim(f, (0, 0, 0))[0]


# -- several polynomials --------------------------------------------------------------------------


def test_many_linear():
    fs = [poly("p=2 n=6", "x1"), poly("p=2 n=6", "x2")]
    rep = find_constant_subspace_many(fs)
    assert rep.dim == 4
    assert rep.constant == (0, 0)


def test_many_single_agrees_with_single():
    f = random_polynomial(10, 3, 2, 5)
    assert find_constant_subspace_many([f]).subspace == find_constant_subspace(f).subspace


@pytest.mark.parametrize("seed", range(5))
def test_many_quadratics(seed):
    fs = [random_polynomial(12, 2, 2, 100 + seed), random_polynomial(12, 2, 2, 200 + seed)]
    rep = find_constant_subspace_many(fs)
    assert rep.dim >= bound_k_many(12, (2, 2))
    assert rep.dim >= bound_k_binary_many(12, (2, 2))
    for f, c in zip(fs, rep.constant):
        assert is_constant_on(f, rep.subspace, c)


def test_many_over_f5():
    fs = [random_polynomial(6, 2, 5, s) for s in range(3)]
    rep = find_constant_subspace_many(fs, (1, 2, 3, 4, 0, 1))
    for f, c in zip(fs, rep.constant):
        assert is_constant_on(f, rep.subspace, c)


def test_many_requires_input():
    with pytest.raises(DimensionError):
        find_constant_subspace_many([])


# -- black box ----------------------------------------------------------------------------------------


def test_blackbox_cubic_monomial():
    F = table_from_anf(poly("p=2 n=6", "x1*x2*x3"))
    rep = degree_reduce_blackbox(F, 3)
    assert rep.dim == 3
    assert rep.target_degree == 2
    assert restrict(anf_from_table(F), rep.subspace).degree <= 2


@pytest.mark.parametrize("seed", range(5))
def test_blackbox_query_budget(seed):
    F = table_from_anf(random_polynomial(20, 3, 2, seed))
    rep = degree_reduce_blackbox(F, 3)
    assert rep.dim == 6
    assert rep.queries <= 21 * (1 + 6 + 15)
    assert restrict(anf_from_table(F), rep.subspace).degree <= 2


def test_blackbox_accepts_bare_callable():
    F = table_from_anf(random_polynomial(8, 2, 2, 9))
    rep = degree_reduce_blackbox(lambda x: int(F.table[x]), 2, n=8)
    assert restrict(anf_from_table(F), rep.subspace).degree <= 1
    with pytest.raises(DimensionError):
        degree_reduce_blackbox(lambda x: 0, 2)


def test_counting_oracle_memoizes():
    calls = []
    O = CountingOracle(lambda x: calls.append(x) or x & 1)
    for x in [1, 2, 1, 3, 2]:
        O(x)
    assert O.queries == 3
    assert calls == [1, 2, 3]


def test_constant_blackbox_examples():
    F = BoolFn(5, [1] * 32)
    rep = constant_subspace_blackbox(F, d=0)
    assert rep.dim == 5
    assert rep.queries == 1
    assert rep.constant == 1
    F = table_from_anf(poly("p=2 n=8", "x1*x2*x3"))
    rep = constant_subspace_blackbox(F, d=3)
    assert rep.dim >= 2
    assert all_points_constant(F, rep.subspace.space)


@pytest.mark.parametrize("seed", range(4))
def test_constant_blackbox_random(seed):
    F = table_from_anf(random_polynomial(20, 3, 2, 50 + seed))
    rep = constant_subspace_blackbox(F, d=3)
    assert rep.dim >= 1
    assert all_points_constant(F, rep.subspace.space)
    assert rep.constant == int(F.table[0])
