import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lowdeg import poly as P
from lowdeg.errors import DimensionError, ParseError, UnsupportedFieldError
from lowdeg.linalg import AffineSubspace, Subspace
from lowdeg.poly import (
    NEG_INF,
    BoolFn,
    Polynomial,
    affine_substitute,
    anf_from_table,
    derivative_family,
    directional_derivative,
    evaluate,
    format_polynomial,
    interpolate,
    parse_boolfn,
    parse_polynomial,
    random_polynomial,
    restrict,
    table_from_anf,
    value_table,
)

from conftest import points, poly, random_independent, random_vector, sparse_random


def naive_eval(raw_terms, x, p):
    """Evaluate an unreduced term list directly."""
    return sum(c * math.prod(x[v] ** e for v, e in mono) for mono, c in raw_terms) % p


# -- evaluation ----------------------------------------------------------------------


def test_eval_examples():
    assert poly("p=3 n=3", "x1 + x2*x3")((1, 1, 1)) == 2
    assert Polynomial.zero(5, 3)((1, 2, 3)) == 0
    assert poly("p=2 n=4", "x1*x2 + x3*x4")((1, 1, 1, 1)) == 0


def test_eval_dimension_mismatch():
    with pytest.raises(DimensionError):
        evaluate(poly("p=2 n=2", "x1"), (1, 0, 1))


def test_degree_of_zero_is_below_everything():
    z = Polynomial.zero(3, 2)
    assert z.degree == NEG_INF
    assert z.degree < -1000


@given(
    st.sampled_from([2, 3, 5]),
    st.lists(st.tuples(st.lists(st.tuples(st.integers(0, 3), st.integers(1, 12)), max_size=3), st.integers(-20, 20)), max_size=6),
)
def test_canonical_form_and_pointwise_agreement(p, raw):
    n = 4
    merged = {}
    for m, c in raw:
        merged[tuple(m)] = merged.get(tuple(m), 0) + c
    f = Polynomial(p, n, merged)
    for mono, c in f.terms.items():
        assert c % p != 0
        assert all(1 <= e <= p - 1 for _, e in mono)
        assert [v for v, _ in mono] == sorted({v for v, _ in mono})
    for x in points(p, n):
        assert f(x) == naive_eval(merged.items(), x, p)


def test_bad_field_rejected():
    with pytest.raises(UnsupportedFieldError):
        Polynomial(4, 2)
    with pytest.raises(UnsupportedFieldError):
        Polynomial(257, 2)


def test_arithmetic():
    f = poly("p=5 n=2", "x1 + 2*x2")
    g = poly("p=5 n=2", "3*x1 + 4")
    assert f + g == poly("p=5 n=2", "4*x1 + 2*x2 + 4")
    assert f * g == poly("p=5 n=2", "3*x1^2 + x1*x2 + 4*x1 + 3*x2")
    assert f - f == Polynomial.zero(5, 2)
    assert (f ** 5) == f  # Frobenius on the reduced form


# -- derivatives and substitution ---------------------------------------------------------


def test_directional_derivative_examples():
    assert directional_derivative(poly("p=2 n=2", "x1*x2"), (1, 0)) == poly("p=2 n=2", "x2")
    lin = Polynomial.affine(7, (3, 1, 4), 2)
    assert directional_derivative(lin, (1, 5, 6)) == Polynomial.constant(7, 3, (3 + 5 + 24) % 7)
    d = directional_derivative(poly("p=2 n=3", "x1*x2*x3"), (1, 1, 0))
    assert d == poly("p=2 n=3", "x1*x3 + x2*x3 + x3")
    f = poly("p=2 n=3", "x1*x2*x3")
    for x in points(2, 3):
        y = tuple((a + b) % 2 for a, b in zip(x, (1, 1, 0)))
        assert d(x) == (f(y) - f(x)) % 2


@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_derivative_drops_degree(p, d, seed):
    f = random_polynomial(5, d, p, seed)
    delta = random_vector(np.random.default_rng(seed), p, 5)
    g = directional_derivative(f, delta)
    if f.degree >= 1:
        assert g.degree <= f.degree - 1
    for x in itertools.islice(points(p, 5), 50):
        y = tuple((a + b) % p for a, b in zip(x, delta))
        assert g(x) == (f(y) - f(x)) % p


def test_affine_substitute_examples():
    f = poly("p=3 n=3", "x1*x2 + 2*x3^2")
    I = [tuple(int(i == j) for j in range(3)) for i in range(3)]
    assert affine_substitute(f, I, (0, 0, 0)) == f
    assert affine_substitute(poly("p=2 n=2", "x1*x2"), [(1,), (1,)], (0, 0)) == poly("p=2 n=1", "x1")
    g = affine_substitute(poly("p=3 n=3", "x1 + x2"), [(1, 1), (0, 0), (0, 0)], (1, 0, 0))
    assert g == poly("p=3 n=2", "x1 + x2 + 1")
    for y in points(3, 2):
        assert g(y) == (y[0] + y[1] + 1) % 3


def test_affine_substitute_shape_errors():
    f = poly("p=2 n=2", "x1")
    with pytest.raises(DimensionError):
        affine_substitute(f, [(1,)], (0, 0))
    with pytest.raises(DimensionError):
        affine_substitute(f, [(1,), (1, 0)], (0, 0))


@given(st.sampled_from([2, 3, 5]), st.integers(0, 3), st.integers(0, 4), st.integers(0, 10 ** 6))
def test_symbolic_and_grid_substitution_agree(p, d, m, seed):
    n = 5
    rng = np.random.default_rng(seed)
    f = random_polynomial(n, d, p, seed)
    A = [random_vector(rng, p, m) for _ in range(n)]
    b = random_vector(rng, p, n)
    g1 = P._substitute_symbolic(f, A, b, m)
    g2 = P._substitute_grid(f, A, b, m)
    assert g1 == g2
    assert g1.degree <= max(f.degree, 0) or g1.is_zero()
    for y in itertools.islice(points(p, m), 40):
        x = tuple((sum(A[i][j] * y[j] for j in range(m)) + b[i]) % p for i in range(n))
        assert g1(y) == f(x)


def test_restrict_examples():
    f = poly("p=2 n=4", "x1*x2 + x3*x4")
    S = AffineSubspace((0, 0, 0, 0), Subspace(2, 4, [(1, 0, 0, 0), (0, 0, 1, 0)]))
    assert restrict(f, S).is_zero()
    full = AffineSubspace((0, 0, 0, 0), Subspace.full(2, 4))
    assert restrict(f, full) == f
    g = restrict(poly("p=2 n=2", "x1*x2"), AffineSubspace((1, 0), Subspace(2, 2, [(0, 1)])))
    assert g == poly("p=2 n=1", "x1")


def test_interpolation_round_trip():
    for p in (2, 3, 5):
        f = random_polynomial(3, 2 * (p - 1), p, p)
        assert interpolate(value_table(f), p, 3) == f


# -- derivative families ---------------------------------------------------------------------


def test_derivative_family_examples():
    fam = derivative_family(poly("p=2 n=2", "x1*x2"), [(1, 0), (0, 1)])
    assert fam[(1, 1)] == Polynomial.constant(2, 2, 1)
    f = random_polynomial(6, 2, 3, 1)
    fam = derivative_family(f, [(1, 0, 0, 0, 0, 0), (0, 1, 1, 0, 0, 0), (0, 0, 0, 1, 2, 0)])
    assert all(sum(a) <= f.degree for a, _ in fam)
    c = derivative_family(Polynomial.constant(5, 3, 4), [(1, 2, 3)])
    assert c[(0,)] == Polynomial.constant(5, 3, 4)
    assert all(c[(j,)].is_zero() for j in range(1, 5))


def test_derivative_family_rejects_dependent_directions():
    with pytest.raises(DimensionError):
        derivative_family(poly("p=3 n=2", "x1*x2"), [(1, 1), (2, 2)])


@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_vanishing_on_coset_iff_family_vanishes(p, d, k, seed):
    n = {2: 6, 3: 4, 5: 3}[p]
    k = min(k, n)
    rng = np.random.default_rng(seed)
    f = sparse_random(n, d, p, seed, density=0.5)
    deltas = random_independent(rng, p, n, k)
    fam = derivative_family(f, deltas)
    U = Subspace(p, n, deltas)
    for alpha, fa in fam:
        assert fa.degree <= f.degree - sum(alpha)
    for x in points(p, n):
        assert restrict(f, AffineSubspace(x, U)).is_zero() == fam.vanishes_at(x)


# -- truth tables ------------------------------------------------------------------------------


def test_anf_examples():
    F = BoolFn(2, [0, 0, 0, 1])
    assert anf_from_table(F) == poly("p=2 n=2", "x1*x2")
    assert anf_from_table(BoolFn(3, [0] * 8)).is_zero()
    assert table_from_anf(Polynomial.zero(2, 3)) == BoolFn(3, [0] * 8)
    assert list(table_from_anf(poly("p=2 n=2", "x1")).table) == [0, 1, 0, 1]
    with pytest.raises(UnsupportedFieldError):
        table_from_anf(poly("p=3 n=2", "x1"))


@pytest.mark.parametrize("n", range(0, 4))
def test_mobius_round_trip_exhaustive(n):
    for bits in itertools.product((0, 1), repeat=1 << n):
        F = BoolFn(n, bits)
        f = anf_from_table(F)
        assert table_from_anf(f) == F
        assert all(f(tuple((i >> j) & 1 for j in range(n))) == F(i) for i in range(1 << n))


def test_mobius_round_trip_n4_exhaustive():
    tables = np.array(list(itertools.product((0, 1), repeat=16)), dtype=np.uint8)
    coef = P.mobius(tables, 4)
    assert np.array_equal(P.mobius(coef, 4), tables)
    # spot-check the batched transform against the per-table route
    for t in tables[::997]:
        assert table_from_anf(anf_from_table(BoolFn(4, t))) == BoolFn(4, t)


@pytest.mark.parametrize("n", [5, 10, 16])
def test_mobius_round_trip_random(n):
    F = BoolFn(n, np.random.default_rng(n).integers(0, 2, 1 << n))
    assert table_from_anf(anf_from_table(F)) == F


def test_anf_round_trip_random_cubic():
    f = random_polynomial(12, 3, 2, 4)
    assert anf_from_table(table_from_anf(f)) == f


def test_hex_format():
    F = BoolFn(2, [0, 0, 0, 1])
    assert F.to_hex() == "8"
    assert parse_boolfn("n=2\n8\n") == F
    G = BoolFn(9, np.random.default_rng(0).integers(0, 2, 512))
    assert parse_boolfn(P.format_boolfn(G)) == G
    with pytest.raises(ParseError):
        parse_boolfn("n=2\n8g\n")
    with pytest.raises(DimensionError):
        parse_boolfn("n=2\n1ff\n")


# -- random polynomials -------------------------------------------------------------------------


def test_random_polynomial_examples():
    c = random_polynomial(4, 0, 7, 3)
    assert c.degree <= 0
    assert random_polynomial(8, 3, 5, 11) == random_polynomial(8, 3, 5, 11)
    hits = sum(random_polynomial(8, 2, 2, s).coefficient(((0, 1), (1, 1))) for s in range(1000))
    assert abs(hits / 1000 - 0.5) <= 0.05


def test_reduced_monomial_count():
    # monomials of degree <= d with individual degree <= p-1
    for n, d, p in [(4, 3, 2), (3, 4, 3), (3, 3, 5)]:
        brute = sum(1 for e in itertools.product(range(p), repeat=n) if sum(e) <= d)
        assert len(P.reduced_monomials(n, d, p)) == brute


# -- text format ----------------------------------------------------------------------------------


@given(st.sampled_from([2, 3, 7, 251]), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_text_round_trip(p, d, seed):
    f = sparse_random(4, d, p, seed)
    assert parse_polynomial(format_polynomial(f)) == f


def test_parse_examples():
    assert parse_polynomial("p=2 n=4\nx1*x2 + x3*x4\n") == Polynomial(2, 4, {((0, 1), (1, 1)): 1, ((2, 1), (3, 1)): 1})
    assert parse_polynomial("p=5 n=2\n3*x1^2*x2 + 4\n").coefficient(((0, 2), (1, 1))) == 3
    assert parse_polynomial("p=3 n=1\n0\n").is_zero()


@pytest.mark.parametrize(
    "text,line,col",
    [
        ("p=2 n=2\nx1 + + x2\n", 2, 6),
        ("p=2 n=2\nx3\n", 2, 1),
        ("p=4 n=2\nx1\n", 1, 1),
        ("p=2\nx1\n", 1, 1),
        ("p=2 n=2\nx1 x2\n", 2, 4),
        ("p=2 n=2\nx1 +\n", 2, 5),
        ("p=2 n=2\n\n", 2, 1),
        ("p=2 n=2\nx1 - x2\n", 2, 4),
    ],
)
def test_parse_errors_report_position(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_polynomial(text)
    assert (exc.value.line, exc.value.column) == (line, col)


# -- DLSZ ---------------------------------------------------------------------------------------------


@given(st.sampled_from([2, 3, 5]), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_nonzero_fraction_lower_bound(p, d, seed):
    n = {2: 7, 3: 5, 5: 4}[p]
    f = sparse_random(n, d, p, seed, density=0.2)
    if f.is_zero():
        return
    nonzero = int(np.count_nonzero(value_table(f)))
    deg = int(f.degree)
    # nonzero / p^n >= p^(-deg/(p-1))  <=>  nonzero^(p-1) * p^deg >= p^(n(p-1))
    assert nonzero ** (p - 1) * p ** deg >= p ** (n * (p - 1))
