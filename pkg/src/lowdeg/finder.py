"""Finding large affine subspaces on which polynomials are constant or drop degree.

Two families of algorithms live here:

* the white-box finder, which grows ``u0 + span(D_1..D_k)`` one direction at
  a time by solving the system "every derivative of f along the current
  directions vanishes at u0 + y" (linear part by elimination, the rest by
  enumerating the solution space of the linear part);
* the black-box F_2 degree reducer, which only queries the function and
  picks each new direction orthogonal to the linear derivatives it learned.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DegenerateInputError, DimensionError, InconsistentOracleError, ResourceLimitError
from .linalg import AffineSubspace, Subspace, kernel, orthogonal_complement, pack, rref, span_points_gfp, span_points_packed, unpack
from .poly import (
    BoolFn,
    Polynomial,
    derivative_family,
    directional_derivative,
    evaluate,
    evaluate_packed,
    evaluate_points,
    restrict,
    shift,
)

# solution spaces of the linear part larger than this are refused
MAX_CANDIDATES = 1 << 24


# -- dimension bounds -------------------------------------------------------------


def _multisets(k: int, j: int) -> int:
    """Number of multisets of size ``j`` from ``k`` items, i.e. C(k+j-1, j)."""
    if j == 0:
        return 1
    return math.comb(k + j - 1, j) if k > 0 else 0


def _general_rhs(k: int, d: int) -> int:
    return (d + 1) * sum((d - j) * _multisets(k, j) for j in range(d))


def bound_k(n: int, d: int, p: Optional[int] = None) -> int:
    """Least ``k >= 0`` with ``n <= k + (d+1) * sum_{j<d} (d-j) C(k+j-1, j)``.

    The inequality does not depend on the field; ``p`` is accepted for symmetry.
    """
    return bound_k_many(n, (d,), p)


def bound_k_many(n: int, degrees: Sequence[int], p: Optional[int] = None) -> int:
    if n < 0 or any(d < 0 for d in degrees):
        raise DimensionError("n and degrees must be non-negative")
    k = 0
    while n > k + sum(_general_rhs(k, d) for d in degrees):
        k += 1
    return k


def bound_k_binary(n: int, d: int) -> int:
    """Least ``k >= 0`` with ``n <= k + sum_{j<d} (d-j) C(k, j)``."""
    if n < 0 or d < 0:
        raise DimensionError("n and d must be non-negative")
    k = 0
    while n > k + sum((d - j) * math.comb(k, j) for j in range(d)):
        k += 1
    return k


def bound_k_binary_many(n: int, degrees: Sequence[int]) -> int:
    k = 0
    while n > k + sum((d - j) * math.comb(k, j) for d in degrees for j in range(d)):
        k += 1
    return k


# -- reports ------------------------------------------------------------------------


@dataclass
class EquationSystem:
    """One round's equations in the unknown ``y``, split by degree."""

    linear: list
    nonlinear: list
    m: int

    @classmethod
    def split(cls, polys: Sequence[Polynomial]) -> "EquationSystem":
        linear, nonlinear = [], []
        for h in polys:
            deg = h.degree
            if deg == 1:
                linear.append((h.linear_part(), h.constant_term()))
            elif deg > 1:
                nonlinear.append(h)
            elif not h.is_zero():
                raise DegenerateInputError("a derivative equation is a nonzero constant")
        return cls(linear, nonlinear, sum(h.degree for h in nonlinear))


@dataclass
class FinderReport:
    subspace: AffineSubspace
    constant: Union[int, tuple, None] = None
    target_degree: Optional[int] = None
    rounds: int = 0
    queries: int = 0
    candidates_enumerated: int = 0
    solution_counts: list = field(default_factory=list)
    guaranteed: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def to_dict(self) -> dict:
        out = {
            "subspace": self.subspace.to_dict(),
            "dim": self.dim,
            "rounds": self.rounds,
        }
        if self.constant is not None:
            out["constant"] = list(self.constant) if isinstance(self.constant, tuple) else self.constant
        if self.target_degree is not None:
            out["target_degree"] = self.target_degree
        if self.queries:
            out["queries"] = self.queries
        if self.candidates_enumerated:
            out["candidates_enumerated"] = self.candidates_enumerated
            out["solution_counts"] = list(self.solution_counts)
        return out


# -- white-box finder -----------------------------------------------------------------


class _SubsetDerivatives:
    """Over F_2: the derivatives g_S along subsets S of the chosen directions, |S| < deg g."""

    def __init__(self, g: Polynomial):
        self.top = int(g.degree) - 1
        self.by_set = {(): g}

    def add_direction(self, delta: tuple, index: int) -> None:
        new = {}
        for S, h in self.by_set.items():
            if len(S) < self.top and not h.is_zero():
                new[S + (index,)] = directional_derivative(h, delta)
        self.by_set.update(new)

    def equations(self, deltas) -> list:
        return [h for h in self.by_set.values() if not h.is_zero()]


class _HasseDerivatives:
    """Over F_p: ``f_alpha(r * y)`` for wt(alpha) < deg g and r in R minus 0."""

    def __init__(self, g: Polynomial):
        self.g = g
        d = int(g.degree)
        self.top = d - 1
        self.multipliers = range(1, min(g.p, d + 1))

    def add_direction(self, delta: tuple, index: int) -> None:
        pass

    def equations(self, deltas) -> list:
        fam = derivative_family(self.g, deltas)
        p = self.g.p
        out = []
        for alpha, fa in fam:
            if sum(alpha) > self.top:
                continue
            for r in self.multipliers:
                terms = {m: c * pow(r, sum(e for _, e in m), p) % p for m, c in fa._terms.items()}
                out.append(Polynomial._raw(p, fa.n, terms))
        return out


def _reduce_packed(xs: np.ndarray, rows: dict) -> np.ndarray:
    for c, row in rows.items():
        hit = ((xs >> np.uint64(c)) & np.uint64(1)).astype(bool)
        xs = np.where(hit, xs ^ np.uint64(row), xs)
    return xs


def _reduce_gfp(pts: np.ndarray, S: Subspace) -> np.ndarray:
    pts = pts.copy()
    p = S.p
    for c, row in zip(S.pivots, S.basis):
        pts = (pts - pts[:, c : c + 1] * np.asarray(row, dtype=np.int64)) % p
    return pts


def _find(fs: Sequence[Polynomial], u0: Sequence[int], max_dim: Optional[int]) -> FinderReport:
    p, n = fs[0].p, fs[0].n
    if any((f.p, f.n) != (p, n) for f in fs):
        raise DimensionError("all polynomials must share the field and variable count")
    u0 = tuple(int(a) % p for a in u0)
    if len(u0) != n:
        raise DimensionError(f"u0 of length {len(u0)} for {n} variables")
    constants = tuple(evaluate(f, u0) for f in fs)
    gs = [shift(f, u0) - c for f, c in zip(fs, constants)]
    engines = [(_SubsetDerivatives if p == 2 else _HasseDerivatives)(g) for g in gs if g.degree >= 1]

    deltas: list = []
    report = FinderReport(AffineSubspace(u0, Subspace.zero(p, n)))
    limit = n if max_dim is None else min(n, max_dim)
    while len(deltas) < limit:
        k = len(deltas)
        polys = [h for e in engines for h in e.equations(deltas)]
        system = EquationSystem.split(polys)
        if any(c for _, c in system.linear):
            raise DegenerateInputError("a linear derivative equation fails at the origin")
        basis, cols = _rref_cols([a for a, _ in system.linear], p, n)
        target = n - system.m - k - 1
        guaranteed = len(basis) <= target
        rows = list(basis)
        if guaranteed:
            free = [j for j in range(n) if j not in set(cols)]
            rows += [tuple(int(i == j) for i in range(n)) for j in free[: target - len(basis)]]
        sol = kernel(rows, p, n) if rows else Subspace.full(p, n)
        if p ** sol.dim > MAX_CANDIDATES:
            raise ResourceLimitError("max-candidates", f"solution space of size {p}^{sol.dim} exceeds {MAX_CANDIDATES}")
        report.candidates_enumerated += p ** sol.dim
        choice, count = _first_solution(sol, system.nonlinear, deltas, p, n)
        report.solution_counts.append(count)
        report.guaranteed.append(guaranteed)
        if guaranteed and count < p ** (k + 1):
            raise AssertionError(f"round {k}: {count} solutions, fewer than the guaranteed {p}^{k + 1}")
        if choice is None:
            break
        deltas.append(choice)
        for e in engines:
            e.add_direction(choice, k)

    S = AffineSubspace(u0, Subspace(p, n, deltas))
    for f, c in zip(fs, constants):
        r = restrict(f, S)
        if r.degree > 0 or r.constant_term() != c:
            raise AssertionError("finder produced a subspace on which the polynomial is not constant")
    report.subspace = S
    report.rounds = len(deltas)
    report.constant = constants
    return report


def _rref_cols(rows, p, n):
    if not rows:
        return [], []
    basis, _ = rref(rows, p, n)
    return list(basis), [next(j for j, a in enumerate(r) if a) for r in basis]


def _first_solution(sol: Subspace, nonlinear, deltas, p: int, n: int):
    """Common zeros of ``nonlinear`` in ``sol``, enumerated with t_0 fastest; first one outside span(deltas)."""
    dirs = sol.directions
    span = Subspace.span(p, n, deltas) if deltas else Subspace.zero(p, n)
    order = sorted(nonlinear, key=len)
    if p == 2:
        pts = span_points_packed(0, [pack(d) for d in dirs])
        for h in order:
            pts = pts[evaluate_packed(h, pts) == 0]
        rows = {c: pack(r) for c, r in zip(span.pivots, span.basis)}
        outside = np.flatnonzero(_reduce_packed(pts, rows))
        choice = unpack(int(pts[outside[0]]), n) if outside.size else None
        return choice, int(pts.size)
    pts = span_points_gfp((0,) * n, dirs, p)
    for h in order:
        pts = pts[evaluate_points(h, pts) == 0]
    outside = np.flatnonzero(_reduce_gfp(pts, span).any(axis=1)) if len(pts) else np.array([], dtype=int)
    choice = tuple(int(a) for a in pts[outside[0]]) if outside.size else None
    return choice, int(len(pts))


def find_constant_subspace(f: Polynomial, u0: Optional[Sequence[int]] = None, max_dim: Optional[int] = None) -> FinderReport:
    """An affine subspace through ``u0`` on which ``f`` is constant.

    Over F_2 the dimension is at least ``bound_k_binary(n, deg f)``, otherwise
    at least ``bound_k(n, deg f)``, unless ``max_dim`` stops the search first.
    """
    if f.degree <= 0:
        raise DegenerateInputError("f is constant; the whole space already works")
    rep = _find([f], u0 if u0 is not None else (0,) * f.n, max_dim)
    rep.constant = rep.constant[0]
    return rep


def find_constant_subspace_many(fs: Sequence[Polynomial], u0: Optional[Sequence[int]] = None, max_dim: Optional[int] = None) -> FinderReport:
    """One affine subspace through ``u0`` on which every polynomial in ``fs`` is constant."""
    fs = list(fs)
    if not fs:
        raise DimensionError("need at least one polynomial")
    return _find(fs, u0 if u0 is not None else (0,) * fs[0].n, max_dim)


# -- black-box algorithms over F_2 ------------------------------------------------------


class CountingOracle:
    """Memoizing wrapper around a packed-point oracle; counts distinct queries."""

    def __init__(self, F: Callable[[int], int]):
        self.F = F
        self.cache: dict = {}

    def __call__(self, x: int) -> int:
        v = self.cache.get(x)
        if v is None:
            v = self.cache[x] = int(self.F(x)) & 1
        return v

    @property
    def queries(self) -> int:
        return len(self.cache)


def _oracle_n(F, n):
    if n is None:
        n = getattr(F, "n", None)
    if n is None:
        raise DimensionError("variable count is required for a bare callable oracle")
    return n


def _reduce_directions(query: Callable[[int], int], n: int, d: int) -> list:
    """Packed directions of a linear subspace on which the queried function has degree < d."""
    deltas: list = []
    units = [0] + [1 << i for i in range(n)]
    k = 0
    while math.comb(k, d - 1) + k < n:
        ells = []
        for S in itertools.combinations(range(k), d - 1):
            shifts = [0]
            for i in S:
                shifts += [s ^ deltas[i] for s in shifts]
            vals = [0] * (n + 1)
            for idx, v in enumerate(units):
                acc = 0
                for s in shifts:
                    acc ^= query(v ^ s)
                vals[idx] = acc
            c = vals[0]
            ells.append(tuple(c ^ vals[i + 1] for i in range(n)))
        W = Subspace.span(2, n, ells) if ells else Subspace.zero(2, n)
        perp = orthogonal_complement(W)
        span = Subspace.span(2, n, [unpack(x, n) for x in deltas]) if deltas else Subspace.zero(2, n)
        choice = next((v for v in perp.directions if v not in span), None)
        if choice is None:
            raise InconsistentOracleError(f"no admissible direction in round {k}; the oracle exceeds degree {d}")
        deltas.append(pack(choice))
        k += 1
    return deltas


def degree_reduce_blackbox(F: Union[BoolFn, Callable[[int], int]], d: int, n: Optional[int] = None) -> FinderReport:
    """Linear subspace ``U`` with ``deg(F|_U) <= d - 1``, using only queries to ``F``.

    ``F`` takes packed points (bit ``j`` is coordinate ``j``). The degree
    bound ``deg F <= d`` is assumed, not checked.
    """
    n = _oracle_n(F, n)
    if d < 1:
        raise DegenerateInputError("degree reduction needs d >= 1")
    oracle = CountingOracle(F)
    deltas = _reduce_directions(oracle, n, d)
    U = Subspace(2, n, [unpack(x, n) for x in deltas])
    return FinderReport(AffineSubspace((0,) * n, U), target_degree=d - 1, rounds=len(deltas), queries=oracle.queries)


def constant_subspace_blackbox(F: Union[BoolFn, Callable[[int], int]], n: Optional[int] = None, d: int = 1) -> FinderReport:
    """Linear subspace on which ``F`` (of degree <= d) is constant, by repeated degree reduction.

    Each level restricts the oracle to the subspace found so far, so the
    next level works in fewer variables with one degree less.
    """
    n = _oracle_n(F, n)
    oracle = CountingOracle(F)
    basis = [1 << i for i in range(n)]  # current subspace, packed, in the original space

    def restricted(y: int) -> int:
        x = 0
        for i, v in enumerate(basis):
            if (y >> i) & 1:
                x ^= v
        return oracle(x)

    if d >= 1:
        for deg in range(d, 1, -1):
            local = _reduce_directions(restricted, len(basis), deg)
            basis = [_compose(y, basis) for y in local]
        m = len(basis)
        c = restricted(0)
        ell = [restricted(1 << i) ^ c for i in range(m)]
        if any(ell):
            local = [pack(v) for v in kernel([ell], 2, m).directions]
            basis = [_compose(y, basis) for y in local]
    U = Subspace(2, n, [unpack(x, n) for x in basis])
    return FinderReport(AffineSubspace((0,) * n, U), constant=oracle(0), rounds=len(basis), queries=oracle.queries)


def _compose(y: int, basis: Sequence[int]) -> int:
    x = 0
    for i, v in enumerate(basis):
        if (y >> i) & 1:
            x ^= v
    return x
