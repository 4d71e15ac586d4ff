"""Partitions of F_p^n into affine subspaces on which given polynomials are constant.

The construction recurses on degree. It first finds a linear subspace U on
which every polynomial is constant. On each coset u + U every polynomial
then has lower degree, so the restrictions are partitioned recursively in
dim(U) variables. At degree <= 1 the cosets of the common kernel of the
linear parts already work.

Internally the recursion runs on value tables: the restriction of ``f`` to
a coset is just a gather from the table of ``f``, and identical restricted
tables are partitioned once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DimensionError, ResourceLimitError
from .finder import bound_k, bound_k_binary, bound_k_binary_many, bound_k_many, find_constant_subspace_many
from .linalg import AffineSubspace, Subspace, complete_basis, kernel, span_points_gfp
from .poly import Polynomial, interpolate, restrict, value_table

MAX_POINTS = 1 << 24


@dataclass
class Partition:
    p: int
    n: int
    pieces: list  # (AffineSubspace, constant); constant is a tuple for several polynomials

    @property
    def k_min(self) -> int:
        return min(S.dim for S, _ in self.pieces)

    def __len__(self) -> int:
        return len(self.pieces)

    def total_size(self) -> int:
        return sum(S.size() for S, _ in self.pieces)

    def count(self, c) -> int:
        return sum(S.size() for S, v in self.pieces if v == c)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k_min": self.k_min,
            "pieces": [dict(S.to_dict(), constant=list(v) if isinstance(v, tuple) else v) for S, v in self.pieces],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Partition":
        p = data["p"]
        pieces = []
        for item in data["pieces"]:
            c = item["constant"]
            pieces.append((AffineSubspace.from_dict(item, p), tuple(c) if isinstance(c, list) else c))
        return cls(p, data["n"], pieces)


def coset_representatives(U: Subspace) -> np.ndarray:
    """One point per coset of ``U``, from the complement basis in lexicographic coefficient order."""
    comp = complete_basis(U)
    return span_points_gfp((0,) * U.n, comp[::-1], U.p)


def check_shift_degree(f: Polynomial, U: Subspace, d: int) -> bool:
    """True iff ``deg(f|_{u+U}) <= d - 1`` for every coset ``u + U``."""
    if f.p ** (f.n - U.dim) > MAX_POINTS:
        raise ResourceLimitError("max-points", "too many cosets to scan")
    for u in coset_representatives(U):
        if restrict(f, AffineSubspace(tuple(int(a) for a in u), U)).degree > d - 1:
            return False
    return True


def _flat_index(pts: np.ndarray, p: int) -> np.ndarray:
    return pts @ (p ** np.arange(pts.shape[-1], dtype=np.int64))


def _split(tables: np.ndarray, p: int, m: int, memo: dict) -> list:
    """Pieces ``(anchor, directions, constants)`` partitioning F_p^m for the given value tables."""
    key = (m, tables.tobytes())
    hit = memo.get(key)
    if hit is not None:
        return hit
    polys = [interpolate(t, p, m) for t in tables]
    top = max(g.degree for g in polys)
    zero = (0,) * m
    if top <= 0:
        out = [(zero, _units(m), tuple(int(t[0]) for t in tables))]
    elif top <= 1:
        K = kernel([g.linear_part() for g in polys if g.degree == 1], p, m)
        reps = coset_representatives(K)
        idx = _flat_index(reps, p)
        out = [(tuple(int(a) for a in r), K.directions, tuple(int(v) for v in tables[:, i])) for r, i in zip(reps, idx)]
    else:
        U = find_constant_subspace_many(polys, zero).subspace.space
        dirs = np.asarray(U.directions, dtype=np.int64).reshape(U.dim, m)
        reps = coset_representatives(U)
        span = span_points_gfp(zero, U.directions, p)
        pts = (reps[:, None, :] + span[None, :, :]) % p
        sub = tables[:, _flat_index(pts, p)]  # (t, cosets, p^k)
        out = []
        for i, r in enumerate(reps):
            for a, D, c in _split(np.ascontiguousarray(sub[:, i, :]), p, U.dim, memo):
                anchor = tuple(int(x) for x in (r + np.asarray(a, dtype=np.int64) @ dirs) % p)
                embedded = tuple(tuple(int(x) for x in (np.asarray(v, dtype=np.int64) @ dirs) % p) for v in D)
                out.append((anchor, embedded, c))
    memo[key] = out
    return out


def _units(m: int) -> tuple:
    return tuple(tuple(int(i == j) for j in range(m)) for i in range(m))


def build_partition_many(fs: Sequence[Polynomial]) -> Partition:
    """Partition of F_p^n into affine subspaces on which every ``f`` in ``fs`` is constant."""
    fs = list(fs)
    if not fs:
        raise DimensionError("need at least one polynomial")
    p, n = fs[0].p, fs[0].n
    if any((f.p, f.n) != (p, n) for f in fs):
        raise DimensionError("all polynomials must share the field and variable count")
    if p ** n > MAX_POINTS:
        raise ResourceLimitError("max-points", f"p^n = {p}^{n} exceeds {MAX_POINTS}")
    tables = np.stack([value_table(f) for f in fs]).astype(np.uint8)
    raw = _split(tables, p, n, {})
    pieces = [(AffineSubspace(a, Subspace(p, n, D)), c) for a, D, c in raw]
    return Partition(p, n, pieces)


def build_partition(f: Polynomial) -> Partition:
    part = build_partition_many([f])
    part.pieces = [(S, c[0]) for S, c in part.pieces]
    return part


def count_level_set(f: Polynomial, c: int) -> int:
    """``|{x : f(x) = c}|``, summed over the pieces of the partition."""
    return build_partition(f).count(c % f.p)


def partition_bound_chain(n: int, degrees: Union[int, Sequence[int]], p: int) -> int:
    """Lower bound on ``k_min`` obtained by chaining the finder bounds level by level."""
    degs = [degrees] if isinstance(degrees, int) else list(degrees)
    k = n
    while True:
        degs = [d for d in degs if d >= 1]
        if not degs:
            return k
        if max(degs) <= 1:
            return max(k - len(degs), 0)
        if p == 2:
            k = bound_k_binary(k, degs[0]) if len(degs) == 1 else bound_k_binary_many(k, degs)
        else:
            k = bound_k(k, degs[0]) if len(degs) == 1 else bound_k_many(k, degs)
        degs = [d - 1 for d in degs]
