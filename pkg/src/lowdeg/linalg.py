"""Exact linear algebra over prime fields F_p.

Vectors are tuples of ints in ``[0, p)``. Over F_2 the elimination routines
work on rows packed into Python ints (bit ``j`` holds coordinate ``j``), so a
row operation is a single XOR; other primes use plain int lists.

Pivots are always chosen at the lowest column index, which makes every
reduced row-echelon form below canonical: two row sets spanning the same
space produce identical bases.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import DimensionError, UnsupportedFieldError

Vector = tuple  # tuple[int, ...]


def pack(v: Sequence[int]) -> int:
    """Pack an F_2 vector into an int, coordinate ``j`` at bit ``j``."""
    x = 0
    for j, a in enumerate(v):
        if a & 1:
            x |= 1 << j
    return x


def unpack(x: int, n: int) -> Vector:
    return tuple((x >> j) & 1 for j in range(n))


def _check_rows(rows, n: int, p: int) -> list:
    out = []
    for r in rows:
        r = tuple(r)
        if len(r) != n:
            raise DimensionError(f"row of length {len(r)} in a system with {n} columns")
        out.append(tuple(a % p for a in r))
    return out


def _infer_n(rows, n):
    if n is not None:
        return n
    if not rows:
        raise DimensionError("cannot infer the column count of an empty row list")
    return len(rows[0])


# -- elimination kernels -------------------------------------------------------


def _echelon_gf2(packed: Iterable[int]) -> dict:
    """Fully reduced echelon form of packed F_2 rows, keyed by pivot column."""
    piv: dict = {}
    for r in packed:
        for c, b in piv.items():
            if (r >> c) & 1:
                r ^= b
        if not r:
            continue
        c = (r & -r).bit_length() - 1
        for c2, b in piv.items():
            if (b >> c) & 1:
                piv[c2] = b ^ r
        piv[c] = r
    return piv


def _echelon_gfp(rows: Iterable[Sequence[int]], p: int) -> dict:
    piv: dict = {}
    for r in rows:
        r = [a % p for a in r]
        for c, b in piv.items():
            a = r[c]
            if a:
                r = [(x - a * y) % p for x, y in zip(r, b)]
        c = next((j for j, a in enumerate(r) if a), None)
        if c is None:
            continue
        inv = pow(r[c], -1, p)
        r = [(a * inv) % p for a in r]
        for c2, b in list(piv.items()):
            a = b[c]
            if a:
                piv[c2] = [(x - a * y) % p for x, y in zip(b, r)]
        piv[c] = r
    return piv


def _echelon(rows, p: int, n: int) -> tuple[list[Vector], list[int]]:
    if p == 2:
        piv = _echelon_gf2(pack(r) for r in rows)
        cols = sorted(piv)
        return [unpack(piv[c], n) for c in cols], cols
    piv = _echelon_gfp(rows, p)
    cols = sorted(piv)
    return [tuple(piv[c]) for c in cols], cols


def rref(rows, p: int, n: Optional[int] = None) -> tuple[tuple[Vector, ...], int]:
    """Reduced row-echelon basis of the row span, and its rank."""
    n = _infer_n(rows, n)
    basis, _ = _echelon(_check_rows(rows, n, p), p, n)
    return tuple(basis), len(basis)


def rank(rows, p: int, n: Optional[int] = None) -> int:
    return rref(rows, p, n)[1]


def pivot_columns(basis: Sequence[Vector]) -> tuple[int, ...]:
    return tuple(next(j for j, a in enumerate(r) if a) for r in basis)


def mat_vec(A: Sequence[Vector], x: Sequence[int], p: int) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, x)) % p for row in A)


def inverse(A: Sequence[Vector], p: int) -> tuple[Vector, ...]:
    """Inverse of a square matrix over F_p (rows in, rows out)."""
    n = len(A)
    if any(len(r) != n for r in A):
        raise DimensionError("matrix is not square")
    aug = [tuple(r) + tuple(int(i == j) for j in range(n)) for i, r in enumerate(A)]
    basis, cols = _echelon(_check_rows(aug, 2 * n, p), p, 2 * n)
    if cols[:n] != list(range(n)) or len(cols) < n:
        raise DimensionError("matrix is singular")
    return tuple(tuple(r[n:]) for r in basis[:n])


# -- subspaces ----------------------------------------------------------------


class Subspace:
    """A linear subspace of F_p^n.

    ``basis`` is the canonical RREF basis and drives equality and hashing.
    ``directions`` keeps the basis in the order it was supplied; restriction
    of a polynomial to the subspace is parametrized by that order.
    """

    __slots__ = ("p", "n", "basis", "directions", "pivots")

    def __init__(self, p: int, n: int, directions: Iterable[Sequence[int]] = ()):
        dirs = tuple(_check_rows(directions, n, p))
        basis, cols = _echelon(dirs, p, n)
        if len(basis) != len(dirs):
            raise DimensionError("directions are linearly dependent")
        self.p = p
        self.n = n
        self.basis = tuple(basis)
        self.directions = dirs
        self.pivots = tuple(cols)

    @classmethod
    def span(cls, p: int, n: int, vectors: Iterable[Sequence[int]]) -> "Subspace":
        """Span of arbitrary vectors; dependent ones are dropped."""
        basis, _ = rref(list(vectors), p, n)
        return cls(p, n, basis)

    @classmethod
    def zero(cls, p: int, n: int) -> "Subspace":
        return cls(p, n, ())

    @classmethod
    def full(cls, p: int, n: int) -> "Subspace":
        return cls(p, n, [tuple(int(i == j) for j in range(n)) for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of ``v`` modulo the subspace."""
        v = [a % self.p for a in v]
        for c, row in zip(self.pivots, self.basis):
            a = v[c]
            if a:
                v = [(x - a * y) % self.p for x, y in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        if len(v) != self.n:
            raise DimensionError(f"vector of length {len(v)} in F_p^{self.n}")
        return not any(self.reduce(v))

    def complement_basis(self) -> tuple[Vector, ...]:
        return complete_basis(self)

    def points(self) -> Iterator[Vector]:
        yield from AffineSubspace((0,) * self.n, self).points()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.n, self.basis) == (other.p, other.n, other.basis)

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, n={self.n}, basis={list(self.basis)})"


class AffineSubspace:
    """A coset ``anchor + U``.

    ``offset`` is the canonical coset representative (anchor reduced modulo
    the RREF pivots of ``U``), so equal cosets compare equal whatever anchor
    they were built from. ``anchor`` and ``space.directions`` define the
    parametrization ``t -> anchor + sum t_i * directions[i]``.
    """

    __slots__ = ("anchor", "space", "offset")

    def __init__(self, anchor: Sequence[int], space: Subspace):
        if len(anchor) != space.n:
            raise DimensionError(f"offset of length {len(anchor)} for a subspace of F_p^{space.n}")
        self.anchor = tuple(a % space.p for a in anchor)
        self.space = space
        self.offset = space.reduce(self.anchor)

    @classmethod
    def from_directions(cls, anchor, directions, p: int) -> "AffineSubspace":
        return cls(anchor, Subspace(p, len(anchor), directions))

    @property
    def p(self) -> int:
        return self.space.p

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def directions(self) -> tuple[Vector, ...]:
        return self.space.directions

    def point(self, t: Sequence[int]) -> Vector:
        p = self.p
        x = list(self.anchor)
        for a, d in zip(t, self.directions):
            if a:
                for j, b in enumerate(d):
                    if b:
                        x[j] = (x[j] + a * b) % p
        return tuple(x)

    def points(self) -> Iterator[Vector]:
        """All points, parameter ``t_0`` varying fastest."""
        for rt in itertools.product(range(self.p), repeat=self.dim):
            yield self.point(rt[::-1])

    def __contains__(self, x) -> bool:
        if len(x) != self.n:
            raise DimensionError(f"vector of length {len(x)} in F_p^{self.n}")
        return self.space.reduce(x) == self.offset

    def size(self) -> int:
        return self.p ** self.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineSubspace):
            return NotImplemented
        return self.space == other.space and self.offset == other.offset

    def __hash__(self) -> int:
        return hash((self.space, self.offset))

    def __repr__(self) -> str:
        return f"AffineSubspace(offset={self.anchor}, directions={list(self.directions)}, p={self.p})"

    def to_dict(self) -> dict:
        return {"offset": list(self.anchor), "basis": [list(d) for d in self.directions]}

    @classmethod
    def from_dict(cls, data: dict, p: int) -> "AffineSubspace":
        return cls.from_directions(tuple(data["offset"]), [tuple(r) for r in data["basis"]], p)


# -- standard operations --------------------------------------------------------


def in_span(S: Subspace, v: Sequence[int]) -> bool:
    return v in S


def complete_basis(S: Subspace) -> tuple[Vector, ...]:
    """Unit vectors at the non-pivot columns; together with S they span F_p^n."""
    piv = set(S.pivots)
    return tuple(tuple(int(i == j) for i in range(S.n)) for j in range(S.n) if j not in piv)


def kernel(A, p: int, n: Optional[int] = None) -> Subspace:
    """Solution space of ``A x = 0``; ``n`` is the number of columns."""
    n = _infer_n(A, n)
    basis, cols = _echelon(_check_rows(A, n, p), p, n)
    return Subspace(p, n, _null_basis(basis, cols, n, p))


def _null_basis(basis, cols, n: int, p: int) -> list[Vector]:
    """One kernel vector per free column, ordered by that column."""
    piv = set(cols)
    out = []
    for f in range(n):
        if f in piv:
            continue
        v = [0] * n
        v[f] = 1
        for c, row in zip(cols, basis):
            v[c] = (-row[f]) % p
        out.append(tuple(v))
    return out


def solve_affine(A, b: Sequence[int], p: int, n: Optional[int] = None) -> Optional[AffineSubspace]:
    """All solutions of ``A x = b`` as an affine subspace, or ``None`` if inconsistent."""
    n = _infer_n(A, n)
    A = _check_rows(A, n, p)
    if len(b) != len(A):
        raise DimensionError(f"{len(A)} equations but {len(b)} right-hand sides")
    aug = [r + (c % p,) for r, c in zip(A, b)]
    basis, cols = _echelon(aug, p, n + 1)
    if cols and cols[-1] == n:
        return None
    x0 = [0] * n
    for c, row in zip(cols, basis):
        x0[c] = row[n]
    null = _null_basis([r[:n] for r in basis], cols, n, p)
    return AffineSubspace(tuple(x0), Subspace(p, n, null))


def orthogonal_complement(S: Subspace) -> Subspace:
    """``S`` perp under the standard dot product; F_2 only."""
    if S.p != 2:
        raise UnsupportedFieldError("orthogonal_complement is implemented over F_2 only")
    return kernel(S.basis, 2, S.n)


# -- numpy helpers for F_2 enumeration ----------------------------------------


def span_points_packed(offset: int, directions: Sequence[int]) -> np.ndarray:
    """Packed points ``offset ^ sum t_j directions[j]`` for all t, index bit j = t_j."""
    pts = np.array([offset], dtype=np.uint64)
    for d in directions:
        pts = np.concatenate([pts, pts ^ np.uint64(d)])
    return pts


def span_points_gfp(offset: Sequence[int], directions: Sequence[Sequence[int]], p: int) -> np.ndarray:
    """Points of ``offset + span`` as an int array of shape (p^k, n); t_0 varies fastest."""
    pts = np.array([offset], dtype=np.int64)
    for d in directions:
        d = np.asarray(d, dtype=np.int64)
        pts = np.concatenate([(pts + a * d) % p for a in range(p)])
    return pts
