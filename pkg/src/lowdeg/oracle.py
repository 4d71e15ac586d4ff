"""Brute-force reference computations.

Everything here is deliberately naive and shares no algorithmic code with
the package: subspaces are enumerated from their reduced row-echelon
patterns, polynomials are evaluated on an explicit grid, and answers are
found by exhaustive search. Point ``x`` of F_p^n has table index
``sum x_j p^j`` throughout.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import ResourceLimitError

MAX_ENUMERATION = 10 ** 7
MAX_SEARCH_POINTS = 1 << 16
MAX_COUNT_POINTS = 1 << 24


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional linear subspaces of F_p^n."""
    if not 0 <= k <= n:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def count_affine_subspaces(n: int, k: int, p: int) -> int:
    return gaussian_binomial(n, k, p) * p ** (n - k)


def enumerate_linear_subspaces(n: int, k: int, p: int) -> Iterator[tuple]:
    """Each k-dimensional subspace once, as its reduced row-echelon basis."""
    for pivots in itertools.combinations(range(n), k):
        slots = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for values in itertools.product(range(p), repeat=len(slots)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(pivots):
                rows[i][c] = 1
            for (i, j), v in zip(slots, values):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


def enumerate_affine_subspaces(n: int, k: int, p: int) -> Iterator[tuple]:
    """Each k-dimensional affine subspace once, as ``(offset, basis)``.

    The offset is the unique coset member that is zero at every pivot column.
    """
    total = count_affine_subspaces(n, k, p)
    if total > MAX_ENUMERATION:
        raise ResourceLimitError("max-enumeration", f"{total} affine subspaces exceed {MAX_ENUMERATION}")
    for basis in enumerate_linear_subspaces(n, k, p):
        pivots = [next(j for j, a in enumerate(r) if a) for r in basis]
        free = [j for j in range(n) if j not in pivots]
        for values in itertools.product(range(p), repeat=len(free)):
            offset = [0] * n
            for j, v in zip(free, values):
                offset[j] = v
            yield tuple(offset), basis


def _grid(p: int, n: int) -> np.ndarray:
    """All points of F_p^n as rows, row ``i`` being the point with index ``i``."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((p,) * n, dtype=np.int64).reshape(n, -1)[::-1].T.copy()


def naive_table(f) -> np.ndarray:
    """Values of ``f`` at every point, by direct term-by-term evaluation on the grid."""
    p, n = f.p, f.n
    if p ** n > MAX_COUNT_POINTS:
        raise ResourceLimitError("max-points", f"p^n = {p}^{n} exceeds {MAX_COUNT_POINTS}")
    pts = _grid(p, n)
    total = np.zeros(len(pts), dtype=np.int64)
    for mono, c in f.terms.items():
        t = np.full(len(pts), c, dtype=np.int64)
        for v, e in mono:
            for _ in range(e):
                t = t * pts[:, v] % p
        total = (total + t) % p
    return total


def _index(points: np.ndarray, p: int) -> np.ndarray:
    return points @ (p ** np.arange(points.shape[-1], dtype=np.int64))


def _span(basis, p: int, n: int) -> np.ndarray:
    pts = np.zeros((1, n), dtype=np.int64)
    for b in basis:
        b = np.asarray(b, dtype=np.int64)
        pts = np.concatenate([(pts + a * b) % p for a in range(p)])
    return pts


def brute_max_constant_dim(f, u0: Optional[Sequence[int]] = None) -> tuple:
    """Largest ``k`` with ``f`` constant on some k-dimensional affine subspace.

    With ``u0`` only subspaces through ``u0`` count. Returns ``(k, (offset, basis))``.
    """
    p, n = f.p, f.n
    if p ** n > MAX_SEARCH_POINTS:
        raise ResourceLimitError("max-points", f"p^n = {p}^{n} exceeds {MAX_SEARCH_POINTS}")
    table = naive_table(f)
    grid = _grid(p, n)
    for k in range(n, -1, -1):
        for basis in enumerate_linear_subspaces(n, k, p):
            span = _span(basis, p, n)
            if u0 is not None:
                anchors = np.asarray([u0], dtype=np.int64) % p
            else:
                pivots = [next(j for j, a in enumerate(r) if a) for r in basis]
                anchors = grid[np.all(grid[:, pivots] == 0, axis=1)] if pivots else grid
            vals = table[_index((anchors[:, None, :] + span[None, :, :]) % p, p)]
            hit = np.flatnonzero(np.all(vals == vals[:, :1], axis=1))
            if hit.size:
                return k, (tuple(int(a) for a in anchors[hit[0]]), basis)
    raise AssertionError("a single point is always a constant subspace")


def brute_count(f, c: int) -> int:
    return int(np.count_nonzero(naive_table(f) == c % f.p))


def brute_nonzero_fraction(f) -> Fraction:
    return Fraction(int(np.count_nonzero(naive_table(f))), f.p ** f.n)
