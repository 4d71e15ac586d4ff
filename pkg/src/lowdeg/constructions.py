"""Explicit objects: random restrictions of sparse polynomials, linear
injectors, and the XOR-of-local-functions affine extractor over F_2.

The existence statements behind these objects are probabilistic, so each
construction samples with an explicit seed and leaves verification to
the caller (or to the check functions next to it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, DimensionError, ResourceLimitError, RestrictionError
from .linalg import Subspace, pack, rank
from .poly import MAX_BOOL_VARS, BoolFn, Polynomial, anf_from_table

# -- random restrictions ---------------------------------------------------------------


@dataclass(frozen=True)
class Restriction:
    """Per variable either ``None`` (left free) or the value it is fixed to."""

    assignment: tuple

    @property
    def free(self) -> tuple:
        return tuple(i for i, a in enumerate(self.assignment) if a is None)

    @property
    def survivors(self) -> int:
        return len(self.free)

    def to_dict(self) -> dict:
        return {"assignment": ["*" if a is None else a for a in self.assignment], "survivors": self.survivors}


def keep_probability(n: int, c: int) -> float:
    """``(2 n^c)^(-1/(2c))``, the chance that a variable stays free."""
    return (2 * n ** c) ** (-1.0 / (2 * c))


def survivor_floor(n: int, c: int) -> int:
    """``floor(n * keep_probability / 2)``, computed exactly in integers."""
    # s <= n q / 2  iff  (2 s)^(2c) * 2 n^c <= n^(2c)
    s = 0
    while (2 * (s + 1)) ** (2 * c) * 2 * n ** c <= n ** (2 * c):
        s += 1
    return s


def apply_restriction(f: Polynomial, rho: Restriction) -> Polynomial:
    """Substitute the fixed values and renumber the free variables in order."""
    if len(rho.assignment) != f.n:
        raise DimensionError("restriction length differs from the variable count")
    p = f.p
    new_index = {v: i for i, v in enumerate(rho.free)}
    terms: dict = {}
    for mono, c in f.terms.items():
        coef = c
        kept = []
        for v, e in mono:
            a = rho.assignment[v]
            if a is None:
                kept.append((new_index[v], e))
            else:
                coef = coef * pow(a, e, p) % p
        if coef:
            key = tuple(kept)
            terms[key] = (terms.get(key, 0) + coef) % p
    return Polynomial(p, rho.survivors, terms)


def sparse_restrict(f: Polynomial, c: int, seed=0, max_retries: int = 64) -> tuple:
    """Random restriction under which every surviving monomial has at most ``2c`` variables.

    Each variable stays free with probability ``(2n^c)^(-1/(2c))`` and is
    otherwise set to 0. An attempt succeeds when every surviving monomial
    touches at most ``2c`` variables and at least ``survivor_floor(n, c)``
    variables stay free. Returns ``(Restriction, restricted polynomial)``.
    """
    n = f.n
    if c < 1:
        raise DegenerateInputError("sparsity exponent c must be at least 1")
    if len(f) > n ** c:
        raise DegenerateInputError(f"{len(f)} monomials exceed n^c = {n ** c}")
    q = keep_probability(n, c)
    floor = survivor_floor(n, c)
    best = {"survivors": -1, "max_width": None, "attempt": None}
    for attempt, child in enumerate(np.random.SeedSequence(seed).spawn(max_retries), start=1):
        keep = np.random.default_rng(child).random(n) < q
        rho = Restriction(tuple(None if k else 0 for k in keep))
        g = apply_restriction(f, rho)
        width = max((len(m) for m in g.terms), default=0)
        if width <= 2 * c and rho.survivors >= floor:
            return rho, g
        if rho.survivors > best["survivors"]:
            best = {"survivors": rho.survivors, "max_width": width, "attempt": attempt}
    raise RestrictionError(f"no successful restriction in {max_retries} attempts", best)


# -- linear injectors ------------------------------------------------------------------------


@dataclass
class LinearInjector:
    """``m = n k`` matrices of shape ``(k+1) x n`` over F_2."""

    n: int
    k: int
    matrices: list  # each a tuple of k+1 row tuples

    @property
    def d(self) -> int:
        return self.k + 1

    @property
    def m(self) -> int:
        return len(self.matrices)

    def packed_rows(self) -> list:
        return [[pack(r) for r in A] for A in self.matrices]

    def to_dict(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d, "m": self.m, "matrices": [[list(r) for r in A] for A in self.matrices]}


def make_injector(n: int, k: int, seed=0) -> LinearInjector:
    if not 1 <= k <= n:
        raise DimensionError(f"need 1 <= k <= n, got k={k}, n={n}")
    rng = np.random.default_rng(seed)
    mats = rng.integers(0, 2, size=(n * k, k + 1, n))
    return LinearInjector(n, k, [tuple(tuple(int(a) for a in row) for row in A) for A in mats])


def injector_covers(inj: LinearInjector, U: Subspace) -> Optional[int]:
    """Least 1-based ``i`` with ``ker(A_i)`` meeting ``U`` only in 0, or ``None``."""
    if U.n != inj.n or U.p != 2:
        raise DimensionError("subspace must live in F_2^n of the injector")
    if U.dim == 0:
        return 1
    for i, A in enumerate(inj.matrices, start=1):
        images = [tuple(sum(a * b for a, b in zip(row, u)) % 2 for row in A) for u in U.basis]
        if rank(images, 2, inj.d) == U.dim:
            return i
    return None


# -- the affine extractor ---------------------------------------------------------------------


@dataclass
class ExtractorBuild:
    fn: BoolFn
    injector: LinearInjector
    components: list  # truth tables of the f_i on k+1 bits
    degree: object
    sizes: dict = field(default_factory=dict)

    def sidecar(self) -> dict:
        return {
            "n": self.injector.n,
            "k": self.injector.k,
            "degree": self.degree if self.degree != -math.inf else None,
            "matrices": self.injector.to_dict()["matrices"],
            "components": [BoolFn(self.injector.d, t).to_hex() for t in self.components],
            "sizes": self.sizes,
        }


def extractor_dimension(n: int, eps, const: int = 2) -> int:
    """``ceil(log(n/eps^2) + log log(n/eps^2)) + const``, logs base 2."""
    r = Fraction(n) / Fraction(eps) ** 2
    lg = math.log2(r)
    return math.ceil(lg + math.log2(lg)) + const


def circuit_sizes(n: int, k: int) -> dict:
    m, d = n * k, k + 1
    return {"xor_and_xor": m * d * 2 ** d, "de_morgan": m * m * 2 ** d * n * n}


def build_extractor(n: int, k: int, seed=0, components: Optional[list] = None) -> ExtractorBuild:
    """``f(x) = XOR_i f_i(A_i x)`` with random tables ``f_i`` on ``k+1`` bits.

    ``components`` overrides the random tables (used for fixed instances).
    The degree of ``f`` is at most ``k+1`` and is checked on every build.
    """
    if n > MAX_BOOL_VARS:
        raise ResourceLimitError("max-n", f"truth tables are capped at n = {MAX_BOOL_VARS}")
    seeds = np.random.SeedSequence(seed).spawn(2)
    inj = make_injector(n, k, seeds[0])
    d = inj.d
    if components is None:
        rng = np.random.default_rng(seeds[1])
        components = [rng.integers(0, 2, size=1 << d).astype(np.uint8) for _ in range(inj.m)]
    else:
        components = [np.asarray(t, dtype=np.uint8) for t in components]
        if len(components) != inj.m or any(t.shape != (1 << d,) for t in components):
            raise DimensionError(f"expected {inj.m} component tables of length {1 << d}")
    xs = np.arange(1 << n, dtype=np.uint64)
    acc = np.zeros(1 << n, dtype=np.uint8)
    for rows, table in zip(inj.packed_rows(), components):
        y = np.zeros(1 << n, dtype=np.int64)
        for r, row in enumerate(rows):
            y |= (np.bitwise_count(xs & np.uint64(row)).astype(np.int64) & 1) << r
        acc ^= table[y]
    fn = BoolFn(n, acc)
    degree = anf_from_table(fn).degree
    if degree > d:
        raise AssertionError(f"extractor degree {degree} exceeds {d}")
    return ExtractorBuild(fn, inj, components, degree, circuit_sizes(n, k))
