"""Multivariate polynomials over a prime field F_p, and boolean truth tables.

A polynomial is kept in canonical reduced form: every individual exponent
lies in ``[1, p-1]`` (``x^p`` folds to ``x``) and no zero coefficient is
stored, so two polynomials are equal as functions on F_p^n exactly when
they are equal as objects. Field elements are plain ints in ``[0, p)``.

Monomials are tuples of ``(variable, exponent)`` pairs sorted by variable,
variables numbered from 0 (printed as ``x1 .. xn``). Over F_2 a monomial is
also available as a bit mask, which the hot loops use.
"""

from __future__ import annotations

import itertools
import math
import re
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import DimensionError, ParseError, ResourceLimitError, UnsupportedFieldError
from .linalg import AffineSubspace, Subspace, complete_basis, inverse, span_points_gfp, span_points_packed

MAX_PRIME = 251
MAX_BOOL_VARS = 24
# grid evaluation + interpolation is used for substitutions into at most this many points
GRID_LIMIT = 1 << 20

NEG_INF = -math.inf
"""Degree of the zero polynomial; compares below every integer."""


@lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def check_field(p: int) -> None:
    if not (isinstance(p, int) and 2 <= p <= MAX_PRIME and is_prime(p)):
        raise UnsupportedFieldError(f"p={p} is not a prime in [2, {MAX_PRIME}]")


def _fold(e: int, p: int) -> int:
    return e if e < p else (e - 1) % (p - 1) + 1


def _mono_key(m):
    return (-sum(e for _, e in m), tuple((v, -e) for v, e in m))


def _mono_mul(a, b, p: int):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = _fold(d.get(v, 0) + e, p)
    return tuple(sorted(d.items()))


class Polynomial:
    """Immutable polynomial in ``n`` variables over F_p, canonical reduced form."""

    __slots__ = ("p", "n", "_terms", "_hash", "_masks", "_degree")

    def __init__(self, p: int, n: int, terms: Optional[Mapping] = None):
        check_field(p)
        if n < 0:
            raise DimensionError("variable count must be non-negative")
        acc: dict = {}
        for mono, c in (terms or {}).items():
            if isinstance(mono, Mapping):
                mono = mono.items()
            d: dict = {}
            for v, e in mono:
                if not 0 <= v < n:
                    raise DimensionError(f"variable index {v} outside [0, {n})")
                if e < 0:
                    raise DimensionError("negative exponent")
                if e:
                    d[v] = d.get(v, 0) + e
            key = tuple(sorted((v, _fold(e, p)) for v, e in d.items()))
            acc[key] = (acc.get(key, 0) + c) % p
        self._init(p, n, {m: c for m, c in acc.items() if c})

    def _init(self, p, n, terms):
        self.p = p
        self.n = n
        self._terms = terms
        self._hash = None
        self._masks = None
        self._degree = None

    @classmethod
    def _raw(cls, p: int, n: int, terms: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj._init(p, n, {m: c for m, c in terms.items() if c})
        return obj

    # -- constructors --------------------------------------------------------

    @classmethod
    def zero(cls, p: int, n: int) -> "Polynomial":
        return cls(p, n)

    @classmethod
    def constant(cls, p: int, n: int, c: int) -> "Polynomial":
        return cls(p, n, {(): c})

    @classmethod
    def variable(cls, p: int, n: int, i: int) -> "Polynomial":
        return cls(p, n, {((i, 1),): 1})

    @classmethod
    def affine(cls, p: int, a: Sequence[int], c: int = 0) -> "Polynomial":
        """``<a, x> + c``."""
        terms = {((i, 1),): ai for i, ai in enumerate(a) if ai % p}
        terms[()] = c
        return cls(p, len(a), terms)

    @classmethod
    def from_masks(cls, n: int, masks: Iterable[int]) -> "Polynomial":
        """F_2 polynomial whose monomials are the given bit masks (repeats cancel)."""
        odd: set = set()
        for m in masks:
            odd ^= {m}
        terms = {}
        for m in odd:
            if m >> n:
                raise DimensionError(f"monomial mask {m:#x} uses a variable outside [0, {n})")
            terms[tuple((v, 1) for v in range(m.bit_length()) if (m >> v) & 1)] = 1
        return cls._raw(2, n, terms)

    # -- inspection ----------------------------------------------------------

    @property
    def terms(self) -> dict:
        """Terms in graded-lex order (highest degree first)."""
        return {m: self._terms[m] for m in sorted(self._terms, key=_mono_key)}

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self):
        if self._degree is None:
            self._degree = max((sum(e for _, e in m) for m in self._terms), default=NEG_INF)
        return self._degree

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return self.degree <= 0

    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def coefficient(self, mono) -> int:
        return self._terms.get(tuple(sorted(mono)), 0)

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def masks(self) -> tuple:
        """Monomials as bit masks; F_2 only."""
        if self.p != 2:
            raise UnsupportedFieldError("bit-mask monomials exist over F_2 only")
        if self._masks is None:
            self._masks = tuple(sum(1 << v for v, _ in m) for m in self._terms)
        return self._masks

    def linear_part(self) -> tuple:
        """Coefficients of the degree-1 monomials, as a vector."""
        a = [0] * self.n
        for m, c in self._terms.items():
            if len(m) == 1 and m[0][1] == 1:
                a[m[0][0]] = c
        return tuple(a)

    # -- arithmetic -----------------------------------------------------------

    def _check_same(self, other: "Polynomial"):
        if (self.p, self.n) != (other.p, other.n):
            raise DimensionError(f"mixing F_{self.p}^{self.n} and F_{other.p}^{other.n} polynomials")

    def _lift(self, other):
        if isinstance(other, Polynomial):
            self._check_same(other)
            return other
        if isinstance(other, (int, np.integer)):
            return Polynomial.constant(self.p, self.n, int(other))
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        t = dict(self._terms)
        for m, c in other._terms.items():
            t[m] = (t.get(m, 0) + c) % self.p
        return Polynomial._raw(self.p, self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.p, self.n, {m: (-c) % self.p for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            c = int(other) % self.p
            return Polynomial._raw(self.p, self.n, {m: (a * c) % self.p for m, a in self._terms.items()})
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return Polynomial._raw(self.p, self.n, _mul_terms(self._terms, other._terms, self.p))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = Polynomial.constant(self.p, self.n, 1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __call__(self, x: Sequence[int]) -> int:
        return evaluate(self, x)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self.p, self.n, self._terms) == (other.p, other.n, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.n, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Polynomial(p={self.p}, n={self.n}, {format_body(self)!r})"

    def __str__(self) -> str:
        return format_body(self)


def _mul_terms(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mono_mul(m1, m2, p)
            out[m] = (out.get(m, 0) + c1 * c2) % p
    return out


# -- evaluation ----------------------------------------------------------------


def evaluate(f: Polynomial, x: Sequence[int]) -> int:
    if len(x) != f.n:
        raise DimensionError(f"point of length {len(x)} for a polynomial in {f.n} variables")
    p = f.p
    total = 0
    for m, c in f._terms.items():
        t = c
        for v, e in m:
            t = t * pow(x[v], e, p) % p
            if not t:
                break
        total += t
    return total % p


def evaluate_points(f: Polynomial, pts: np.ndarray) -> np.ndarray:
    """Values at the rows of an integer array of shape (N, n)."""
    pts = np.asarray(pts, dtype=np.int64)
    if pts.ndim != 2 or pts.shape[1] != f.n:
        raise DimensionError(f"expected points of shape (N, {f.n}), got {pts.shape}")
    p = f.p
    acc = np.zeros(pts.shape[0], dtype=np.int64)
    powers: dict = {}
    for m, c in f._terms.items():
        t = np.full(pts.shape[0], c, dtype=np.int64)
        for v, e in m:
            col = powers.get((v, e))
            if col is None:
                col = powers[(v, e)] = _pow_mod(pts[:, v], e, p)
            t = (t * col) % p
        acc += t
        if len(powers) > 64:
            acc %= p
    return acc % p


def _pow_mod(col: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(col)
    base = col % p
    while e:
        if e & 1:
            out = (out * base) % p
        base = (base * base) % p
        e >>= 1
    return out


def evaluate_packed(f: Polynomial, xs: np.ndarray) -> np.ndarray:
    """F_2 values at packed points (bit j of each entry is coordinate j)."""
    xs = np.asarray(xs, dtype=np.uint64)
    acc = np.zeros(xs.shape, dtype=np.uint8)
    for m in f.masks():
        if m == 0:
            acc ^= 1
        else:
            mm = np.uint64(m)
            acc ^= (xs & mm) == mm
    return acc


def value_table(f: Polynomial) -> np.ndarray:
    """Values at every point of F_p^n, index ``sum x_j p^j``."""
    _guard_grid(f.p, f.n)
    if f.p == 2:
        return evaluate_packed(f, np.arange(1 << f.n, dtype=np.uint64))
    return evaluate_points(f, span_points_gfp((0,) * f.n, _unit_rows(f.n), f.p)).astype(np.uint8)


def _guard_grid(p: int, n: int, limit: int = 1 << MAX_BOOL_VARS):
    if p ** n > limit:
        raise ResourceLimitError("max-points", f"p^n = {p}^{n} exceeds {limit}")


def _unit_rows(n: int):
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


# -- interpolation on a full grid ---------------------------------------------


@lru_cache(maxsize=None)
def _inverse_vandermonde(p: int) -> np.ndarray:
    """``W[j, a]`` with ``coef_j = sum_a W[j, a] * value(a)`` for univariate reduced polynomials.

    Row ``a`` of the Lagrange basis is ``1 - (x - a)^(p-1)``.
    """
    W = np.zeros((p, p), dtype=np.int64)
    for a in range(p):
        for j in range(p):
            w = math.comb(p - 1, j) * pow(-a % p, p - 1 - j, p)
            W[j, a] = (int(j == 0) - w) % p
    return W


def mobius(values: np.ndarray, m: int, axis: int = -1) -> np.ndarray:
    """In-place-style F_2 Moebius transform over the last axis of length 2^m (returns a copy)."""
    a = np.array(values, dtype=np.uint8)
    a = np.moveaxis(a, axis, -1)
    lead = a.shape[:-1]
    for j in range(m):
        v = a.reshape(lead + (-1, 2, 1 << j))
        v[..., 1, :] ^= v[..., 0, :]
    return np.moveaxis(a, -1, axis)


def interpolate(values: np.ndarray, p: int, m: int) -> Polynomial:
    """The reduced polynomial in ``m`` variables with the given grid values.

    ``values[i]`` is the value at ``t`` with ``i = sum t_j p^j``.
    """
    values = np.asarray(values)
    if values.shape != (p ** m,):
        raise DimensionError(f"expected {p ** m} grid values, got shape {values.shape}")
    if p == 2:
        coef = mobius(values.astype(np.uint8) & 1, m)
        idx = np.flatnonzero(coef)
        return Polynomial.from_masks(m, (int(i) for i in idx))
    arr = (values.astype(np.int64) % p).reshape((p,) * m) if m else values.astype(np.int64) % p
    W = _inverse_vandermonde(p)
    for ax in range(m):
        arr = np.moveaxis(np.tensordot(W, arr, axes=([1], [ax])), 0, ax) % p
    terms = {}
    if m == 0:
        return Polynomial.constant(p, 0, int(arr.reshape(-1)[0]))
    nz = np.nonzero(arr)
    for pos in zip(*nz):
        # axis a of the C-ordered tensor holds t_{m-1-a}
        mono = tuple((m - 1 - a, int(e)) for a, e in reversed(list(enumerate(pos))) if e)
        terms[mono] = int(arr[pos])
    return Polynomial._raw(p, m, terms)


# -- shifts, substitution, restriction ------------------------------------------


def shift(f: Polynomial, b: Sequence[int]) -> Polynomial:
    """``x -> f(x + b)``."""
    if len(b) != f.n:
        raise DimensionError(f"shift of length {len(b)} for a polynomial in {f.n} variables")
    p = f.p
    if p == 2:
        bm = sum(1 << j for j, a in enumerate(b) if a % 2)
        out: set = set()
        for M in f.masks():
            common = M & bm
            D = common
            while True:
                out ^= {M ^ D}
                if not D:
                    break
                D = (D - 1) & common
        return Polynomial.from_masks(f.n, out)
    terms: dict = {}
    for mono, c in f._terms.items():
        factors = []
        for v, e in mono:
            bv = b[v] % p
            if not bv:
                factors.append([(((v, e),), 1)])
                continue
            factors.append([(((v, i),) if i else (), math.comb(e, i) * pow(bv, e - i, p) % p) for i in range(e + 1)])
        for combo in itertools.product(*factors):
            m = tuple(x for part, _ in combo for x in part)
            coef = c
            for _, w in combo:
                coef = coef * w % p
            terms[m] = (terms.get(m, 0) + coef) % p
    return Polynomial._raw(p, f.n, terms)


def directional_derivative(f: Polynomial, delta: Sequence[int]) -> Polynomial:
    """``f(x + delta) - f(x)``; degree drops by at least one."""
    return shift(f, delta) - f


def _symbolic_cost(f: Polynomial, nnz: list) -> int:
    cost = 0
    for mono in f._terms:
        t = 1
        for v, e in mono:
            t *= (nnz[v] + 1) ** e
        cost += t
    return cost


def affine_substitute(f: Polynomial, A: Sequence[Sequence[int]], b: Optional[Sequence[int]] = None) -> Polynomial:
    """``y -> f(A y + b)`` with ``A`` of shape n x m; result in ``m`` variables.

    Small targets are handled by evaluating on the whole grid F_p^m and
    interpolating; otherwise each monomial is expanded symbolically. The two
    routes agree exactly; only the cost model picks between them.
    """
    p, n = f.p, f.n
    A = [tuple(int(a) % p for a in row) for row in A]
    if len(A) != n:
        raise DimensionError(f"substitution matrix has {len(A)} rows, polynomial has {n} variables")
    m = len(A[0]) if A else 0
    if any(len(r) != m for r in A):
        raise DimensionError("ragged substitution matrix")
    b = tuple(int(a) % p for a in (b if b is not None else (0,) * n))
    if len(b) != n:
        raise DimensionError(f"offset of length {len(b)} for {n} variables")
    if f.is_constant():
        return Polynomial.constant(p, m, f.constant_term())
    nnz = [sum(1 for a in A[i] if a) + (1 if b[i] else 0) for i in range(n)]
    symbolic = _symbolic_cost(f, nnz)
    grid = p ** m * (len(f) + m * p) if p ** m <= GRID_LIMIT else math.inf
    if grid < symbolic:
        return _substitute_grid(f, A, b, m)
    return _substitute_symbolic(f, A, b, m)


def _substitute_grid(f, A, b, m) -> Polynomial:
    p, n = f.p, f.n
    cols = [tuple(A[i][j] for i in range(n)) for j in range(m)]
    if p == 2:
        from .linalg import pack

        xs = span_points_packed(pack(b), [pack(c) for c in cols])
        return interpolate(evaluate_packed(f, xs), 2, m)
    pts = span_points_gfp(b, cols, p)
    return interpolate(evaluate_points(f, pts), p, m)


def _substitute_symbolic(f, A, b, m) -> Polynomial:
    p = f.p
    forms: dict = {}
    powers: dict = {}

    def form_power(i, e):
        key = (i, e)
        if key not in powers:
            if i not in forms:
                t = {((j, 1),): a for j, a in enumerate(A[i]) if a}
                if b[i]:
                    t[()] = b[i]
                forms[i] = t
            if e == 1:
                powers[key] = forms[i]
            else:
                powers[key] = _mul_terms(form_power(i, e - 1), forms[i], p)
        return powers[key]

    out: dict = {}
    for mono, c in f._terms.items():
        acc = {(): c}
        for v, e in mono:
            acc = _mul_terms(acc, form_power(v, e), p)
            if not acc:
                break
        for k, a in acc.items():
            out[k] = (out.get(k, 0) + a) % p
    return Polynomial._raw(p, m, out)


def restrict(f: Polynomial, S: AffineSubspace) -> Polynomial:
    """``g(y) = f(anchor + sum y_i * directions[i])`` in ``dim(S)`` variables."""
    if S.n != f.n or S.p != f.p:
        raise DimensionError(f"subspace of F_{S.p}^{S.n} for a polynomial over F_{f.p}^{f.n}")
    dirs = S.directions
    A = [tuple(d[i] for d in dirs) for i in range(f.n)]
    if not dirs:
        return Polynomial.constant(f.p, 0, evaluate(f, S.anchor))
    return affine_substitute(f, A, S.anchor)


# -- derivative families ------------------------------------------------------------


class DerivativeFamily:
    """The polynomials ``f_alpha`` attached to a direction list.

    For every ``x``, ``f`` vanishes on ``x + span(deltas)`` iff every
    ``f_alpha(x) = 0``. Only ``alpha`` with weight at most ``deg f`` are
    stored; the others are identically zero.
    """

    def __init__(self, p: int, n: int, k: int, entries: dict):
        self.p = p
        self.n = n
        self.k = k
        self.entries = entries

    @staticmethod
    def weight(alpha: Sequence[int]) -> int:
        return sum(alpha)

    def __getitem__(self, alpha) -> Polynomial:
        alpha = tuple(alpha)
        if len(alpha) != self.k or any(not 0 <= a < self.p for a in alpha):
            raise KeyError(alpha)
        return self.entries.get(alpha, Polynomial.zero(self.p, self.n))

    def __iter__(self):
        return iter(self.entries.items())

    def __len__(self) -> int:
        return len(self.entries)

    def vanishes_at(self, x: Sequence[int]) -> bool:
        return all(evaluate(g, x) == 0 for g in self.entries.values())


def derivative_family(f: Polynomial, deltas: Sequence[Sequence[int]]) -> DerivativeFamily:
    """Build ``f_alpha`` by a change of basis that puts ``deltas`` first.

    With ``A`` the matrix whose columns are ``deltas`` completed to a basis,
    ``g(z, w) = f(A (z, w))`` is grouped by the monomial in ``z``; the
    coefficient ``g_alpha(w)`` composed with ``x -> last n-k coords of A^-1 x``
    is ``f_alpha``.
    """
    p, n = f.p, f.n
    U = Subspace(p, n, deltas)
    k = U.dim
    cols = list(U.directions) + list(complete_basis(U))
    A = [tuple(c[i] for c in cols) for i in range(n)]
    g = affine_substitute(f, A)
    grouped: dict = {}
    for mono, c in g._terms.items():
        alpha = [0] * k
        rest = []
        for v, e in mono:
            if v < k:
                alpha[v] = e
            else:
                rest.append((v - k, e))
        grouped.setdefault(tuple(alpha), {})[tuple(rest)] = c
    Ainv = inverse(A, p)
    proj = [Ainv[i] for i in range(k, n)]
    entries = {}
    deg = f.degree
    for alpha in sorted(grouped):
        if sum(alpha) > deg:
            continue
        g_alpha = Polynomial._raw(p, n - k, grouped[alpha])
        f_alpha = affine_substitute(g_alpha, proj) if n > k else Polynomial.constant(p, n, g_alpha.constant_term())
        if not f_alpha.is_zero():
            entries[alpha] = f_alpha
    return DerivativeFamily(p, n, k, entries)


# -- random polynomials -------------------------------------------------------------


def reduced_monomials(n: int, d: int, p: int) -> list:
    """Every reduced monomial of total degree at most ``d``, degree ascending then lex."""
    out = []
    for deg in range(0, d + 1):
        found = []

        def rec(start, left, acc):
            if left == 0:
                found.append(tuple(acc))
                return
            for v in range(start, n):
                for e in range(min(left, p - 1), 0, -1):
                    acc.append((v, e))
                    rec(v + 1, left - e, acc)
                    acc.pop()

        rec(0, deg, [])
        out.extend(sorted(found, key=lambda m: tuple((v, -e) for v, e in m)))
    return out


def random_polynomial(n: int, d: int, p: int, seed) -> Polynomial:
    """Every reduced monomial of degree <= d gets an independent uniform coefficient."""
    check_field(p)
    if d < 0:
        raise DimensionError("degree bound must be non-negative")
    rng = np.random.default_rng(seed)
    monos = reduced_monomials(n, d, p)
    coefs = rng.integers(0, p, size=len(monos))
    return Polynomial._raw(p, n, {m: int(c) for m, c in zip(monos, coefs)})


# -- truth tables --------------------------------------------------------------------


class BoolFn:
    """Truth table of ``f: F_2^n -> F_2``; entry ``i`` is ``f`` at the bits of ``i``.

    Callable on packed points, so it doubles as a black-box oracle.
    """

    __slots__ = ("n", "table")

    def __init__(self, n: int, table):
        if not 0 <= n <= MAX_BOOL_VARS:
            raise ResourceLimitError("max-n", f"truth tables are capped at n = {MAX_BOOL_VARS}, got {n}")
        t = np.array(table, dtype=np.uint8).reshape(-1)
        if t.shape != (1 << n,):
            raise DimensionError(f"table of length {t.size} for n = {n}")
        if np.any(t > 1):
            raise DimensionError("truth table entries must be 0 or 1")
        t.flags.writeable = False
        self.n = n
        self.table = t

    @classmethod
    def from_function(cls, n: int, fn) -> "BoolFn":
        return cls(n, [fn(x) & 1 for x in range(1 << n)])

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoolFn):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        return f"BoolFn(n={self.n}, hex={self.to_hex()[:16]}{'...' if self.n > 6 else ''})"

    def to_hex(self) -> str:
        bits = np.packbits(self.table, bitorder="little")
        value = int.from_bytes(bits.tobytes(), "little")
        return format(value, "x").zfill(max(1, ((1 << self.n) + 3) // 4))

    @classmethod
    def from_hex(cls, n: int, text: str) -> "BoolFn":
        if not 0 <= n <= MAX_BOOL_VARS:
            raise ResourceLimitError("max-n", f"truth tables are capped at n = {MAX_BOOL_VARS}, got {n}")
        value = int(text, 16)
        if value >> (1 << n):
            raise DimensionError(f"hex string has bits beyond 2^{n}")
        nbytes = max(1, (1 << n) // 8)
        raw = np.frombuffer(value.to_bytes(nbytes, "little"), dtype=np.uint8)
        return cls(n, np.unpackbits(raw, bitorder="little")[: 1 << n])


def anf_from_table(F: BoolFn) -> Polynomial:
    """Algebraic normal form via the fast Moebius transform."""
    coef = mobius(F.table, F.n)
    return Polynomial.from_masks(F.n, (int(i) for i in np.flatnonzero(coef)))


def table_from_anf(f: Polynomial) -> BoolFn:
    if f.p != 2:
        raise UnsupportedFieldError("truth tables are defined for F_2 polynomials only")
    if f.n > MAX_BOOL_VARS:
        raise ResourceLimitError("max-n", f"truth tables are capped at n = {MAX_BOOL_VARS}")
    coef = np.zeros(1 << f.n, dtype=np.uint8)
    for m in f.masks():
        coef[m] = 1
    return BoolFn(f.n, mobius(coef, f.n))


# -- text formats --------------------------------------------------------------------


def format_body(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for mono, c in f.terms.items():
        factors = [f"x{v + 1}" + (f"^{e}" if e != 1 else "") for v, e in mono]
        if c != 1 or not factors:
            factors.insert(0, str(c))
        parts.append("*".join(factors))
    return " + ".join(parts)


def format_polynomial(f: Polynomial) -> str:
    return f"p={f.p} n={f.n}\n{format_body(f)}\n"


_HEADER = re.compile(r"\s*p\s*=\s*(\d+)\s+n\s*=\s*(\d+)\s*$")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|x(?P<var>\d+)(?:\^(?P<exp>\d+))?|(?P<op>[+*]))")


def _position(text: str, offset: int, first_line: int) -> tuple:
    line = first_line + text.count("\n", 0, offset)
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_polynomial(text: str) -> Polynomial:
    """Parse the ``p=<prime> n=<count>`` header plus a ``+``-separated body."""
    lines = text.split("\n")
    head_idx = next((i for i, ln in enumerate(lines) if ln.strip()), None)
    if head_idx is None:
        raise ParseError("empty input", 1, 1)
    m = _HEADER.match(lines[head_idx])
    if not m:
        raise ParseError("expected header 'p=<prime> n=<count>'", head_idx + 1, 1)
    p, n = int(m.group(1)), int(m.group(2))
    try:
        check_field(p)
    except UnsupportedFieldError as exc:
        raise ParseError(str(exc), head_idx + 1, lines[head_idx].index("p") + 1) from None
    body = "\n".join(lines[head_idx + 1:])
    first = head_idx + 2
    if not body.strip():
        raise ParseError("missing polynomial body", first, 1)

    terms: dict = {}
    pos = 0
    mono: dict = {}
    coef = 1
    expect_factor = True
    end = len(body.rstrip())
    while pos < end:
        tok = _TOKEN.match(body, pos)
        if not tok or tok.end() == pos:
            raise ParseError(f"unexpected character {body[pos:pos + 1]!r}", *_position(body, _skip_ws(body, pos), first))
        start = _skip_ws(body, pos)
        if tok.group("op"):
            if expect_factor:
                raise ParseError(f"expected a factor before {tok.group('op')!r}", *_position(body, start, first))
            if tok.group("op") == "+":
                key = tuple(sorted(mono.items()))
                terms[key] = terms.get(key, 0) + coef
                mono, coef = {}, 1
            expect_factor = True
        else:
            if not expect_factor:
                raise ParseError("expected '+' or '*' between factors", *_position(body, start, first))
            if tok.group("num") is not None:
                coef *= int(tok.group("num"))
            else:
                v = int(tok.group("var"))
                if not 1 <= v <= n:
                    raise ParseError(f"variable x{v} outside x1..x{n}", *_position(body, start, first))
                e = int(tok.group("exp")) if tok.group("exp") else 1
                mono[v - 1] = mono.get(v - 1, 0) + e
            expect_factor = False
        pos = tok.end()
    if expect_factor:
        raise ParseError("expression ends with an operator", *_position(body, end, first))
    key = tuple(sorted(mono.items()))
    terms[key] = terms.get(key, 0) + coef
    return Polynomial(p, n, terms)


def _skip_ws(s: str, pos: int) -> int:
    while pos < len(s) and s[pos].isspace():
        pos += 1
    return pos


def format_boolfn(F: BoolFn) -> str:
    return f"n={F.n}\n{F.to_hex()}\n"


def parse_boolfn(text: str) -> BoolFn:
    lines = [ln for ln in text.split("\n")]
    idx = [i for i, ln in enumerate(lines) if ln.strip()]
    if len(idx) < 2:
        raise ParseError("expected 'n=<count>' followed by a hex line", 1, 1)
    m = re.fullmatch(r"\s*n\s*=\s*(\d+)\s*", lines[idx[0]])
    if not m:
        raise ParseError("expected header 'n=<count>'", idx[0] + 1, 1)
    hexline = lines[idx[1]].strip()
    bad = re.search(r"[^0-9a-f]", hexline)
    if bad:
        raise ParseError(f"non-hex character {bad.group()!r}", idx[1] + 1, lines[idx[1]].index(bad.group()) + 1)
    return BoolFn.from_hex(int(m.group(1)), hexline)
