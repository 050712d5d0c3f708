"""Exact dense linear algebra over the integers and rationals.

Matrices are carried by :class:`ExactMatrix`, backed by an ``int64`` numpy
array when every entry is a small integer and by an object array of
``int``/``Fraction`` otherwise.  Nothing here ever touches floating point.

Three rank engines are available:

``bareiss``
    fraction-free elimination on dense Python integers (integer input only).
``rational``
    Gauss-Jordan over ``Fraction`` with row-sparse storage.
``modular``
    elimination modulo two independent primes in ``(2**40, 2**41)``; the
    results must agree, otherwise the exact engine decides.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

INT64_SAFE = 1 << 62
PRIME_LOW = 1 << 40
PRIME_HIGH = 1 << 41
_LIMB = 21
_LIMB_MASK = (1 << _LIMB) - 1

# matrices with at most this many entries go through dense Bareiss in "auto"
BAREISS_MAX_ENTRIES = 64 * 64
# ambient dimension from which "auto" switches to the modular engine
MODULAR_MIN_COLUMNS = 1024

METHODS = ("auto", "exact", "bareiss", "rational", "modular")


class ClosureBudgetExceeded(RuntimeError):
    """Span closure did not stabilise within the allowed number of rounds."""


class DimensionMismatch(ValueError):
    pass


def _as_exact(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, (float, np.floating, complex)):
        raise TypeError(f"floating point value {x!r} in exact matrix")
    return Fraction(x)


class ExactMatrix:
    """Dense matrix with exact integer or rational entries."""

    __slots__ = ("_a", "__weakref__")

    def __init__(self, entries, cols: int | None = None):
        if isinstance(entries, ExactMatrix):
            self._a = entries._a
            return
        if isinstance(entries, np.ndarray) and entries.dtype.kind in "iub":
            arr = entries.astype(np.int64, copy=True)
            if arr.ndim != 2:
                raise ValueError("ExactMatrix needs a 2-d array")
            if arr.size and np.abs(arr).max() >= INT64_SAFE:
                arr = arr.astype(object)
            arr.setflags(write=False)
            self._a = arr
            return
        if isinstance(entries, np.ndarray) and entries.dtype.kind == "f":
            raise TypeError("floating point array given to ExactMatrix")
        if cols is not None:
            flat = [_as_exact(x) for x in entries]
            rows = len(flat) // cols if cols else 0
            if rows * cols != len(flat):
                raise ValueError("entry count is not a multiple of cols")
            grid = [flat[r * cols:(r + 1) * cols] for r in range(rows)]
        else:
            grid = [[_as_exact(x) for x in row] for row in entries]
            widths = {len(r) for r in grid}
            if len(widths) > 1:
                raise ValueError("ragged rows")
            cols = widths.pop() if widths else 0
        self._a = _pack(grid, len(grid), cols)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "ExactMatrix":
        m = cls.__new__(cls)
        if arr.dtype == object:
            arr = _repack(arr)
        arr.setflags(write=False)
        m._a = arr
        return m

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls._wrap(np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "ExactMatrix":
        if not rows:
            return cls.zeros(0, cols or 0)
        return cls(rows)

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def is_integer(self) -> bool:
        return self._a.dtype == np.int64 or all(isinstance(x, int) for x in self._a.flat)

    @property
    def entries(self) -> tuple:
        return tuple(_py(x) for x in self._a.flat)

    def array(self) -> np.ndarray:
        """Read-only view of the backing array (``int64`` or ``object``)."""
        return self._a

    def tolist(self) -> list[list]:
        return [[_py(x) for x in row] for row in self._a]

    def flatten(self) -> tuple:
        return self.entries

    def __getitem__(self, key):
        r, c = key
        return _py(self._a[r, c])

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.tolist()!r})"

    @property
    def T(self) -> "ExactMatrix":
        return transpose(self)

    def __neg__(self):
        return ExactMatrix._wrap(-self._a if self._a.dtype == object else -self._a)

    def __add__(self, other: "ExactMatrix"):
        _same_shape(self, other)
        return ExactMatrix._wrap(_combine(self._a, other._a, np.add))

    def __sub__(self, other: "ExactMatrix"):
        _same_shape(self, other)
        return ExactMatrix._wrap(_combine(self._a, other._a, np.subtract))

    def scale(self, c) -> "ExactMatrix":
        c = _as_exact(c)
        a = self._a
        if isinstance(c, int) and a.dtype == np.int64 and _maxabs(a) * abs(c) < INT64_SAFE:
            return ExactMatrix._wrap(a * c)
        return ExactMatrix._wrap(a.astype(object) * c)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        a, b = self._a, other._a
        if a.dtype == np.int64 and b.dtype == np.int64:
            if _maxabs(a) * _maxabs(b) * max(self.cols, 1) < INT64_SAFE:
                return ExactMatrix._wrap(a @ b)
        return ExactMatrix._wrap(a.astype(object) @ b.astype(object))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_signed_permutation(self) -> bool:
        """Exactly one nonzero per row and column, each equal to +1 or -1."""
        if not self.is_square() or self._a.dtype != np.int64:
            return False
        a = self._a
        nz = a != 0
        return (
            bool(np.all(np.abs(a[nz]) == 1))
            and bool(np.all(nz.sum(axis=0) == 1))
            and bool(np.all(nz.sum(axis=1) == 1))
        )


def _py(x):
    if isinstance(x, np.integer):
        return int(x)
    return x


def _maxabs(a: np.ndarray) -> int:
    return int(np.abs(a).max()) if a.size else 0


def _same_shape(a: ExactMatrix, b: ExactMatrix):
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")


def _combine(a: np.ndarray, b: np.ndarray, op) -> np.ndarray:
    if a.dtype == np.int64 and b.dtype == np.int64 and _maxabs(a) + _maxabs(b) < INT64_SAFE:
        return op(a, b)
    return op(a.astype(object), b.astype(object))


def _pack(grid: list[list], rows: int, cols: int) -> np.ndarray:
    if all(isinstance(x, int) and -INT64_SAFE < x < INT64_SAFE for row in grid for x in row):
        arr = np.array(grid, dtype=np.int64).reshape(rows, cols)
    else:
        arr = np.empty((rows, cols), dtype=object)
        for r, row in enumerate(grid):
            for c, x in enumerate(row):
                arr[r, c] = x
    arr.setflags(write=False)
    return arr


def _repack(arr: np.ndarray) -> np.ndarray:
    """Normalise an object array; drop to int64 when possible."""
    flat = [_as_exact(x) for x in arr.flat]
    if all(isinstance(x, int) and -INT64_SAFE < x < INT64_SAFE for x in flat):
        return np.array(flat, dtype=np.int64).reshape(arr.shape)
    out = np.empty(arr.shape, dtype=object)
    out.flat[:] = flat
    return out


def transpose(m: ExactMatrix) -> ExactMatrix:
    return ExactMatrix._wrap(m.array().T.copy())


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Kronecker product; shapes multiply."""
    x, y = a.array(), b.array()
    if x.dtype == np.int64 and y.dtype == np.int64 and _maxabs(x) * _maxabs(y) < INT64_SAFE:
        return ExactMatrix._wrap(np.kron(x, y))
    return ExactMatrix._wrap(np.kron(x.astype(object), y.astype(object)))


def kron_all(factors: Iterable[ExactMatrix]) -> ExactMatrix:
    out = None
    for f in factors:
        out = f if out is None else kron(out, f)
    if out is None:
        return ExactMatrix.identity(1)
    return out


def matrix_power(m: ExactMatrix, k: int) -> ExactMatrix:
    if not m.is_square():
        raise DimensionMismatch("matrix power needs a square matrix")
    result = ExactMatrix.identity(m.rows)
    base = m
    while k:
        if k & 1:
            result = result @ base
        k >>= 1
        if k:
            base = base @ base
    return result


def matrix_order(m: ExactMatrix, max_order: int) -> int | None:
    """Least ``k <= max_order`` with ``m**k == I``, or ``None``."""
    if not m.is_square():
        raise DimensionMismatch("matrix order needs a square matrix")
    ident = ExactMatrix.identity(m.rows)
    power = m
    for k in range(1, max_order + 1):
        if power == ident:
            return k
        power = power @ m
    return None


# ---------------------------------------------------------------------------
# modular arithmetic helpers


def mulmod(a, b, p: int):
    """Elementwise ``a * b mod p`` for int64 arrays with entries in ``[0, p)``, ``p < 2**41``."""
    b = np.asarray(b, dtype=np.int64)
    a = np.asarray(a, dtype=np.int64)
    hi = b >> _LIMB
    lo = b & _LIMB_MASK
    r = (a * hi) % p
    r = (r << _LIMB) % p
    return (r + (a * lo) % p) % p


def _seed() -> int:
    return int(os.environ.get("CDTORUS_SEED", "0"))


def random_prime(rng: random.Random, low: int = PRIME_LOW, high: int = PRIME_HIGH) -> int:
    from sympy import nextprime

    while True:
        p = nextprime(rng.randrange(low, high - (1 << 20)))
        if p < high:
            return int(p)


def default_primes(first: int | None = None, seed: int | None = None) -> tuple[int, int]:
    """Two distinct primes in ``(2**40, 2**41)``; ``first`` forces the first one."""
    rng = random.Random(_seed() if seed is None else seed)
    if first is not None:
        _check_prime(first)
    p1 = first if first is not None else random_prime(rng)
    p2 = random_prime(rng)
    while p2 == p1:
        p2 = random_prime(rng)
    return p1, p2


def _check_prime(p: int):
    from sympy import isprime

    if not (2 < p < PRIME_HIGH and isprime(p)):
        raise ValueError(f"{p} is not an odd prime below 2**41")


# ---------------------------------------------------------------------------
# incremental reduced echelon forms


class RationalEchelon:
    """Reduced row echelon basis over Q, grown one vector at a time.

    Rows are stored sparsely (column -> value); pivots are normalised to 1 and
    every pivot column is zero in all other rows.
    """

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self.rows: list[dict[int, object]] = []
        self.pivots: list[int] = []
        self._pivot_row: dict[int, int] = {}
        self._col_rows: dict[int, set[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict[int, object]) -> dict[int, object]:
        v = dict(vec)
        hits = [(c, v[c]) for c in v if c in self._pivot_row]
        for c, coeff in hits:
            for col, val in self.rows[self._pivot_row[c]].items():
                nv = v.get(col, 0) - coeff * val
                if nv:
                    v[col] = nv
                else:
                    v.pop(col, None)
        return v

    def insert(self, vec: dict[int, object]) -> bool:
        """Add ``vec`` to the span; return whether the rank grew."""
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        lead = v[c]
        if lead != 1:
            v = {k: _div(x, lead) for k, x in v.items()}
        for r in list(self._col_rows.get(c, ())):
            row = self.rows[r]
            coeff = row[c]
            for col, val in v.items():
                nv = row.get(col, 0) - coeff * val
                if nv:
                    if col not in row:
                        self._col_rows.setdefault(col, set()).add(r)
                    row[col] = nv
                else:
                    del row[col]
                    self._col_rows[col].discard(r)
        idx = len(self.rows)
        self.rows.append(v)
        self.pivots.append(c)
        self._pivot_row[c] = idx
        for col in v:
            self._col_rows.setdefault(col, set()).add(idx)
        return True

    def sorted_rows(self) -> list[tuple]:
        order = sorted(range(len(self.rows)), key=lambda r: self.pivots[r])
        out = []
        for r in order:
            dense = [0] * self.ambient_dim
            for col, val in self.rows[r].items():
                dense[col] = val
            out.append(tuple(dense))
        return out


def _div(x, d):
    if isinstance(x, int) and isinstance(d, int):
        q, r = divmod(x, d)
        return q if r == 0 else Fraction(x, d)
    out = Fraction(x) / d
    return out.numerator if out.denominator == 1 else out


class ModularEchelon:
    """Reduced row echelon basis over GF(p), stored densely in int64."""

    def __init__(self, ambient_dim: int, prime: int, capacity: int = 64):
        if ambient_dim >= 1 << 21:
            raise ValueError("ambient dimension too large for int64 accumulation")
        self.ambient_dim = ambient_dim
        self.prime = prime
        self._buf = np.zeros((max(capacity, 1), ambient_dim), dtype=np.int64)
        self._n = 0
        self._pivot_row = np.full(ambient_dim, -1, dtype=np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return self._n

    def _grow(self):
        new = np.zeros((2 * self._buf.shape[0], self.ambient_dim), dtype=np.int64)
        new[: self._n] = self._buf[: self._n]
        self._buf = new

    def reduce(self, v: np.ndarray) -> np.ndarray:
        p = self.prime
        v = np.asarray(v, dtype=np.int64) % p
        if self._n == 0:
            return v
        nz = np.flatnonzero(v)
        hit = nz[self._pivot_row[nz] >= 0]
        if hit.size == 0:
            return v
        rows = self._buf[self._pivot_row[hit]]
        coeffs = v[hit]
        # at most ambient_dim < 2**21 terms below p < 2**41: sums fit in int64
        plus = coeffs == 1
        minus = coeffs == p - 1
        other = ~(plus | minus)
        acc = rows[plus].sum(axis=0) - rows[minus].sum(axis=0)
        if other.any():
            acc += mulmod(coeffs[other, None], rows[other], p).sum(axis=0)
        return (v - acc) % p

    def insert(self, vec) -> bool:
        p = self.prime
        v = self.reduce(vec)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        inv = pow(int(v[c]), -1, p)
        vals = mulmod(v[nz], inv, p)
        v = np.zeros(self.ambient_dim, dtype=np.int64)
        v[nz] = vals
        n = self._n
        if n:
            col = self._buf[:n, c]
            touched = np.flatnonzero(col)
            if touched.size:
                idx = np.ix_(touched, nz)
                update = mulmod(col[touched, None], vals[None, :], p)
                self._buf[idx] = (self._buf[idx] - update) % p
        if n == self._buf.shape[0]:
            self._grow()
        self._buf[n] = v
        self._pivot_row[c] = n
        self.pivots.append(c)
        self._n += 1
        return True


def _sparse(vec: Sequence) -> dict[int, object]:
    if isinstance(vec, np.ndarray) and vec.dtype == np.int64:
        nz = np.flatnonzero(vec)
        return dict(zip(nz.tolist(), vec[nz].tolist()))
    return {i: _as_exact(x) for i, x in enumerate(vec) if x}


# ---------------------------------------------------------------------------
# rank / nullspace


def _bareiss_rank(grid: list[list[int]]) -> int:
    a = [row[:] for row in grid]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        prow = a[r]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (pv * row[j] - f * prow[j]) // prev
            row[c] = 0
        prev = pv
        r += 1
    return r


def rank_mod_p(m: ExactMatrix, prime: int) -> int:
    """Rank of ``m`` over GF(prime)."""
    arr = _int_array(m)
    if arr is None:
        raise TypeError("modular rank needs an integer matrix")
    ech = ModularEchelon(m.cols, prime, capacity=min(m.rows, m.cols) or 1)
    for row in arr:
        if ech.rank == m.cols:
            break
        ech.insert(row)
    return ech.rank


def _int_array(m: ExactMatrix) -> np.ndarray | None:
    a = m.array()
    if a.dtype == np.int64:
        return a
    if all(isinstance(x, int) for x in a.flat):
        return None  # beyond int64; modular reduction of big ints not supported here
    return None


def _rational_rank(m: ExactMatrix) -> int:
    ech = RationalEchelon(m.cols)
    for row in m.array():
        ech.insert(_sparse(row))
    return ech.rank


def rank(m: ExactMatrix, method: str = "auto", primes: Sequence[int] | None = None) -> int:
    """Rank of ``m`` over the rationals.

    ``method`` is one of ``auto``, ``exact``, ``bareiss``, ``rational`` or
    ``modular``.  The modular engine reports a rank only if two primes agree;
    on disagreement it falls back to exact elimination.
    """
    if method not in METHODS:
        raise ValueError(f"unknown rank method {method!r}")
    if m.rows == 0 or m.cols == 0:
        return 0
    integer = m.is_integer
    if method == "auto":
        if not integer:
            method = "rational"
        elif m.rows * m.cols <= BAREISS_MAX_ENTRIES:
            method = "bareiss"
        elif m.cols >= MODULAR_MIN_COLUMNS and m.array().dtype == np.int64:
            method = "modular"
        else:
            method = "rational"
    elif method == "exact":
        method = "bareiss" if integer and m.rows * m.cols <= BAREISS_MAX_ENTRIES else "rational"
    if method == "bareiss":
        if not integer:
            raise TypeError("Bareiss elimination needs integer entries")
        return _bareiss_rank(m.tolist())
    if method == "rational":
        return _rational_rank(m)
    if m.array().dtype != np.int64:
        return _rational_rank(m)
    p1, p2 = primes if primes else default_primes()
    r1 = rank_mod_p(m, p1)
    r2 = rank_mod_p(m, p2)
    if r1 == r2:
        return r1
    return _rational_rank(m)


def rref(m: ExactMatrix) -> tuple[list[tuple], list[int]]:
    """Exact reduced row echelon rows (nonzero only) and their pivot columns."""
    ech = RationalEchelon(m.cols)
    for row in m.array():
        ech.insert(_sparse(row))
    rows = ech.sorted_rows()
    return rows, sorted(ech.pivots)


def nullspace_basis(m: ExactMatrix) -> list[tuple]:
    """Basis of ``{v : m v = 0}`` over the rationals, one vector per free column."""
    ech = RationalEchelon(m.cols)
    for row in m.array():
        if ech.rank == m.cols:
            break
        ech.insert(_sparse(row))
    pivot_set = set(ech.pivots)
    basis = []
    by_pivot = {ech.pivots[i]: ech.rows[i] for i in range(ech.rank)}
    # free column f contributes e_f - sum over pivot rows of row[f] * e_pivot
    col_hits: dict[int, list[tuple[int, object]]] = {}
    for pc, row in by_pivot.items():
        for col, val in row.items():
            if col != pc:
                col_hits.setdefault(col, []).append((pc, val))
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [0] * m.cols
        v[f] = 1
        for pc, val in col_hits.get(f, ()):
            v[pc] = -val
        basis.append(tuple(v))
    return basis


def mat_vec(m: ExactMatrix, v: Sequence) -> tuple:
    out = []
    for row in m.array():
        s = 0
        for a, b in zip(row, v):
            if a and b:
                s += _py(a) * b
        out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# span closure


@dataclass(eq=False)
class SpanBasis:
    """Echelon basis of a linear span of flattened square matrices.

    ``elements`` are integer (or rational) witnesses that are independent over
    Q; ``rows`` is the exact reduced echelon form of their span, computed on
    first access.
    """

    ambient_dim: int
    elements: list[ExactMatrix] = field(repr=False)
    method: str = "rational"
    primes: tuple[int, ...] = ()
    rounds: int = 0

    @property
    def rank(self) -> int:
        return len(self.elements)

    @cached_property
    def rows(self) -> list[tuple]:
        ech = RationalEchelon(self.ambient_dim)
        for e in self.elements:
            ech.insert(_sparse(e.flatten()))
        if ech.rank != self.rank:
            raise ArithmeticError("closure witnesses are not independent over Q")
        return ech.sorted_rows()


class _Monomial:
    """Signed permutation: ``M e_k = sign[k] * e_{perm[k]}``."""

    __slots__ = ("perm", "sign")

    def __init__(self, perm: np.ndarray, sign: np.ndarray):
        self.perm = perm
        self.sign = sign

    @classmethod
    def from_matrix(cls, m: ExactMatrix) -> "_Monomial":
        a = m.array()
        perm = np.argmax(a != 0, axis=0)
        sign = a[perm, np.arange(a.shape[1])]
        return cls(perm.astype(np.int64), sign.astype(np.int64))

    def compose(self, other: "_Monomial") -> "_Monomial":
        """Matrix product ``self @ other``."""
        return _Monomial(self.perm[other.perm], other.sign * self.sign[other.perm])

    def key(self) -> bytes:
        # identify M with -M: normalise so that the image of e_0 has sign +1
        s = self.sign if self.sign[0] > 0 else -self.sign
        return self.perm.tobytes() + s.astype(np.int8).tobytes()

    def flat_vector(self, n: int) -> np.ndarray:
        v = np.zeros(n * n, dtype=np.int64)
        v[self.perm * n + np.arange(n)] = self.sign
        return v

    def flat_sparse(self, n: int) -> dict[int, int]:
        return {int(self.perm[k]) * n + k: int(self.sign[k]) for k in range(n)}

    def to_matrix(self, n: int) -> ExactMatrix:
        a = np.zeros((n, n), dtype=np.int64)
        a[self.perm, np.arange(n)] = self.sign
        return ExactMatrix._wrap(a)


def _closure_engine(ambient: int, method: str, prime: int | None):
    if method == "modular":
        return ModularEchelon(ambient, prime)
    return RationalEchelon(ambient)


def _resolve_closure_method(method: str, ambient: int, integer: bool) -> str:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method in ("exact", "bareiss", "rational"):
        return "rational"
    if method == "auto":
        return "modular" if integer and ambient >= MODULAR_MIN_COLUMNS else "rational"
    return "modular" if integer else "rational"


def span_closure(
    generators: Sequence[ExactMatrix],
    max_products: int = 16,
    method: str = "auto",
    primes: Sequence[int] | None = None,
) -> SpanBasis:
    """Smallest span containing ``generators`` and closed under multiplication
    by a generator on either side.

    Breadth-first: each round multiplies the basis elements added in the
    previous round by every generator, on both sides, and keeps the products
    that increase the rank.  Raises :class:`ClosureBudgetExceeded` when the
    rank is still growing after ``max_products`` rounds.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("span_closure needs at least one generator")
    n = gens[0].rows
    for g in gens:
        if g.shape != (n, n):
            raise DimensionMismatch("generators must be square and of equal size")
    ambient = n * n
    integer = all(g.is_integer for g in gens)
    method = _resolve_closure_method(method, ambient, integer)
    if method == "modular":
        p1, p2 = tuple(primes) if primes else default_primes()
    else:
        p1 = p2 = None

    monomial = all(g.is_signed_permutation() for g in gens)
    if monomial:
        elements, rounds = _monomial_closure(gens, n, max_products, method, p1)
    else:
        elements, rounds = _dense_closure(gens, n, max_products, method, p1)

    if method == "modular":
        # certify: the witnesses must stay independent and closed modulo a second prime
        check, _ = (
            _monomial_closure(elements, n, max_products, method, p2, extra=gens)
            if monomial
            else _dense_closure(elements, n, max_products, method, p2, extra=gens)
        )
        certified = len(check) == len(elements) and all(
            a is b for a, b in zip(check, elements)
        )
        if not certified:
            elements, rounds = (
                _monomial_closure(gens, n, max_products, "rational", None)
                if monomial
                else _dense_closure(gens, n, max_products, "rational", None)
            )
            return SpanBasis(ambient, elements, "rational", (), rounds)
        return SpanBasis(ambient, elements, "modular", (p1, p2), rounds)
    return SpanBasis(ambient, elements, "rational", (), rounds)


def _dense_closure(gens, n, max_rounds, method, prime, extra=None):
    ambient = n * n
    ech = _closure_engine(ambient, method, prime)

    def add(m: ExactMatrix) -> bool:
        vec = m.array().reshape(-1) if method == "modular" else _sparse(m.flatten())
        return ech.insert(vec)

    multipliers = list(extra) if extra is not None else gens
    elements = []
    frontier = []
    for g in gens:
        if add(g):
            elements.append(g)
            frontier.append(g)
    rounds = 0
    while frontier:
        if rounds >= max_rounds:
            raise ClosureBudgetExceeded(
                f"rank still growing ({len(elements)}) after {max_rounds} rounds"
            )
        rounds += 1
        new = []
        for b in frontier:
            for g in multipliers:
                for prod in (b @ g, g @ b):
                    if add(prod):
                        elements.append(prod)
                        new.append(prod)
        frontier = new
    return elements, rounds


def _monomial_closure(gens, n, max_rounds, method, prime, extra=None):
    ambient = n * n
    ech = _closure_engine(ambient, method, prime)
    seen: set[bytes] = set()

    def add(mono: _Monomial) -> bool:
        k = mono.key()
        if k in seen:
            return False
        seen.add(k)
        vec = mono.flat_vector(n) if method == "modular" else mono.flat_sparse(n)
        return ech.insert(vec)

    mult = [_Monomial.from_matrix(g) for g in (extra if extra is not None else gens)]
    elements = []
    frontier = []
    for g in gens:
        mono = _Monomial.from_matrix(g)
        if add(mono):
            elements.append(g)
            frontier.append(mono)
    rounds = 0
    while frontier:
        if rounds >= max_rounds:
            raise ClosureBudgetExceeded(
                f"rank still growing ({len(elements)}) after {max_rounds} rounds"
            )
        rounds += 1
        new = []
        for b in frontier:
            for g in mult:
                for prod in (b.compose(g), g.compose(b)):
                    if add(prod):
                        elements.append(prod.to_matrix(n))
                        new.append(prod)
        frontier = new
    return elements, rounds
