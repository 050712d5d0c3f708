"""Cayley-Dickson algebras as signed-permutation structure-constant tables.

Every algebra here has a monomial basis ``e_0 .. e_{dim-1}`` whose products are
again basis units up to sign, ``e_j * e_k = sign * e_l``.  The table stores the
pair ``(sign, l)`` for every ``(j, k)``.

Doubling convention, for pairs ``(x, y)`` of elements of the smaller algebra::

    (x, y)(z, w) = (x z - conj(w) y,  w x + y conj(z))

The first half of the doubled basis is ``(e_j, 0)``, the second half
``(0, e_j)``, so sub-algebra indices are preserved.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

Scalar = Union[int, Fraction]


class AlgebraMismatch(ValueError):
    """Raised when combining elements of different algebras."""


class NotAssociative(ValueError):
    """Raised by operations that require an associative table."""


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    """Structure constants ``e_j e_k = signs[j, k] * e_{index[j, k]}``."""

    name: str
    signs: np.ndarray
    index: np.ndarray

    def __post_init__(self):
        signs = np.array(self.signs, dtype=np.int64)
        index = np.array(self.index, dtype=np.int64)
        if signs.shape != index.shape or signs.ndim != 2 or signs.shape[0] != signs.shape[1]:
            raise ValueError("structure tables must be square and of equal shape")
        signs.setflags(write=False)
        index.setflags(write=False)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "index", index)

    @property
    def dim(self) -> int:
        return self.signs.shape[0]

    def product(self, j: int, k: int) -> tuple[int, int]:
        """Return ``(sign, l)`` with ``e_j e_k = sign * e_l``."""
        return int(self.signs[j, k]), int(self.index[j, k])

    def unit(self, j: int) -> "AlgebraElement":
        coeffs = [0] * self.dim
        coeffs[j] = 1
        return AlgebraElement(self, tuple(coeffs))

    def element(self, coeffs: Sequence[Scalar]) -> "AlgebraElement":
        return AlgebraElement(self, tuple(coeffs))

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, (0,) * self.dim)

    def same_as(self, other: "AlgebraTable") -> bool:
        """Structural equality of the multiplication tables."""
        return (
            self.dim == other.dim
            and np.array_equal(self.signs, other.signs)
            and np.array_equal(self.index, other.index)
        )

    def check_invariants(self, division: bool = True) -> list[str]:
        """Return a list of violated table invariants (empty when sound).

        With ``division=False`` (tensor products) imaginary units need only
        square to ``+e_0`` or ``-e_0``.
        """
        problems = []
        n = self.dim
        if n & (n - 1):
            problems.append(f"dim {n} is not a power of two")
        if not np.all(np.abs(self.signs) == 1):
            problems.append("signs must be +1 or -1")
        if np.any(self.index < 0) or np.any(self.index >= n):
            problems.append("target index out of range")
        rng = np.arange(n)
        if not (np.all(self.signs[0] == 1) and np.array_equal(self.index[0], rng)):
            problems.append("e_0 is not a left unit")
        if not (np.all(self.signs[:, 0] == 1) and np.array_equal(self.index[:, 0], rng)):
            problems.append("e_0 is not a right unit")
        diag_sign = np.diagonal(self.signs)[1:]
        diag_index = np.diagonal(self.index)[1:]
        if not np.all(diag_index == 0):
            problems.append("some basis unit does not square to a multiple of e_0")
        elif division and not np.all(diag_sign == -1):
            problems.append("some imaginary unit does not square to -e_0")
        for j in range(n):
            if len(set(self.index[j].tolist())) != n:
                problems.append(f"row {j} is not a permutation")
                break
        for k in range(n):
            if len(set(self.index[:, k].tolist())) != n:
                problems.append(f"column {k} is not a permutation")
                break
        return problems


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Exact coefficient vector in the basis of ``algebra``."""

    algebra: AlgebraTable
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.algebra.dim:
            raise ValueError(
                f"expected {self.algebra.dim} coefficients, got {len(self.coeffs)}"
            )

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra.same_as(other.algebra) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.algebra.name, self.coeffs))

    def _check(self, other: "AlgebraElement"):
        if not (self.algebra is other.algebra or self.algebra.same_as(other.algebra)):
            raise AlgebraMismatch(f"{self.algebra.name} vs {other.algebra.name}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, c: Scalar) -> "AlgebraElement":
        return AlgebraElement(self.algebra, tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return multiply(self, other)

    def __repr__(self):
        terms = [f"{c:+}*e{j}" for j, c in enumerate(self.coeffs) if c]
        return f"<{self.algebra.name}: {' '.join(terms) or '0'}>"


def base_real() -> AlgebraTable:
    """The reals as a one-dimensional table."""
    return AlgebraTable("R", [[1]], [[0]])


def cd_double(a: AlgebraTable, name: str | None = None) -> AlgebraTable:
    """Apply one Cayley-Dickson doubling step to ``a``."""
    d = a.dim
    signs = np.empty((2 * d, 2 * d), dtype=np.int64)
    index = np.empty((2 * d, 2 * d), dtype=np.int64)
    # conj(e_0) = e_0, conj(e_j) = -e_j for j >= 1
    conj = np.where(np.arange(d) == 0, 1, -1)
    for j in range(d):
        for k in range(d):
            # (e_j, 0)(e_k, 0) = (e_j e_k, 0)
            signs[j, k] = a.signs[j, k]
            index[j, k] = a.index[j, k]
            # (e_j, 0)(0, e_k) = (0, e_k e_j)
            signs[j, d + k] = a.signs[k, j]
            index[j, d + k] = d + a.index[k, j]
            # (0, e_j)(e_k, 0) = (0, e_j conj(e_k))
            signs[d + j, k] = conj[k] * a.signs[j, k]
            index[d + j, k] = d + a.index[j, k]
            # (0, e_j)(0, e_k) = (-conj(e_k) e_j, 0)
            signs[d + j, d + k] = -conj[k] * a.signs[k, j]
            index[d + j, d + k] = a.index[k, j]
    return AlgebraTable(name or f"CD({a.name})", signs, index)


_NAMES = {1: "R", 2: "C", 4: "H", 8: "O"}


def cayley_dickson(dim: int) -> AlgebraTable:
    """The Cayley-Dickson algebra of dimension 1, 2, 4 or 8."""
    if dim not in _NAMES:
        raise ValueError(f"only dimensions 1, 2, 4, 8 are supported, got {dim}")
    table = base_real()
    while table.dim < dim:
        table = cd_double(table, _NAMES[table.dim * 2])
    return table


def complexes() -> AlgebraTable:
    return cayley_dickson(2)


def quaternions() -> AlgebraTable:
    return cayley_dickson(4)


def octonions() -> AlgebraTable:
    return cayley_dickson(8)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Bilinear extension of the table product."""
    x._check(y)
    t = x.algebra
    terms = np.multiply.outer(np.array(x.coeffs, dtype=object), np.array(y.coeffs, dtype=object))
    out = np.zeros(t.dim, dtype=object)
    np.add.at(out, t.index, terms * t.signs)
    return AlgebraElement(t, tuple(_plain(c) for c in out))


def _plain(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return int(c) if isinstance(c, (int, np.integer)) else c


def conjugate(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.algebra, (x.coeffs[0],) + tuple(-c for c in x.coeffs[1:]))


def norm(x: AlgebraElement) -> Scalar:
    """Sum of squared coefficients (the composition norm)."""
    return sum(c * c for c in x.coeffs)


def is_associative(a: AlgebraTable) -> tuple[bool, tuple[int, int, int] | None]:
    """Check ``(e_j e_k) e_l == e_j (e_k e_l)`` on every basis triple.

    Returns ``(True, None)`` or ``(False, (j, k, l))`` for the first failing triple.
    """
    s, ix = a.signs, a.index
    n = a.dim
    # left[j,k,l] = (e_j e_k) e_l ; right[j,k,l] = e_j (e_k e_l)
    left_idx = ix[ix[:, :, None], np.arange(n)[None, None, :]]
    left_sign = s[:, :, None] * s[ix[:, :, None], np.arange(n)[None, None, :]]
    right_idx = ix[np.arange(n)[:, None, None], ix[None, :, :]]
    right_sign = s[None, :, :] * s[np.arange(n)[:, None, None], ix[None, :, :]]
    bad = (left_idx != right_idx) | (left_sign != right_sign)
    if not bad.any():
        return True, None
    j, k, l = (int(v) for v in np.argwhere(bad)[0])
    return False, (j, k, l)


def is_commutative(a: AlgebraTable) -> bool:
    return bool(np.array_equal(a.signs, a.signs.T) and np.array_equal(a.index, a.index.T))


def random_elements(a: AlgebraTable, count: int, seed: int = 0, bound: int = 3) -> list[AlgebraElement]:
    """Deterministic integer elements with coefficients in ``[-bound, bound]``."""
    rng = random.Random(seed)
    return [
        a.element([rng.randint(-bound, bound) for _ in range(a.dim)]) for _ in range(count)
    ]


def alternativity_witness(
    a: AlgebraTable, samples: int = 12, seed: int = 0
) -> tuple[AlgebraElement, AlgebraElement] | None:
    """Find ``(x, y)`` violating ``(xx)y = x(xy)`` or ``(yx)x = y(xx)``.

    A seeded random set is tried first, then basis units, then all sums of
    two distinct units.
    """
    units = [a.unit(j) for j in range(a.dim)]
    pool = random_elements(a, samples, seed=seed)
    sums = [a.unit(j) + a.unit(k) for j, k in itertools.combinations(range(a.dim), 2)]
    for group in (pool, units, units + sums):
        for x, y in itertools.product(group, repeat=2):
            if _violates_alternative(x, y):
                return x, y
    return None


def _violates_alternative(x: AlgebraElement, y: AlgebraElement) -> bool:
    xx = x * x
    return (xx * y != x * (x * y)) or ((y * x) * x != y * xx)


def is_alternative(a: AlgebraTable, samples: int = 12, seed: int = 0) -> bool:
    """Left and right alternative laws on basis units, unit sums and random elements."""
    return alternativity_witness(a, samples, seed) is None


def center_rank(a: AlgebraTable) -> int:
    """Rank of ``{z : z e_k = e_k z for all k}`` for an associative table."""
    from cdtorus.exact_linalg import ExactMatrix, rank

    ok, witness = is_associative(a)
    if not ok:
        raise NotAssociative(f"{a.name} is not associative, e.g. basis triple {witness}")
    n = a.dim
    # z = sum_j z_j e_j; coefficient of e_l in z e_k - e_k z for every (k, l)
    system = np.zeros((n * n, n), dtype=np.int64)
    for k in range(n):
        for j in range(n):
            system[k * n + a.index[j, k], j] += a.signs[j, k]
            system[k * n + a.index[k, j], j] -= a.signs[k, j]
    return n - rank(ExactMatrix(system))
