"""The complex torus ``B / B_Z`` and its endomorphisms.

The period lattice is the integer span of the monomial basis, so an
endomorphism of the torus is exactly an integer matrix commuting with the
complex structure ``J`` (left multiplication by the complex unit).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from cdtorus.adjoint_operators import (
    AdjointGeneratorSet,
    componentwise_generators,
    left_mult_matrix,
)
from cdtorus.exact_linalg import (
    ExactMatrix,
    ModularEchelon,
    SpanBasis,
    default_primes,
    kron,
    matrix_order,
    nullspace_basis,
    span_closure,
)
from cdtorus.tensor_algebra import DEFAULT_MAX_EXPONENT, TensorAlgebra, build_B


class NotHolomorphic(ValueError):
    """A matrix expected to commute with the complex structure does not."""


class SplittingError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class TorusModel:
    p: int
    q: int
    algebra: TensorAlgebra
    J: ExactMatrix
    adjoint_gens: AdjointGeneratorSet

    @property
    def real_dim(self) -> int:
        return self.algebra.real_dim

    @property
    def complex_dim(self) -> int:
        return self.algebra.complex_dim


def complex_structure(B: TensorAlgebra) -> ExactMatrix:
    """Left multiplication by ``i (x) 1 (x) ... (x) 1``."""
    return left_mult_matrix(B.table, B.complex_unit)


def build_torus(p: int, q: int, max_exponent: int = DEFAULT_MAX_EXPONENT) -> TorusModel:
    B = build_B(p, q, max_exponent)
    J = complex_structure(B)
    if J @ J != -ExactMatrix.identity(B.real_dim):
        raise ArithmeticError("complex unit does not square to -1")
    return TorusModel(p, q, B, J, componentwise_generators(B))


def commutes(a: ExactMatrix, b: ExactMatrix) -> bool:
    return a @ b == b @ a


def is_endomorphism(T: TorusModel, M: ExactMatrix) -> bool:
    """Integer entries (lattice preserved) and ``M J = J M`` (holomorphic)."""
    return M.shape == T.J.shape and M.is_integer and commutes(M, T.J)


def commutant_system(J: ExactMatrix) -> ExactMatrix:
    """Matrix ``K`` with ``K vec(M) = vec(M J - J M)`` for row-major ``vec``."""
    n = J.rows
    eye = ExactMatrix.identity(n)
    return kron(eye, J.T) - kron(J, eye)


def commutant_basis(J: ExactMatrix) -> list[ExactMatrix]:
    n = J.rows
    return [ExactMatrix(v, cols=n) for v in nullspace_basis(commutant_system(J))]


def commutant_rank(J: ExactMatrix, method: str = "exact", primes: Sequence[int] | None = None) -> int:
    """Dimension of ``{M : M J = J M}``.

    ``exact`` counts an exact nullspace basis of the commutator system;
    ``modular`` uses ``n**2 - rank`` modulo two primes and falls back to the
    exact count if they disagree.
    """
    if method != "modular":
        return len(nullspace_basis(commutant_system(J)))
    K = commutant_system(J)
    p1, p2 = primes if primes else default_primes()
    ranks = []
    for prime in (p1, p2):
        ech = ModularEchelon(K.cols, prime)
        for row in K.array():
            ech.insert(row)
        ranks.append(ech.rank)
    if ranks[0] != ranks[1]:
        return commutant_rank(J, "exact")
    return K.cols - ranks[0]


def rho_images(T: TorusModel) -> list[ExactMatrix]:
    """Images of the adjoint generators, each checked to be an endomorphism."""
    for g, label in zip(T.adjoint_gens.generators, T.adjoint_gens.labels):
        if not g.is_integer:
            raise NotHolomorphic(f"{label} has non-integer entries")
        if not commutes(g, T.J):
            raise NotHolomorphic(f"{label} does not commute with J")
    return list(T.adjoint_gens.generators)


def rho_image(T: TorusModel, max_products: int = 16, method: str = "auto", primes=None) -> SpanBasis:
    return span_closure(rho_images(T), max_products=max_products, method=method, primes=primes)


def rho_image_rank(T: TorusModel, max_products: int = 16, method: str = "auto", primes=None) -> int:
    """Rank of the algebra generated by the adjoint images inside ``End(T)``."""
    return rho_image(T, max_products, method, primes).rank


def expected_rank(p: int, q: int) -> int:
    return 2 ** (4 * p + 6 * q + 1)


def splitting_pairs(T: TorusModel) -> list[tuple[int, int]]:
    """Pairs ``(k, k2)`` with ``J e_k = +e_k2`` covering every basis index once."""
    J = T.J.array()
    n = T.real_dim
    partner = np.argmax(J != 0, axis=0)
    sign = J[partner, np.arange(n)]
    used = np.zeros(n, dtype=bool)
    pairs = []
    for k in range(n):
        if used[k]:
            continue
        k2 = int(partner[k])
        if k2 == k or used[k2] or np.count_nonzero(J[:, k]) != 1:
            raise SplittingError(f"basis vector {k} is not part of a J-plane")
        if int(partner[k2]) != k:
            raise SplittingError(f"J does not swap {k} and {k2}")
        pairs.append((k, k2) if sign[k] == 1 else (k2, k))
        used[k] = used[k2] = True
    return pairs


@dataclass
class OrderCensus:
    histogram: dict[int | None, int]
    orders: dict[str, int | None]
    order4: list[str] = field(default_factory=list)

    @property
    def has_order4(self) -> bool:
        return bool(self.order4)

    @property
    def only_124(self) -> bool:
        return all(o in (1, 2, 4) for o in self.orders.values())


def order_census(T: TorusModel, max_order: int = 8) -> OrderCensus:
    """Multiplicative orders of ``J``, its powers and every generator image."""
    orders: dict[str, int | None] = {}
    power = T.J
    for k in (1, 2, 3):
        orders[f"J^{k}"] = matrix_order(power, max_order)
        power = power @ T.J
    for g, label in zip(rho_images(T), T.adjoint_gens.labels):
        orders[label] = matrix_order(g, max_order)
    hist = Counter(orders.values())
    return OrderCensus(
        histogram=dict(sorted(hist.items(), key=lambda kv: (kv[0] is None, kv[0] or 0))),
        orders=orders,
        order4=[name for name, o in orders.items() if o == 4],
    )


@dataclass(frozen=True)
class GaussianMatrix:
    """Complex matrix ``real + i * imag`` with exact parts."""

    real: ExactMatrix
    imag: ExactMatrix

    @classmethod
    def identity(cls, n: int) -> "GaussianMatrix":
        return cls(ExactMatrix.identity(n), ExactMatrix.zeros(n, n))

    @property
    def shape(self):
        return self.real.shape

    def __matmul__(self, other: "GaussianMatrix") -> "GaussianMatrix":
        a, b, c, d = self.real, self.imag, other.real, other.imag
        return GaussianMatrix(a @ c - b @ d, a @ d + b @ c)

    def scale_i(self) -> "GaussianMatrix":
        return GaussianMatrix(-self.imag, self.real)

    def apply(self, z: Sequence[tuple]) -> list[tuple]:
        """Apply to a vector of ``(re, im)`` pairs."""
        out = []
        re, im = self.real.array(), self.imag.array()
        for r in range(self.shape[0]):
            x = y = 0
            for c, (zr, zi) in enumerate(z):
                a, b = re[r, c], im[r, c]
                x += a * zr - b * zi
                y += a * zi + b * zr
            out.append((_norm(x), _norm(y)))
        return out

    def to_complex(self) -> np.ndarray:
        f = np.vectorize(float, otypes=[float])
        return f(self.real.array()) + 1j * f(self.imag.array())


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return int(x) if isinstance(x, np.integer) else x


def analytic_representation(
    T: TorusModel, M: ExactMatrix, pairs: list[tuple[int, int]] | None = None
) -> GaussianMatrix:
    """Complex ``n x n`` matrix of an endomorphism on the tangent space.

    With ``pairs[j] = (k, k2)`` the complex basis vector ``f_j`` is ``e_k`` and
    ``i f_j = J e_k = e_k2``; entry ``(j, l)`` is ``M[k_j, k_l] + i M[k2_j, k_l]``.
    """
    if M.shape != T.J.shape:
        raise ValueError(f"expected a {T.J.shape} matrix, got {M.shape}")
    if not commutes(M, T.J):
        raise NotHolomorphic("matrix does not commute with J")
    pairs = pairs if pairs is not None else splitting_pairs(T)
    base = np.array([k for k, _ in pairs])
    rotated = np.array([k2 for _, k2 in pairs])
    a = M.array()
    return GaussianMatrix(
        ExactMatrix._wrap(a[np.ix_(base, base)].copy()),
        ExactMatrix._wrap(a[np.ix_(rotated, base)].copy()),
    )


def to_complex_coordinates(pairs: list[tuple[int, int]], x: Sequence) -> list[tuple]:
    """Real coordinates to ``(re, im)`` pairs in the complex basis of ``pairs``."""
    return [(x[k], x[k2]) for k, k2 in pairs]
