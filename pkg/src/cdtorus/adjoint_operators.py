"""Left/right multiplication operators and the adjoint maps ``z -> (y z) x``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cdtorus.cayley_dickson import AlgebraElement, AlgebraMismatch, AlgebraTable
from cdtorus.exact_linalg import ExactMatrix, SpanBasis, kron_all, rank, span_closure
from cdtorus.tensor_algebra import TensorAlgebra


def _check_index(a: AlgebraTable, j: int):
    if not 0 <= j < a.dim:
        raise IndexError(f"basis index {j} out of range for {a.name} (dim {a.dim})")


def left_mult_matrix(a: AlgebraTable, j: int) -> ExactMatrix:
    """Matrix of ``x -> e_j x``; column k holds the coordinates of ``e_j e_k``."""
    _check_index(a, j)
    m = np.zeros((a.dim, a.dim), dtype=np.int64)
    cols = np.arange(a.dim)
    m[a.index[j], cols] = a.signs[j]
    return ExactMatrix(m)


def right_mult_matrix(a: AlgebraTable, j: int) -> ExactMatrix:
    """Matrix of ``x -> x e_j``."""
    _check_index(a, j)
    m = np.zeros((a.dim, a.dim), dtype=np.int64)
    cols = np.arange(a.dim)
    m[a.index[:, j], cols] = a.signs[:, j]
    return ExactMatrix(m)


def _combo(a: AlgebraTable, x: AlgebraElement, side) -> ExactMatrix:
    if not (x.algebra is a or x.algebra.same_as(a)):
        raise AlgebraMismatch(f"element of {x.algebra.name} used with {a.name}")
    out = ExactMatrix.zeros(a.dim, a.dim)
    for j, c in enumerate(x.coeffs):
        if c:
            out = out + side(a, j).scale(c)
    return out


def left_mult_element(a: AlgebraTable, x: AlgebraElement) -> ExactMatrix:
    return _combo(a, x, left_mult_matrix)


def right_mult_element(a: AlgebraTable, x: AlgebraElement) -> ExactMatrix:
    return _combo(a, x, right_mult_matrix)


def adjoint_map(a: AlgebraTable, x: AlgebraElement, y: AlgebraElement) -> ExactMatrix:
    """Matrix of ``z -> (y z) x``, i.e. ``R_x @ L_y`` with ``L_y`` applied first."""
    return right_mult_element(a, x) @ left_mult_element(a, y)


@dataclass(frozen=True)
class AdjointGeneratorSet:
    ambient_dim: int
    generators: tuple[ExactMatrix, ...]
    labels: tuple[str, ...]

    def __len__(self):
        return len(self.generators)


def component_generators(a: AlgebraTable) -> AdjointGeneratorSet:
    """``L_u`` and ``R_u`` for every basis unit ``u`` of a single algebra."""
    gens, labels = [], []
    for u in range(a.dim):
        gens.append(left_mult_matrix(a, u))
        labels.append(f"L[{a.name}{u}]")
        gens.append(right_mult_matrix(a, u))
        labels.append(f"R[{a.name}{u}]")
    return AdjointGeneratorSet(a.dim, tuple(gens), tuple(labels))


def componentwise_generators(B: TensorAlgebra) -> AdjointGeneratorSet:
    """Generators of the componentwise adjoint algebra acting on ``B``.

    The C factor contributes left multiplication by ``i`` only; each H and O
    factor contributes ``L_u`` and ``R_u`` for each of its basis units, tensored
    with identities on the other factors.  When there are no H or O factors the
    identity is added so the generated algebra is unital.
    """
    comps = B.components
    eyes = [ExactMatrix.identity(c.dim) for c in comps]

    def embed(pos: int, op: ExactMatrix) -> ExactMatrix:
        return kron_all(op if i == pos else eyes[i] for i in range(len(comps)))

    gens = [embed(0, left_mult_matrix(comps[0], 1))]
    labels = ["L[i] on C"]
    for pos in range(1, len(comps)):
        c = comps[pos]
        for u in range(c.dim):
            gens.append(embed(pos, left_mult_matrix(c, u)))
            labels.append(f"L[{c.name}{u}] on factor {pos}")
            gens.append(embed(pos, right_mult_matrix(c, u)))
            labels.append(f"R[{c.name}{u}] on factor {pos}")
    if len(comps) == 1:
        gens.append(ExactMatrix.identity(B.real_dim))
        labels.append("identity")
    return AdjointGeneratorSet(B.real_dim, tuple(gens), tuple(labels))


def generated_algebra(
    gens: AdjointGeneratorSet, max_products: int = 16, method: str = "auto", primes=None
) -> SpanBasis:
    return span_closure(gens.generators, max_products=max_products, method=method, primes=primes)


def generated_rank(
    gens: AdjointGeneratorSet, max_products: int = 16, method: str = "auto", primes=None
) -> int:
    """Real dimension of the matrix algebra generated by ``gens``."""
    return generated_algebra(gens, max_products, method, primes).rank


def single_map_span_rank(a: AlgebraTable) -> int:
    """Rank of the linear span of the single maps ``R_x L_y`` (no composition)."""
    flat = [
        (right_mult_matrix(a, x) @ left_mult_matrix(a, y)).flatten()
        for x in range(a.dim)
        for y in range(a.dim)
    ]
    return rank(ExactMatrix(flat))
