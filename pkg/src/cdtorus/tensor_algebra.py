"""Tensor products of Cayley-Dickson tables and the algebras C (x) H^p (x) O^q."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import prod

import numpy as np

from cdtorus.cayley_dickson import AlgebraTable, complexes, octonions, quaternions

# 2p + 3q, i.e. log2 of the complex dimension
DEFAULT_MAX_EXPONENT = 7


class ResourceGuardExceeded(ValueError):
    """Requested algebra is larger than the configured resource guard."""


def tensor_product(a: AlgebraTable, b: AlgebraTable, name: str | None = None) -> AlgebraTable:
    """Table of ``a (x) b`` on the basis ``e_(j1, j2)`` with index ``j1 * b.dim + j2``.

    The result may have zero divisors; only the structural table invariants hold.
    """
    m = b.dim
    signs = (a.signs[:, None, :, None] * b.signs[None, :, None, :]).reshape(a.dim * m, a.dim * m)
    index = (a.index[:, None, :, None] * m + b.index[None, :, None, :]).reshape(a.dim * m, a.dim * m)
    return AlgebraTable(name or f"{a.name}(x){b.name}", signs, index)


@dataclass(frozen=True, eq=False)
class TensorAlgebra:
    """``C (x) H^p (x) O^q`` with mixed-radix basis indexing.

    The most significant digit belongs to the C factor, followed by the p
    quaternion digits and the q octonion digits.
    """

    p: int
    q: int
    components: tuple[AlgebraTable, ...]
    table: AlgebraTable

    @property
    def radices(self) -> tuple[int, ...]:
        return tuple(c.dim for c in self.components)

    @property
    def real_dim(self) -> int:
        return self.table.dim

    @property
    def complex_dim(self) -> int:
        return self.table.dim // 2

    @property
    def complex_unit(self) -> int:
        """Index of ``i (x) 1 (x) ... (x) 1``."""
        return self.basis_index((1,) + (0,) * (len(self.components) - 1))

    def basis_index(self, digits) -> int:
        digits = tuple(digits)
        radices = self.radices
        if len(digits) != len(radices):
            raise ValueError(f"expected {len(radices)} digits, got {len(digits)}")
        idx = 0
        for d, r in zip(digits, radices):
            if not 0 <= d < r:
                raise ValueError(f"digit {d} out of range for radix {r}")
            idx = idx * r + d
        return idx

    def basis_decode(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.real_dim:
            raise ValueError(f"index {index} out of range")
        digits = []
        for r in reversed(self.radices):
            index, d = divmod(index, r)
            digits.append(d)
        return tuple(reversed(digits))

    def real_form_indices(self) -> np.ndarray:
        """Basis indices whose C digit is 0, i.e. the basis of the real form."""
        return np.arange(self.real_dim // 2)

    def label(self, index: int) -> str:
        digits = self.basis_decode(index)
        return "(x)".join(f"{c.name}{d}" for c, d in zip(self.components, digits))


def check_guard(p: int, q: int, max_exponent: int = DEFAULT_MAX_EXPONENT):
    if p < 0 or q < 0:
        raise ValueError("p and q must be non-negative")
    if 2 * p + 3 * q > max_exponent:
        raise ResourceGuardExceeded(
            f"2p+3q = {2 * p + 3 * q} exceeds the guard {max_exponent}; "
            "raise it with --max-dim"
        )


def build_real_form(p: int, q: int) -> AlgebraTable:
    """Table of ``H^p (x) O^q`` (dimension 1 when ``p = q = 0``)."""
    from cdtorus.cayley_dickson import base_real

    parts = [quaternions()] * p + [octonions()] * q
    if not parts:
        return base_real()
    return reduce(tensor_product, parts)


def build_B(p: int, q: int, max_exponent: int = DEFAULT_MAX_EXPONENT) -> TensorAlgebra:
    """Build ``C (x) H^p (x) O^q`` as a structure-constant table."""
    check_guard(p, q, max_exponent)
    components = (complexes(),) + (quaternions(),) * p + (octonions(),) * q
    table = reduce(tensor_product, components)
    table = AlgebraTable(f"B(1,{p},{q})", table.signs, table.index)
    assert table.dim == 2 * prod(c.dim for c in components[1:])
    return TensorAlgebra(p, q, components, table)
