"""Truncated lattice sums for g2, g3 and the j-invariant.

This is the only floating point module in the package.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

DEFAULT_TRUNCATION = 100
DISCRIMINANT_FLOOR = 1e-12


class DegenerateLattice(ValueError):
    pass


@dataclass(frozen=True)
class LatticeBasis2D:
    omega1: complex
    omega2: complex

    def __post_init__(self):
        if self.omega1 == 0 or abs((self.omega2 / self.omega1).imag) < 1e-14:
            raise DegenerateLattice(f"{self.omega1!r}, {self.omega2!r} are R-linearly dependent")

    @property
    def tau(self) -> complex:
        return self.omega2 / self.omega1

    def scaled(self, lam: complex) -> "LatticeBasis2D":
        return LatticeBasis2D(lam * self.omega1, lam * self.omega2)


GAUSSIAN = LatticeBasis2D(1 + 0j, 1j)
HEXAGONAL = LatticeBasis2D(1 + 0j, cmath.exp(1j * cmath.pi / 3))


def _shell(s: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer points with ``max(|m|, |n|) == s``, in a fixed order."""
    k = np.arange(-s, s)
    # four sides walked counter-clockwise, each of length 2s
    m = np.concatenate([np.full(2 * s, s), -k, np.full(2 * s, -s), k])
    n = np.concatenate([k, np.full(2 * s, s), -k, np.full(2 * s, -s)])
    return m, n


_SCALE = {4: 60.0, 6: 140.0}


def eisenstein(lattice: LatticeBasis2D, weight: int, N: int = DEFAULT_TRUNCATION) -> complex:
    """``g2`` (weight 4) or ``g3`` (weight 6) summed over shells ``1..N``."""
    if weight not in _SCALE:
        raise ValueError("weight must be 4 or 6")
    if N < 1:
        raise ValueError("truncation must be at least 1")
    total = 0j
    for s in range(1, N + 1):
        m, n = _shell(s)
        w = m * lattice.omega1 + n * lattice.omega2
        total += np.sum(w ** (-weight))
    return _SCALE[weight] * complex(total)


def g2(lattice: LatticeBasis2D, N: int = DEFAULT_TRUNCATION) -> complex:
    return eisenstein(lattice, 4, N)


def g3(lattice: LatticeBasis2D, N: int = DEFAULT_TRUNCATION) -> complex:
    return eisenstein(lattice, 6, N)


def j_invariant(lattice: LatticeBasis2D, N: int = DEFAULT_TRUNCATION) -> complex:
    """``1728 g2^3 / (g2^3 - 27 g3^2)``."""
    a = g2(lattice, N) ** 3
    b = 27 * g3(lattice, N) ** 2
    disc = a - b
    if abs(disc) <= DISCRIMINANT_FLOOR * (abs(a) + abs(b)):
        raise DegenerateLattice("discriminant vanishes to working precision")
    return 1728 * a / disc
