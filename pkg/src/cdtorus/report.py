"""Per-case verification pipeline and the JSON report format."""

from __future__ import annotations

import json
import os
import random
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from cdtorus import __version__
from cdtorus.adjoint_operators import generated_algebra
from cdtorus.exact_linalg import ExactMatrix, default_primes
from cdtorus.elliptic import GAUSSIAN, j_invariant
from cdtorus.tensor_algebra import DEFAULT_MAX_EXPONENT, TensorAlgebra, build_real_form
from cdtorus.torus import (
    GaussianMatrix,
    TorusModel,
    analytic_representation,
    build_torus,
    commutant_rank,
    expected_rank,
    order_census,
    rho_image,
    splitting_pairs,
    to_complex_coordinates,
)

J_TOLERANCE = 1e-6

CHECK_NAMES = (
    "complex_dimension",
    "table_invariants",
    "adjoint_generator_integrity",
    "generated_rank",
    "commutant_rank",
    "rho_image_rank",
    "full_rank_equality",
    "splitting_pairs",
    "order_census",
    "analytic_representation",
    "j_invariant_gaussian",
)


@dataclass
class Check:
    name: str
    expected: str
    actual: str
    passed: bool
    millis: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.passed,
            "millis": self.millis,
        }


@dataclass
class VerificationReport:
    p: int
    q: int
    checks: list[Check] = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "version": self.version,
            "checks": [c.to_dict() for c in self.checks],
        }


def dumps_reports(reports: list[VerificationReport] | list[dict]) -> str:
    data = [r.to_dict() if isinstance(r, VerificationReport) else r for r in reports]
    return json.dumps(data, indent=2) + "\n"


@dataclass
class Settings:
    max_exponent: int = DEFAULT_MAX_EXPONENT
    method: str = "auto"
    mod_prime: int | None = None
    timing: bool = True
    seed: int | None = None

    def closure_method(self) -> str:
        if self.method == "exact":
            return "rational"
        return "modular" if self.mod_prime is not None else self.method

    def commutant_method(self) -> str:
        return "modular" if self.mod_prime is not None else "exact"

    def primes(self):
        if self.mod_prime is None:
            return None
        return default_primes(self.mod_prime, seed=self.resolved_seed())

    def resolved_seed(self) -> int:
        if self.seed is not None:
            return self.seed
        return int(os.environ.get("CDTORUS_SEED", "0"))


class _Runner:
    def __init__(self, report: VerificationReport, timing: bool):
        self.report = report
        self.timing = timing

    def run(self, name: str, expected: str, fn: Callable[[], tuple[str, bool]]):
        start = time.perf_counter()
        try:
            actual, ok = fn()
        except Exception as exc:  # surfaced as a failed check
            actual, ok = f"error: {type(exc).__name__}: {exc}", False
        millis = round((time.perf_counter() - start) * 1000, 3) if self.timing else 0
        self.report.checks.append(Check(name, expected, actual, bool(ok), millis))


def table_problems(B: TensorAlgebra) -> list[str]:
    """Structural checks on the table of ``B``."""
    t = B.table
    problems = list(t.check_invariants(division=False))
    u = B.complex_unit
    if t.product(u, u) != (-1, 0):
        problems.append("complex unit does not square to -e0")
    half = t.dim // 2
    for j in range(half):
        if t.product(u, j) != t.product(j, u):
            problems.append(f"complex unit does not commute with basis {j}")
            break
    real = build_real_form(B.p, B.q)
    sub_s, sub_i = t.signs[:half, :half], t.index[:half, :half]
    if not (np.array_equal(sub_s, real.signs) and np.array_equal(sub_i, real.index)):
        problems.append("C-digit 0 sub-table differs from the real form")
    if any(B.basis_index(B.basis_decode(k)) != k for k in range(t.dim)):
        problems.append("basis index round trip failed")
    return problems


def expected_generator_count(p: int, q: int) -> int:
    if p == q == 0:
        return 2
    return 1 + 2 * (4 * p + 8 * q)


def _analytic_spot_checks(T: TorusModel, seed: int) -> list[str]:
    pairs = splitting_pairs(T)
    n = T.complex_dim
    problems = []
    ident = GaussianMatrix.identity(n)
    if analytic_representation(T, ExactMatrix.identity(T.real_dim), pairs) != ident:
        problems.append("tau(I) != I")
    if analytic_representation(T, T.J, pairs) != ident.scale_i():
        problems.append("tau(J) != i I")
    rng = random.Random(seed)
    gens = T.adjoint_gens.generators
    for _ in range(4):
        a, b = rng.choice(gens), rng.choice(gens)
        lhs = analytic_representation(T, a @ b, pairs)
        rhs = analytic_representation(T, a, pairs) @ analytic_representation(T, b, pairs)
        if lhs != rhs:
            problems.append("tau is not multiplicative on a generator pair")
            break
    x = [rng.randint(-3, 3) for _ in range(T.real_dim)]
    g = rng.choice(gens)
    image = g.array() @ np.array(x, dtype=np.int64)
    if analytic_representation(T, g, pairs).apply(to_complex_coordinates(pairs, x)) != (
        to_complex_coordinates(pairs, image.tolist())
    ):
        problems.append("tau(M) disagrees with M on coordinates")
    return problems


def verify_case(p: int, q: int, settings: Settings | None = None) -> VerificationReport:
    """Run every check for ``B(1, p, q)`` in order and collect the results."""
    s = settings or Settings()
    report = VerificationReport(p, q)
    r = _Runner(report, s.timing)
    n = 2 ** (2 * p + 3 * q)
    full = expected_rank(p, q)
    state: dict = {}

    def dimension():
        state["T"] = build_torus(p, q, s.max_exponent)
        T = state["T"]
        return f"complex {T.complex_dim}, real {T.real_dim}", T.complex_dim == n and T.real_dim == 2 * n

    r.run("complex_dimension", f"complex {n}, real {2 * n}", dimension)
    T: TorusModel | None = state.get("T")
    if T is None:
        for name in CHECK_NAMES[1:]:
            report.checks.append(Check(name, "-", "skipped: torus could not be built", False, 0))
        return report

    def invariants():
        problems = table_problems(T.algebra)
        return ("; ".join(problems) or "none violated"), not problems

    r.run("table_invariants", "none violated", invariants)

    def integrity():
        gens = T.adjoint_gens.generators
        bad = [
            label
            for g, label in zip(gens, T.adjoint_gens.labels)
            if not (g.is_integer and g.is_signed_permutation())
        ]
        text = f"{len(gens)} generators, {len(bad)} not integer signed permutations"
        return text, not bad and len(gens) == expected_generator_count(p, q)

    r.run(
        "adjoint_generator_integrity",
        f"{expected_generator_count(p, q)} generators, 0 not integer signed permutations",
        integrity,
    )

    method = s.closure_method()
    primes = s.primes()

    def generated():
        basis = generated_algebra(T.adjoint_gens, method=method, primes=primes)
        state["generated"] = basis.rank
        return f"{basis.rank} ({basis.method}, {basis.rounds} rounds)", basis.rank == full

    r.run("generated_rank", str(full), generated)

    def commutant():
        c = commutant_rank(T.J, s.commutant_method(), primes)
        state["commutant"] = c
        return str(c), c == 2 * n * n

    r.run("commutant_rank", str(2 * n * n), commutant)

    def rho():
        basis = rho_image(T, method=method, primes=primes)
        state["rho"] = basis.rank
        return str(basis.rank), basis.rank == full

    r.run("rho_image_rank", str(full), rho)

    def equality():
        vals = (state.get("rho"), state.get("commutant"), full)
        return f"rho {vals[0]}, commutant {vals[1]}, bound {full}", vals[0] == vals[1] == full

    r.run("full_rank_equality", f"rho == commutant == {full}", equality)

    def split():
        pairs = splitting_pairs(T)
        covered = sorted(k for pair in pairs for k in pair)
        ok = len(pairs) == n and covered == list(range(T.real_dim))
        return f"{len(pairs)} J-planes", ok

    r.run("splitting_pairs", f"{n} J-planes", split)

    def census():
        c = order_census(T)
        hist = ", ".join(f"order {k}: {v}" for k, v in c.histogram.items())
        return hist, c.has_order4 and c.orders["J^1"] == 4 and None not in c.histogram

    r.run("order_census", "J has order 4; every order finite", census)

    def analytic():
        problems = _analytic_spot_checks(T, s.resolved_seed())
        return ("; ".join(problems) or "all spot checks hold"), not problems

    r.run("analytic_representation", "all spot checks hold", analytic)

    def j_check():
        j = j_invariant(GAUSSIAN)
        return f"{j.real:.10g}{j.imag:+.3g}i", abs(j - 1728) / 1728 < J_TOLERANCE

    r.run("j_invariant_gaussian", f"1728 (rel. tol {J_TOLERANCE:g})", j_check)
    return report
