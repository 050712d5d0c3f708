"""Acceptance criteria, one test per criterion.

Each test appends a PASS/FAIL line to the acceptance log (shown in the pytest
terminal summary) and prints it, then asserts the criterion.
"""

import random
import time

from cdtorus.adjoint_operators import (
    component_generators,
    componentwise_generators,
    generated_rank,
)
from cdtorus.cayley_dickson import (
    base_real,
    complexes,
    conjugate,
    is_alternative,
    is_associative,
    center_rank,
    norm,
    octonions,
    quaternions,
    random_elements,
)
from cdtorus.elliptic import GAUSSIAN, HEXAGONAL, LatticeBasis2D, j_invariant
from cdtorus.exact_linalg import ExactMatrix
from cdtorus.tensor_algebra import build_B
from cdtorus.torus import (
    analytic_representation,
    build_torus,
    commutant_basis,
    commutant_rank,
    expected_rank,
    is_endomorphism,
    order_census,
    rho_image_rank,
    splitting_pairs,
)

from test_elliptic import oracle_j

CASES = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1)]


def record(log, number, title, ok, detail):
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    log.append(line)
    print(line)
    return ok


def test_criterion_1_dimension_formula(acceptance_log):
    dims = [build_B(p, q).complex_dim for p, q in CASES]
    ok = dims == [2 ** (2 * p + 3 * q) for p, q in CASES] == [1, 4, 8, 16, 32]
    record(acceptance_log, 1, "complex dimension 2^(2p+3q)", ok, f"got {dims}")
    assert ok


def test_criterion_2_isomorphism_ranks(acceptance_log):
    start = time.perf_counter()
    ranks = {
        "C": generated_rank(componentwise_generators(build_B(0, 0))),
        "H": generated_rank(component_generators(quaternions())),
        "O": generated_rank(component_generators(octonions())),
    }
    elapsed = time.perf_counter() - start
    ok = ranks == {"C": 2, "H": 16, "O": 64} and elapsed < 10
    record(acceptance_log, 2, "operator algebra ranks C 2, H 16, O 64", ok,
           f"got {ranks} in {elapsed:.2f} s")
    assert ok


def test_criterion_3_c_tensor_h(acceptance_log):
    start = time.perf_counter()
    table = build_B(1, 0).table
    assoc, _ = is_associative(table)
    center = center_rank(table)
    elapsed = time.perf_counter() - start
    ok = assoc and table.dim == 8 and center == 2 and elapsed < 1
    record(acceptance_log, 3, "C(x)H associative, dim 8, center rank 2", ok,
           f"associative {assoc}, dim {table.dim}, center {center}, {elapsed:.3f} s")
    assert ok


def test_criterion_4_full_rank_endomorphisms(acceptance_log):
    start = time.perf_counter()
    rows = []
    for p, q in CASES:
        T = build_torus(p, q)
        rows.append((p, q, rho_image_rank(T), commutant_rank(T.J), expected_rank(p, q)))
    elapsed = time.perf_counter() - start
    ok = all(r == c == e for _, _, r, c, e in rows) and elapsed < 600
    detail = ", ".join(f"({p},{q}): {r}/{c}" for p, q, r, c, _ in rows)
    record(acceptance_log, 4, "rho rank == commutant rank == 2^(4p+6q+1)", ok,
           f"{detail}; {elapsed:.1f} s")
    assert ok


def test_criterion_5_splitting(acceptance_log):
    counts = []
    ok = True
    for p, q in CASES:
        T = build_torus(p, q)
        pairs = splitting_pairs(T)
        counts.append(len(pairs))
        covered = sorted(k for pair in pairs for k in pair)
        ok &= len(pairs) == 2 ** (2 * p + 3 * q) and covered == list(range(T.real_dim))
    record(acceptance_log, 5, "2^(2p+3q) J-planes partition the basis", ok, f"got {counts}")
    assert ok


def test_criterion_6_order_four(acceptance_log):
    ok = True
    hists = []
    for p, q in CASES:
        c = order_census(build_torus(p, q))
        hists.append(c.histogram)
        j_powers = [c.orders[f"J^{k}"] for k in (1, 2, 3)]
        identity_like = [o for label, o in c.orders.items() if "0]" in label or label == "identity"]
        ok &= c.has_order4 and j_powers == [4, 2, 4]
        ok &= all(o is not None for o in identity_like)
    record(acceptance_log, 6, "J has order 4, J-powers and identity-like generators finite", ok,
           f"histograms {hists}")
    assert ok


def test_criterion_7_j_invariant(acceptance_log):
    start = time.perf_counter()
    j_sq = j_invariant(GAUSSIAN, N=100)
    j_hex = j_invariant(HEXAGONAL, N=100)
    rect = LatticeBasis2D(1 + 0j, 2j)
    target = oracle_j(rect.tau)
    j_rect = j_invariant(rect, N=200)
    elapsed = time.perf_counter() - start
    e_sq = abs(j_sq - 1728) / 1728
    e_hex = abs(j_hex)
    e_rect = abs(j_rect - 287496) / 287496
    ok = (
        e_sq < 1e-6
        and e_hex < 1e-6
        and e_rect < 1e-3
        and abs(target - 287496) / 287496 < 1e-9
        and elapsed < 5
    )
    record(acceptance_log, 7, "j(Z[i]) = 1728, j(Z[w]) = 0, j(1,2i) = 287496", ok,
           f"errors {e_sq:.1e}, {e_hex:.1e}, {e_rect:.1e}; {elapsed:.2f} s")
    assert ok


def test_criterion_8_property_suites(acceptance_log, seed):
    failures = []

    for name, a in [("R", base_real()), ("C", complexes()), ("H", quaternions()), ("O", octonions())]:
        xs = random_elements(a, 40, seed=seed)
        if any(norm(x * y) != norm(x) * norm(y) for x, y in zip(xs[::2], xs[1::2])):
            failures.append(f"norm composition on {name}")

    o = octonions()
    if not is_alternative(o, seed=seed):
        failures.append("alternativity of O")
    ok_assoc, witness = is_associative(o)
    if ok_assoc or witness is None:
        failures.append("nonassociativity witness in O")
    else:
        a, b, c = (o.unit(k) for k in witness)
        if (a * b) * c == a * (b * c):
            failures.append("reported O witness is associative")

    hs = random_elements(quaternions(), 40, seed=seed)
    if any(conjugate(x * y) != conjugate(y) * conjugate(x) for x, y in zip(hs[::2], hs[1::2])):
        failures.append("conjugation anti-automorphism on H")

    T = build_torus(1, 0)
    basis = commutant_basis(T.J)
    rng = random.Random(seed)

    def sample():
        m = ExactMatrix.zeros(8, 8)
        for b in basis:
            m = m + b.scale(rng.randint(-2, 2))
        return m

    for _ in range(10):
        M, N = sample(), sample()
        lhs = analytic_representation(T, M @ N)
        rhs = analytic_representation(T, M) @ analytic_representation(T, N)
        if lhs != rhs:
            failures.append("tau multiplicativity on (1,0)")
            break

    for p, q in CASES:
        T = build_torus(p, q)
        if not all(is_endomorphism(T, g) for g in T.adjoint_gens.generators):
            failures.append(f"integral adjoint images at ({p},{q})")

    ok = not failures
    record(acceptance_log, 8, f"seeded property suites (seed {seed})", ok,
           "all hold" if ok else "; ".join(failures))
    assert ok
