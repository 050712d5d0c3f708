from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cdtorus.adjoint_operators import component_generators
from cdtorus.cayley_dickson import octonions, quaternions
from cdtorus.exact_linalg import (
    ClosureBudgetExceeded,
    ExactMatrix,
    ModularEchelon,
    RationalEchelon,
    default_primes,
    kron,
    mat_vec,
    matrix_order,
    mulmod,
    nullspace_basis,
    rank,
    rank_mod_p,
    rref,
    span_closure,
)


def small_int_matrices(max_side=6, bound=3):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                min_size=r,
                max_size=r,
            )
        )
    )


def brute_rank(rows):
    """Independent oracle: Gauss elimination over Fraction on plain lists."""
    a = [[Fraction(x) for x in row] for row in rows]
    r = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


class TestRank:
    def test_identity(self):
        assert rank(ExactMatrix.identity(3)) == 3

    def test_zero(self):
        assert rank(ExactMatrix.zeros(2, 2)) == 0

    def test_proportional_rows(self):
        assert rank(ExactMatrix([[1, 2], [2, 4]])) == 1

    @pytest.mark.parametrize("method", ["bareiss", "rational", "modular", "exact", "auto"])
    def test_methods_agree_on_example(self, method):
        m = ExactMatrix([[2, 4, 6], [1, 2, 3], [0, 1, 5]])
        assert rank(m, method=method) == 2

    def test_rational_entries(self):
        m = ExactMatrix([[Fraction(1, 2), 1], [1, 2]])
        assert rank(m) == 1
        with pytest.raises(TypeError):
            rank(m, method="bareiss")

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            ExactMatrix([[0.5]])

    @given(small_int_matrices())
    def test_rank_of_transpose(self, rows):
        m = ExactMatrix(rows)
        assert rank(m) == rank(m.T)

    @given(small_int_matrices())
    def test_engines_match_oracle(self, rows):
        m = ExactMatrix(rows)
        expected = brute_rank(rows)
        assert rank(m, method="bareiss") == expected
        assert rank(m, method="rational") == expected
        assert rank(m, method="modular") == expected

    @given(small_int_matrices(max_side=4), small_int_matrices(max_side=4))
    def test_rank_of_kron_multiplies(self, a, b):
        A, B = ExactMatrix(a), ExactMatrix(b)
        assert rank(kron(A, B)) == rank(A) * rank(B)

    def test_two_primes_agree_with_exact_on_64x64(self, seed):
        rng = np.random.default_rng(seed)
        base = rng.integers(-2, 3, size=(64, 40))
        m = ExactMatrix(base @ rng.integers(-2, 3, size=(40, 64)))
        p1, p2 = default_primes(seed=seed)
        assert p1 > 2**40 and p2 > 2**40 and p1 != p2
        r1, r2 = rank_mod_p(m, p1), rank_mod_p(m, p2)
        assert r1 == r2 == rank(m, method="rational") == brute_rank(m.tolist())


class TestNullspace:
    def test_identity_has_trivial_nullspace(self):
        assert nullspace_basis(ExactMatrix.identity(4)) == []

    def test_zero_row(self):
        basis = nullspace_basis(ExactMatrix([[0, 0, 0]]))
        assert len(basis) == 3
        assert rank(ExactMatrix(basis)) == 3

    def test_single_relation(self):
        (v,) = nullspace_basis(ExactMatrix([[1, 1]]))
        assert v[0] == -v[1] != 0

    @given(small_int_matrices())
    def test_vectors_are_annihilated(self, rows):
        m = ExactMatrix(rows)
        basis = nullspace_basis(m)
        assert len(basis) == m.cols - rank(m)
        for v in basis:
            assert all(x == 0 for x in mat_vec(m, v))

    def test_rref_rows_have_distinct_pivots(self):
        rows, pivots = rref(ExactMatrix([[0, 2, 4], [1, 1, 1], [1, 2, 3]]))
        assert len(set(pivots)) == len(pivots) == len(rows) == 2
        for row, p in zip(rows, pivots):
            assert row[p] == 1
            assert all(other[p] == 0 for other in rows if other is not row)


class TestKron:
    def test_identity(self):
        assert kron(ExactMatrix.identity(2), ExactMatrix.identity(2)) == ExactMatrix.identity(4)

    def test_shape(self):
        assert kron(ExactMatrix.zeros(2, 2), ExactMatrix.zeros(3, 3)).shape == (6, 6)

    def test_hand_expansion(self):
        out = kron(ExactMatrix([[0, 1], [1, 0]]), ExactMatrix([[2]]))
        assert out == ExactMatrix([[0, 2], [2, 0]])


class TestSpanClosure:
    def test_identity(self):
        assert span_closure([ExactMatrix.identity(3)]).rank == 1

    def test_quaternion_operators(self):
        assert span_closure(component_generators(quaternions()).generators).rank == 16

    def test_octonion_operators(self):
        assert span_closure(component_generators(octonions()).generators).rank == 64

    def test_budget_error(self):
        with pytest.raises(ClosureBudgetExceeded):
            span_closure(component_generators(octonions()).generators, max_products=1)

    def test_generators_must_match(self):
        with pytest.raises(ValueError):
            span_closure([ExactMatrix.identity(2), ExactMatrix.identity(3)])

    def test_rows_are_exact_rref(self):
        basis = span_closure(component_generators(quaternions()).generators)
        assert len(basis.rows) == basis.rank == 16
        pivots = [next(i for i, x in enumerate(r) if x) for r in basis.rows]
        assert pivots == sorted(set(pivots))

    def test_non_monomial_generators(self):
        a = ExactMatrix([[1, 1], [0, 1]])
        # upper triangular 2x2 matrices
        assert span_closure([a]).rank == 2
        assert span_closure([a, a.T]).rank == 4

    @given(st.permutations(list(range(8))))
    def test_order_independence(self, order):
        gens = component_generators(quaternions()).generators
        shuffled = [gens[i] for i in order]
        a = span_closure(shuffled)
        assert a.rank == 16
        assert a.rows == span_closure(gens).rows

    @pytest.mark.parametrize("method", ["rational", "modular"])
    def test_methods_agree(self, method):
        gens = component_generators(octonions()).generators
        assert span_closure(gens, method=method).rank == 64


class TestMatrixOrder:
    def test_identity(self):
        assert matrix_order(ExactMatrix.identity(3), 8) == 1

    def test_minus_identity(self):
        assert matrix_order(-ExactMatrix.identity(3), 8) == 2

    def test_rotation(self):
        assert matrix_order(ExactMatrix([[0, -1], [1, 0]]), 8) == 4

    def test_infinite_order(self):
        assert matrix_order(ExactMatrix([[1, 1], [0, 1]]), 8) is None


class TestModularKernel:
    @given(st.integers(0, 2**41 - 1), st.integers(0, 2**41 - 1))
    def test_mulmod_matches_python(self, a, b):
        p = default_primes(seed=1)[0]
        a, b = a % p, b % p
        assert int(mulmod(np.array([a]), np.array([b]), p)[0]) == a * b % p

    def test_echelons_agree(self, seed):
        rng = np.random.default_rng(seed)
        rows = rng.integers(-1, 2, size=(30, 20))
        rows[20:] = rows[:10] + rows[10:20]
        exact = RationalEchelon(20)
        modular = ModularEchelon(20, default_primes(seed=seed)[0])
        for r in rows:
            exact.insert(dict((i, int(x)) for i, x in enumerate(r) if x))
            modular.insert(r)
        assert exact.rank == modular.rank == brute_rank(rows.tolist())
