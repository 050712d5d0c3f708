import itertools

import numpy as np
import pytest

from cdtorus.cayley_dickson import base_real, complexes, octonions, quaternions
from cdtorus.tensor_algebra import (
    ResourceGuardExceeded,
    build_B,
    build_real_form,
    tensor_product,
)


def test_dimension_of_tensor_square():
    assert tensor_product(quaternions(), quaternions()).dim == 16


@pytest.mark.parametrize("factory", [complexes, quaternions, octonions])
def test_real_unit_factor_is_neutral(factory):
    a = factory()
    t = tensor_product(base_real(), a)
    assert np.array_equal(t.signs, a.signs) and np.array_equal(t.index, a.index)


def test_imaginary_square_in_c_tensor_h():
    t = tensor_product(complexes(), quaternions())
    # e1 (x) e0 has index 1 * 4 + 0
    assert t.product(4, 4) == (-1, 0)


def test_products_follow_componentwise_rule():
    c, h = complexes(), quaternions()
    t = tensor_product(c, h)
    for j1, j2, k1, k2 in itertools.product(range(2), range(4), range(2), range(4)):
        s1, l1 = c.product(j1, k1)
        s2, l2 = h.product(j2, k2)
        assert t.product(j1 * 4 + j2, k1 * 4 + k2) == (s1 * s2, l1 * 4 + l2)


@pytest.mark.parametrize(
    "p,q,dim",
    [(0, 0, 2), (1, 0, 8), (0, 1, 16), (2, 0, 32), (1, 1, 64)],
)
def test_build_dimensions(p, q, dim):
    B = build_B(p, q)
    assert B.table.dim == B.real_dim == dim == 2 ** (2 * p + 3 * q + 1)
    assert B.complex_dim == dim // 2


def test_complex_unit_position():
    B = build_B(1, 1)
    assert B.basis_decode(B.complex_unit) == (1, 0, 0)
    assert B.complex_unit == 32
    assert B.table.product(B.complex_unit, B.complex_unit) == (-1, 0)


def test_index_round_trip():
    B = build_B(1, 1)
    assert B.basis_index((0, 0, 0)) == 0
    assert all(B.basis_index(B.basis_decode(k)) == k for k in range(B.real_dim))
    assert B.basis_decode(B.real_dim - 1) == (1, 3, 7)


def test_index_errors():
    B = build_B(1, 0)
    with pytest.raises(ValueError):
        B.basis_index((2, 0))
    with pytest.raises(ValueError):
        B.basis_index((0,))
    with pytest.raises(ValueError):
        B.basis_decode(8)


def test_resource_guard():
    with pytest.raises(ResourceGuardExceeded):
        build_B(2, 2)
    with pytest.raises(ResourceGuardExceeded):
        build_B(1, 1, max_exponent=4)
    with pytest.raises(ValueError):
        build_B(-1, 0)


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_structure_constants_are_integral(p, q):
    t = build_B(p, q).table
    assert set(np.unique(t.signs)) <= {-1, 1}
    assert t.check_invariants(division=False) == []


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (0, 1), (1, 1)])
def test_real_form_is_the_c_digit_zero_block(p, q):
    B = build_B(p, q)
    real = build_real_form(p, q)
    half = B.real_dim // 2
    assert np.array_equal(B.table.signs[:half, :half], real.signs)
    assert np.array_equal(B.table.index[:half, :half], real.index)


@pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (1, 1)])
def test_complex_unit_is_central_on_real_form(p, q):
    B = build_B(p, q)
    u = B.complex_unit
    for j in B.real_form_indices():
        assert B.table.product(u, int(j)) == B.table.product(int(j), u)


def test_tensor_tables_have_imaginary_units_squaring_to_plus_one():
    # (i (x) j)^2 = (i^2)(j^2) = +1, so the division-algebra rule is not applied
    B = build_B(1, 0)
    k = B.basis_index((1, 2))
    assert B.table.product(k, k) == (1, 0)
    assert B.table.check_invariants(division=True) != []


def test_labels():
    B = build_B(1, 0)
    assert B.label(B.complex_unit) == "C1(x)H0"
