"""Scalar algebra: pointwise arithmetic, involution, inversion, norms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from derlab import (
    AlgebraElement,
    DimensionMismatch,
    NotInvertible,
    PointSpace,
    invert,
    is_positive,
    product,
    star,
    sup_norm,
    unit,
)

finite_complex = st.complex_numbers(
    max_magnitude=1e3, allow_nan=False, allow_infinity=False
)


def cvec(k):
    return st.lists(finite_complex, min_size=k, max_size=k).map(AlgebraElement)


def test_point_space_needs_a_point():
    with pytest.raises(ValueError):
        PointSpace(0)


def test_unit_values():
    assert np.array_equal(unit(1).values, [1.0 + 0j])
    assert np.array_equal(unit(3).values, [1.0 + 0j] * 3)


def test_unit_law_on_seeded_elements():
    rng = np.random.default_rng(0)
    for _ in range(100):
        a = AlgebraElement(rng.standard_normal(4) + 1j * rng.standard_normal(4))
        assert np.allclose(product(unit(4), a).values, a.values)


def test_product_pointwise():
    a = AlgebraElement([2, 0])
    b = AlgebraElement([3, 5])
    assert np.array_equal(product(a, b).values, [6, 0])
    c = AlgebraElement([1j, 1])
    assert np.allclose(product(c, c).values, [-1, 1])


def test_product_rejects_mismatched_lengths():
    with pytest.raises(DimensionMismatch):
        product(AlgebraElement([1, 2]), AlgebraElement([1, 2, 3]))


def test_star_examples():
    assert np.array_equal(star(AlgebraElement([1j])).values, [-1j])
    assert np.array_equal(star(unit(2)).values, unit(2).values)
    a = AlgebraElement([1 + 2j, 3])
    assert np.allclose(star(star(a)).values, a.values)


def test_star_is_multiplicative():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a = AlgebraElement(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        b = AlgebraElement(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        assert np.allclose(
            star(product(a, b)).values, product(star(a), star(b)).values
        )


def test_invert_examples():
    a = AlgebraElement([2, -1])
    assert np.allclose(invert(a).values, [0.5, -1])
    assert np.allclose(invert(unit(4)).values, unit(4).values)
    assert np.allclose(product(a, invert(a)).values, unit(2).values)


def test_invert_rejects_zero_entry():
    with pytest.raises(NotInvertible):
        invert(AlgebraElement([1, 0]))


def test_invert_involution():
    rng = np.random.default_rng(2)
    for _ in range(50):
        vals = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        vals += 2.0 * np.sign(vals.real) + 2.0  # keep away from zero
        a = AlgebraElement(vals)
        assert np.max(np.abs(invert(invert(a)).values - a.values)) <= 1e-12

def test_is_positive():
    assert is_positive(AlgebraElement([0, 3]))
    assert not is_positive(AlgebraElement([-1, 2]))
    assert not is_positive(AlgebraElement([1j, 1]))


def test_sup_norm_examples():
    assert sup_norm(AlgebraElement([3, -4j])) == 4.0
    assert sup_norm(unit(5)) == 1.0


@given(cvec(3), cvec(3))
@settings(max_examples=60)
def test_commutativity(a, b):
    # not bit-exact: complex multiply may contract to FMA differently per order
    lhs = product(a, b).values
    rhs = product(b, a).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(lhs)), 1.0)


@given(cvec(3), cvec(3), cvec(3))
@settings(max_examples=60)
def test_associativity_and_distributivity(a, b, c):
    left = product(product(a, b), c).values
    right = product(a, product(b, c)).values
    scale = max(np.max(np.abs(left)), 1.0)
    assert np.max(np.abs(left - right)) <= 1e-12 * scale
    lhs = product(a, b + c).values
    rhs = (product(a, b) + product(a, c)).values
    scale = max(np.max(np.abs(lhs)), 1.0)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


@given(cvec(4))
@settings(max_examples=60)
def test_cstar_identity(a):
    lhs = sup_norm(product(star(a), a))
    rhs = sup_norm(a) ** 2
    assert abs(lhs - rhs) <= 1e-12 * max(rhs, 1.0)


@given(cvec(4))
@settings(max_examples=60)
def test_submultiplicative(a):
    b = star(a) + unit(4)
    assert sup_norm(product(a, b)) <= sup_norm(a) * sup_norm(b) * (1 + 1e-12) + 1e-300


def test_json_round_trip():
    a = AlgebraElement([1.25 - 2j, 3e-7 + 0.1j])
    again = AlgebraElement.from_json(a.to_json())
    assert np.array_equal(a.values, again.values)
