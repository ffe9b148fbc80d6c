"""Module axioms, frames, Riesz functionals."""

import numpy as np
import pytest

from derlab import (
    AlgebraElement,
    DimensionMismatch,
    ModuleElement,
    ModuleSpec,
    act,
    basis_elements,
    frame,
    inner,
    is_positive,
    module_norm,
    riesz,
    sup_norm,
    unit,
    unit_pair,
)
from helpers import SPEC23, cnormal, elem, rand_algebra, rand_element


def test_spec_validation_explains_fullness():
    with pytest.raises(ValueError, match="full"):
        ModuleSpec.of(2, 0)


def test_spec_dims():
    assert SPEC23.k == 2
    assert SPEC23.module_dim == 5
    assert SPEC23.operator_dim == 13


def test_inner_orthogonal_vectors():
    spec = ModuleSpec.of(2)
    x = elem(spec, [1, 0])
    y = elem(spec, [0, 1])
    assert np.array_equal(inner(x, y).values, [0])


def test_inner_squared_length():
    spec = ModuleSpec.of(2)
    x = elem(spec, [3j, 4])
    assert np.allclose(inner(x, x).values, [25])


def test_inner_axioms_oracle():
    # direct raw-numpy expansion of each axiom, independent of inner()
    rng = np.random.default_rng(10)
    for _ in range(100):
        a = rand_algebra(rng, SPEC23.k)
        x = rand_element(rng, SPEC23)
        y = rand_element(rng, SPEC23)
        z = rand_element(rng, SPEC23)
        lam = complex(rng.standard_normal(), rng.standard_normal())

        # scalar-action compatibility: <ax, y> = a <x, y>
        lhs = inner(act(a, x), y).values
        oracle = np.array(
            [
                a.values[t] * np.sum(x.fibers[t] * np.conj(y.fibers[t]))
                for t in range(SPEC23.k)
            ]
        )
        assert np.max(np.abs(lhs - oracle)) <= 1e-12 * max(np.max(np.abs(oracle)), 1)

        # first-slot linearity
        lhs = inner(lam * x + y, z).values
        rhs = lam * inner(x, z).values + inner(y, z).values
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(rhs)), 1)

        # Hermitian symmetry
        assert np.allclose(inner(x, y).values, np.conj(inner(y, x).values))

        # positivity
        assert is_positive(inner(x, x), tol=1e-12)


def test_inner_spec_mismatch():
    with pytest.raises(DimensionMismatch):
        inner(rand_element(np.random.default_rng(0), SPEC23),
              rand_element(np.random.default_rng(0), ModuleSpec.of(3, 2)))


def test_act_examples():
    rng = np.random.default_rng(11)
    x = rand_element(rng, SPEC23)
    assert all(
        np.allclose(f, g)
        for f, g in zip(act(unit(SPEC23.space), x).fibers, x.fibers)
    )
    a = AlgebraElement([2, 0])
    scaled = act(a, x)
    assert np.allclose(scaled.fibers[0], 2 * x.fibers[0])
    assert np.allclose(scaled.fibers[1], 0)
    b = rand_algebra(rng, SPEC23.k)
    assert all(
        np.allclose(f, g)
        for f, g in zip(act(a, act(b, x)).fibers, act(a * b, x).fibers)
    )


def test_module_norm():
    spec = ModuleSpec.of(2)
    assert module_norm(elem(spec, [0, 0])) == 0.0
    assert module_norm(elem(spec, [3, 4])) == pytest.approx(5.0)


def test_module_norm_scaling_bound_oracle():
    rng = np.random.default_rng(12)
    for _ in range(100):
        a = rand_algebra(rng, SPEC23.k)
        x = rand_element(rng, SPEC23)
        # independent entrywise bound: max_t |a_t| * ||x_t||
        oracle = max(
            abs(a.values[t]) * np.linalg.norm(x.fibers[t]) for t in range(SPEC23.k)
        )
        assert module_norm(act(a, x)) <= oracle + 1e-12
        assert oracle <= sup_norm(a) * module_norm(x) + 1e-12


def test_small_inner_product_means_small_norm():
    rng = np.random.default_rng(13)
    x = rand_element(rng, SPEC23) * 1e-7
    assert np.max(np.abs(inner(x, x).values)) <= 1e-12
    assert module_norm(x) <= 1e-6


def test_riesz():
    rng = np.random.default_rng(14)
    x = rand_element(rng, SPEC23)
    f = riesz(x)
    zero = 0.0 * x
    assert sup_norm(riesz(zero)(rand_element(rng, SPEC23))) == 0.0
    assert np.allclose(f(x).values, inner(x, x).values)
    for _ in range(50):
        a = rand_algebra(rng, SPEC23.k)
        y = rand_element(rng, SPEC23)
        lhs = f(act(a, y)).values
        rhs = (a * f(y)).values
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(rhs)), 1)


def test_functional_arithmetic_matches_evaluation():
    rng = np.random.default_rng(15)
    f = riesz(rand_element(rng, SPEC23))
    g = riesz(rand_element(rng, SPEC23))
    y = rand_element(rng, SPEC23)
    lam = 0.3 - 1.7j
    assert np.allclose((f + g)(y).values, f(y).values + g(y).values)
    assert np.allclose((f - g)(y).values, f(y).values - g(y).values)
    assert np.allclose((lam * f)(y).values, lam * f(y).values)
    a = rand_algebra(rng, SPEC23.k)
    assert np.allclose(f.scaled_by(a)(y).values, (a * f(y)).values)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_frame_partition_of_unity(m):
    xs = frame(SPEC23, m)
    assert len(xs) == m
    total = np.zeros(SPEC23.k, dtype=complex)
    for x in xs:
        for t in range(SPEC23.k):
            total[t] += np.sum(np.abs(x.fibers[t]) ** 2)
    assert np.max(np.abs(total - 1.0)) <= 1e-12


def test_frame_single_is_unit_basis_vector():
    xs = frame(ModuleSpec.of(2, 3), 1)
    assert np.array_equal(xs[0].fibers[0], [1, 0])
    assert np.array_equal(xs[0].fibers[1], [1, 0, 0])


def test_frame_two_splits_in_half():
    xs = frame(ModuleSpec.of(2, 3), 2)
    # verified numerically: each fiber contributes 1/2 + 1/2
    for x in xs:
        for fib in x.fibers:
            assert np.abs(np.sum(np.abs(fib) ** 2) - 0.5) <= 1e-12


def test_unit_pair():
    x0, f0 = unit_pair(SPEC23)
    assert np.max(np.abs(f0(x0).values - 1.0)) <= 1e-15
    x0, f0 = unit_pair(ModuleSpec.of(1, 1))
    assert np.allclose(f0(x0).values, [1, 1])


def test_basis_elements_count_and_shape():
    basis = basis_elements(SPEC23)
    assert len(basis) == SPEC23.module_dim
    assert np.array_equal(basis[0].fibers[0], [1, 0])
    assert np.array_equal(basis[4].fibers[1], [0, 0, 1])


def test_element_json_round_trip():
    rng = np.random.default_rng(16)
    x = rand_element(rng, SPEC23)
    again = ModuleElement.from_json(SPEC23, x.to_json())
    assert all(np.array_equal(a, b) for a, b in zip(x.fibers, again.fibers))
    spec_again = ModuleSpec.from_json(SPEC23.to_json())
    assert spec_again == SPEC23
