"""Derivation solvers over structure constants.

Any finite-dimensional associative algebra enters through its
multiplication tensor; the blockwise endomorphism algebra of a module
plugs in via :func:`structure_constants`, and the three-dimensional
upper-triangular control algebra uses the same machinery.  Derivation
and Jordan-derivation spaces come out of one rank-revealing nullspace
computation whose rank decisions refuse to guess (see
:func:`derlab.linalg.nullspace_basis`).

Map files serialize a linear self-map of the algebra as its matrix in
the canonical coordinates, ``{"dim": D, "matrix": [[[re, im], ...]]}``
row-major; saving and loading round-trips bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import hilbmod
from .calgebra import AlgebraElement
from .errors import DimensionMismatch, NotADerivation
from .hilbmod import ModuleElement, ModuleSpec, basis_elements, riesz
from .linalg import nullspace_basis
from .opalg import (
    _structure_tensor,
    mult_op,
    operator_from_coords,
    operator_to_coords,
    theta,
    Operator,
)
from .serialize import cmat_from_json, cmat_to_json


@dataclass(frozen=True, eq=False)
class ConcreteAlgebra:
    """A finite-dimensional unital associative algebra in coordinates.

    ``structure[i, j, m]`` is the coefficient of basis element m in the
    product e_i e_j.  Associativity and the two-sided unit law are
    validated on construction; a tensor failing either is rejected
    rather than silently producing meaningless derivation spaces.
    """

    structure: np.ndarray
    unit_coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.structure, dtype=complex)
        u = np.asarray(self.unit_coords, dtype=complex).reshape(-1)
        d = c.shape[0]
        if c.shape != (d, d, d):
            raise ValueError(f"structure tensor must be cubic, got {c.shape}")
        if u.size != d:
            raise ValueError("unit coordinate length does not match dimension")
        left = np.einsum("ijm,mlp->ijlp", c, c)
        right = np.einsum("jlm,imp->ijlp", c, c)
        if np.max(np.abs(left - right), initial=0.0) > 1e-10:
            raise ValueError("structure constants are not associative")
        eye = np.eye(d)
        if (
            np.max(np.abs(np.einsum("i,ijm->jm", u, c) - eye), initial=0.0) > 1e-10
            or np.max(np.abs(np.einsum("j,ijm->im", u, c) - eye), initial=0.0) > 1e-10
        ):
            raise ValueError("unit coordinates fail the unit law")
        c.setflags(write=False)
        u.setflags(write=False)
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "unit_coords", u)

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    def mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Product of two coordinate vectors."""
        return np.einsum("i,j,ijm->m", u, v, self.structure)


@dataclass(frozen=True, eq=False)
class LinearMapOnAlgebra:
    """A linear self-map of a concrete algebra, as a matrix on coordinates."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"map matrix must be square, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, coords: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(coords, dtype=complex)

    def to_json(self) -> dict:
        return {"dim": self.dim, "matrix": cmat_to_json(self.matrix)}

    @classmethod
    def from_json(cls, data) -> "LinearMapOnAlgebra":
        matrix = cmat_from_json(data["matrix"])
        if matrix.shape != (data["dim"], data["dim"]):
            raise DimensionMismatch(
                f"declared dim {data['dim']} does not match matrix shape {matrix.shape}"
            )
        return cls(matrix)


def save_map(path, d: LinearMapOnAlgebra) -> None:
    with open(path, "w") as fh:
        json.dump(d.to_json(), fh)


def load_map(path) -> LinearMapOnAlgebra:
    with open(path) as fh:
        return LinearMapOnAlgebra.from_json(json.load(fh))


def structure_constants(spec: ModuleSpec) -> ConcreteAlgebra:
    """The block endomorphism algebra of a module, in canonical coordinates."""
    c, unit_coords = _structure_tensor(spec)
    return ConcreteAlgebra(c, unit_coords)


# ---------------------------------------------------------------------------
# Constraint assembly


def _product_rule_matrix(tensor: np.ndarray) -> np.ndarray:
    """Stacked linear constraints ``d(e_i * e_j) = d(e_i) * e_j + e_i * d(e_j)``
    for the product encoded by ``tensor``, as a (D^3, D^2) matrix acting on
    the row-major flattening of the map matrix."""
    d = tensor.shape[0]
    rows = np.zeros((d, d, d, d, d), dtype=complex)
    diag = np.arange(d)
    # d applied to the product: coefficient tensor[i, j, p] at M[s, p]
    rows[:, :, diag, diag, :] += tensor[:, :, np.newaxis, :]
    # all ordered pairs matter: the product rule is not symmetric in (i, j)
    for i in range(d):
        rows[i, :, :, :, i] -= tensor.transpose(1, 2, 0)
    for j in range(d):
        rows[:, j, :, :, j] -= tensor.transpose(0, 2, 1)
    return rows.reshape(d**3, d * d)


def leibniz_constraint_matrix(alg: ConcreteAlgebra) -> np.ndarray:
    """Constraints for the ordinary product rule."""
    return _product_rule_matrix(alg.structure)


def jordan_constraint_matrix(alg: ConcreteAlgebra) -> np.ndarray:
    """Constraints for the polarized Jordan rule, via the symmetrized product."""
    sym = alg.structure + alg.structure.transpose(1, 0, 2)
    return _product_rule_matrix(sym)


def _nullspace_maps(mat: np.ndarray, dim: int, tol: float) -> list[LinearMapOnAlgebra]:
    result = nullspace_basis(mat, tol)
    return [
        LinearMapOnAlgebra(result.basis[:, i].reshape(dim, dim))
        for i in range(result.basis.shape[1])
    ]


def leibniz_nullspace(alg: ConcreteAlgebra, tol: float = 1e-9) -> list[LinearMapOnAlgebra]:
    """Orthonormal basis of the space of derivations of the algebra."""
    return _nullspace_maps(leibniz_constraint_matrix(alg), alg.dim, tol)


def jordan_nullspace(alg: ConcreteAlgebra, tol: float = 1e-9) -> list[LinearMapOnAlgebra]:
    """Orthonormal basis of the space of Jordan derivations."""
    return _nullspace_maps(jordan_constraint_matrix(alg), alg.dim, tol)


# ---------------------------------------------------------------------------
# Inner maps and defects


def left_regular(alg: ConcreteAlgebra, m: np.ndarray) -> LinearMapOnAlgebra:
    """Left multiplication x -> m x as a coordinate matrix."""
    return LinearMapOnAlgebra(np.einsum("i,ips->sp", m, alg.structure))


def right_regular(alg: ConcreteAlgebra, m: np.ndarray) -> LinearMapOnAlgebra:
    """Right multiplication x -> x m as a coordinate matrix."""
    return LinearMapOnAlgebra(np.einsum("j,pjs->sp", m, alg.structure))


def inner_map(alg: ConcreteAlgebra, m: np.ndarray) -> LinearMapOnAlgebra:
    """The commutator map x -> m x - x m."""
    m = np.asarray(m, dtype=complex).reshape(-1)
    return LinearMapOnAlgebra(
        left_regular(alg, m).matrix - right_regular(alg, m).matrix
    )


def derivation_defect(alg: ConcreteAlgebra, d: LinearMapOnAlgebra) -> float:
    """Worst product-rule violation over all ordered basis pairs."""
    c = alg.structure
    m = d.matrix
    lhs = np.einsum("sp,ijp->ijs", m, c)
    rhs = np.einsum("mi,mjs->ijs", m, c) + np.einsum("mj,ims->ijs", m, c)
    diff = lhs - rhs
    return float(np.max(np.linalg.norm(diff, axis=2), initial=0.0))


def extract_implementer(
    spec: ModuleSpec,
    d: LinearMapOnAlgebra,
    frame_elements: list[ModuleElement] | None = None,
    tol: float = 1e-9,
) -> Operator:
    """The operator T implementing a derivation d as x -> Tx - xT.

    Built from a partition-of-unity frame {x_i} by evaluating
    ``T b = sum_i d(theta(b, hat x_i)) x_i`` on the canonical module
    basis.  The formula depends on the frame, but the implementer is
    unique up to adding a multiplication operator, which the round-trip
    tests pin down.

    Raises NotADerivation when d fails the product rule beyond ``tol``.
    """
    alg = structure_constants(spec)
    defect = derivation_defect(alg, d)
    if defect > tol:
        raise NotADerivation(f"product-rule defect {defect:.3g} exceeds {tol:g}")
    if frame_elements is None:
        frame_elements = hilbmod.frame(spec, 1)

    basis = basis_elements(spec)
    blocks = [np.zeros((n, n), dtype=complex) for n in spec.fiber_dims]
    idx = 0
    for t, n in enumerate(spec.fiber_dims):
        for q in range(n):
            b = basis[idx]
            image_fiber = np.zeros(n, dtype=complex)
            for xi in frame_elements:
                d_theta = operator_from_coords(
                    spec, d(operator_to_coords(theta(b, riesz(xi))))
                )
                image_fiber = image_fiber + d_theta(xi).fibers[t]
            blocks[t][:, q] = image_fiber
            idx += 1
    return Operator(spec, blocks)


def blockwise_transpose_map(spec: ModuleSpec) -> LinearMapOnAlgebra:
    """The map transposing every block, in canonical coordinates.

    An anti-homomorphism, hence scalar-linear but never a derivation on a
    noncommutative block; the standard negative control for the defect
    measures and certifiers.
    """
    dim = spec.operator_dim
    matrix = np.zeros((dim, dim), dtype=complex)
    offset = 0
    for n in spec.fiber_dims:
        for p in range(n):
            for q in range(n):
                matrix[offset + q * n + p, offset + p * n + q] = 1.0
        offset += n * n
    return LinearMapOnAlgebra(matrix)


def scalar_commutation_defect(
    spec: ModuleSpec,
    d: LinearMapOnAlgebra,
    num_samples: int = 20,
    seed: int = 0,
) -> float:
    """Worst failure of d(T_a E) = T_a d(E) over seeded a and basis E.

    This is scalar-linearity proper: it accepts maps like the blockwise
    transpose or a derivation plus a one-sided multiplication, which
    commute with the scalar action without killing it.
    """
    alg = structure_constants(spec)
    dim = alg.dim
    rng = np.random.default_rng(seed)
    eye = np.eye(dim, dtype=complex)
    worst = 0.0
    for _ in range(num_samples):
        a_vals = rng.standard_normal(spec.k) + 1j * rng.standard_normal(spec.k)
        ta = operator_to_coords(mult_op(spec, AlgebraElement(a_vals)))
        for j in range(dim):
            lhs = d(alg.mul(ta, eye[j]))
            rhs = alg.mul(ta, d(eye[j]))
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return worst


def alinearity_defect(
    spec: ModuleSpec,
    d: LinearMapOnAlgebra,
    num_samples: int = 20,
    seed: int = 0,
) -> float:
    """Scalar-linearity defect for derivations, including ``d(T_a)`` itself.

    A derivation must not only commute with multiplication operators but
    kill them outright (they are central, and derivations vanish on the
    center here), so this measure adds ``max |d(T_a)|`` on top of
    :func:`scalar_commutation_defect`.
    """
    alg = structure_constants(spec)
    rng = np.random.default_rng(seed)
    worst = scalar_commutation_defect(spec, d, num_samples, seed)
    for _ in range(num_samples):
        a_vals = rng.standard_normal(spec.k) + 1j * rng.standard_normal(spec.k)
        ta = operator_to_coords(mult_op(spec, AlgebraElement(a_vals)))
        worst = max(worst, float(np.linalg.norm(d(ta))))
    return worst
