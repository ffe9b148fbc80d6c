"""Block operators on a finite module: the endomorphism algebra.

A bounded module map commuting with the scalar action can never mix
fibers, so it is exactly one complex matrix per fiber acting blockwise.
In finite fibers every such operator is adjointable (blockwise conjugate
transpose), so the bounded and the adjointable endomorphism algebras
coincide here and one code path serves statements about either.

Coordinate conventions, fixed package-wide so serialized data is stable:
the canonical operator basis consists of the matrix units E_pq of each
block, ordered fibers-first and row-major within a block.  The flat
coordinate of E^(t)_pq is ``offset_t + p * n_t + q``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calgebra import AlgebraElement
from .errors import DimensionMismatch, ZeroOperator
from .hilbmod import (
    Functional,
    ModuleElement,
    ModuleSpec,
    basis_elements,
    inner,
    module_norm,
    riesz,
)
from .linalg import nullspace_basis
from .serialize import cmat_from_json, cmat_to_json


class Operator:
    """A blockwise module map: one n_t x n_t complex matrix per fiber."""

    __slots__ = ("spec", "blocks")

    def __init__(self, spec: ModuleSpec, blocks):
        stored = []
        for t, block in enumerate(blocks):
            arr = np.array(block, dtype=complex)
            n = spec.fiber_dims[t]
            if arr.shape != (n, n):
                raise DimensionMismatch(
                    f"block {t} has shape {arr.shape}, expected ({n}, {n})"
                )
            arr.setflags(write=False)
            stored.append(arr)
        if len(stored) != spec.k:
            raise DimensionMismatch(f"expected {spec.k} blocks, got {len(stored)}")
        self.spec = spec
        self.blocks = tuple(stored)

    def __repr__(self):
        return f"Operator(dims={self.spec.fiber_dims})"

    def __call__(self, x: ModuleElement) -> ModuleElement:
        if x.spec != self.spec:
            raise DimensionMismatch("operator and module element specs differ")
        return ModuleElement(self.spec, [b @ f for b, f in zip(self.blocks, x.fibers)])

    def __add__(self, other: "Operator") -> "Operator":
        _check_specs(self, other)
        return Operator(self.spec, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "Operator") -> "Operator":
        _check_specs(self, other)
        return Operator(self.spec, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return Operator(self.spec, [-b for b in self.blocks])

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, complex)):
            return NotImplemented
        return Operator(self.spec, [b * scalar for b in self.blocks])

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        return compose(self, other)

    def to_json(self) -> list:
        return [cmat_to_json(b) for b in self.blocks]

    @classmethod
    def from_json(cls, spec: ModuleSpec, data) -> "Operator":
        return cls(spec, [cmat_from_json(b) for b in data])


def _check_specs(a: Operator, b: Operator):
    if a.spec != b.spec:
        raise DimensionMismatch("operators live over different module specs")


def identity(spec: ModuleSpec) -> Operator:
    return Operator(spec, [np.eye(n, dtype=complex) for n in spec.fiber_dims])


def zero_operator(spec: ModuleSpec) -> Operator:
    return Operator(spec, [np.zeros((n, n), dtype=complex) for n in spec.fiber_dims])


def op_norm(a: Operator) -> float:
    """Operator norm: maximum spectral norm over the blocks."""
    return max(float(np.linalg.norm(b, ord=2)) for b in a.blocks)


def compose(a: Operator, b: Operator) -> Operator:
    """Blockwise matrix product a after b."""
    _check_specs(a, b)
    return Operator(a.spec, [x @ y for x, y in zip(a.blocks, b.blocks)])


def adjoint(a: Operator) -> Operator:
    """Blockwise conjugate transpose; the unique adjoint for the inner product."""
    return Operator(a.spec, [b.conj().T for b in a.blocks])


def commutator(a: Operator, b: Operator) -> Operator:
    return compose(a, b) - compose(b, a)


def theta(x: ModuleElement, f: Functional) -> Operator:
    """The rank-one operator y -> f(y) x.

    Block t is the outer product of x's fiber with the conjugated Riesz
    fiber of f, so the operator is scalar-linear by construction.
    """
    if x.spec != f.spec:
        raise DimensionMismatch("module element and functional specs differ")
    w = f.riesz
    return Operator(
        x.spec, [np.outer(xf, np.conj(wf)) for xf, wf in zip(x.fibers, w.fibers)]
    )


def mult_op(spec: ModuleSpec, a: AlgebraElement) -> Operator:
    """Multiplication by an algebra element: a(t) times the identity on fiber t."""
    if a.k != spec.k:
        raise DimensionMismatch(
            f"algebra element on {a.k} points, module over {spec.k} points"
        )
    return Operator(
        spec, [a.values[t] * np.eye(n, dtype=complex) for t, n in enumerate(spec.fiber_dims)]
    )


def precompose(f: Functional, a: Operator) -> Functional:
    """The functional f o a, i.e. y -> f(a(y)); Riesz vector is adjoint(a) applied."""
    if f.spec != a.spec:
        raise DimensionMismatch("functional and operator specs differ")
    return Functional(adjoint(a)(f.riesz))


# ---------------------------------------------------------------------------
# Canonical coordinates


def operator_basis(spec: ModuleSpec) -> list[Operator]:
    """Matrix units in the canonical ordering (fibers first, row-major)."""
    out = []
    for t, n in enumerate(spec.fiber_dims):
        for p in range(n):
            for q in range(n):
                blocks = [np.zeros((m, m), dtype=complex) for m in spec.fiber_dims]
                blocks[t][p, q] = 1.0
                out.append(Operator(spec, blocks))
    return out


def operator_to_coords(a: Operator) -> np.ndarray:
    """Flatten an operator to canonical coordinates."""
    return np.concatenate([b.reshape(-1) for b in a.blocks])


def operator_from_coords(spec: ModuleSpec, coords: np.ndarray) -> Operator:
    """Rebuild an operator from canonical coordinates."""
    coords = np.asarray(coords, dtype=complex).reshape(-1)
    if coords.size != spec.operator_dim:
        raise DimensionMismatch(
            f"{coords.size} coordinates for an algebra of dimension {spec.operator_dim}"
        )
    blocks = []
    offset = 0
    for n in spec.fiber_dims:
        blocks.append(coords[offset : offset + n * n].reshape(n, n))
        offset += n * n
    return Operator(spec, blocks)


def _structure_tensor(spec: ModuleSpec) -> tuple[np.ndarray, np.ndarray]:
    """Multiplication tensor and unit coordinates of the block algebra.

    c[i, j, m] is the coefficient of basis element m in (e_i e_j); the
    basis is the canonical matrix-unit ordering.  Consumed by the
    structure-constants solvers.
    """
    dim = spec.operator_dim
    c = np.zeros((dim, dim, dim), dtype=complex)
    unit_coords = np.zeros(dim, dtype=complex)
    offset = 0
    for n in spec.fiber_dims:
        for p in range(n):
            unit_coords[offset + p * n + p] = 1.0
            for q in range(n):
                for s in range(n):
                    # E_pq E_qs = E_ps within one block; cross-block products vanish
                    c[offset + p * n + q, offset + q * n + s, offset + p * n + s] = 1.0
        offset += n * n
    return c, unit_coords


# ---------------------------------------------------------------------------
# Rank-one sums and the trace functional


@dataclass(frozen=True, eq=False)
class RankOneSum:
    """A formal finite sum of rank-one operators, kept as (x, f) pairs.

    The formal representation matters: the trace functional below is
    defined on representations, and its independence of the chosen
    representation is a verified fact, not an assumption.
    """

    spec: ModuleSpec
    terms: tuple[tuple[ModuleElement, Functional], ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for x, f in self.terms:
            if x.spec != self.spec or f.spec != self.spec:
                raise DimensionMismatch("rank-one term over a different spec")

    def __len__(self):
        return len(self.terms)

    def extended(self, other: "RankOneSum") -> "RankOneSum":
        if other.spec != self.spec:
            raise DimensionMismatch("cannot concatenate sums over different specs")
        return RankOneSum(self.spec, self.terms + other.terms)


def assemble(s: RankOneSum) -> Operator:
    """Evaluate the formal sum to an actual operator."""
    total = zero_operator(s.spec)
    for x, f in s.terms:
        total = total + theta(x, f)
    return total


def canonical_rank_one_sum(a: Operator) -> RankOneSum:
    """Write an operator as a rank-one sum over the canonical module basis.

    One term per fiber column: theta(column q of block t, hat(e^(t)_q)).
    Assembling the result reproduces the operator exactly.
    """
    spec = a.spec
    basis = basis_elements(spec)
    terms = []
    idx = 0
    for t, n in enumerate(spec.fiber_dims):
        for q in range(n):
            fibers = [np.zeros(m, dtype=complex) for m in spec.fiber_dims]
            fibers[t] = np.array(a.blocks[t][:, q])
            terms.append((ModuleElement(spec, fibers), riesz(basis[idx])))
            idx += 1
    return RankOneSum(spec, tuple(terms))


def phi(s: RankOneSum) -> AlgebraElement:
    """Trace functional on a rank-one representation: sum of f_i(x_i).

    Well-defined on the assembled operator (representations of the same
    operator give the same value) and tracial; both facts are certified
    against the independent blockwise-trace oracle in the test suite.
    """
    total = np.zeros(s.spec.k, dtype=complex)
    for x, f in s.terms:
        total = total + f(x).values
    return AlgebraElement(total)


def fiberwise_trace(a: Operator) -> AlgebraElement:
    """Independent oracle for the trace functional: trace of each block."""
    return AlgebraElement(np.array([np.trace(b) for b in a.blocks], dtype=complex))


class LambdaMatrix:
    """The pairing matrix of a rank-one sum: entry (i, j) = f_j(x_i).

    A sum assembling to zero forces this matrix to square to zero, and a
    nilpotent matrix over the function algebra has pointwise trace zero;
    that chain is what makes the trace functional well-defined.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: np.ndarray):
        arr = np.array(entries, dtype=complex)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1]:
            raise ValueError("expected an (n, n, k) array of per-point values")
        arr.setflags(write=False)
        self.entries = arr

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def square(self) -> "LambdaMatrix":
        """Matrix square over the algebra: pointwise matrix product."""
        return LambdaMatrix(np.einsum("imk,mjk->ijk", self.entries, self.entries))

    def trace(self) -> AlgebraElement:
        return AlgebraElement(np.einsum("iik->k", self.entries))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def to_json(self) -> list:
        return [
            [AlgebraElement(self.entries[i, j]).to_json() for j in range(self.n)]
            for i in range(self.n)
        ]


def lambda_matrix(s: RankOneSum) -> LambdaMatrix:
    """Pairing matrix of a rank-one sum."""
    n = len(s.terms)
    k = s.spec.k
    entries = np.zeros((max(n, 0), max(n, 0), k), dtype=complex)
    for i, (x, _) in enumerate(s.terms):
        for j, (_, f) in enumerate(s.terms):
            entries[i, j] = f(x).values
    return LambdaMatrix(entries) if n else LambdaMatrix(np.zeros((0, 0, k)))


# ---------------------------------------------------------------------------
# Center and semi-primeness


def centralizer_basis(spec: ModuleSpec, tol: float = 1e-9) -> list[Operator]:
    """Orthonormal basis of {Z : ZE = EZ for every operator E}.

    Computed as the nullspace of the stacked commutation constraints
    against the canonical operator basis; the span coincides with the
    multiplication operators, which the tests verify by reconstruction.
    """
    basis = operator_basis(spec)
    dim = spec.operator_dim
    rows = np.zeros((dim * dim, dim), dtype=complex)
    for b, e in enumerate(basis):
        for m, em in enumerate(basis):
            rows[b * dim : (b + 1) * dim, m] = operator_to_coords(
                commutator(em, e)
            )
    result = nullspace_basis(rows, tol)
    return [
        operator_from_coords(spec, result.basis[:, i])
        for i in range(result.basis.shape[1])
    ]


def center_coefficient(
    a: Operator, frame_elements: list[ModuleElement]
) -> AlgebraElement:
    """Recover the multiplier of a central operator from a frame.

    Returns sum_i inner(a(x_i), x_i); when ``a`` commutes with everything
    this is the algebra element whose multiplication operator equals
    ``a``.  For non-central input the result is still defined but the
    reconstruction fails, which the tests use as a negative control.
    """
    total = np.zeros(a.spec.k, dtype=complex)
    for x in frame_elements:
        total = total + inner(a(x), x).values
    return AlgebraElement(total)


def semiprime_witness(a: Operator, tol: float = 1e-9) -> Operator:
    """A rank-one B with a B a != 0, witnessing semi-primeness.

    Probes the canonical module basis, takes the element x with the
    largest image, and returns theta(x, hat(a(x))); then (a B a)(x) is
    the image a(x) rescaled by the fiberwise squared norms of a(x),
    which cannot vanish.
    """
    if op_norm(a) <= tol:
        raise ZeroOperator(f"operator norm {op_norm(a):.3g} <= {tol:g}")
    probes = basis_elements(a.spec)
    images = [module_norm(a(x)) for x in probes]
    x = probes[int(np.argmax(images))]
    return theta(x, riesz(a(x)))
