"""Ideals, idempotent decompositions, and local-derivation certification.

Everything here hangs off a distinguished pair (x0, f0) with f0(x0) equal
to the unit: the rank-one operators theta(., f0) form a left ideal, the
operators theta(x0, .) a right ideal, each spanned by idempotents and
separating on its side.  Those four facts drive the zero-product bilinear
identities and, through them, the certification that pointwise-inner maps
are genuine derivations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .calgebra import AlgebraElement, invert, sup_norm, unit
from .dersolve import (
    ConcreteAlgebra,
    LinearMapOnAlgebra,
    derivation_defect,
    inner_map,
    scalar_commutation_defect,
    structure_constants,
)
from .errors import (
    DegenerateSpecWarning,
    DimensionMismatch,
    NotALinear,
    UnitPairInvalid,
)
from .hilbmod import (
    Functional,
    ModuleElement,
    ModuleSpec,
    act,
    basis_elements,
    module_norm,
    riesz,
    unit_pair,
)
from .linalg import least_squares
from .opalg import (
    Operator,
    compose,
    identity,
    mult_op,
    op_norm,
    operator_from_coords,
    operator_to_coords,
    theta,
)


def _check_unit_pair(x0: ModuleElement, f0: Functional, tol: float = 1e-9):
    residual = sup_norm(f0(x0) - unit(x0.spec.space))
    if residual > tol:
        raise UnitPairInvalid(f"f0(x0) differs from the unit by {residual:.3g}")


@dataclass(frozen=True, eq=False)
class IdealBasis:
    """Spanning operators for the one-sided ideal attached to (x0, f0)."""

    side: str  # "left" | "right"
    elements: tuple[Operator, ...]

    def coords_matrix(self) -> np.ndarray:
        """Span as columns of canonical coordinates, for projection tests."""
        return np.column_stack([operator_to_coords(e) for e in self.elements])


def ideal_basis(
    spec: ModuleSpec,
    side: str,
    x0: ModuleElement | None = None,
    f0: Functional | None = None,
) -> IdealBasis:
    """Basis of the left ideal {theta(x, f0)} or right ideal {theta(x0, f)}."""
    if x0 is None or f0 is None:
        x0, f0 = unit_pair(spec)
    _check_unit_pair(x0, f0)
    if side == "left":
        elements = tuple(theta(b, f0) for b in basis_elements(spec))
    elif side == "right":
        elements = tuple(theta(x0, riesz(b)) for b in basis_elements(spec))
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return IdealBasis(side, elements)


@dataclass(frozen=True, eq=False)
class IdempotentDecomposition:
    """A rank-one operator written as an algebra combination of two idempotents.

    ``target = (1/lam) p1 - (1/lam) T_{a^-1} p2`` where a is stored and
    a^-1 is its entrywise inverse; ``reconstruction`` evaluates the right
    side so tests can measure the residual directly.
    """

    lam: complex
    a: AlgebraElement
    p1: Operator
    p2: Operator
    target: Operator

    def reconstruction(self) -> Operator:
        spec = self.p1.spec
        inv_a = invert(self.a)
        return (1.0 / self.lam) * self.p1 - (1.0 / self.lam) * compose(
            mult_op(spec, inv_a), self.p2
        )

    def residual(self) -> float:
        return op_norm(self.reconstruction() - self.target)


def idempotent_decomposition(
    x: ModuleElement, x0: ModuleElement, f0: Functional
) -> IdempotentDecomposition:
    """Split theta(x, f0) into idempotents inside the left ideal.

    The scale lam = 1/(1 + sup|f0(x)|) keeps every value of lam*f0(x)
    strictly inside the unit disc, so unit - lam*f0(x) is invertible;
    its inverse a makes theta(a(x0 - lam x), f0) an idempotent.
    """
    _check_unit_pair(x0, f0)
    lam = 1.0 / (1.0 + sup_norm(f0(x)))
    a = invert(unit(x.spec.space) - lam * f0(x))
    p1 = theta(x0, f0)
    p2 = theta(act(a, x0 - lam * x), f0)
    return IdempotentDecomposition(lam, a, p1, p2, theta(x, f0))


def idempotent_decomposition_right(
    f: Functional, x0: ModuleElement, f0: Functional
) -> IdempotentDecomposition:
    """Mirror image for the right ideal: split theta(x0, f)."""
    _check_unit_pair(x0, f0)
    lam = 1.0 / (1.0 + sup_norm(f(x0)))
    a = invert(unit(x0.spec.space) - lam * f(x0))
    p1 = theta(x0, f0)
    p2 = theta(x0, (f0 - lam * f).scaled_by(a))
    return IdempotentDecomposition(lam, a, p1, p2, theta(x0, f))


def separating_witness(
    side: str,
    a: Operator,
    x0: ModuleElement | None = None,
    f0: Functional | None = None,
    tol: float = 1e-10,
) -> ModuleElement | None:
    """A nonzero vector proving the ideal separates the operator ``a``.

    Left side: evaluates a . theta(x, f0) at x0 for the canonical basis
    element x with the largest image under ``a`` (the result collapses to
    a(x)).  Right side: evaluates theta(x0, f) . a, with f and the probe
    chosen to hit the largest matrix entry of ``a``.  Returns None when
    ``a`` is numerically zero.
    """
    spec = a.spec
    if op_norm(a) <= tol:
        return None
    if x0 is None or f0 is None:
        x0, f0 = unit_pair(spec)
    _check_unit_pair(x0, f0)
    basis = basis_elements(spec)
    if side == "left":
        x = basis[int(np.argmax([module_norm(a(b)) for b in basis]))]
        return compose(a, theta(x, f0))(x0)
    if side == "right":
        best = None
        best_val = -1.0
        for col in basis:
            image = a(col)
            for row in basis:
                val = sup_norm(riesz(row)(image))
                if val > best_val:
                    best_val = val
                    best = (col, row)
        col, row = best
        return compose(theta(x0, riesz(row)), a)(col)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def zero_product_chain_defect(
    phi: Callable[[Operator, Operator], Operator],
    a: Operator,
    b: Operator,
    ell: Operator,
    r: Operator,
) -> float:
    """Worst violation of the ideal-shifting identities for a bilinear map.

    For phi scalar-bilinear and vanishing on zero products, multiplying
    through an element of the left ideal can be moved across the comma,
    and likewise for the right ideal:

        phi(a, ell b) = phi(a ell, b) = phi(I, a ell b)
        phi(a r, b)   = phi(a, r b)   = phi(a r b, I)

    The caller certifies the hypotheses on phi; the two canonical
    instances are built from a map satisfying the zero-triple condition.
    """
    eye = identity(a.spec)
    chain1 = (
        phi(a, compose(ell, b)),
        phi(compose(a, ell), b),
        phi(eye, compose(a, compose(ell, b))),
    )
    chain2 = (
        phi(compose(a, r), b),
        phi(a, compose(r, b)),
        phi(compose(a, compose(r, b)), eye),
    )
    return max(
        op_norm(chain1[0] - chain1[1]),
        op_norm(chain1[1] - chain1[2]),
        op_norm(chain2[0] - chain2[1]),
        op_norm(chain2[1] - chain2[2]),
    )


def generalized_derivation_defect(
    alg: ConcreteAlgebra, delta: LinearMapOnAlgebra
) -> float:
    """Worst violation of d(xy) = x d(y) + d(x) y - x d(e) y over basis pairs."""
    c = alg.structure
    m = delta.matrix
    du = delta(alg.unit_coords)
    lhs = np.einsum("sp,ijp->ijs", m, c)
    rhs = (
        np.einsum("mj,ims->ijs", m, c)
        + np.einsum("mi,mjs->ijs", m, c)
        - np.einsum("m,imr,rjs->ijs", du, c, c)
    )
    return float(np.max(np.linalg.norm(lhs - rhs, axis=2), initial=0.0))


@dataclass(frozen=True, eq=False)
class ZeroTriple:
    """Operators with a b = 0 and b c = 0 exactly (up to float addition)."""

    a: Operator
    b: Operator
    c: Operator

    def __post_init__(self):
        ab = op_norm(compose(self.a, self.b))
        bc = op_norm(compose(self.b, self.c))
        if ab > 1e-10 or bc > 1e-10:
            raise ValueError(
                f"not a zero triple: |ab| = {ab:.3g}, |bc| = {bc:.3g}"
            )


def zero_triple_sampler(spec: ModuleSpec, count: int, seed: int) -> list[ZeroTriple]:
    """Seeded triples (a, b, c) with a b = b c = 0, built constructively.

    Per fiber of dimension >= 2: b is rank one with range u and kernel
    containing everything orthogonal to v, a kills u, and c maps into the
    orthogonal complement of v, so the zero products hold by construction
    rather than by tolerance.  One-dimensional fibers force b = 0 there;
    if every fiber is one-dimensional the triples degenerate to b = 0 and
    a DegenerateSpecWarning is issued.
    """
    rng = np.random.default_rng(seed)
    if all(n == 1 for n in spec.fiber_dims):
        warnings.warn(
            "all fibers are one-dimensional; zero triples collapse to b = 0",
            DegenerateSpecWarning,
        )
    triples = []
    for _ in range(count):
        a_blocks, b_blocks, c_blocks = [], [], []
        for n in spec.fiber_dims:
            if n >= 2:
                gauss = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                q, _ = np.linalg.qr(gauss)
                u, v = q[:, 0], q[:, 1]
                w1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                w2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                proj_u = np.eye(n) - np.outer(u, u.conj())
                proj_v = np.eye(n) - np.outer(v, v.conj())
                a_blocks.append(w1 @ proj_u)
                b_blocks.append(np.outer(u, v.conj()))
                c_blocks.append(proj_v @ w2)
            else:
                a_blocks.append(
                    rng.standard_normal((1, 1)) + 1j * rng.standard_normal((1, 1))
                )
                b_blocks.append(np.zeros((1, 1), dtype=complex))
                c_blocks.append(
                    rng.standard_normal((1, 1)) + 1j * rng.standard_normal((1, 1))
                )
        triples.append(
            ZeroTriple(
                Operator(spec, a_blocks),
                Operator(spec, b_blocks),
                Operator(spec, c_blocks),
            )
        )
    return triples


def zero_triple_defect(
    delta: LinearMapOnAlgebra, triples: list[ZeroTriple]
) -> float:
    """Worst norm of a . delta(b) . c over the supplied zero triples.

    A map that agrees pointwise with derivations always annihilates these
    sandwiches; a finite sample can refute that hypothesis but never
    confirm it, so this is a rejection test only.
    """
    worst = 0.0
    for triple in triples:
        spec = triple.b.spec
        db = operator_from_coords(spec, delta(operator_to_coords(triple.b)))
        worst = max(worst, op_norm(compose(triple.a, compose(db, triple.c))))
    return worst


@dataclass(frozen=True, eq=False)
class LocalCertification:
    """Per-point implementability report for a candidate local derivation."""

    entries: tuple[tuple[object, float], ...]  # (element id, residual)
    certified: bool
    derivation_defect: float
    tol: float

    def residual_for(self, element_id) -> float:
        for eid, res in self.entries:
            if eid == element_id:
                return res
        raise KeyError(element_id)

    def to_json(self) -> dict:
        return {
            "checks": [
                {"element": eid, "residual": res} for eid, res in self.entries
            ],
            "certified": self.certified,
            "derivation_defect": self.derivation_defect,
            "tol": self.tol,
        }


def local_derivation_certify(
    spec: ModuleSpec,
    delta: LinearMapOnAlgebra,
    sample: list[np.ndarray] | None = None,
    tol: float = 1e-9,
    num_random: int = 20,
    seed: int = 0,
) -> LocalCertification:
    """Check that delta is pointwise implementable by commutators.

    Every derivation of the block algebra is inner, so a scalar-linear
    local derivation must satisfy ``delta(E) = T E - E T`` for some T at
    each sampled E; the least-squares residual of that linear system is
    the per-point score.  The default sample is the full canonical basis
    plus seeded random elements; passing a finite sample is sound for
    rejection and complete only in the limit.

    Raises NotALinear when delta fails the scalar-linearity precondition.
    """
    alg = structure_constants(spec)
    if delta.dim != alg.dim:
        raise DimensionMismatch(
            f"map dimension {delta.dim} does not match algebra dimension {alg.dim}"
        )
    alin = scalar_commutation_defect(spec, delta)
    if alin > tol:
        raise NotALinear(f"scalar-linearity defect {alin:.3g} exceeds {tol:g}")

    labelled: list[tuple[object, np.ndarray]] = []
    if sample is None:
        eye = np.eye(alg.dim, dtype=complex)
        labelled.extend((i, eye[i]) for i in range(alg.dim))
        labelled.append(("unit", np.array(alg.unit_coords)))
        rng = np.random.default_rng(seed)
        for i in range(num_random):
            coords = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
            labelled.append((f"random:{seed}:{i}", coords))
    else:
        labelled.extend((f"sample:{i}", np.asarray(e, dtype=complex)) for i, e in enumerate(sample))

    entries = []
    for eid, coords in labelled:
        commutator_matrix = -inner_map(alg, coords).matrix
        _, residual = least_squares(commutator_matrix, delta(coords))
        entries.append((eid, residual))
    defect = derivation_defect(alg, delta)
    certified = all(res <= tol for _, res in entries)
    return LocalCertification(tuple(entries), certified, defect, tol)
