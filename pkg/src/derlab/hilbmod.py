"""Finite modules over the function algebra, with algebra-valued inner products.

A module here attaches a nonzero finite-dimensional complex vector space
(a "fiber") to every point of the scalar algebra's point space.  The
inner product of two module elements is the function whose value at a
point is the Hermitian inner product of the fibers there, taken linear in
the FIRST slot and conjugate-linear in the second.  Requiring every fiber
to be nonzero is exactly fullness in this model: inner products of basis
elements already span the scalar algebra.

Bounded scalar-linear functionals are represented by their Riesz vectors
(f(y) = <y, w>).  In finite fibers every such functional has this form,
so the representation is lossless; it is a modeling choice worth noting
because the dual module is a larger object in general.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calgebra import AlgebraElement, PointSpace, sup_norm
from .errors import DimensionMismatch
from .serialize import cvec_from_json, cvec_to_json


@dataclass(frozen=True)
class ModuleSpec:
    """Shape of a module: the point space plus one fiber dimension per point."""

    space: PointSpace
    fiber_dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "fiber_dims", tuple(int(n) for n in self.fiber_dims))
        if len(self.fiber_dims) != self.space.k:
            raise ValueError(
                f"{self.space.k} points but {len(self.fiber_dims)} fiber dimensions"
            )
        if any(n < 1 for n in self.fiber_dims):
            raise ValueError(
                "every fiber must be at least one-dimensional: a zero fiber "
                "would make the module non-full (its inner products could "
                "not span the scalar algebra), which this model excludes"
            )

    @classmethod
    def of(cls, *dims: int) -> "ModuleSpec":
        return cls(PointSpace(len(dims)), tuple(dims))

    @property
    def k(self) -> int:
        return self.space.k

    @property
    def module_dim(self) -> int:
        """Total dimension of the module as a complex vector space."""
        return sum(self.fiber_dims)

    @property
    def operator_dim(self) -> int:
        """Dimension of the blockwise endomorphism algebra, sum of n_t^2."""
        return sum(n * n for n in self.fiber_dims)

    def to_json(self) -> dict:
        return {"fibers": list(self.fiber_dims)}

    @classmethod
    def from_json(cls, data) -> "ModuleSpec":
        return cls.of(*data["fibers"])


class ModuleElement:
    """A module element: one complex vector per fiber."""

    __slots__ = ("spec", "fibers")

    def __init__(self, spec: ModuleSpec, fibers):
        stored = []
        for t, fiber in enumerate(fibers):
            arr = np.array(fiber, dtype=complex).reshape(-1)
            if arr.size != spec.fiber_dims[t]:
                raise DimensionMismatch(
                    f"fiber {t} has length {arr.size}, expected {spec.fiber_dims[t]}"
                )
            arr.setflags(write=False)
            stored.append(arr)
        if len(stored) != spec.k:
            raise DimensionMismatch(f"expected {spec.k} fibers, got {len(stored)}")
        self.spec = spec
        self.fibers = tuple(stored)

    def __repr__(self):
        return f"ModuleElement(dims={self.spec.fiber_dims})"

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        _check_same_spec(self, other)
        return ModuleElement(self.spec, [a + b for a, b in zip(self.fibers, other.fibers)])

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        _check_same_spec(self, other)
        return ModuleElement(self.spec, [a - b for a, b in zip(self.fibers, other.fibers)])

    def __neg__(self):
        return ModuleElement(self.spec, [-f for f in self.fibers])

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, complex)):
            return NotImplemented
        return ModuleElement(self.spec, [f * scalar for f in self.fibers])

    __rmul__ = __mul__

    def to_json(self) -> list:
        return [cvec_to_json(f) for f in self.fibers]

    @classmethod
    def from_json(cls, spec: ModuleSpec, data) -> "ModuleElement":
        return cls(spec, [cvec_from_json(f) for f in data])


class Functional:
    """A bounded scalar-linear functional, held as its Riesz vector.

    ``f(y) = inner(y, riesz)``; evaluation is linear in y and commutes
    with the scalar action.  Linear combinations of functionals conjugate
    the complex coefficients on the stored vector, and scaling by an
    algebra element conjugates it entrywise, so that evaluation stays
    plainly linear.
    """

    __slots__ = ("riesz",)

    def __init__(self, riesz: ModuleElement):
        self.riesz = riesz

    @property
    def spec(self) -> ModuleSpec:
        return self.riesz.spec

    def __call__(self, y: ModuleElement) -> AlgebraElement:
        return inner(y, self.riesz)

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.riesz + other.riesz)

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(self.riesz - other.riesz)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float, complex)):
            return NotImplemented
        return Functional(self.riesz * np.conj(complex(scalar)))

    __rmul__ = __mul__

    def scaled_by(self, a: AlgebraElement) -> "Functional":
        """The functional y -> a * f(y)."""
        from .calgebra import star  # local to keep module top imports minimal

        return Functional(act(star(a), self.riesz))

    def to_json(self) -> list:
        return self.riesz.to_json()

    @classmethod
    def from_json(cls, spec: ModuleSpec, data) -> "Functional":
        return cls(ModuleElement.from_json(spec, data))


def _check_same_spec(x, y):
    if x.spec != y.spec:
        raise DimensionMismatch("module elements live over different specs")


def zero_element(spec: ModuleSpec) -> ModuleElement:
    return ModuleElement(spec, [np.zeros(n, dtype=complex) for n in spec.fiber_dims])


def basis_elements(spec: ModuleSpec) -> list[ModuleElement]:
    """Canonical basis: for each fiber t and slot q, the element e_q in
    fiber t and zero elsewhere, ordered fibers-first."""
    out = []
    for t, n in enumerate(spec.fiber_dims):
        for q in range(n):
            fibers = [np.zeros(m, dtype=complex) for m in spec.fiber_dims]
            fibers[t][q] = 1.0
            out.append(ModuleElement(spec, fibers))
    return out


def inner(x: ModuleElement, y: ModuleElement) -> AlgebraElement:
    """Algebra-valued inner product, linear in x, conjugate-linear in y.

    The value at point t is sum_j x[t][j] * conj(y[t][j]).
    """
    _check_same_spec(x, y)
    vals = np.array(
        [np.vdot(yf, xf) for xf, yf in zip(x.fibers, y.fibers)], dtype=complex
    )
    return AlgebraElement(vals)


def act(a: AlgebraElement, x: ModuleElement) -> ModuleElement:
    """Scalar action: fiber t gets multiplied by the value a(t)."""
    if a.k != x.spec.k:
        raise DimensionMismatch(
            f"algebra element on {a.k} points acting on a {x.spec.k}-point module"
        )
    return ModuleElement(x.spec, [a.values[t] * f for t, f in enumerate(x.fibers)])


def module_norm(x: ModuleElement) -> float:
    """Norm induced by the inner product: max Euclidean fiber norm."""
    return float(np.sqrt(sup_norm(inner(x, x))))


def riesz(x: ModuleElement) -> Functional:
    """The functional y -> inner(y, x) attached to a module element."""
    return Functional(x)


def frame(spec: ModuleSpec, m: int = 1) -> list[ModuleElement]:
    """A finite partition-of-unity family: sum of inner(x_i, x_i) = unit.

    For m = 1 each fiber carries its first standard basis vector; for
    m > 1 the same vector is split so the squared norms sum to one.
    """
    if m < 1:
        raise ValueError("frame size must be at least 1")
    scale = 1.0 / np.sqrt(m)
    out = []
    for _ in range(m):
        fibers = []
        for n in spec.fiber_dims:
            v = np.zeros(n, dtype=complex)
            v[0] = scale
            fibers.append(v)
        out.append(ModuleElement(spec, fibers))
    return out


def unit_pair(spec: ModuleSpec) -> tuple[ModuleElement, Functional]:
    """An (x0, f0) with f0(x0) = unit; the seed for the ideal machinery."""
    x0 = frame(spec, 1)[0]
    return x0, riesz(x0)
