"""The scalar algebra: complex functions on a finite point space.

A commutative C*-algebra with unit is, up to *-isomorphism, an algebra of
continuous functions on its spectrum; restricting to a finite spectrum
keeps every construction exactly computable.  An element is stored as its
vector of values, one complex number per point, and product, involution,
and inversion act entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotInvertible
from .serialize import cvec_from_json, cvec_to_json

# Entries whose modulus falls at or below this count as zero for inversion.
INVERT_TOL = 1e-9


@dataclass(frozen=True)
class PointSpace:
    """A finite set of k points carrying the algebra."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError("a point space needs at least one point")


class AlgebraElement:
    """A function on a finite point space, stored as its value vector."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.array(values, dtype=complex).reshape(-1)
        if arr.size < 1:
            raise ValueError("an algebra element needs at least one value")
        arr.setflags(write=False)
        self.values = arr

    @property
    def k(self) -> int:
        return self.values.size

    def __repr__(self):
        return f"AlgebraElement({np.array2string(self.values, separator=', ')})"

    def __add__(self, other):
        other = _coerce(other, self.k)
        _check_same_space(self, other)
        return AlgebraElement(self.values + other.values)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.k)
        _check_same_space(self, other)
        return AlgebraElement(self.values - other.values)

    def __rsub__(self, other):
        return _coerce(other, self.k) - self

    def __neg__(self):
        return AlgebraElement(-self.values)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return AlgebraElement(self.values * other)
        return product(self, other)

    __rmul__ = __mul__

    def to_json(self) -> list:
        return cvec_to_json(self.values)

    @classmethod
    def from_json(cls, data) -> "AlgebraElement":
        return cls(cvec_from_json(data))


def _coerce(value, k: int) -> AlgebraElement:
    """Embed complex scalars as constant functions."""
    if isinstance(value, AlgebraElement):
        return value
    if isinstance(value, (int, float, complex)):
        return constant(PointSpace(k), value)
    raise TypeError(f"cannot combine AlgebraElement with {type(value).__name__}")


def _check_same_space(a: AlgebraElement, b: AlgebraElement):
    if a.k != b.k:
        raise DimensionMismatch(
            f"algebra elements live on {a.k} and {b.k} points respectively"
        )


def unit(space: PointSpace | int) -> AlgebraElement:
    """The constant-one function, the multiplicative unit."""
    k = space.k if isinstance(space, PointSpace) else int(space)
    return AlgebraElement(np.ones(k, dtype=complex))


def zero(space: PointSpace | int) -> AlgebraElement:
    k = space.k if isinstance(space, PointSpace) else int(space)
    return AlgebraElement(np.zeros(k, dtype=complex))


def constant(space: PointSpace | int, value: complex) -> AlgebraElement:
    """Embed a complex scalar as a constant function."""
    k = space.k if isinstance(space, PointSpace) else int(space)
    return AlgebraElement(np.full(k, complex(value), dtype=complex))


def product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Entrywise (hence commutative) product."""
    _check_same_space(a, b)
    return AlgebraElement(a.values * b.values)


def star(a: AlgebraElement) -> AlgebraElement:
    """The involution: entrywise complex conjugate."""
    return AlgebraElement(np.conj(a.values))


def invert(a: AlgebraElement, tol: float = INVERT_TOL) -> AlgebraElement:
    """Entrywise reciprocal; defined only when every value stays away from 0."""
    small = np.abs(a.values) <= tol
    if np.any(small):
        idx = int(np.argmax(small))
        raise NotInvertible(
            f"entry {idx} has modulus {abs(a.values[idx]):.3g} <= {tol:g}"
        )
    return AlgebraElement(1.0 / a.values)


def is_positive(a: AlgebraElement, tol: float = 1e-9) -> bool:
    """True when every value is (numerically) real and nonnegative."""
    return bool(
        np.all(np.abs(a.values.imag) <= tol) and np.all(a.values.real >= -tol)
    )


def sup_norm(a: AlgebraElement) -> float:
    """The uniform norm: maximum modulus over the points."""
    return float(np.max(np.abs(a.values)))
