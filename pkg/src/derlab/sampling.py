"""Seeded random inputs for verification runs.

All randomness in the verification suites flows from one configuration
seed through named streams, so adding a suite never perturbs the samples
another suite sees, and reports stay byte-identical across runs.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .calgebra import AlgebraElement, PointSpace
from .hilbmod import Functional, ModuleElement, ModuleSpec
from .opalg import Operator


def named_stream(seed: int, name: str) -> np.random.Generator:
    """An independent generator derived from (seed, name)."""
    digest = hashlib.sha256(name.encode("utf-8")).digest()[:8]
    tag = int.from_bytes(digest, "little")
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))


def _cnormal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_algebra_element(
    rng: np.random.Generator, space: PointSpace | int
) -> AlgebraElement:
    k = space.k if isinstance(space, PointSpace) else int(space)
    return AlgebraElement(_cnormal(rng, k))


def random_module_element(rng: np.random.Generator, spec: ModuleSpec) -> ModuleElement:
    return ModuleElement(spec, [_cnormal(rng, n) for n in spec.fiber_dims])


def random_functional(rng: np.random.Generator, spec: ModuleSpec) -> Functional:
    return Functional(random_module_element(rng, spec))


def random_operator(rng: np.random.Generator, spec: ModuleSpec) -> Operator:
    return Operator(spec, [_cnormal(rng, (n, n)) for n in spec.fiber_dims])


def random_coords(rng: np.random.Generator, dim: int) -> np.ndarray:
    return _cnormal(rng, dim)


def random_map_matrix(rng: np.random.Generator, dim: int) -> np.ndarray:
    return _cnormal(rng, (dim, dim))
