"""Shared builders for the test suite.

Oracle computations inside tests deliberately avoid these helpers and the
library's own operations, working on raw .values/.fibers/.blocks arrays
instead, so that every derived expectation comes from an independent path.
"""

import numpy as np

from derlab import AlgebraElement, Functional, ModuleElement, ModuleSpec, Operator

SPEC1 = ModuleSpec.of(2)
SPEC23 = ModuleSpec.of(2, 3)


def cnormal(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def rand_algebra(rng, k):
    return AlgebraElement(cnormal(rng, k))


def rand_element(rng, spec):
    return ModuleElement(spec, [cnormal(rng, n) for n in spec.fiber_dims])


def rand_functional(rng, spec):
    return Functional(rand_element(rng, spec))


def rand_operator(rng, spec):
    return Operator(spec, [cnormal(rng, (n, n)) for n in spec.fiber_dims])


def op_from_blocks(spec, *blocks):
    return Operator(spec, [np.asarray(b, dtype=complex) for b in blocks])


def elem(spec, *fibers):
    return ModuleElement(spec, [np.asarray(f, dtype=complex) for f in fibers])
