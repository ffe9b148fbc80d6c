"""JSON encoding of complex data as [re, im] pairs.

All file formats in this package (algebra elements, module elements,
operators, map files, point maps, reports) build on the same convention:
a complex scalar is a two-element list ``[re, im]`` of floats.  Python's
json writer emits shortest round-trip representations, so save/load is
bit-exact for float64 data.
"""

from __future__ import annotations

import numpy as np


def cvec_to_json(vec: np.ndarray) -> list:
    """Complex 1-d array -> list of [re, im] pairs."""
    vec = np.asarray(vec, dtype=complex).reshape(-1)
    return [[float(z.real), float(z.imag)] for z in vec]


def cvec_from_json(data) -> np.ndarray:
    """List of [re, im] pairs -> complex 1-d array."""
    out = np.empty(len(data), dtype=complex)
    for i, pair in enumerate(data):
        re, im = pair
        out[i] = complex(float(re), float(im))
    return out


def cmat_to_json(mat: np.ndarray) -> list:
    """Complex 2-d array -> row-major nested lists of [re, im] pairs."""
    mat = np.asarray(mat, dtype=complex)
    return [cvec_to_json(row) for row in mat]


def cmat_from_json(data) -> np.ndarray:
    """Row-major nested lists of [re, im] pairs -> complex 2-d array."""
    rows = [cvec_from_json(row) for row in data]
    if not rows:
        return np.zeros((0, 0), dtype=complex)
    return np.vstack(rows)
