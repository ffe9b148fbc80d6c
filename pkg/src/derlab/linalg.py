"""Dense complex linear algebra behind the solvers.

Everything dimension-shaped in this package (derivation spaces, centers,
feasibility of commutator equations) reduces to rank-revealing nullspaces
and least squares on small dense complex matrices; this module is the one
place those rank decisions are made.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import RankAmbiguous

# Minimum acceptable ratio between the smallest kept and the largest
# dropped singular value; below this the solver refuses to answer.
GAP_REFUSAL = 10.0


class Nullspace(NamedTuple):
    basis: np.ndarray  # (n, nullity), orthonormal columns, phase-fixed
    gap_ratio: float
    singular_values: np.ndarray


def phase_fix(v: np.ndarray) -> np.ndarray:
    """Rotate v by a unit scalar so its largest-magnitude entry is real positive.

    Orthogonality between distinct vectors is preserved; output is a
    deterministic representative of the ray through v.
    """
    v = np.asarray(v, dtype=complex)
    if v.size == 0:
        return v
    j = int(np.argmax(np.abs(v)))
    pivot = v[j]
    if abs(pivot) == 0.0:
        return v.copy()
    return v * (abs(pivot) / pivot)


def nullspace_basis(mat: np.ndarray, tol: float = 1e-9) -> Nullspace:
    """Orthonormal basis of the (numerical) right nullspace of ``mat``.

    Parameters
    ----------
    mat : (m, n) complex array
    tol : float
        Relative threshold: singular values below ``tol * sigma_max``
        count as zero.

    Returns
    -------
    Nullspace
        ``basis`` holds orthonormal, phase-fixed columns; ``gap_ratio``
        measures how cleanly the spectrum separates at the cut
        (``inf`` when the dropped part is exactly zero).

    Raises
    ------
    RankAmbiguous
        When ``tol`` is below the numerical resolution ``eps * max(m, n)``
        of the factorization, or the gap ratio at the cut is < 10.
    """
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    m, n = mat.shape
    resolution = np.finfo(float).eps * max(m, n)
    if tol < resolution:
        raise RankAmbiguous(
            f"tolerance {tol:g} is below the numerical resolution "
            f"{resolution:.3g} of a {m}x{n} factorization"
        )

    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    svals = np.zeros(n)
    svals[: len(s)] = s
    smax = svals[0] if n else 0.0
    if smax == 0.0:
        return Nullspace(np.eye(n, dtype=complex), np.inf, svals)

    cutoff = tol * smax
    rank = int(np.sum(svals > cutoff))
    if rank == n:
        gap = svals[-1] / cutoff
    elif rank == 0:
        gap = np.inf
    elif svals[rank] == 0.0:
        gap = np.inf
    else:
        gap = svals[rank - 1] / svals[rank]
    if gap < GAP_REFUSAL:
        raise RankAmbiguous(
            f"singular-value gap ratio {gap:.3g} at the rank cut is below "
            f"{GAP_REFUSAL:g}; refusing to pick a nullspace dimension",
            gap_ratio=float(gap),
        )

    basis = vh[rank:, :].conj().T
    if basis.size:
        basis = np.column_stack([phase_fix(basis[:, i]) for i in range(basis.shape[1])])
    return Nullspace(basis, float(gap), svals)


def least_squares(mat: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimum-norm least-squares solution and its true residual norm."""
    mat = np.asarray(mat, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex).reshape(-1)
    sol, *_ = np.linalg.lstsq(mat, rhs, rcond=None)
    residual = float(np.linalg.norm(mat @ sol - rhs))
    return sol, residual


def projection_residual(columns: np.ndarray, v: np.ndarray) -> float:
    """Distance from v to the column span (0 means v lies in the span)."""
    columns = np.asarray(columns, dtype=complex)
    if columns.size == 0:
        return float(np.linalg.norm(v))
    _, residual = least_squares(columns, v)
    return residual
