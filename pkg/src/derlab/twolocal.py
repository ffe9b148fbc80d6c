"""Two-local derivation machinery.

A two-local candidate is a possibly nonlinear map known only through a
finite table of (point, value) pairs; certification asks, for every pair
of table points, whether one single derivation matches the map at both.
On the block algebra all derivations are commutators, so feasibility is a
least-squares question about one implementing operator; on a generic
algebra the search runs over an explicitly supplied derivation space,
because the inner-only shortcut is a theorem about block algebras, not a
general fact.

Certification on a finite table is sound for rejection only: a failed
pair disproves two-locality, a clean sweep merely fails to refute it.
In this finite model the rank-one span exhausts the whole endomorphism
algebra and every operator is adjointable, so the same suite covers the
adjointable-endomorphism reading of these statements as well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dersolve import ConcreteAlgebra, LinearMapOnAlgebra, inner_map, leibniz_nullspace
from .errors import DimensionMismatch, MissingProbe, SearchBudgetExceeded
from .linalg import least_squares
from .sampling import named_stream
from .serialize import cvec_from_json, cvec_to_json


class PointMap:
    """A finite table from algebra coordinates to algebra coordinates.

    Deliberately a table rather than a function object: two-locality is
    checked exactly on declared points, so reports carry no hidden
    evaluation order.
    """

    def __init__(self, entries=None):
        self._points: list[np.ndarray] = []
        self._values: list[np.ndarray] = []
        for at, value in entries or []:
            self.add(at, value)

    def add(self, at, value) -> None:
        at = np.asarray(at, dtype=complex).reshape(-1)
        value = np.asarray(value, dtype=complex).reshape(-1)
        if self._points and at.size != self._points[0].size:
            raise DimensionMismatch("point dimension differs from existing entries")
        if at.size != value.size:
            raise DimensionMismatch("point and value dimensions differ")
        self._points.append(at)
        self._values.append(value)

    @classmethod
    def tabulate(cls, fn, points) -> "PointMap":
        pm = cls()
        for at in points:
            pm.add(at, fn(np.asarray(at, dtype=complex)))
        return pm

    def __len__(self) -> int:
        return len(self._points)

    @property
    def points(self) -> tuple[np.ndarray, ...]:
        return tuple(self._points)

    @property
    def values(self) -> tuple[np.ndarray, ...]:
        return tuple(self._values)

    def value_at(self, at, atol: float = 1e-12) -> np.ndarray:
        at = np.asarray(at, dtype=complex).reshape(-1)
        for point, value in zip(self._points, self._values):
            if point.size == at.size and np.allclose(point, at, atol=atol, rtol=0.0):
                return value
        raise MissingProbe("no table entry for the requested point")

    def replaced(self, index: int, value) -> "PointMap":
        """Copy with one value overwritten; used to build corrupted tables."""
        entries = list(zip(self._points, self._values))
        entries[index] = (entries[index][0], np.asarray(value, dtype=complex))
        return PointMap(entries)

    def index_pairs(self) -> list[tuple[int, int]]:
        n = len(self._points)
        return [(i, j) for i in range(n) for j in range(i + 1, n)]

    def to_json(self) -> list:
        return [
            {"at": cvec_to_json(p), "value": cvec_to_json(v)}
            for p, v in zip(self._points, self._values)
        ]

    @classmethod
    def from_json(cls, data) -> "PointMap":
        return cls(
            (cvec_from_json(e["at"]), cvec_from_json(e["value"])) for e in data
        )


@dataclass(frozen=True, eq=False)
class PairwiseResult:
    """Outcome of one joint-implementability solve."""

    feasible: bool
    residual: float
    coords: np.ndarray | None  # implementer T, or derivation-space coefficients


def pairwise_implementer(
    alg: ConcreteAlgebra,
    a: np.ndarray,
    da: np.ndarray,
    b: np.ndarray,
    db: np.ndarray,
    tol: float = 1e-9,
    derivation_space: list[LinearMapOnAlgebra] | None = None,
) -> PairwiseResult:
    """Search for one derivation matching the two prescribed values.

    Without ``derivation_space``: solves T a - a T = da, T b - b T = db
    jointly for an implementing element T (valid on the block algebra,
    where every derivation is inner).  With it: solves for coefficients
    over the given derivation basis.  The residual is the larger of the
    two per-equation errors at the least-squares optimum.
    """
    a = np.asarray(a, dtype=complex).reshape(-1)
    b = np.asarray(b, dtype=complex).reshape(-1)
    da = np.asarray(da, dtype=complex).reshape(-1)
    db = np.asarray(db, dtype=complex).reshape(-1)
    rhs = np.concatenate([da, db])

    if derivation_space is None:
        # T a - a T = -ad_a(T), so the system matrix is minus the inner map
        ka = -inner_map(alg, a).matrix
        kb = -inner_map(alg, b).matrix
        mat = np.vstack([ka, kb])
    else:
        if not derivation_space:
            residual = float(max(np.linalg.norm(da), np.linalg.norm(db)))
            return PairwiseResult(residual <= tol, residual, None)
        mat = np.column_stack(
            [np.concatenate([d(a), d(b)]) for d in derivation_space]
        )
        ka, kb = mat[: alg.dim], mat[alg.dim :]

    sol, _ = least_squares(mat, rhs)
    residual = float(
        max(np.linalg.norm(ka @ sol - da), np.linalg.norm(kb @ sol - db))
    )
    return PairwiseResult(residual <= tol, residual, sol if residual <= tol else None)


@dataclass(frozen=True, eq=False)
class TwoLocalReport:
    """Per-pair residuals plus the overall verdict."""

    entries: tuple[tuple[int, int, float, bool], ...]
    consistent: bool
    vacuous: bool
    tol: float

    def worst_residual(self) -> float:
        return max((r for _, _, r, _ in self.entries), default=0.0)

    def to_json(self) -> dict:
        return {
            "pairs": [
                {"i": i, "j": j, "residual": r, "feasible": ok}
                for i, j, r, ok in self.entries
            ],
            "consistent": self.consistent,
            "vacuous": self.vacuous,
            "tol": self.tol,
        }


def certify_two_local(
    alg: ConcreteAlgebra,
    pm: PointMap,
    pairs: list[tuple[int, int]] | None = None,
    tol: float = 1e-9,
    derivation_space: list[LinearMapOnAlgebra] | None = None,
) -> TwoLocalReport:
    """Run the pairwise solve on every pair of table points.

    The verdict "consistent" means no pair refuted two-locality; an empty
    pair list is flagged vacuous.
    """
    if pairs is None:
        pairs = pm.index_pairs()
    points, values = pm.points, pm.values
    entries = []
    for i, j in pairs:
        result = pairwise_implementer(
            alg, points[i], values[i], points[j], values[j], tol, derivation_space
        )
        entries.append((i, j, result.residual, result.feasible))
    consistent = all(ok for _, _, _, ok in entries)
    return TwoLocalReport(tuple(entries), consistent, not pairs, tol)


@dataclass(frozen=True, eq=False)
class Probe:
    """One additivity/homogeneity/squaring probe: two points and a scalar."""

    a: np.ndarray
    b: np.ndarray
    lam: complex

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=complex).reshape(-1))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=complex).reshape(-1))
        object.__setattr__(self, "lam", complex(self.lam))


def probe_points(alg: ConcreteAlgebra, probe: Probe) -> list[np.ndarray]:
    """The table points a consequence check needs: a, b, a+b, lam*a, a*a."""
    a, b = probe.a, probe.b
    return [a, b, a + b, probe.lam * a, alg.mul(a, a)]


@dataclass(frozen=True, eq=False)
class ConsequenceReport:
    """Additivity, homogeneity, and squaring defects of a point map."""

    additivity: float
    homogeneity: float
    jordan: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.additivity, self.homogeneity, self.jordan) <= self.tol

    def to_json(self) -> dict:
        return {
            "additivity": self.additivity,
            "homogeneity": self.homogeneity,
            "jordan": self.jordan,
            "passed": self.passed,
            "tol": self.tol,
        }


def consequence_check(
    alg: ConcreteAlgebra,
    pm: PointMap,
    probes: list[Probe],
    tol: float = 1e-9,
) -> ConsequenceReport:
    """Measure the linearity and squaring laws a certified map must obey.

    A map consistent with two-locality is additive, homogeneous, and
    satisfies d(a^2) = a d(a) + d(a) a; any certified table must pass all
    three, which then upgrades it to a genuine derivation on a semi-prime
    algebra.  Raises MissingProbe when the table lacks a required point.
    """
    additivity = homogeneity = jordan = 0.0
    for probe in probes:
        a, b, lam = probe.a, probe.b, probe.lam
        da = pm.value_at(a)
        db = pm.value_at(b)
        dab = pm.value_at(a + b)
        dla = pm.value_at(lam * a)
        dsq = pm.value_at(alg.mul(a, a))
        additivity = max(additivity, float(np.linalg.norm(dab - da - db)))
        homogeneity = max(homogeneity, float(np.linalg.norm(dla - lam * da)))
        jordan = max(
            jordan,
            float(
                np.linalg.norm(dsq - alg.mul(a, da) - alg.mul(da, a))
            ),
        )
    return ConsequenceReport(additivity, homogeneity, jordan, tol)


# ---------------------------------------------------------------------------
# The upper-triangular negative control


def upper_triangular_algebra() -> ConcreteAlgebra:
    """The 2x2 upper-triangular matrices as structure constants.

    Basis order (E11, E12, E22).  This algebra is not semi-prime, which
    is exactly why a two-local-looking table that is not additive can
    exist on it.
    """
    c = np.zeros((3, 3, 3), dtype=complex)
    c[0, 0, 0] = 1.0  # E11 E11 = E11
    c[0, 1, 1] = 1.0  # E11 E12 = E12
    c[1, 2, 1] = 1.0  # E12 E22 = E12
    c[2, 2, 2] = 1.0  # E22 E22 = E22
    return ConcreteAlgebra(c, np.array([1.0, 0.0, 1.0], dtype=complex))


@dataclass(frozen=True, eq=False)
class NegativeControlReport:
    """Outcome of the seeded search for a non-additive certified table."""

    derivation_dimension: int
    attempts: int
    additivity_defect: float
    certification_consistent: bool

    def to_json(self) -> dict:
        return {
            "derivation_dimension": self.derivation_dimension,
            "attempts": self.attempts,
            "additivity_defect": self.additivity_defect,
            "certification_consistent": self.certification_consistent,
        }


def upper_triangular_negative_control(
    tol: float = 1e-9,
    seed: int = 0,
    budget: int = 200,
) -> tuple[PointMap, NegativeControlReport]:
    """Search for a table that certifies two-local yet fails additivity.

    Runs a seeded parametric search over value rules that bend the
    derivation family of the upper-triangular algebra by a quadratic
    coupling; every candidate is verified through the ordinary
    certification and consequence checks rather than asserted.  Success
    demonstrates that semi-primeness matters; exhausting the budget
    raises SearchBudgetExceeded, which callers report as an outcome, not
    a failure of the suite.
    """
    alg = upper_triangular_algebra()
    dspace = leibniz_nullspace(alg, tol)
    rng = named_stream(seed, "upper-triangular-negative-control")

    for attempt in range(1, budget + 1):
        mu, nu = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        q = rng.standard_normal() + 1j * rng.standard_normal()
        q = q * (1.0 + 1.0 / max(abs(q), 1e-3))  # keep the coupling away from zero

        # Point with no diagonal gap, and point with no strictly-upper part;
        # their sum probes additivity where the quadratic coupling shows.
        a0 = rng.standard_normal() + 1j * rng.standard_normal()
        b0 = rng.standard_normal() + 1j * rng.standard_normal()
        point_a = np.array([a0, b0, a0], dtype=complex)
        a1, c1 = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        point_b = np.array([a1, 0.0, a1 + c1], dtype=complex)
        lam = rng.standard_normal() + 1j * rng.standard_normal()

        def rule(x: np.ndarray) -> np.ndarray:
            upper = x[1]
            gap = x[2] - x[0]
            out = np.zeros(3, dtype=complex)
            out[1] = mu * upper + nu * gap + q * upper * gap
            return out

        probe = Probe(point_a, point_b, lam)
        pm = PointMap.tabulate(rule, probe_points(alg, probe))
        cert = certify_two_local(alg, pm, tol=tol, derivation_space=dspace)
        cons = consequence_check(alg, pm, [probe], tol=tol)
        if cert.consistent and cons.additivity >= 0.1:
            report = NegativeControlReport(
                len(dspace), attempt, cons.additivity, cert.consistent
            )
            return pm, report

    raise SearchBudgetExceeded(
        f"no certified non-additive table found in {budget} attempts"
    )
