"""Batch front door: model config, verification suites, map-file checks.

Usage:
    derlab info      --model config.json
    derlab verify    --model config.json --suite all --json report.json
    derlab check-map --model config.json --map map.json --mode derivation

The model config is JSON: {"fibers": [2, 3], "seed": 7, "tol": 1e-9,
"frame_size": 1}; --seed and --tol override the file.  Exit status is 0
iff every executed check passed.  JSON reports are byte-identical across
runs with equal config: all randomness flows from the config seed through
named streams, and wall-clock timings stay out of the serialization.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .calgebra import star, sup_norm, unit
from .dersolve import (
    LinearMapOnAlgebra,
    alinearity_defect,
    blockwise_transpose_map,
    derivation_defect,
    extract_implementer,
    inner_map,
    jordan_constraint_matrix,
    left_regular,
    leibniz_constraint_matrix,
    leibniz_nullspace,
    load_map,
    structure_constants,
)
from .errors import DerlabError, RankAmbiguous, SearchBudgetExceeded
from .hilbmod import ModuleSpec, act, frame, inner, module_norm, riesz, unit_pair
from .linalg import nullspace_basis, projection_residual
from .localtools import (
    generalized_derivation_defect,
    ideal_basis,
    idempotent_decomposition,
    idempotent_decomposition_right,
    local_derivation_certify,
    separating_witness,
    zero_product_chain_defect,
    zero_triple_defect,
    zero_triple_sampler,
)
from .opalg import (
    adjoint,
    assemble,
    canonical_rank_one_sum,
    center_coefficient,
    centralizer_basis,
    commutator,
    compose,
    fiberwise_trace,
    identity,
    lambda_matrix,
    mult_op,
    op_norm,
    operator_from_coords,
    operator_to_coords,
    phi,
    precompose,
    RankOneSum,
    semiprime_witness,
    theta,
)
from .sampling import (
    named_stream,
    random_algebra_element,
    random_functional,
    random_module_element,
    random_operator,
)
from .twolocal import (
    PointMap,
    Probe,
    certify_two_local,
    consequence_check,
    probe_points,
    upper_triangular_algebra,
    upper_triangular_negative_control,
)


@dataclass(frozen=True)
class ModelConfig:
    fibers: tuple[int, ...]
    seed: int = 0
    tol: float = 1e-9
    frame_size: int = 1

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(int(n) for n in self.fibers))
        if not self.fibers:
            raise DerlabError("config error: 'fibers' must be a nonempty list")
        if any(n < 1 for n in self.fibers):
            raise DerlabError("config error: fiber dimensions must be >= 1")
        if self.tol <= 0:
            raise DerlabError("config error: 'tol' must be positive")
        if self.seed < 0:
            raise DerlabError("config error: 'seed' must be nonnegative")
        if self.frame_size < 1:
            raise DerlabError("config error: 'frame_size' must be >= 1")

    @property
    def spec(self) -> ModuleSpec:
        return ModuleSpec.of(*self.fibers)

    @classmethod
    def from_json(cls, data: dict) -> "ModelConfig":
        if "fibers" not in data:
            raise DerlabError("config error: missing 'fibers'")
        return cls(
            fibers=tuple(data["fibers"]),
            seed=int(data.get("seed", 0)),
            tol=float(data.get("tol", 1e-9)),
            frame_size=int(data.get("frame_size", 1)),
        )

    @classmethod
    def from_file(cls, path: str) -> "ModelConfig":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        return {
            "fibers": list(self.fibers),
            "seed": self.seed,
            "tol": self.tol,
            "frame_size": self.frame_size,
        }


@dataclass
class CheckResult:
    name: str
    status: str  # "pass" | "fail" | "error"
    detail: str
    value: float | int | None = None
    kind: str = ""
    runtime: float = 0.0  # human display only; never serialized

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.value is not None:
            out["value"] = self.value
        if self.kind:
            out["kind"] = self.kind
        return out


@dataclass
class VerificationReport:
    suite: str
    config: ModelConfig
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "config": self.config.to_json(),
            "checks": [c.to_json() for c in self.checks],
            "verdict": "pass" if self.passed else "fail",
        }

    def render(self) -> str:
        lines = [f"suite {self.suite}: fibers={list(self.config.fibers)} "
                 f"seed={self.config.seed} tol={self.config.tol:g}"]
        for c in self.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "error": "ERR "}[c.status]
            lines.append(f"  [{mark}] {c.name:<38} {c.detail}  ({c.runtime:.2f}s)")
        lines.append(f"verdict: {'pass' if self.passed else 'fail'}")
        return "\n".join(lines)


def _run_check(report: VerificationReport, name: str, fn) -> None:
    start = time.perf_counter()
    try:
        ok, detail, value = fn()
        status = "pass" if ok else "fail"
        result = CheckResult(name, status, detail, value)
    except RankAmbiguous as exc:
        result = CheckResult(name, "error", str(exc), kind="RankAmbiguous")
    except DerlabError as exc:
        result = CheckResult(name, "error", str(exc), kind=type(exc).__name__)
    result.runtime = time.perf_counter() - start
    report.checks.append(result)


# ---------------------------------------------------------------------------
# Suites


def _suite_lemmas(config: ModelConfig, report: VerificationReport) -> None:
    spec = config.spec
    one = unit(spec.space)

    def frame_partition():
        worst = 0.0
        for m in range(1, 6):
            xs = frame(spec, m)
            total = inner(xs[0], xs[0])
            for x in xs[1:]:
                total = total + inner(x, x)
            worst = max(worst, sup_norm(total - one))
        return worst <= 1e-12, f"max partition residual {worst:.3g}", worst

    _run_check(report, "frame-partition-of-unity", frame_partition)

    def theta_identities():
        rng = named_stream(config.seed, "lemmas/theta-identities")
        worst = 0.0
        for _ in range(100):
            a = random_algebra_element(rng, spec.space)
            x = random_module_element(rng, spec)
            y = random_module_element(rng, spec)
            z = random_module_element(rng, spec)
            w = random_module_element(rng, spec)
            f = random_functional(rng, spec)
            g = random_functional(rng, spec)
            op = random_operator(rng, spec)
            residuals = [
                op_norm(compose(theta(x, f), op) - theta(x, precompose(f, op))),
                op_norm(compose(op, theta(x, f)) - theta(op(x), f)),
                op_norm(
                    compose(theta(x, f), theta(y, g))
                    - compose(mult_op(spec, f(y)), theta(x, g))
                ),
                op_norm(
                    theta(act(a, x), f) - compose(mult_op(spec, a), theta(x, f))
                ),
                op_norm(adjoint(theta(x, riesz(y))) - theta(y, riesz(x))),
                op_norm(
                    compose(theta(x, riesz(y)), op)
                    - theta(x, riesz(adjoint(op)(y)))
                ),
                op_norm(
                    compose(theta(x, riesz(y)), theta(z, riesz(w)))
                    - compose(mult_op(spec, inner(z, y)), theta(x, riesz(w)))
                ),
                max(
                    op_norm(
                        theta(act(a, x), riesz(y))
                        - compose(mult_op(spec, a), theta(x, riesz(y)))
                    ),
                    op_norm(
                        theta(act(a, x), riesz(y))
                        - theta(x, riesz(act(star(a), y)))
                    ),
                ),
            ]
            worst = max(worst, max(residuals))
        return worst <= 1e-12, f"max residual {worst:.3g} over 100 samples", worst

    _run_check(report, "rank-one-calculus-identities", theta_identities)

    def center_dimension():
        basis = centralizer_basis(spec, config.tol)
        ok = len(basis) == spec.k
        scalar_defect = 0.0
        for z in basis:
            for t, block in enumerate(z.blocks):
                off = block - np.eye(block.shape[0]) * np.trace(block) / block.shape[0]
                scalar_defect = max(scalar_defect, float(np.max(np.abs(off))))
        ok = ok and scalar_defect <= 1e-10
        return ok, f"dim {len(basis)} (k={spec.k}), off-scalar {scalar_defect:.3g}", len(basis)

    _run_check(report, "center-dimension", center_dimension)

    def center_reconstruction():
        basis = centralizer_basis(spec, config.tol)
        xs = frame(spec, config.frame_size)
        worst = 0.0
        for z in basis:
            rebuilt = mult_op(spec, center_coefficient(z, xs))
            worst = max(worst, op_norm(rebuilt - z))
        return worst <= 1e-9, f"max reconstruction residual {worst:.3g}", worst

    _run_check(report, "center-reconstruction", center_reconstruction)

    def semiprimeness():
        rng = named_stream(config.seed, "lemmas/semiprimeness")
        smallest = np.inf
        for _ in range(100):
            op = random_operator(rng, spec)
            b = semiprime_witness(op, config.tol)
            smallest = min(smallest, op_norm(compose(op, compose(b, op))))
        return smallest > 1e-8, f"min |aba| = {smallest:.3g} over 100 samples", smallest

    _run_check(report, "semiprimeness-witness", semiprimeness)

    def trace_zero_sums():
        rng = named_stream(config.seed, "lemmas/trace-zero-sums")
        worst = 0.0
        for _ in range(100):
            terms = tuple(
                (random_module_element(rng, spec), random_functional(rng, spec))
                for _ in range(3)
            )
            s = RankOneSum(spec, terms)
            cancel = canonical_rank_one_sum(-1.0 * assemble(s))
            zero_sum = s.extended(cancel)
            lam = lambda_matrix(zero_sum)
            worst = max(
                worst,
                sup_norm(phi(zero_sum)),
                lam.square().max_abs(),
                sup_norm(lam.trace()),
            )
        return worst <= 1e-9, f"max zero-sum residual {worst:.3g}", worst

    _run_check(report, "trace-functional-zero-sums", trace_zero_sums)

    def trace_oracle():
        rng = named_stream(config.seed, "lemmas/trace-oracle")
        worst = 0.0
        for _ in range(100):
            terms = tuple(
                (random_module_element(rng, spec), random_functional(rng, spec))
                for _ in range(4)
            )
            s = RankOneSum(spec, terms)
            expected = fiberwise_trace(assemble(s))
            scale = max(sup_norm(expected), 1.0)
            worst = max(worst, sup_norm(phi(s) - expected) / scale)
        return worst <= 1e-12, f"max relative residual {worst:.3g}", worst

    _run_check(report, "trace-equals-blockwise-trace", trace_oracle)


def _suite_derivations(config: ModelConfig, report: VerificationReport) -> None:
    spec = config.spec
    alg = structure_constants(spec)
    dim = alg.dim

    def derivation_dimension():
        result = nullspace_basis(leibniz_constraint_matrix(alg), config.tol)
        found = result.basis.shape[1]
        expected = dim - spec.k
        ok = found == expected
        return (
            ok,
            f"dim {found}, expected {expected}, gap ratio {result.gap_ratio:.3g}",
            found,
        )

    _run_check(report, "derivation-space-dimension", derivation_dimension)

    def jordan_dimension():
        lead = nullspace_basis(leibniz_constraint_matrix(alg), config.tol)
        jord = nullspace_basis(jordan_constraint_matrix(alg), config.tol)
        ok = lead.basis.shape[1] == jord.basis.shape[1]
        return (
            ok,
            f"jordan dim {jord.basis.shape[1]} vs derivation dim {lead.basis.shape[1]}",
            jord.basis.shape[1],
        )

    _run_check(report, "jordan-space-dimension", jordan_dimension)

    def roundtrip():
        worst = 0.0
        maps = leibniz_nullspace(alg, config.tol)
        for m in (1, 2):
            xs = frame(spec, m)
            for d in maps:
                t = extract_implementer(spec, d, xs, config.tol)
                rebuilt = inner_map(alg, operator_to_coords(t))
                worst = max(worst, float(np.linalg.norm(rebuilt.matrix - d.matrix)))
        return worst <= 1e-9, f"max round-trip defect {worst:.3g}", worst

    _run_check(report, "inner-implementer-round-trip", roundtrip)

    def extracted_centrality():
        rng = named_stream(config.seed, "derivations/centrality")
        xs = frame(spec, config.frame_size)
        worst = 0.0
        for _ in range(5):
            t0 = random_operator(rng, spec)
            d = inner_map(alg, operator_to_coords(t0))
            t = extract_implementer(spec, d, xs, config.tol)
            diff = t - t0
            rebuilt = mult_op(spec, center_coefficient(diff, frame(spec, 1)))
            worst = max(worst, op_norm(rebuilt - diff))
        return worst <= 1e-9, f"max centrality residual {worst:.3g}", worst

    _run_check(report, "implementer-unique-up-to-center", extracted_centrality)

    def alinearity():
        worst = 0.0
        for d in leibniz_nullspace(alg, config.tol):
            worst = max(
                worst,
                alinearity_defect(spec, d, num_samples=20, seed=config.seed),
            )
        return worst <= 1e-9, f"max scalar-linearity defect {worst:.3g}", worst

    _run_check(report, "derivations-are-scalar-linear", alinearity)


def _suite_local(config: ModelConfig, report: VerificationReport) -> None:
    spec = config.spec
    alg = structure_constants(spec)
    x0, f0 = unit_pair(spec)

    def idempotency():
        p = theta(x0, f0)
        worst = op_norm(compose(p, p) - p)
        return worst <= 1e-12, f"idempotency residual {worst:.3g}", worst

    _run_check(report, "seed-idempotent", idempotency)

    def decompositions():
        rng = named_stream(config.seed, "local/decompositions")
        worst = 0.0
        for _ in range(100):
            x = random_module_element(rng, spec)
            worst = max(worst, idempotent_decomposition(x, x0, f0).residual())
            f = random_functional(rng, spec)
            worst = max(worst, idempotent_decomposition_right(f, x0, f0).residual())
        return worst <= 1e-10, f"max reconstruction residual {worst:.3g}", worst

    _run_check(report, "idempotent-decompositions", decompositions)

    def ideal_closure():
        rng = named_stream(config.seed, "local/ideal-closure")
        worst = 0.0
        left = ideal_basis(spec, "left", x0, f0)
        right = ideal_basis(spec, "right", x0, f0)
        lmat, rmat = left.coords_matrix(), right.coords_matrix()
        for _ in range(20):
            op = random_operator(rng, spec)
            for ell in left.elements:
                worst = max(
                    worst,
                    projection_residual(lmat, operator_to_coords(compose(op, ell))),
                )
            for r in right.elements:
                worst = max(
                    worst,
                    projection_residual(rmat, operator_to_coords(compose(r, op))),
                )
        return worst <= 1e-10, f"max closure residual {worst:.3g}", worst

    _run_check(report, "one-sided-ideals-closed", ideal_closure)

    def separation():
        rng = named_stream(config.seed, "local/separation")
        smallest = np.inf
        for _ in range(100):
            op = random_operator(rng, spec)
            for side in ("left", "right"):
                witness = separating_witness(side, op, x0, f0)
                if witness is None:
                    return False, "witness missing for a nonzero operator", 0.0
                smallest = min(smallest, module_norm(witness))
        return smallest > 1e-8, f"min witness norm {smallest:.3g}", smallest

    _run_check(report, "ideals-separate-operators", separation)

    def bilinear_chains():
        rng = named_stream(config.seed, "local/bilinear-chains")
        maps = leibniz_nullspace(alg, config.tol)
        d = maps[int(rng.integers(len(maps)))] if maps else None
        triples = zero_triple_sampler(spec, 4, config.seed + 1)
        worst = 0.0
        left = ideal_basis(spec, "left", x0, f0).elements
        right = ideal_basis(spec, "right", x0, f0).elements

        def random_combo(elements):
            coeffs = rng.standard_normal(len(elements)) + 1j * rng.standard_normal(
                len(elements)
            )
            total = coeffs[0] * elements[0]
            for cf, e in zip(coeffs[1:], elements[1:]):
                total = total + cf * e
            return total

        def as_operator_map(lin):
            return lambda x: operator_from_coords(spec, lin(operator_to_coords(x)))

        for triple in triples:
            a0, b0 = triple.b, triple.c  # a0 b0 = 0 exactly
            dop = as_operator_map(d) if d is not None else (lambda x: x * 0.0)
            a = random_operator(rng, spec)
            b = random_operator(rng, spec)
            ell = random_combo(left)
            r = random_combo(right)

            def phi1(x, y):
                return compose(x, compose(dop(compose(y, a0)), b0))

            fixed = random_operator(rng, spec)

            def phi2(x, y):
                return compose(
                    dop(compose(fixed, x)) - compose(fixed, dop(x)), y
                )

            worst = max(worst, zero_product_chain_defect(phi1, a, b, ell, r))
            worst = max(worst, zero_product_chain_defect(phi2, a, b, ell, r))
        return worst <= 1e-10, f"max chain defect {worst:.3g}", worst

    _run_check(report, "zero-product-bilinear-chains", bilinear_chains)

    def generalized_law():
        rng = named_stream(config.seed, "local/generalized")
        t0 = random_operator(rng, spec)
        d = inner_map(alg, operator_to_coords(t0))
        m = operator_to_coords(random_operator(rng, spec))
        gen = LinearMapOnAlgebra(d.matrix + left_regular(alg, m).matrix)
        gen_defect = generalized_derivation_defect(alg, gen)
        unit_killed = LinearMapOnAlgebra(
            gen.matrix - left_regular(alg, gen(alg.unit_coords)).matrix
        )
        der_defect = derivation_defect(alg, unit_killed)
        ok = gen_defect <= 1e-10 and der_defect <= 1e-10
        return (
            ok,
            f"generalized defect {gen_defect:.3g}, unit-killed derivation defect {der_defect:.3g}",
            max(gen_defect, der_defect),
        )

    _run_check(report, "generalized-derivation-law", generalized_law)

    def zero_triples():
        rng = named_stream(config.seed, "local/zero-triples")
        triples = zero_triple_sampler(spec, 20, config.seed)
        t0 = random_operator(rng, spec)
        d = inner_map(alg, operator_to_coords(t0))
        good = zero_triple_defect(d, triples)
        bad = zero_triple_defect(blockwise_transpose_map(spec), triples)
        ok = good <= 1e-10 and bad > 0.1
        return ok, f"derivation defect {good:.3g}, transpose defect {bad:.3g}", good

    _run_check(report, "zero-triple-sandwiches", zero_triples)

    def local_certification():
        rng = named_stream(config.seed, "local/certification")
        t0 = random_operator(rng, spec)
        d = inner_map(alg, operator_to_coords(t0))
        cert = local_derivation_certify(spec, d, tol=1e-9, seed=config.seed)
        if not cert.certified or cert.derivation_defect > 1e-9:
            return False, "inner derivation failed certification", cert.derivation_defect
        m = operator_to_coords(random_operator(rng, spec))
        gen = LinearMapOnAlgebra(d.matrix + left_regular(alg, m).matrix)
        gen_cert = local_derivation_certify(spec, gen, tol=1e-9, seed=config.seed)
        unit_res = gen_cert.residual_for("unit")
        expected = float(np.linalg.norm(gen(alg.unit_coords)))
        unit_diag = abs(unit_res - expected) <= 1e-9 * max(expected, 1.0)
        ok = (not gen_cert.certified) and unit_diag
        return (
            ok,
            f"unit-probe residual {unit_res:.3g} (= |delta(unit)| {expected:.3g})",
            unit_res,
        )

    _run_check(report, "local-derivation-certification", local_certification)


def _suite_twolocal(config: ModelConfig, report: VerificationReport) -> None:
    spec = config.spec
    alg = structure_constants(spec)
    eye = np.eye(alg.dim, dtype=complex)

    def tables_certify():
        rng = named_stream(config.seed, "twolocal/tables")
        worst = 0.0
        for d in leibniz_nullspace(alg, config.tol):
            probes = []
            for _ in range(2):
                a = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
                b = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
                lam = complex(rng.standard_normal(), rng.standard_normal())
                probes.append(Probe(a, b, lam))
            points = [eye[i] for i in range(alg.dim)]
            for probe in probes:
                points.extend(probe_points(alg, probe))
            pm = PointMap.tabulate(d, points)
            basis_pairs = [
                (i, j) for i in range(alg.dim) for j in range(i + 1, alg.dim)
            ]
            cert = certify_two_local(alg, pm, basis_pairs, config.tol)
            cons = consequence_check(alg, pm, probes, config.tol)
            if not cert.consistent:
                return False, "a derivation table was rejected", cert.worst_residual()
            worst = max(
                worst,
                cert.worst_residual(),
                cons.additivity,
                cons.homogeneity,
                cons.jordan,
            )
        return worst <= 1e-9, f"max residual/defect {worst:.3g}", worst

    _run_check(report, "derivation-tables-certify", tables_certify)

    def corruption_rejected():
        rng = named_stream(config.seed, "twolocal/corruption")
        maps = leibniz_nullspace(alg, config.tol)
        d = maps[int(rng.integers(len(maps)))]
        points = [eye[i] for i in range(alg.dim)]
        pm = PointMap.tabulate(d, points)
        target = int(rng.integers(alg.dim))
        corrupted = pm.replaced(target, pm.values[target] + 0.5 * alg.unit_coords)
        cert = certify_two_local(alg, corrupted, tol=config.tol)
        worst = max(r for _, _, r, ok in cert.entries if not ok) if not cert.consistent else 0.0
        ok = (not cert.consistent) and worst >= 0.1
        return ok, f"corruption residual {worst:.3g}", worst

    _run_check(report, "corrupted-table-rejected", corruption_rejected)

    def negative_control():
        control_alg = upper_triangular_algebra()
        dim = len(leibniz_nullspace(control_alg, config.tol))
        if dim != 2:
            return False, f"upper-triangular derivation dimension {dim} != 2", dim
        try:
            _, rep = upper_triangular_negative_control(
                config.tol, config.seed, budget=500
            )
        except SearchBudgetExceeded as exc:
            return True, f"dim 2; search budget exceeded ({exc})", dim
        ok = rep.certification_consistent and rep.additivity_defect >= 0.1
        return (
            ok,
            f"dim 2; certified table with additivity defect {rep.additivity_defect:.3g} "
            f"after {rep.attempts} attempts",
            rep.additivity_defect,
        )

    _run_check(report, "upper-triangular-negative-control", negative_control)


SUITES = {
    "derivations": _suite_derivations,
    "lemmas": _suite_lemmas,
    "local": _suite_local,
    "twolocal": _suite_twolocal,
}


def run_suite(config: ModelConfig, suite: str) -> VerificationReport:
    report = VerificationReport(suite, config)
    if suite == "all":
        for name in sorted(SUITES):  # merge ordered by suite name
            SUITES[name](config, report)
    elif suite in SUITES:
        SUITES[suite](config, report)
    else:
        raise DerlabError(f"unknown suite {suite!r}")
    return report


# ---------------------------------------------------------------------------
# Commands


def cmd_info(config: ModelConfig) -> dict:
    spec = config.spec
    info = {
        "fibers": list(config.fibers),
        "points": spec.k,
        "operator_dimension": spec.operator_dim,
        "center_dimension": spec.k,
        "expected_derivation_dimension": spec.operator_dim - spec.k,
    }
    return info


def cmd_check_map(config: ModelConfig, map_path: str, mode: str) -> VerificationReport:
    spec = config.spec
    alg = structure_constants(spec)
    d = load_map(map_path)
    if d.dim != alg.dim:
        raise DerlabError(
            f"DimensionMismatch: map dimension {d.dim}, algebra dimension {alg.dim}"
        )
    report = VerificationReport(f"check-map/{mode}", config)

    if mode == "derivation":
        def check():
            defect = derivation_defect(alg, d)
            return defect <= config.tol, f"product-rule defect {defect:.3g}", defect

        _run_check(report, "map-is-derivation", check)
    elif mode == "generalized":
        def check():
            defect = generalized_derivation_defect(alg, d)
            return defect <= config.tol, f"generalized defect {defect:.3g}", defect

        _run_check(report, "map-is-generalized-derivation", check)
    elif mode == "local":
        def check():
            cert = local_derivation_certify(
                spec, d, tol=config.tol, seed=config.seed
            )
            worst = max(res for _, res in cert.entries)
            return (
                cert.certified,
                f"worst pointwise residual {worst:.3g}, "
                f"derivation defect {cert.derivation_defect:.3g}",
                worst,
            )

        _run_check(report, "map-is-local-derivation", check)
    elif mode == "twolocal":
        def check():
            eye = np.eye(alg.dim, dtype=complex)
            pm = PointMap.tabulate(d, [eye[i] for i in range(alg.dim)])
            cert = certify_two_local(alg, pm, tol=config.tol)
            return (
                cert.consistent,
                f"worst pair residual {cert.worst_residual():.3g}",
                cert.worst_residual(),
            )

        _run_check(report, "map-is-two-local", check)
    else:
        raise DerlabError(f"unknown mode {mode!r}")
    return report


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="derlab",
        description="verify the derivation theory of a finite block-operator model",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--model", required=True, help="path to a JSON model config")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--tol", type=float, default=None, help="override config tol")
        p.add_argument("--json", dest="json_out", default=None, help="write a JSON report here")

    p_info = sub.add_parser("info", help="print model dimensions")
    add_common(p_info)

    p_verify = sub.add_parser("verify", help="run verification suites")
    add_common(p_verify)
    p_verify.add_argument(
        "--suite",
        default="all",
        choices=["all", "lemmas", "derivations", "local", "twolocal"],
    )

    p_map = sub.add_parser("check-map", help="check a serialized linear map")
    add_common(p_map)
    p_map.add_argument("--map", dest="map_path", required=True)
    p_map.add_argument(
        "--mode",
        required=True,
        choices=["derivation", "local", "generalized", "twolocal"],
    )

    args = parser.parse_args(argv)

    try:
        config = ModelConfig.from_file(args.model)
        if args.seed is not None or args.tol is not None:
            config = ModelConfig(
                fibers=config.fibers,
                seed=config.seed if args.seed is None else args.seed,
                tol=config.tol if args.tol is None else args.tol,
                frame_size=config.frame_size,
            )
    except (OSError, json.JSONDecodeError, DerlabError, TypeError, ValueError) as exc:
        print(f"derlab: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "info":
            info = cmd_info(config)
            for key, value in info.items():
                print(f"{key}: {value}")
            if args.json_out:
                _write_json(args.json_out, info)
            return 0
        if args.command == "verify":
            report = run_suite(config, args.suite)
            print(report.render())
            if args.json_out:
                _write_json(args.json_out, report.to_json())
            return 0 if report.passed else 1
        if args.command == "check-map":
            report = cmd_check_map(config, args.map_path, args.mode)
            print(report.render())
            if args.json_out:
                _write_json(args.json_out, report.to_json())
            return 0 if report.passed else 1
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"derlab: cannot read input: {exc!r}", file=sys.stderr)
        return 2
    except DerlabError as exc:
        print(f"derlab: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
