"""Exit-criteria checks shared by ``wedgemass verify`` and the test suite.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
criterion, so a single run reports all of them.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .bench import FamilyId, SweepConfig, family_nodes, run_sweep
from .massmat import mass_exact, mass_exact_rational, mass_scheme
from .quad import gauss18
from .ratpoly import ONE, Poly3, monomial_integral
from .schemes import SchemeKind, embedded_coeff_matrices, generate_coeff_matrices, scheme_spec
from .wedge15 import PARENT_NODES, exact_volume, metric_polynomial

SCHEME_TOL = 1e-13
ZERO_DELTA_TOL = 1e-13
QUAD_REL_TOL = 1e-15
SPOT_DELTAS = tuple(Fraction(n, d) for n, d in ((1, 10), (1, 5), (3, 10), (2, 5), (1, 2)))
VOLUME_DELTAS = tuple(Fraction(i, 10) for i in range(6))


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}" + (f": {self.detail}" if self.detail else "")


def check_coeff_anchors() -> CheckResult:
    t0 = time.perf_counter()
    generated = {k: generate_coeff_matrices(k) for k in SchemeKind}
    elapsed = time.perf_counter() - t0
    cm = generated[SchemeKind.CM].matrices[0]
    anchors = {(0, 0): Fraction(24, 1080), (0, 14): Fraction(-30, 1080), (14, 14): Fraction(96, 1080)}
    bad = [f"M[{i + 1},{j + 1}]={cm[i][j]}" for (i, j), v in anchors.items() if cm[i][j] != v]
    embedded_ok = all(embedded_coeff_matrices(k) == generated[k] for k in SchemeKind)
    ok = not bad and elapsed < 60.0 and embedded_ok
    detail = f"generation {elapsed:.2f}s, embedded==generated: {embedded_ok}"
    if bad:
        detail += "; mismatched " + ", ".join(bad)
    return CheckResult(1, "coefficient-matrix anchors 24/1080, -30/1080, 96/1080", ok, detail)


def check_scheme_consistency() -> CheckResult:
    cm = generate_coeff_matrices(SchemeKind.CM).matrices[0]
    failures = [k.value for k in (SchemeKind.LM, SchemeKind.QM)
                if generate_coeff_matrices(k).total() != cm]
    return CheckResult(2, "sum_k M_k equals the CM matrix (LM, QM)", not failures,
                       "mismatch for " + ", ".join(failures) if failures else "exact")


def _reproduction_monomials(max_degree: int):
    return [(a, b, c) for a in range(max_degree + 1) for b in range(max_degree + 1)
            for c in range(max_degree + 1) if a + b + c <= max_degree]


def interpolant_failures(kind) -> list[str]:
    spec = scheme_spec(kind)
    problems = []
    for k, psi in enumerate(spec.interpolants):
        for l, p in enumerate(spec.points):
            if psi.eval(p) != (1 if k == l else 0):
                problems.append(f"psi_{k + 1}(p_{l + 1})={psi.eval(p)}")
    if sum(spec.interpolants, Poly3()) != ONE:
        problems.append("interpolants do not sum to 1")
    degree = {SchemeKind.CM: 0, SchemeKind.LM: 1, SchemeKind.QM: 2}[spec.kind]
    for mono in _reproduction_monomials(degree):
        q = Poly3.monomial(*mono)
        rebuilt = sum((psi * q.eval(p) for psi, p in zip(spec.interpolants, spec.points)), Poly3())
        if rebuilt != q:
            problems.append(f"does not reproduce xi^{mono[0]} eta^{mono[1]} zeta^{mono[2]}")
    return problems


def check_interpolants() -> CheckResult:
    problems = {k.value: interpolant_failures(k) for k in SchemeKind}
    bad = {k: v for k, v in problems.items() if v}
    return CheckResult(3, "interpolant Kronecker, partition of unity, reproduction", not bad,
                       "; ".join(f"{k}: {v[:3]}" for k, v in bad.items()) or "exact")


def check_exact_oracle() -> CheckResult:
    parent = mass_exact_rational(PARENT_NODES, 1)
    cm = generate_coeff_matrices(SchemeKind.CM).matrices[0]
    problems = [] if parent == cm else ["parent mass != CM coefficient matrix"]
    for fam in FamilyId:
        for d in VOLUME_DELTAS:
            nodes = family_nodes(fam, d, check=False)
            M = mass_exact_rational(nodes, 1)
            if sum(sum(row, Fraction(0)) for row in M) != exact_volume(nodes):
                problems.append(f"F{int(fam)} delta={d}: total mass != volume")
    return CheckResult(4, "exact oracle: parent matrix and total mass = volume", not problems,
                       "; ".join(problems) or "exact")


# Metric coefficients printed for the three families, as functions of delta.
PRINTED_METRIC_TERMS = (
    (FamilyId.F1, (0, 0, 0), "1 - 3/2 d + 1/2 d^2", lambda d: 1 - Fraction(3, 2) * d + d**2 / 2),
    (FamilyId.F1, (0, 2, 3), "3/2 d^3", lambda d: Fraction(3, 2) * d**3),
    (FamilyId.F2, (0, 0, 0), "1 - d - 3/2 d^2", lambda d: 1 - d - Fraction(3, 2) * d**2),
    (FamilyId.F2, (0, 0, 4), "-d^2", lambda d: -d**2),
    (FamilyId.F3, (0, 0, 0), "1 - 1/2 d", lambda d: 1 - d / 2),
    (FamilyId.F3, (0, 0, 3), "-d^2", lambda d: -d**2),
)


def metric_spot_failures() -> list[str]:
    problems = []
    for fam, mono, label, expected in PRINTED_METRIC_TERMS:
        for d in SPOT_DELTAS:
            got = metric_polynomial(family_nodes(fam, d, check=False)).coeff(*mono)
            if got != expected(d):
                problems.append(f"F{int(fam)} xi^{mono[0]}eta^{mono[1]}zeta^{mono[2]} "
                                f"expected {label}, at d={d} got {got} not {expected(d)}")
                break
    return problems


def check_metric_spots() -> CheckResult:
    problems = metric_spot_failures()
    return CheckResult(5, "printed metric coefficients of the three families", not problems,
                       f"{len(problems)}/{len(PRINTED_METRIC_TERMS)} terms differ: " + "; ".join(problems)
                       if problems else "all six terms match")


def _mapped_nodes(fmap):
    return [tuple(fmap(*p)) for p in PARENT_NODES]


def hierarchy_elements():
    """Elements whose exact metric is constant, linear and quadratic."""
    h = Fraction(1, 10)
    constant = _mapped_nodes(lambda x, y, z: (2 * x + y / 2 + 1, y - z / 4, 3 * z / 2 + x / 5))
    linear = _mapped_nodes(lambda x, y, z: (x, y, z + h * z * z + h * x * z - h * y * z / 2))
    quadratic = _mapped_nodes(lambda x, y, z: (x + h * x * x, y, z + h * z * z + h * y * z))
    return {"constant": constant, "linear": linear, "quadratic": quadratic}


EXACT_KINDS = {"constant": ("CM", "LM", "QM"), "linear": ("LM", "QM"), "quadratic": ("QM",)}


def check_exactness_hierarchy() -> CheckResult:
    problems = []
    for label, nodes in hierarchy_elements().items():
        degree = metric_polynomial(nodes).degree
        expected_degree = {"constant": 0, "linear": 1, "quadratic": 2}[label]
        if degree != expected_degree:
            problems.append(f"{label} element has metric degree {degree}")
        ref = mass_exact(nodes)
        for kind in EXACT_KINDS[label]:
            err = np.abs(mass_scheme(nodes, kind) - ref).max()
            if err > SCHEME_TOL:
                problems.append(f"{kind} on {label} metric: max error {err:.3g}")
    return CheckResult(6, "exactness hierarchy CM/LM/QM on constant/linear/quadratic metrics",
                       not problems, "; ".join(problems) or f"all within {SCHEME_TOL:g}")


def default_sweeps() -> dict[FamilyId, list]:
    return {fam: run_sweep(SweepConfig(fam)) for fam in FamilyId}


def _by_delta(records):
    table: dict[float, dict] = {}
    for r in records:
        table.setdefault(r.delta, {})[r.scheme] = r
    return table


def ordering_failures(sweeps) -> list[str]:
    problems = []
    for fam, records in sweeps.items():
        for d, row in _by_delta(records).items():
            if d == 0:
                continue
            cm, lm, qm = (row[s].avg_abs_err for s in ("CM", "LM", "QM"))
            if not (cm >= lm >= qm):
                problems.append(f"F{int(fam)} delta={d:g}: CM {cm:.3g}, LM {lm:.3g}, QM {qm:.3g}")
    return problems


def superiority_failures(sweeps) -> list[str]:
    problems = []
    for fam, records in sweeps.items():
        for d, row in _by_delta(records).items():
            qm, g = row["QM"], row["GAUSS18"]
            if d == 0:
                worst = max(qm.max_abs_err, g.max_abs_err)
                if not worst <= ZERO_DELTA_TOL:
                    problems.append(f"F{int(fam)} delta=0: error {worst:.3g}")
                continue
            for stat in ("avg_abs_err", "max_abs_err"):
                a, b = getattr(qm, stat), getattr(g, stat)
                if not a < b:
                    problems.append(f"F{int(fam)} delta={d:g} {stat}: QM {a:.4g} >= GAUSS18 {b:.4g}")
    return problems


def check_ordering(sweeps=None) -> CheckResult:
    problems = ordering_failures(sweeps or default_sweeps())
    return CheckResult(7, "avg error ordering CM >= LM >= QM on the default sweep", not problems,
                       f"{len(problems)} violations: " + "; ".join(problems[:4]) if problems else "holds")


def check_superiority(sweeps=None) -> CheckResult:
    problems = superiority_failures(sweeps or default_sweeps())
    return CheckResult(8, "QM below GAUSS18 in avg and max error on the default sweep", not problems,
                       f"{len(problems)} violations, first: " + "; ".join(problems[:3])
                       if problems else "holds")


def quadrature_failures() -> list[str]:
    rule = gauss18()
    problems = []
    if abs(rule.weights.sum() - 1.0) > QUAD_REL_TOL:
        problems.append(f"weights sum to {rule.weights.sum()!r}")
    for a in range(5):
        for b in range(5 - a):
            for c in range(6):
                exact = float(monomial_integral(a, b, c))
                got = rule.integrate(lambda x, y, z: x**a * y**b * z**c)
                # odd zeta powers integrate to zero; compare absolutely there
                err = abs(got - exact) / abs(exact) if exact else abs(got)
                if err > QUAD_REL_TOL:
                    problems.append(f"xi^{a} eta^{b} zeta^{c}: error {err:.3g}")
    return problems


def check_quadrature() -> CheckResult:
    problems = quadrature_failures()
    return CheckResult(9, "gauss18 exact for a+b<=4, c<=5; weights sum to 1", not problems,
                       "; ".join(problems[:4]) or "holds")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_coeff_anchors,
    check_scheme_consistency,
    check_interpolants,
    check_exact_oracle,
    check_metric_spots,
    check_exactness_hierarchy,
    check_ordering,
    check_superiority,
    check_quadrature,
)


def run_all(echo: Callable[[str], None] | None = print) -> list[CheckResult]:
    sweeps = default_sweeps()
    results = []
    for check in CHECKS:
        if check in (check_ordering, check_superiority):
            res = check(sweeps)
        else:
            res = check()
        results.append(res)
        if echo:
            echo(res.line())
    return results
