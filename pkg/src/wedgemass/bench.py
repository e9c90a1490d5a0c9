"""Accuracy sweep over progressively distorted wedge elements.

Three one-parameter families start from the parent element (nodes at their
natural coordinates) and move three nodal components by the coarseness
``delta``.  For every grid value the exact mass matrix is the reference and
each method's average and maximum absolute componentwise error is recorded.
"""
from __future__ import annotations

import csv
import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .massmat import error_stats, mass_exact_rational, mass_matrix, to_float
from .wedge15 import NonPhysicalElementError, PARENT_NODES, check_physical

log = logging.getLogger(__name__)

METHODS = ("CM", "LM", "QM", "GAUSS18")
DEFAULT_DELTA_MAX = Fraction(1, 5)
DEFAULT_STEPS = 26
CSV_HEADER = ("family", "delta", "scheme", "avg_abs_err", "max_abs_err")


class FamilyId(enum.IntEnum):
    F1 = 1
    F2 = 2
    F3 = 3


# (node, component, sign): node/component one-based as in X_{component,node}
_PERTURBATIONS = {
    FamilyId.F1: ((4, 3, +1), (5, 1, +1), (6, 2, +1)),
    FamilyId.F2: ((1, 1, +1), (2, 2, +1), (2, 3, +1)),
    FamilyId.F3: ((4, 3, -1), (5, 3, -1), (10, 3, -1)),
}


def family_nodes(family, delta, check: bool = True):
    """Parent element with the family's three nodal components shifted by delta.

    ``delta`` is kept exact (Fraction) unless a float is passed.
    """
    family = FamilyId(int(family))
    if delta < 0:
        raise ValueError("coarseness must be non-negative")
    d = delta if isinstance(delta, float) else Fraction(delta)
    nodes = [list(p) for p in PARENT_NODES]
    for node, comp, sign in _PERTURBATIONS[family]:
        nodes[node - 1][comp - 1] += sign * d
    nodes = [tuple(p) for p in nodes]
    if check:
        check_physical(nodes)
    return nodes


@dataclass(frozen=True)
class SweepConfig:
    family: FamilyId
    delta_max: Fraction = DEFAULT_DELTA_MAX
    steps: int = DEFAULT_STEPS
    schemes: tuple[str, ...] = METHODS
    density: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "family", FamilyId(int(self.family)))
        object.__setattr__(self, "delta_max", Fraction(self.delta_max))
        object.__setattr__(self, "schemes", tuple(s.upper() for s in self.schemes))
        if self.delta_max <= 0:
            raise ValueError("delta_max must be positive")
        if self.steps < 2:
            raise ValueError("steps must be at least 2")
        unknown = set(self.schemes) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown schemes {sorted(unknown)}; choose from {METHODS}")
        if self.density <= 0:
            raise ValueError("density must be positive")

    def deltas(self) -> list[Fraction]:
        return [self.delta_max * i / (self.steps - 1) for i in range(self.steps)]


@dataclass(frozen=True)
class SweepRecord:
    family: int
    delta: float
    scheme: str
    avg_abs_err: float
    max_abs_err: float
    error: str | None = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.error is None


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    """Records in delta-major, scheme-minor order; failures are kept as NaN rows."""
    records = []
    nan = float("nan")
    for d in config.deltas():
        try:
            nodes = family_nodes(config.family, d)
            ref = to_float(mass_exact_rational(nodes, Fraction(config.density)))
        except NonPhysicalElementError as exc:
            log.warning("family %d, delta %s: %s", config.family, d, exc)
            records += [SweepRecord(int(config.family), float(d), s, nan, nan, str(exc))
                        for s in config.schemes]
            continue
        for scheme in config.schemes:
            try:
                approx = mass_matrix(nodes, scheme, config.density)
            except NonPhysicalElementError as exc:
                log.warning("family %d, delta %s, %s: %s", config.family, d, scheme, exc)
                records.append(SweepRecord(int(config.family), float(d), scheme, nan, nan, str(exc)))
                continue
            st = error_stats(approx, ref)
            records.append(SweepRecord(int(config.family), float(d), scheme, st.avg_abs, st.max_abs))
    return records


def _write_rows(records, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([r.family, repr(r.delta), r.scheme, repr(r.avg_abs_err), repr(r.max_abs_err)])


def write_csv(records, destination) -> None:
    """Write records to a path or an open text stream."""
    if hasattr(destination, "write"):
        _write_rows(records, destination)
        return
    path = Path(destination)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            _write_rows(records, fh)
    except OSError as exc:
        raise OSError(f"cannot write sweep CSV to {path}: {exc.strerror or exc}") from exc


def read_csv(source) -> list[SweepRecord]:
    with Path(source).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [
        SweepRecord(int(r["family"]), float(r["delta"]), r["scheme"],
                    float(r["avg_abs_err"]), float(r["max_abs_err"]))
        for r in rows
    ]
