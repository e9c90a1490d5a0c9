"""Metric-interpolation schemes CM (1 point), LM (4 points) and QM (10 points).

Each scheme samples the metric at a few natural points and replaces it with
an interpolant ``sum_k J(p_k) * psi_k``.  Because the interpolants are
polynomials, the mass integrand ``phi_i * phi_j * psi_k`` can be integrated
exactly once and for all, giving coefficient matrices ``C_k`` such that

    M = rho * sum_k J(p_k) * C_k.

The coefficient matrices are generated in exact arithmetic and shipped as
rational constants in ``data/coeffs_<kind>.json``.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .ratpoly import ETA, ONE, XI, ZETA, Poly3, integrate_product
from .wedge15 import N_NODES, NonPhysicalElementError, jacobian, metric_polynomial, shape_products


class SchemeKind(enum.Enum):
    CM = "CM"
    LM = "LM"
    QM = "QM"

    @classmethod
    def parse(cls, name: "str | SchemeKind") -> "SchemeKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).upper())
        except ValueError:
            raise ValueError(f"unknown scheme {name!r}; expected one of cm, lm, qm") from None

    @property
    def n_points(self) -> int:
        return {"CM": 1, "LM": 4, "QM": 10}[self.value]


@dataclass(frozen=True)
class SchemeSpec:
    kind: SchemeKind
    points: tuple[tuple[Fraction, Fraction, Fraction], ...]
    interpolants: tuple[Poly3, ...]


def _pt(x, y, z) -> tuple[Fraction, Fraction, Fraction]:
    return (Fraction(x), Fraction(y), Fraction(z))


# Tetrahedral cage of edge 1/10 centred on the wedge centroid (1/3, 1/3, 0):
# four corners followed by the six edge midpoints.
_CAGE = (
    _pt("37/120", "37/120", "-1/40"),
    _pt("49/120", "37/120", "-1/40"),
    _pt("37/120", "49/120", "-1/40"),
    _pt("37/120", "37/120", "3/40"),
    _pt("43/120", "37/120", "-1/40"),
    _pt("43/120", "43/120", "-1/40"),
    _pt("37/120", "43/120", "-1/40"),
    _pt("37/120", "37/120", "1/40"),
    _pt("43/120", "37/120", "1/40"),
    _pt("37/120", "43/120", "1/40"),
)


def _q(s: str) -> Fraction:
    return Fraction(s)


def _lm_interpolants() -> tuple[Poly3, ...]:
    return (
        _q("83/12") - 10 * XI - 10 * ETA - 10 * ZETA,
        _q("-37/12") + 10 * XI,
        _q("-37/12") + 10 * ETA,
        _q("1/4") + 10 * ZETA,
    )


def _qm_interpolants() -> tuple[Poly3, ...]:
    x, y, z = XI, ETA, ZETA
    c = _q
    return (
        c("6391/72") - c("800/3") * (x + y + z) + 400 * (x * y + x * z + y * z)
        + 200 * (x * x + y * y + z * z),
        c("1591/72") - c("400/3") * x + 200 * x * x,
        c("1591/72") - c("400/3") * y + 200 * y * y,
        c("-1/8") + 200 * z * z,
        c("-3071/36") + 400 * x + c("370/3") * y + c("370/3") * z
        - 400 * x * y - 400 * x * z - 400 * x * x,
        c("1369/36") - c("370/3") * x - c("370/3") * y + 400 * x * y,
        c("-3071/36") + c("370/3") * x + 400 * y + c("370/3") * z
        - 400 * x * y - 400 * y * z - 400 * y * y,
        c("83/12") - 10 * x - 10 * y + c("800/3") * z - 400 * x * z - 400 * y * z - 400 * z * z,
        c("-37/12") + 10 * x - c("370/3") * z + 400 * x * z,
        c("-37/12") + 10 * y - c("370/3") * z + 400 * y * z,
    )


@lru_cache(maxsize=None)
def scheme_spec(kind) -> SchemeSpec:
    kind = SchemeKind.parse(kind)
    if kind is SchemeKind.CM:
        return SchemeSpec(kind, (_pt("1/3", "1/3", 0),), (ONE,))
    if kind is SchemeKind.LM:
        return SchemeSpec(kind, _CAGE[:4], _lm_interpolants())
    return SchemeSpec(kind, _CAGE, _qm_interpolants())


def metric_samples(kind, nodes, check: bool = True) -> np.ndarray:
    """Metric values ``det J(p_k)`` at the scheme's evaluation points."""
    spec = scheme_spec(kind)
    samples = np.array([np.linalg.det(jacobian(nodes, p)) for p in spec.points])
    if check and np.any(samples <= 0):
        k = int(np.argmax(samples <= 0))
        raise NonPhysicalElementError(
            f"non-positive metric {samples[k]:.6g} at {spec.kind.value} point {k + 1}"
        )
    return samples


def interpolated_metric(kind, nodes) -> Poly3:
    """The scheme's polynomial surrogate ``sum_k J(p_k) psi_k`` for the metric.

    Samples are taken exactly from the metric polynomial (float nodes are
    promoted by their binary value), so reproduction results are identities.
    """
    spec = scheme_spec(kind)
    J = metric_polynomial(nodes)
    out = Poly3()
    for p, psi in zip(spec.points, spec.interpolants):
        out = out + psi * J.eval(p)
    return out


@dataclass(frozen=True)
class CoeffMatrices:
    """Exact symmetric 15x15 coefficient matrices, one per evaluation point."""

    kind: SchemeKind
    points: tuple[tuple[Fraction, Fraction, Fraction], ...]
    matrices: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __len__(self) -> int:
        return len(self.matrices)

    def as_float(self) -> np.ndarray:
        """Float copy, shape ``(n_points, 15, 15)``."""
        return np.array([[[float(v) for v in row] for row in m] for m in self.matrices])

    def total(self) -> tuple[tuple[Fraction, ...], ...]:
        """Entrywise sum over the evaluation points."""
        return tuple(
            tuple(sum((m[i][j] for m in self.matrices), Fraction(0)) for j in range(N_NODES))
            for i in range(N_NODES)
        )

    def to_document(self) -> dict:
        """JSON-ready form; each matrix packed row-major over ``i <= j``."""
        return {
            "kind": self.kind.value,
            "points": [[str(c) for c in p] for p in self.points],
            "matrices": [
                [str(m[i][j]) for i in range(N_NODES) for j in range(i, N_NODES)]
                for m in self.matrices
            ],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "CoeffMatrices":
        kind = SchemeKind.parse(doc["kind"])
        points = tuple(tuple(Fraction(c) for c in p) for p in doc["points"])
        mats = []
        for packed in doc["matrices"]:
            if len(packed) != N_NODES * (N_NODES + 1) // 2:
                raise ValueError(f"packed matrix has {len(packed)} entries, expected 120")
            it = iter(Fraction(v) for v in packed)
            full = [[Fraction(0)] * N_NODES for _ in range(N_NODES)]
            for i in range(N_NODES):
                for j in range(i, N_NODES):
                    full[i][j] = full[j][i] = next(it)
            mats.append(tuple(tuple(row) for row in full))
        if len(mats) != kind.n_points or len(points) != kind.n_points:
            raise ValueError(f"{kind.value} needs {kind.n_points} matrices and points")
        return cls(kind, points, tuple(mats))

    def dumps(self) -> str:
        return json.dumps(self.to_document(), indent=1)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "CoeffMatrices":
        return cls.from_document(json.loads(Path(path).read_text(encoding="utf-8")))


def generate_coeff_matrices(kind) -> CoeffMatrices:
    """Integrate ``phi_i phi_j psi_k`` exactly over the reference wedge."""
    spec = scheme_spec(kind)
    products = shape_products()
    mats = []
    for psi in spec.interpolants:
        full = [[Fraction(0)] * N_NODES for _ in range(N_NODES)]
        for (i, j), pp in products.items():
            full[i][j] = full[j][i] = integrate_product(pp, psi)
        mats.append(tuple(tuple(row) for row in full))
    return CoeffMatrices(spec.kind, spec.points, tuple(mats))


def coeff_data_path(kind) -> Path:
    kind = SchemeKind.parse(kind)
    return Path(str(resources.files("wedgemass") / "data" / f"coeffs_{kind.value.lower()}.json"))


@lru_cache(maxsize=None)
def embedded_coeff_matrices(kind) -> CoeffMatrices:
    kind = SchemeKind.parse(kind)
    text = (resources.files("wedgemass") / "data" / f"coeffs_{kind.value.lower()}.json").read_text(
        encoding="utf-8"
    )
    return CoeffMatrices.from_document(json.loads(text))


@lru_cache(maxsize=None)
def embedded_coeff_array(kind) -> np.ndarray:
    """Float coefficient matrices consumed by runtime mass assembly."""
    arr = embedded_coeff_matrices(kind).as_float()
    arr.setflags(write=False)
    return arr
