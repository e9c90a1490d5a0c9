"""Consistent mass matrices: exact reference, metric-interpolation schemes, error stats."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .quad import apply_mass_rule, gauss18
from .ratpoly import Poly3, integrate_product
from .schemes import SchemeKind, embedded_coeff_array, metric_samples
from .wedge15 import N_NODES, NonPhysicalElementError, metric_polynomial, shape_products

ExactMatrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class ErrorStats:
    avg_abs: float
    max_abs: float


@lru_cache(maxsize=None)
def _moment_matrix(a: int, b: int, c: int) -> ExactMatrix:
    """Exact ``integral(phi_i * phi_j * xi^a eta^b zeta^c)`` over the reference wedge."""
    mono = Poly3.monomial(a, b, c)
    full = [[Fraction(0)] * N_NODES for _ in range(N_NODES)]
    for (i, j), pp in shape_products().items():
        full[i][j] = full[j][i] = integrate_product(pp, mono)
    return tuple(tuple(row) for row in full)


def mass_exact_rational(nodes, density=1) -> ExactMatrix:
    """Exact mass matrix with Fraction entries.

    The metric of a wedge15 element is a polynomial, so the integrand is too;
    the integral is assembled monomial by monomial of the metric.
    """
    rho = Fraction(density)
    if rho <= 0:
        raise ValueError("density must be positive")
    J = metric_polynomial(nodes)
    acc = [[Fraction(0)] * N_NODES for _ in range(N_NODES)]
    for mono, coeff in J:
        K = _moment_matrix(*mono)
        for i in range(N_NODES):
            row, Ki = acc[i], K[i]
            for j in range(i, N_NODES):
                row[j] += coeff * Ki[j]
    total = sum((acc[i][j] * (1 if i == j else 2) for i in range(N_NODES)
                 for j in range(i, N_NODES)), Fraction(0))
    if total <= 0:
        raise NonPhysicalElementError(f"element volume is non-positive ({float(total):.6g})")
    out = [[Fraction(0)] * N_NODES for _ in range(N_NODES)]
    for i in range(N_NODES):
        for j in range(i, N_NODES):
            out[i][j] = out[j][i] = rho * acc[i][j]
    return tuple(tuple(row) for row in out)


def to_float(M: ExactMatrix) -> np.ndarray:
    return np.array([[float(v) for v in row] for row in M])


def mass_exact(nodes, density: float = 1.0) -> np.ndarray:
    return to_float(mass_exact_rational(nodes, density))


def mass_scheme(nodes, kind, density: float = 1.0) -> np.ndarray:
    """``density * sum_k J(p_k) C_k`` with the embedded coefficient matrices."""
    if density <= 0:
        raise ValueError("density must be positive")
    kind = SchemeKind.parse(kind)
    samples = metric_samples(kind, nodes)
    C = embedded_coeff_array(kind)
    return density * np.einsum("k,kij->ij", samples, C)


def mass_matrix(nodes, method: str, density: float = 1.0) -> np.ndarray:
    """Dispatch on ``exact``, ``gauss18``, ``cm``, ``lm`` or ``qm``."""
    method = method.lower()
    if method == "exact":
        return mass_exact(nodes, density)
    if method == "gauss18":
        return apply_mass_rule(gauss18(), nodes, density)
    return mass_scheme(nodes, method, density)


def error_stats(approx, reference) -> ErrorStats:
    diff = np.abs(np.asarray(approx, dtype=float) - np.asarray(reference, dtype=float))
    if diff.shape != (N_NODES, N_NODES):
        raise ValueError(f"expected 15x15 matrices, got {diff.shape}")
    return ErrorStats(float(diff.mean()), float(diff.max()))


def is_positive_definite(M) -> bool:
    try:
        np.linalg.cholesky(np.asarray(M, dtype=float))
    except np.linalg.LinAlgError:
        return False
    return True


def write_matrix(M, path, exact: bool = False) -> None:
    """15 comma-separated rows; floats at full precision or ``n/d`` strings."""
    fmt = str if exact else repr
    lines = [",".join(fmt(v if exact else float(v)) for v in row) for row in M]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix(path) -> np.ndarray:
    rows = Path(path).read_text(encoding="utf-8").split()
    return np.array([[float(Fraction(v)) for v in r.split(",")] for r in rows])
