"""Fifteen-node serendipity wedge: shape functions, geometry map and metric.

Node ordering (natural coordinates, zeta across the thickness)::

     1:(0,0,-1)    2:(1,0,-1)    3:(0,1,-1)      bottom corners
     4:(0,0, 1)    5:(1,0, 1)    6:(0,1, 1)      top corners
     7:(1/2,0,-1)  8:(1/2,1/2,-1)  9:(0,1/2,-1)  bottom mid-edges
    10:(1/2,0, 1) 11:(1/2,1/2, 1) 12:(0,1/2, 1)  top mid-edges
    13:(0,0,0)    14:(1,0,0)    15:(0,1,0)       vertical mid-edges

Indices in code are zero-based.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .ratpoly import ETA, ONE, XI, ZETA, Poly3, wedge_integral

N_NODES = 15

_h = Fraction(1, 2)
NODE_NATURAL: tuple[tuple[Fraction, Fraction, Fraction], ...] = tuple(
    tuple(Fraction(v) for v in p)
    for p in [
        (0, 0, -1), (1, 0, -1), (0, 1, -1),
        (0, 0, 1), (1, 0, 1), (0, 1, 1),
        (_h, 0, -1), (_h, _h, -1), (0, _h, -1),
        (_h, 0, 1), (_h, _h, 1), (0, _h, 1),
        (0, 0, 0), (1, 0, 0), (0, 1, 0),
    ]
)

# The parent element sits at its own natural coordinates: identity map, J == 1.
PARENT_NODES: tuple[tuple[Fraction, Fraction, Fraction], ...] = NODE_NATURAL

# The 57 monomials a wedge15 metric can contain, grouped by total degree.
METRIC_MONOMIALS: frozenset[tuple[int, int, int]] = frozenset(
    [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    + [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]
    + [(3, 0, 0), (2, 1, 0), (1, 2, 0), (0, 3, 0), (2, 0, 1), (1, 1, 1),
       (0, 2, 1), (1, 0, 2), (0, 1, 2), (0, 0, 3)]
    + [(4, 0, 0), (3, 1, 0), (2, 2, 0), (1, 3, 0), (0, 4, 0), (3, 0, 1),
       (2, 1, 1), (1, 2, 1), (0, 3, 1), (2, 0, 2), (1, 1, 2), (0, 2, 2),
       (1, 0, 3), (0, 1, 3), (0, 0, 4)]
    + [(4, 0, 1), (3, 1, 1), (2, 2, 1), (1, 3, 1), (0, 4, 1), (3, 0, 2),
       (2, 1, 2), (1, 2, 2), (0, 3, 2), (2, 0, 3), (1, 1, 3), (0, 2, 3),
       (1, 0, 4), (0, 1, 4), (0, 0, 5)]
    + [(3, 0, 3), (2, 1, 3), (1, 2, 3), (0, 3, 3), (2, 0, 4), (1, 1, 4),
       (0, 2, 4)]
)


class NonPhysicalElementError(ValueError):
    """Raised when an element has non-positive volume or metric."""


@lru_cache(maxsize=None)
def shape_polynomials() -> tuple[Poly3, ...]:
    """The 15 shape functions as exact, expanded polynomials."""
    L = ONE - XI - ETA
    lo, hi = ONE - ZETA, ONE + ZETA
    half = Fraction(1, 2)
    return (
        -L * lo * (2 * XI + 2 * ETA + ZETA) * half,
        XI * lo * (2 * XI - ZETA - 2) * half,
        ETA * lo * (2 * ETA - ZETA - 2) * half,
        -L * hi * (2 * XI + 2 * ETA - ZETA) * half,
        XI * hi * (2 * XI + ZETA - 2) * half,
        ETA * hi * (2 * ETA + ZETA - 2) * half,
        2 * XI * L * lo,
        2 * XI * ETA * lo,
        2 * ETA * L * lo,
        2 * XI * L * hi,
        2 * XI * ETA * hi,
        2 * ETA * L * hi,
        L * (ONE - ZETA * ZETA),
        XI * (ONE - ZETA * ZETA),
        ETA * (ONE - ZETA * ZETA),
    )


@lru_cache(maxsize=None)
def shape_products() -> dict[tuple[int, int], Poly3]:
    """``phi_i * phi_j`` for ``i <= j``."""
    phi = shape_polynomials()
    return {(i, j): phi[i] * phi[j] for i in range(N_NODES) for j in range(i, N_NODES)}


@lru_cache(maxsize=None)
def shape_gradient_polynomials() -> tuple[tuple[Poly3, Poly3, Poly3], ...]:
    return tuple(tuple(p.diff(v) for v in ("xi", "eta", "zeta")) for p in shape_polynomials())


def shape_values(point) -> np.ndarray:
    """Shape function values at a natural point, shape ``(15,)`` (float)."""
    x, y, z = (float(v) for v in point)
    L = 1.0 - x - y
    lo, hi, bub = 1.0 - z, 1.0 + z, 1.0 - z * z
    return np.array([
        -L * lo * (2 * x + 2 * y + z) / 2,
        x * lo * (2 * x - z - 2) / 2,
        y * lo * (2 * y - z - 2) / 2,
        -L * hi * (2 * x + 2 * y - z) / 2,
        x * hi * (2 * x + z - 2) / 2,
        y * hi * (2 * y + z - 2) / 2,
        2 * x * L * lo,
        2 * x * y * lo,
        2 * y * L * lo,
        2 * x * L * hi,
        2 * x * y * hi,
        2 * y * L * hi,
        L * bub,
        x * bub,
        y * bub,
    ])


def shape_gradients(point) -> np.ndarray:
    """Natural-coordinate gradients, shape ``(15, 3)``; columns d/dxi, d/deta, d/dzeta."""
    x, y, z = (float(v) for v in point)
    L = 1.0 - x - y
    lo, hi, bub = 1.0 - z, 1.0 + z, 1.0 - z * z
    s = 2 * x + 2 * y
    g = np.empty((15, 3))
    # corners, bottom then top
    g[0] = [lo * (2 * s + z - 2) / 2, lo * (2 * s + z - 2) / 2,
            L * (2 * z + s - 1) / 2]
    g[1] = [lo * (4 * x - z - 2) / 2, 0.0, x * (2 * z - 2 * x + 1) / 2]
    g[2] = [0.0, lo * (4 * y - z - 2) / 2, y * (2 * z - 2 * y + 1) / 2]
    g[3] = [hi * (2 * s - z - 2) / 2, hi * (2 * s - z - 2) / 2,
            L * (2 * z - s + 1) / 2]
    g[4] = [hi * (4 * x + z - 2) / 2, 0.0, x * (2 * z + 2 * x - 1) / 2]
    g[5] = [0.0, hi * (4 * y + z - 2) / 2, y * (2 * z + 2 * y - 1) / 2]
    # triangle-face mid-edges
    for k, t, sign in ((6, lo, -1.0), (9, hi, 1.0)):
        g[k] = [2 * (L - x) * t, -2 * x * t, sign * 2 * x * L]
        g[k + 1] = [2 * y * t, 2 * x * t, sign * 2 * x * y]
        g[k + 2] = [-2 * y * t, 2 * (L - y) * t, sign * 2 * y * L]
    # vertical mid-edges
    g[12] = [-bub, -bub, -2 * z * L]
    g[13] = [bub, 0.0, -2 * z * x]
    g[14] = [0.0, bub, -2 * z * y]
    return g


def as_node_array(nodes) -> np.ndarray:
    """Float ``(15, 3)`` view of a node set; validates shape and finiteness."""
    arr = np.array([[float(v) for v in row] for row in nodes], dtype=float)
    if arr.shape != (N_NODES, 3):
        raise ValueError(f"expected 15 nodes with 3 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("nodal coordinates must be finite")
    return arr


def as_exact_nodes(nodes) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
    """Promote nodal coordinates to Fractions (floats by their exact binary value)."""
    rows = [tuple(Fraction(v) for v in row) for row in nodes]
    if len(rows) != N_NODES or any(len(r) != 3 for r in rows):
        raise ValueError("expected 15 nodes with 3 coordinates each")
    return tuple(rows)


def isoparametric_map(nodes, point) -> np.ndarray:
    return shape_values(point) @ as_node_array(nodes)


def jacobian(nodes, point) -> np.ndarray:
    """Jacobian ``J[m, n] = d X_m / d(natural n)`` at ``point``."""
    return as_node_array(nodes).T @ shape_gradients(point)


def metric(nodes, point) -> float:
    return float(np.linalg.det(jacobian(nodes, point)))


def jacobian_polynomials(nodes) -> list[list[Poly3]]:
    X = as_exact_nodes(nodes)
    grads = shape_gradient_polynomials()
    J = [[Poly3() for _ in range(3)] for _ in range(3)]
    for i in range(N_NODES):
        for m in range(3):
            if X[i][m]:
                for n in range(3):
                    J[m][n] = J[m][n] + grads[i][n] * X[i][m]
    return J


def metric_polynomial(nodes) -> Poly3:
    """Exact metric (Jacobian determinant) as an expanded polynomial."""
    J = jacobian_polynomials(nodes)
    return (
        J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1])
        - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0])
        + J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0])
    )


def exact_volume(nodes) -> Fraction:
    vol = wedge_integral(metric_polynomial(nodes))
    if vol <= 0:
        raise NonPhysicalElementError(f"element volume is non-positive ({float(vol):.6g})")
    return vol


def reference_lattice(n: int = 20) -> np.ndarray:
    """Points i/n, j/n, 2k/n - 1 of the reference wedge, boundaries included."""
    g = np.arange(n + 1) / n
    return np.array([(x, y, 2 * z - 1) for i, x in enumerate(g) for y in g[: n + 1 - i] for z in g])


def min_metric(nodes, n: int = 20) -> float:
    """Smallest metric value over a uniform lattice of the reference wedge."""
    pts = reference_lattice(n)
    return float(np.min(metric_polynomial(nodes).eval((pts[:, 0], pts[:, 1], pts[:, 2]))))


def check_physical(nodes, n: int = 20) -> Fraction:
    """Exact volume, after rejecting elements whose metric is non-positive on the lattice."""
    vol = exact_volume(nodes)
    jmin = min_metric(nodes, n)
    if jmin <= 0:
        raise NonPhysicalElementError(f"metric reaches {jmin:.6g} inside the element")
    return vol


def volume(nodes) -> float:
    return float(exact_volume(nodes))


def in_reference_domain(point) -> bool:
    x, y, z = point
    return x >= 0 and y >= 0 and x + y <= 1 and -1 <= z <= 1


# -- node files --------------------------------------------------------------

def _parse_number(token) -> Fraction | float:
    if isinstance(token, str) and "/" in token:
        return Fraction(token)
    return float(token)


def read_nodes(path) -> list[tuple]:
    """Read 15 nodes from a whitespace text file or a JSON array of triples.

    Text rows may use rationals such as ``1/2``; blank lines and ``#`` comments
    are skipped.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith(("[", "{")):
        doc = json.loads(text)
        if isinstance(doc, dict):
            doc = doc["nodes"]
        rows = [tuple(_parse_number(v) for v in row) for row in doc]
    else:
        rows = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append(tuple(_parse_number(v) for v in line.split()))
    if len(rows) != N_NODES or any(len(r) != 3 for r in rows):
        raise ValueError(f"{path}: expected 15 rows of 3 coordinates, got {len(rows)} rows")
    as_node_array(rows)
    return rows


def write_nodes(nodes, path, fmt: str = "txt") -> None:
    rows = [[str(v) for v in row] for row in nodes]
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps({"nodes": rows}, indent=1), encoding="utf-8")
    else:
        path.write_text("\n".join(" ".join(r) for r in rows) + "\n", encoding="utf-8")
