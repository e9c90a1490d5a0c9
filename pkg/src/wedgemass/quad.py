"""Numerical quadrature on the reference wedge and its use for mass matrices."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import sqrt

import numpy as np

from .wedge15 import NonPhysicalElementError, as_node_array, shape_gradients, shape_values


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray  # (n_p, 3) natural coordinates
    weights: np.ndarray  # (n_p,)
    name: str = ""

    @property
    def n_points(self) -> int:
        return len(self.weights)

    def integrate(self, f) -> float:
        """Apply the rule to ``f(xi, eta, zeta)`` (vectorised over points)."""
        x, y, z = self.points.T
        return float(np.sum(self.weights * f(x, y, z)))


def triangle_6pt() -> tuple[np.ndarray, np.ndarray]:
    """Symmetric six-point, degree-4 rule on the unit triangle (area 1/2).

    Two three-point orbits (a, a, 1-2a); abscissae and weights in closed form.
    """
    r = sqrt(38.0 - 44.0 * sqrt(0.4))
    a1 = (8.0 - sqrt(10.0) + r) / 18.0
    a2 = (8.0 - sqrt(10.0) - r) / 18.0
    s = sqrt(213125.0 - 53320.0 * sqrt(10.0))
    w1 = (620.0 + s) / 3720.0
    w2 = (620.0 - s) / 3720.0
    pts, wts = [], []
    for a, w in ((a1, w1), (a2, w2)):
        b = 1.0 - 2.0 * a
        pts += [(a, a), (b, a), (a, b)]
        wts += [w / 2] * 3
    return np.array(pts), np.array(wts)


def gauss_line_3pt() -> tuple[np.ndarray, np.ndarray]:
    r = sqrt(0.6)
    return np.array([-r, 0.0, r]), np.array([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0])


def product_rule(tri_pts, tri_wts, line_pts, line_wts, name="") -> QuadratureRule:
    pts = [(t[0], t[1], z) for t in tri_pts for z in line_pts]
    wts = [wt * wz for wt in tri_wts for wz in line_wts]
    return QuadratureRule(np.array(pts), np.array(wts), name)


@lru_cache(maxsize=None)
def gauss18() -> QuadratureRule:
    """Six-point triangle rule times three-point Gauss in zeta."""
    rule = product_rule(*triangle_6pt(), *gauss_line_3pt(), name="gauss18")
    rule.points.setflags(write=False)
    rule.weights.setflags(write=False)
    return rule


def apply_mass_rule(rule: QuadratureRule, nodes, density: float = 1.0) -> np.ndarray:
    """Consistent mass matrix by numerical quadrature.

    Raises NonPhysicalElementError if the metric is non-positive at any rule point.
    """
    if density <= 0:
        raise ValueError("density must be positive")
    X = as_node_array(nodes)
    phi = np.array([shape_values(p) for p in rule.points])  # (n_p, 15)
    dets = np.array([np.linalg.det(X.T @ shape_gradients(p)) for p in rule.points])
    if np.any(dets <= 0):
        k = int(np.argmax(dets <= 0))
        raise NonPhysicalElementError(f"non-positive metric {dets[k]:.6g} at rule point {k + 1}")
    scaled = density * rule.weights * dets
    # per-entry sum over points, upper triangle only, then mirrored
    terms = scaled[:, None, None] * phi[:, :, None] * phi[:, None, :]
    M = np.sum(terms, axis=0)
    iu = np.triu_indices(15, 1)
    M[(iu[1], iu[0])] = M[iu]
    return M
