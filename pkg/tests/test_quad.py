import numpy as np
import pytest

from wedgemass.quad import apply_mass_rule, gauss18
from wedgemass.ratpoly import monomial_integral
from wedgemass.schemes import generate_coeff_matrices
from wedgemass.wedge15 import PARENT_NODES, NonPhysicalElementError, in_reference_domain, jacobian


@pytest.fixture(scope="module")
def rule():
    return gauss18()


def integrate_monomial(rule, a, b, c):
    return rule.integrate(lambda x, y, z: x**a * y**b * z**c)


def test_eighteen_points(rule):
    assert rule.n_points == 18
    assert rule.points.shape == (18, 3)


def test_weights(rule):
    assert rule.weights.sum() == pytest.approx(1.0, abs=1e-15)
    assert np.all(rule.weights > 0)


def test_points_inside(rule):
    assert all(in_reference_domain(p) for p in rule.points)


@pytest.mark.parametrize("a", range(5))
@pytest.mark.parametrize("c", range(6))
def test_exactness(rule, a, c):
    for b in range(5 - a):
        exact = float(monomial_integral(a, b, c))
        got = integrate_monomial(rule, a, b, c)
        if exact:
            assert abs(got - exact) <= 1e-15 * abs(exact)
        else:
            assert abs(got) <= 1e-15


def test_degree_four_example(rule):
    assert integrate_monomial(rule, 2, 2, 0) == pytest.approx(float(monomial_integral(2, 2, 0)), abs=1e-15)


@pytest.mark.parametrize("exps", [(0, 0, 6), (5, 0, 0), (3, 2, 0)])
def test_beyond_exactness(rule, exps):
    assert abs(integrate_monomial(rule, *exps) - float(monomial_integral(*exps))) > 1e-6


def test_parent_mass_matches_cm_matrix(rule):
    M = apply_mass_rule(rule, PARENT_NODES)
    cm = np.array(generate_coeff_matrices("cm").matrices[0], dtype=float)
    np.testing.assert_allclose(M, cm, atol=1e-14)
    assert M[0, 14] == pytest.approx(-30 / 1080, abs=1e-15)


def test_density_linear(rule):
    nodes = [(x * 1.1, y, z + 0.05 * x) for x, y, z in PARENT_NODES]
    np.testing.assert_allclose(apply_mass_rule(rule, nodes, 2.0), 2 * apply_mass_rule(rule, nodes, 1.0),
                               rtol=1e-15)


def test_total_mass(rule):
    nodes = [(x, y + 0.1 * x * y, z) for x, y, z in PARENT_NODES]
    dets = [np.linalg.det(jacobian(nodes, p)) for p in rule.points]
    rule_volume = float(np.dot(rule.weights, dets))
    assert apply_mass_rule(rule, nodes, 3.0).sum() == pytest.approx(3.0 * rule_volume, rel=1e-14)


def test_symmetric(rule):
    rng = np.random.default_rng(3)
    nodes = [tuple(np.array(p, float) + rng.uniform(-0.05, 0.05, 3)) for p in PARENT_NODES]
    M = apply_mass_rule(rule, nodes)
    assert np.array_equal(M, M.T)


def test_rejects_inverted(rule):
    with pytest.raises(NonPhysicalElementError):
        apply_mass_rule(rule, [(x, y, -z) for x, y, z in PARENT_NODES])


def test_rejects_bad_density(rule):
    with pytest.raises(ValueError):
        apply_mass_rule(rule, PARENT_NODES, 0.0)
