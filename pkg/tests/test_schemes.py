import json
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from wedgemass.bench import family_nodes
from wedgemass.ratpoly import ONE, Poly3, XI, ZETA, integrate_product
from wedgemass.schemes import (
    CoeffMatrices,
    SchemeKind,
    embedded_coeff_array,
    embedded_coeff_matrices,
    generate_coeff_matrices,
    interpolated_metric,
    metric_samples,
    scheme_spec,
)
from wedgemass.wedge15 import PARENT_NODES, NonPhysicalElementError, metric_polynomial, shape_polynomials

F = Fraction
ALL = list(SchemeKind)


@pytest.fixture(scope="module")
def generated():
    return {k: generate_coeff_matrices(k) for k in SchemeKind}


class TestSchemeSpec:
    def test_point_counts(self):
        assert [len(scheme_spec(k).points) for k in ALL] == [1, 4, 10]
        assert [k.n_points for k in ALL] == [1, 4, 10]

    def test_cm(self):
        spec = scheme_spec("cm")
        assert spec.points == ((F(1, 3), F(1, 3), F(0)),)
        assert spec.interpolants == (ONE,)

    def test_lm_fourth(self):
        spec = scheme_spec(SchemeKind.LM)
        assert spec.points[3] == (F(37, 120), F(37, 120), F(3, 40))
        assert spec.interpolants[3] == F(1, 4) + 10 * ZETA

    def test_qm_entries(self):
        spec = scheme_spec("QM")
        assert spec.points[9] == (F(37, 120), F(43, 120), F(1, 40))
        assert spec.interpolants[3] == F(-1, 8) + 200 * ZETA**2

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            scheme_spec("pm")

    @pytest.mark.parametrize("kind", ALL)
    def test_kronecker(self, kind):
        spec = scheme_spec(kind)
        table = [[psi.eval(p) for p in spec.points] for psi in spec.interpolants]
        assert table == np.eye(len(spec.points), dtype=int).tolist()

    @pytest.mark.parametrize("kind", ALL)
    def test_partition_of_unity(self, kind):
        assert sum(scheme_spec(kind).interpolants, Poly3()) == ONE

    def test_qm_constant_terms_sum(self):
        consts = [psi.coeff() for psi in scheme_spec("qm").interpolants]
        assert sum(consts) == 1
        assert sum(consts) * 72 == 72

    @pytest.mark.parametrize("kind, degree", [("lm", 1), ("qm", 2)])
    def test_reproduction(self, kind, degree):
        spec = scheme_spec(kind)
        for a in range(degree + 1):
            for b in range(degree + 1 - a):
                for c in range(degree + 1 - a - b):
                    q = Poly3.monomial(a, b, c)
                    rebuilt = sum((psi * q.eval(p) for psi, p in zip(spec.interpolants, spec.points)),
                                  Poly3())
                    assert rebuilt == q

    def test_lm_does_not_reproduce_quadratics(self):
        spec = scheme_spec("lm")
        q = XI * XI
        rebuilt = sum((psi * q.eval(p) for psi, p in zip(spec.interpolants, spec.points)), Poly3())
        assert rebuilt != q

    def test_cage_geometry(self):
        pts = [np.array(p, dtype=object) for p in scheme_spec("qm").points]
        corners = pts[:4]
        assert tuple(sum(corners) / 4) == (F(1, 3), F(1, 3), F(0))
        for u, v in combinations(corners, 2):
            assert max(abs(c) for c in u - v) == F(1, 10)
        mids = [(u + v) / 2 for u, v in combinations(corners, 2)]
        assert sorted(tuple(m) for m in mids) == sorted(tuple(p) for p in pts[4:])


class TestMetricSamples:
    @pytest.mark.parametrize("kind", ALL)
    def test_parent(self, kind):
        np.testing.assert_allclose(metric_samples(kind, PARENT_NODES), 1.0, atol=1e-15)

    def test_family_one_at_zero(self):
        np.testing.assert_allclose(metric_samples("qm", family_nodes(1, 0)), 1.0, atol=1e-15)

    def test_match_exact_metric(self):
        nodes = family_nodes(3, F(3, 10))
        J = metric_polynomial(nodes)
        expected = [float(J.eval(p)) for p in scheme_spec("qm").points]
        np.testing.assert_allclose(metric_samples("qm", nodes), expected, rtol=1e-14)

    def test_inverted_flagged(self):
        mirrored = [(x, y, -z) for x, y, z in PARENT_NODES]
        with pytest.raises(NonPhysicalElementError):
            metric_samples("lm", mirrored)


class TestInterpolatedMetric:
    @pytest.mark.parametrize("kind", ALL)
    def test_parent(self, kind):
        assert interpolated_metric(kind, PARENT_NODES) == ONE

    def test_linear_metric_reproduced(self):
        h = F(1, 10)
        nodes = [(x, y, z + h * z * z + h * x * z) for x, y, z in PARENT_NODES]
        exact = metric_polynomial(nodes)
        assert exact.degree == 1
        for kind in ("lm", "qm"):
            assert interpolated_metric(kind, nodes) == exact
        assert interpolated_metric("cm", nodes) != exact

    def test_quadratic_metric_reproduced(self):
        nodes = family_nodes(3, F(1, 4))
        exact = metric_polynomial(nodes)
        assert exact.degree == 2
        assert interpolated_metric("qm", nodes) == exact
        assert interpolated_metric("lm", nodes) != exact

    def test_cubic_metric_not_reproduced(self):
        nodes = family_nodes(2, F(1, 5))
        assert metric_polynomial(nodes).degree > 2
        assert interpolated_metric("qm", nodes) != metric_polynomial(nodes)


class TestCoeffMatrices:
    def test_cm_corner_values(self, generated):
        M = generated[SchemeKind.CM].matrices[0]
        assert M[0][0] == F(24, 1080)
        assert M[0][14] == M[14][0] == F(-30, 1080)
        assert M[14][14] == F(96, 1080)

    @pytest.mark.parametrize("kind", ALL)
    def test_symmetric(self, generated, kind):
        for M in generated[kind].matrices:
            assert all(M[i][j] == M[j][i] for i in range(15) for j in range(15))

    @pytest.mark.parametrize("kind", [SchemeKind.LM, SchemeKind.QM])
    def test_sum_equals_cm(self, generated, kind):
        assert generated[kind].total() == generated[SchemeKind.CM].matrices[0]

    @pytest.mark.parametrize("kind", ALL)
    def test_grand_total_is_volume(self, generated, kind):
        assert sum(sum(row) for row in generated[kind].total()) == 1

    @pytest.mark.parametrize("kind", ALL)
    def test_row_sums(self, generated, kind):
        phi = shape_polynomials()
        spec = scheme_spec(kind)
        for M, psi in zip(generated[kind].matrices, spec.interpolants):
            for i in range(15):
                assert sum(M[i]) == integrate_product(phi[i], psi)

    @pytest.mark.parametrize("kind", ALL)
    def test_embedded_equal_generated(self, generated, kind):
        assert embedded_coeff_matrices(kind) == generated[kind]

    def test_embedded_float_view(self, generated):
        arr = embedded_coeff_array("qm")
        assert arr.shape == (10, 15, 15)
        assert not arr.flags.writeable
        assert arr[0, 0, 0] == float(generated[SchemeKind.QM].matrices[0][0][0])

    @pytest.mark.parametrize("kind", ALL)
    def test_document_round_trip(self, generated, kind, tmp_path):
        path = tmp_path / f"{kind.value}.json"
        generated[kind].save(path)
        doc = json.loads(path.read_text())
        assert doc["kind"] == kind.value
        assert len(doc["matrices"]) == kind.n_points
        assert all(len(m) == 120 for m in doc["matrices"])
        assert doc["matrices"][0][0] == str(generated[kind].matrices[0][0][0])
        assert CoeffMatrices.load(path) == generated[kind]

    def test_packed_order_is_row_major_upper(self, generated):
        doc = generated[SchemeKind.CM].to_document()
        M = generated[SchemeKind.CM].matrices[0]
        assert doc["matrices"][0][14] == str(M[0][14])
        assert doc["matrices"][0][15] == str(M[1][1])
        assert doc["matrices"][0][-1] == str(M[14][14])

    def test_bad_document(self, generated):
        doc = generated[SchemeKind.LM].to_document()
        doc["matrices"] = doc["matrices"][:3]
        with pytest.raises(ValueError):
            CoeffMatrices.from_document(doc)
