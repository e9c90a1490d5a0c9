import io
import math
from fractions import Fraction

import pytest

from wedgemass.bench import (
    CSV_HEADER,
    METHODS,
    SweepConfig,
    SweepRecord,
    family_nodes,
    read_csv,
    run_sweep,
    write_csv,
)
from wedgemass.wedge15 import PARENT_NODES, NonPhysicalElementError, metric_polynomial, min_metric

F = Fraction


class TestFamilies:
    def test_family_one(self):
        nodes = family_nodes(1, F(1, 5))
        assert nodes[3] == (0, 0, F(6, 5))
        assert nodes[4] == (F(6, 5), 0, 1)
        assert nodes[5] == (0, F(6, 5), 1)
        assert nodes[6:] == [tuple(p) for p in PARENT_NODES[6:]]

    def test_family_two(self):
        nodes = family_nodes(2, F(1, 10))
        assert nodes[0] == (F(1, 10), 0, -1)
        assert nodes[1] == (1, F(1, 10), F(-9, 10))

    def test_family_three(self):
        nodes = family_nodes(3, F(1, 2))
        assert [nodes[i][2] for i in (3, 4, 9)] == [F(1, 2)] * 3

    def test_float_delta_stays_float(self):
        assert isinstance(family_nodes(1, 0.25)[3][2], float)

    @pytest.mark.parametrize("family", [1, 2, 3])
    def test_zero_is_parent(self, family):
        assert family_nodes(family, 0) == [tuple(p) for p in PARENT_NODES]

    def test_negative_delta(self):
        with pytest.raises(ValueError):
            family_nodes(1, F(-1, 10))

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            family_nodes(4, F(1, 10))

    def test_family_two_inverts(self):
        with pytest.raises(NonPhysicalElementError, match="metric"):
            family_nodes(2, F(1, 4))
        with pytest.raises(NonPhysicalElementError):
            family_nodes(2, F(1, 2))
        assert min_metric(family_nodes(2, F(1, 4), check=False)) < 0 < min_metric(family_nodes(2, F(6, 25)))

    def test_family_one_constant_metric_term_decreases(self):
        consts = [metric_polynomial(family_nodes(1, F(k, 10))).coeff() for k in range(6)]
        assert consts == sorted(consts, reverse=True)
        assert consts[0] == 1


class TestConfig:
    def test_grid(self):
        cfg = SweepConfig(1, F(1, 2), 6)
        assert cfg.deltas() == [F(k, 10) for k in range(6)]
        assert cfg.schemes == METHODS

    def test_scheme_names_normalised(self):
        assert SweepConfig(2, schemes=("cm", "Qm")).schemes == ("CM", "QM")

    @pytest.mark.parametrize("kwargs", [
        {"delta_max": 0}, {"steps": 1}, {"schemes": ("pm",)}, {"density": -1.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SweepConfig(1, **kwargs)


class TestSweep:
    @pytest.fixture(scope="class")
    @classmethod
    def records(cls):
        return run_sweep(SweepConfig(1, F(3, 10), 3))

    def test_layout(self, records):
        assert len(records) == 12
        assert [r.scheme for r in records[:4]] == list(METHODS)
        assert [r.delta for r in records[::4]] == [0.0, 0.15, 0.3]
        assert all(r.ok for r in records)

    def test_zero_delta_is_exact(self, records):
        for r in records[:4]:
            assert r.avg_abs_err <= 1e-13 and r.max_abs_err <= 1e-13

    def test_ordering(self, records):
        for i in range(4, 12, 4):
            cm, lm, qm, _ = records[i:i + 4]
            assert cm.avg_abs_err >= lm.avg_abs_err >= qm.avg_abs_err > 0

    def test_density_scales_errors(self):
        one = run_sweep(SweepConfig(3, F(1, 5), 2, ("LM",)))
        two = run_sweep(SweepConfig(3, F(1, 5), 2, ("LM",), density=2.0))
        assert two[1].max_abs_err == pytest.approx(2 * one[1].max_abs_err, rel=1e-10)

    def test_inverted_element_is_isolated(self):
        records = run_sweep(SweepConfig(2, F(1, 2), 3, ("CM", "QM")))
        # delta 0.25 and 0.5 both fold the element
        assert len(records) == 6
        assert all(r.ok for r in records[:2])
        bad = records[2:]
        assert all(not r.ok and math.isnan(r.avg_abs_err) for r in bad)


class TestCsv:
    def test_header_only(self):
        buf = io.StringIO()
        write_csv([], buf)
        assert buf.getvalue() == ",".join(CSV_HEADER) + "\n"

    def test_round_trip(self, tmp_path):
        records = run_sweep(SweepConfig(3, F(1, 5), 3))
        path = tmp_path / "s.csv"
        write_csv(records, path)
        assert len(path.read_text().splitlines()) == 13
        assert read_csv(path) == records

    def test_deterministic(self, tmp_path):
        cfg = SweepConfig(1, F(1, 5), 4, ("CM", "GAUSS18"))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(run_sweep(cfg), a)
        write_csv(run_sweep(cfg), b)
        assert a.read_bytes() == b.read_bytes()

    def test_nan_rows_written(self):
        buf = io.StringIO()
        write_csv([SweepRecord(2, 0.5, "QM", math.nan, math.nan, "inverted")], buf)
        assert buf.getvalue().splitlines()[1] == "2,0.5,QM,nan,nan"

    def test_unwritable_destination(self, tmp_path):
        with pytest.raises(OSError, match="cannot write"):
            write_csv([], tmp_path / "missing" / "s.csv")
