"""Tests for the verification-suite machinery: report structure, writing,
determinism, and the fast suites end to end."""

import csv
import json

import numpy as np
import pytest

from hyperharm import verify as vf
from hyperharm.config import RunConfig


CFG = RunConfig(seed=0)


class TestReportStructure:
    def test_to_text_is_json(self):
        rep = vf.SuiteReport(suite="demo", status="pass",
                             constants={"c": 1.5}, tolerance=1e-8, seed=3)
        doc = json.loads(rep.to_text())
        assert doc["suite"] == "demo"
        assert doc["status"] == "pass"
        assert doc["constants"] == {"c": 1.5}
        assert doc["seed"] == 3

    def test_runtime_excluded_from_text(self):
        rep = vf.SuiteReport(suite="demo", status="pass")
        rep.runtime_s = 1.23
        assert "1.23" not in rep.to_text()
        assert "runtime" not in rep.to_text()

    def test_csv_rows(self):
        rep = vf.SuiteReport(suite="demo", status="info",
                             constants={"b": 2.0, "a": 1.0}, tolerance=0.1)
        rows = rep.csv_rows()
        assert [r[2] for r in rows] == ["a", "b"]  # sorted constants
        assert all(r[0] == "demo" and r[1] == "info" for r in rows)


class TestRegistry:
    def test_all_suites_registered(self):
        assert set(vf.SUITES) == {
            "kernel-consistency", "green", "mean-value",
            "operator-identities", "prop18", "theorem-a",
            "hardy-sobolev", "lipschitz"}

    def test_unknown_suite_raises(self):
        with pytest.raises(KeyError):
            vf.run_suite("nope", CFG)


class TestFastSuites:
    def test_operator_identities_passes(self):
        rep = vf.suite_operator_identities(CFG)
        assert rep.status == "pass"
        assert rep.residual_max <= 1e-8
        assert rep.constants["inversion_roundtrip_max"] <= 1e-6

    def test_green_passes(self):
        rep = vf.suite_green(CFG)
        assert rep.status == "pass"
        assert rep.residual_max <= 1e-5

    def test_green_other_dimension(self):
        rep = vf.suite_green(RunConfig(n=4, seed=1))
        assert rep.status == "pass"


class TestDeterminism:
    def test_operator_suite_reports_identical(self):
        a = vf.suite_operator_identities(RunConfig(seed=5))
        b = vf.suite_operator_identities(RunConfig(seed=5))
        assert a.to_text() == b.to_text()

    def test_seed_changes_draws(self):
        a = vf.suite_operator_identities(RunConfig(seed=5))
        b = vf.suite_operator_identities(RunConfig(seed=6))
        assert a.constants != b.constants


class TestSingularProjection:
    def test_coefficients_decay(self):
        c = vf._project_singular_zonal(0.5, 0.2, 128)
        assert abs(c[128]) < 1e-4
        assert abs(c[1]) > abs(c[100])

    def test_reconstructs_profile(self):
        t0, gamma = 0.2, 0.5
        c = vf._project_singular_zonal(gamma, t0, 256)
        from hyperharm import specfun as sf
        t = np.array([-0.7, -0.1, 0.55, 0.9])
        Z = sf.zonal_all(256, 3, t)
        got = c @ Z
        want = np.abs(t - t0) ** gamma
        assert np.max(np.abs(got - want)) < 5e-3


class TestWriteReports:
    def _reports(self):
        return [
            vf.SuiteReport(suite="one", status="pass",
                           constants={"x": 1.0}, tolerance=1e-6, seed=0),
            vf.SuiteReport(suite="two", status="fail", constants={},
                           seed=0),
        ]

    def test_files_written(self, tmp_path):
        csv_path = vf.write_reports(self._reports(), str(tmp_path))
        assert (tmp_path / "report-one.txt").exists()
        assert (tmp_path / "report-two.txt").exists()
        with open(csv_path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["suite", "status", "constant", "value",
                           "tolerance", "runtime_s"]
        assert rows[1][:3] == ["one", "pass", "x"]
        assert rows[2][:2] == ["two", "fail"]

    def test_bytes_deterministic(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        vf.write_reports(self._reports(), str(d1))
        vf.write_reports(self._reports(), str(d2))
        for name in ("report-one.txt", "report-two.txt", "reports.csv"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()
