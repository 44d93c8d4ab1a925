"""
Tests for check records, report output, request models and configuration helpers
"""
import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from app.config import get_tolerance, load_config_file
from app.models.schemas import CheckRecord, EnvironmentBlock, MetricSpec, SuiteConfig, VerificationReport
from app.utils.helpers import (
    create_check_record, create_refutation_record, emit_json, emit_markdown, failed_record, inputs_digest,
    skipped_record, worst
)


def record(**overrides):
    values = dict(check_id="geometry.metric_product", suite="geometry", label="g = h^T eta h",
                  metric="minkowski/cartesian", residual=1e-14, tolerance=1e-8, digest="abc")
    values.update(overrides)
    return create_check_record(**values)


def sample_report(records):
    environment = EnvironmentBlock(provider="analytic", fd_step=1e-5, seed=1, samples=2, versions={"numpy": "x"})
    return VerificationReport(metric="minkowski/cartesian", environment=environment, records=records)


class TestRecords:
    def test_holds(self):
        assert record().passed
        assert not record(residual=1e-3).passed

    def test_expected_failure(self):
        assert record(residual=1e-3, expect="fails").passed
        assert not record(expect="fails").passed

    def test_nan_never_passes(self):
        for expect in ("holds", "fails"):
            result = record(residual=float("nan"), expect=expect)
            assert not result.passed
            assert result.residual is None

    def test_refutation_follows_witness(self):
        args = dict(check_id="forms.bianchi_literal", suite="forms", label="literal", metric="m",
                    tolerance=1e-6, digest="d")
        predicted = create_refutation_record(residual=0.3, witness=0.3, **args)
        assert predicted.expect == "fails" and predicted.passed
        assert predicted.details["witness"] == 0.3
        flat = create_refutation_record(residual=1e-12, witness=0.0, **args)
        assert flat.expect == "holds" and flat.passed
        unpredicted = create_refutation_record(residual=0.3, witness=0.0, **args)
        assert not unpredicted.passed

    def test_failed_and_skipped(self):
        failed = failed_record("a.b", "a", "label", "m", 1e-8, "d", RuntimeError("boom"))
        assert not failed.passed and failed.diagnostic == "RuntimeError: boom"
        skipped = skipped_record("a.c", "a", "label", "m", 1e-8, "d", "no chart")
        assert skipped.skipped and skipped.diagnostic == "no chart"

    def test_worst(self):
        assert worst([]) == 0.0
        assert worst([1.0, 3.0, 2.0]) == 3.0
        assert math.isnan(worst([1.0, float("nan")]))

    def test_digest_is_stable(self):
        assert inputs_digest("a", np.array([1.0, 2.0])) == inputs_digest("a", [1.0, 2.0])
        assert inputs_digest("a", 1) != inputs_digest("b", 1)


class TestReport:
    def test_summary_counts(self):
        report = sample_report([record(), record(check_id="x", residual=1.0),
                                skipped_record("y", "geometry", "l", "m", 1e-8, "d", "why")])
        assert report.summary == {"total": 3, "passed": 1, "failed": 1, "skipped": 1}
        assert not report.all_passed

    def test_json_is_sorted_and_stable(self):
        report = sample_report([record(details={"z": np.float64(0.1), "a": [1, 2]})])
        text = emit_json(report)
        assert text == emit_json(report)
        payload = json.loads(text)
        assert list(payload) == sorted(payload)
        assert payload["records"][0]["details"]["z"] == 0.1

    def test_markdown_badges(self):
        report = sample_report([record(), record(check_id="x", residual=1.0),
                                skipped_record("y", "geometry", "l", "m", 1e-8, "d", "why")])
        text = emit_markdown(report)
        for badge in ("PASS", "FAIL", "SKIP"):
            assert f"| {badge} |" in text
        assert "## geometry" in text


class TestModels:
    def test_unknown_suite(self):
        with pytest.raises(ValidationError):
            SuiteConfig(suites=["algebra", "astrology"])

    def test_suites_from_string(self):
        assert SuiteConfig(suites="algebra, forms,algebra").suites == ["algebra", "forms"]

    def test_tolerances_validated(self):
        with pytest.raises(ValidationError):
            SuiteConfig(tolerances={"geometry": -1.0})
        with pytest.raises(ValidationError):
            SuiteConfig(tolerances={"vibes": 1.0})

    def test_metric_spec(self):
        with pytest.raises(ValidationError):
            MetricSpec(name="custom")
        with pytest.raises(ValidationError):
            MetricSpec(provider="spectral")
        with pytest.raises(ValidationError):
            MetricSpec(bounds=[[0, 1]] * 3)

    def test_record_expect_values(self):
        with pytest.raises(ValidationError):
            CheckRecord(id="a", suite="a", label="a", metric="m", inputs_digest="d", tolerance=1.0,
                        expect="maybe", passed=True)


class TestConfig:
    def test_fd_tolerances_are_loosened(self):
        assert get_tolerance("geometry", "fd") == pytest.approx(1e4 * get_tolerance("geometry"))
        assert get_tolerance("algebra", "fd") == get_tolerance("algebra")
        assert get_tolerance("mass", "fd") == get_tolerance("mass")

    def test_key_value_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# run\nmetric.name = schwarzschild\nmetric.params.m = 2\nsuites = geometry\n")
        values = load_config_file(str(path))
        assert values == {"metric": {"name": "schwarzschild", "params": {"m": "2"}}, "suites": "geometry"}

    def test_json_file(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"seed": 3, "suites": ["algebra"]}))
        assert load_config_file(str(path)) == {"seed": 3, "suites": ["algebra"]}

    def test_malformed_line(self, tmp_path):
        path = tmp_path / "bad.cfg"
        path.write_text("seed 3\n")
        with pytest.raises(ValueError):
            load_config_file(str(path))
