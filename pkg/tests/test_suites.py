"""
Tests for the suite machinery and the verification service
"""
import numpy as np
import pytest

from app.core.errors import ChartDomainError, ConfigError, DomainError, FormAlgebraError
from app.models.schemas import MetricSpec, SuiteConfig
from app.services.algebra import AlgebraSuiteService
from app.services.dirac import DiracSuiteService
from app.services.energy import EnergySuiteService
from app.services.geometry import GeometrySuiteService
from app.services.suite import Check, SuiteService
from app.services.verification import SUITES, VerificationService
from app.utils.helpers import emit_json


class ToySuiteService(SuiteService):
    name = "algebra"
    tolerance_name = "algebra"

    def collect(self):
        self.measure([Check("algebra.toy", "toy", "value")], lambda x: {"value": 0.0}, self.sample_points())
        return self.records


def minkowski_config(*suites, **overrides):
    return SuiteConfig(metric=MetricSpec(name="minkowski"), suites=list(suites), samples=2, algebra_samples=50,
                       **overrides)


class TestSuiteService:
    def test_every_suite_is_registered(self):
        assert set(SUITES) == {"algebra", "spinor", "geometry", "forms", "einstein", "sachs", "energy", "dirac",
                               "constraints"}

    def test_chart_domain_error_skips_group(self, minkowski):
        suite = ToySuiteService(minkowski, 1, 2)

        def evaluate(_):
            raise ChartDomainError("outside the chart")

        suite.measure([Check("algebra.a", "a", "a"), Check("algebra.b", "b", "b")], evaluate, [np.zeros(4)])
        assert [r.skipped for r in suite.records] == [True, True]
        assert suite.records[0].diagnostic == "outside the chart"

    @pytest.mark.parametrize("error", [DomainError("bad observer"), FormAlgebraError("degree 5")])
    def test_other_domain_errors_fail_group(self, minkowski, error):
        suite = ToySuiteService(minkowski, 1, 2)

        def evaluate(_):
            raise error

        suite.measure([Check("algebra.a", "a", "a")], evaluate, [np.zeros(4)])
        record = suite.records[0]
        assert not record.passed and not record.skipped
        assert type(error).__name__ in record.diagnostic

    def test_other_errors_fail_group(self, minkowski):
        suite = ToySuiteService(minkowski, 1, 2)
        suite.measure([Check("algebra.a", "a", "a")], lambda x: 1 / 0, [np.zeros(4)])
        record = suite.records[0]
        assert not record.passed and not record.skipped
        assert record.diagnostic.startswith("ZeroDivisionError")

    def test_worst_point_wins(self, minkowski):
        suite = ToySuiteService(minkowski, 1, 2)
        values = iter([1e-12, 1.0, 1e-12])
        suite.measure([Check("algebra.a", "a", "a")], lambda x: {"a": next(values)}, [np.zeros(4)] * 3)
        assert suite.records[0].residual == 1.0
        assert suite.records[0].details["points"] == 3

    def test_tolerance_override(self, minkowski):
        suite = ToySuiteService(minkowski, 1, 2, {"algebra": 0.5})
        assert suite.tolerance() == 0.5

    def test_seeded_points_repeat(self, schwarzschild):
        first = ToySuiteService(schwarzschild, 7, 3).sample_points()
        second = ToySuiteService(schwarzschild, 7, 3).sample_points()
        assert len(first) == 4
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a, b)

    @pytest.mark.asyncio
    async def test_algebra_suite_passes(self, minkowski):
        records = await AlgebraSuiteService(minkowski, 3, 2, algebra_samples=50).run_suite()
        assert records
        assert all(r.passed for r in records)


class TestSkips:
    def test_mass_needs_flat_chart(self, eds):
        suite = EnergySuiteService(eds, 1, 2)
        suite._mass()
        assert [r.id for r in suite.records] == ["energy.mass"]
        assert suite.records[0].skipped

    def test_harmonic_wave_only_on_harmonic_charts(self, schwarzschild, monkeypatch):
        monkeypatch.setattr(DiracSuiteService, "measure", lambda self, *args, **kwargs: None)
        monkeypatch.setattr(DiracSuiteService, "_maxwell_checks", lambda self: None)
        records = DiracSuiteService(schwarzschild, 1, 2).collect()
        assert [r.id for r in records] == ["dirac.harmonic_wave"]
        assert records[0].skipped

    def test_maxwell_only_on_flat_space(self, schwarzschild):
        suite = DiracSuiteService(schwarzschild, 1, 2)
        suite._maxwell_checks()
        assert len(suite.records) == 6
        assert all(r.skipped for r in suite.records)


class TestVerificationService:
    @pytest.mark.asyncio
    async def test_run_merges_sorted_records(self):
        report = await VerificationService().run(minkowski_config("geometry", "algebra"))
        ids = [r.id for r in report.records]
        assert ids == sorted(ids)
        assert {r.suite for r in report.records} == {"algebra", "geometry"}
        assert report.all_passed
        assert VerificationService.exit_code(report) == 0
        assert report.environment.versions["numpy"] == np.__version__

    @pytest.mark.asyncio
    async def test_same_seed_same_report(self):
        first = await VerificationService().run(minkowski_config("algebra", seed=5))
        second = await VerificationService().run(minkowski_config("algebra", seed=5))
        assert emit_json(first) == emit_json(second)

    @pytest.mark.asyncio
    async def test_aborted_suite_becomes_failed_record(self, monkeypatch):
        def explode(self):
            raise RuntimeError("boom")

        monkeypatch.setattr(AlgebraSuiteService, "collect", explode)
        report = await VerificationService().run(minkowski_config("algebra"))
        assert [r.id for r in report.records] == ["algebra.suite"]
        assert "boom" in report.records[0].diagnostic
        assert VerificationService.exit_code(report) == 1

    @pytest.mark.asyncio
    async def test_unknown_metric(self):
        with pytest.raises(ConfigError):
            await VerificationService().run(SuiteConfig(metric=MetricSpec(name="kerr"), suites=["algebra"]))

    def test_custom_metric(self):
        spec = MetricSpec(name="custom", coordinates=["t", "x", "y", "z"],
                          tetrad=[["1", "0", "0", "0"], ["0", "1", "0", "0"], ["0", "0", "1", "0"],
                                  ["0", "0", "0", "1"]])
        tetrad = VerificationService().build_tetrad(spec)
        assert tetrad.family == "custom"


CURVED_CHARTS = [("schwarzschild", "static"), ("schwarzschild", "infalling"), ("einstein_de_sitter", None)]


def curved_config(name, chart, *suites):
    metric = MetricSpec(name=name, chart=chart) if chart else MetricSpec(name=name)
    return SuiteConfig(metric=metric, suites=list(suites) or list(SUITES), samples=2, algebra_samples=50)


class TestCurvedRuns:
    @pytest.mark.asyncio
    @pytest.mark.parametrize("name,chart", CURVED_CHARTS)
    async def test_all_suites_pass_together(self, name, chart):
        report = await VerificationService().run(curved_config(name, chart))
        failed = [(r.id, r.residual, r.diagnostic) for r in report.records if not r.passed and not r.skipped]
        assert failed == []
        assert report.summary["failed"] == 0
        refutations = [r for r in report.records if r.expect == "fails" and not r.skipped]
        assert refutations and all(r.passed for r in refutations)

    @pytest.mark.asyncio
    @pytest.mark.parametrize("name,chart", CURVED_CHARTS)
    async def test_concurrent_run_matches_single_suite(self, name, chart):
        together = await VerificationService().run(curved_config(name, chart))
        for suite in ("geometry", "einstein"):
            alone = await VerificationService().run(curved_config(name, chart, suite))
            shared = {r.id: r.residual for r in together.records if r.suite == suite}
            assert shared == {r.id: r.residual for r in alone.records}

    @pytest.mark.asyncio
    @pytest.mark.parametrize("name,chart", [("minkowski", None)] + CURVED_CHARTS)
    async def test_forms_suite_is_never_skipped(self, name, chart):
        report = await VerificationService().run(curved_config(name, chart, "forms"))
        assert report.records
        assert not any(r.skipped for r in report.records)
        assert report.all_passed


class TestGaugeAndRest:
    def test_pseudo_energy_skipped_when_it_vanishes(self, minkowski):
        suite = EnergySuiteService(minkowski, 1, 2)
        suite._gauge()
        records = {r.id: r for r in suite.records}
        assert records["energy.gauge_einstein"].passed
        pseudo_energy = records["energy.gauge_pseudo_energy"]
        assert pseudo_energy.skipped and "vanishes" in pseudo_energy.diagnostic

    def test_pseudo_energy_changes_in_strong_field(self, schwarzschild):
        suite = EnergySuiteService(schwarzschild, 1, 2)
        suite._gauge()
        records = {r.id: r for r in suite.records}
        assert records["energy.gauge_pseudo_energy"].expect == "fails"
        assert records["energy.gauge_pseudo_energy"].passed
        assert records["energy.gauge_einstein"].passed

    def test_comoving_observers_at_rest(self, eds):
        records = {r.id: r for r in GeometrySuiteService(eds, 1, 2).collect()}
        assert records["geometry.comoving_rest"].passed
        assert records["geometry.comoving_rest"].residual < 1e-6
        assert records["geometry.expansion"].passed

    def test_observer_routes_and_fd_convergence(self, schwarzschild):
        records = {r.id: r for r in GeometrySuiteService(schwarzschild, 1, 2).collect()}
        assert records["geometry.observer_routes"].passed
        convergence = records["geometry.fd_convergence"]
        assert convergence.passed and not convergence.skipped
        assert convergence.details["fd_step"] == 1e-3

    def test_fd_convergence_skipped_on_constant_frame(self, minkowski):
        records = {r.id: r for r in GeometrySuiteService(minkowski, 1, 2).collect()}
        assert records["geometry.fd_convergence"].skipped
