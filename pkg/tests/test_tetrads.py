"""
Tests for tetrad construction, chart domains and derivative providers
"""
import numpy as np
import pytest
import sympy

from app.core.errors import ConfigError, DegenerateMetricError, DomainError
from app.core.tetrads import boost_tetrad, builtin_spacetime, custom_spacetime


class TestBuiltins:
    def test_label(self, schwarzschild, minkowski):
        assert schwarzschild.label == "schwarzschild/static(m=1)"
        assert minkowski.label == "minkowski/cartesian"

    def test_alias(self):
        assert builtin_spacetime("eds").family == "einstein_de_sitter"

    @pytest.mark.parametrize("name, params, chart", [
        ("kerr", {}, None),
        ("minkowski", {"m": 1.0}, None),
        ("schwarzschild", {"m": -1.0}, None),
        ("schwarzschild", {}, "kruskal"),
        ("einstein_de_sitter", {}, "static"),
    ])
    def test_bad_configuration(self, name, params, chart):
        with pytest.raises(ConfigError):
            builtin_spacetime(name, params, chart)

    def test_unknown_provider(self):
        with pytest.raises(ConfigError):
            builtin_spacetime("minkowski", provider="spectral")

    def test_point_inside_horizon(self, schwarzschild):
        with pytest.raises(DomainError):
            schwarzschild.jet(np.array([0.0, 1.5, 1.0, 0.5]), 1)

    def test_samples_stay_in_chart(self, isotropic, rng):
        for x in isotropic.sample_points(rng, 10):
            assert isotropic.chart.domain(x) is None

    def test_fd_provider_tracks_analytic(self, schwarzschild, static_point):
        fd = schwarzschild.with_provider("fd", 1e-5)
        exact, approximate = schwarzschild.jet(static_point, 1), fd.jet(static_point, 1)
        assert np.allclose(exact.value, approximate.value)
        assert np.allclose(exact.parts[1], approximate.parts[1], atol=1e-7)


class TestCustom:
    def test_custom_tetrad(self):
        tetrad = custom_spacetime(["t", "x", "y", "z"], [["1", "0", "0", "0"], ["0", "a*x", "0", "0"],
                                                           ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
                                  params={"a": 2.0}, bounds=[(0, 1), (1, 2), (0, 1), (0, 1)])
        assert tetrad.family == "custom"
        assert not tetrad.has_matter_model
        assert tetrad.jet(np.array([0.5, 1.5, 0.5, 0.5]), 0).value[1, 1] == pytest.approx(3.0)

    def test_unbound_symbol(self):
        with pytest.raises(ConfigError):
            custom_spacetime(["t", "x", "y", "z"], [["q", "0", "0", "0"], ["0", "1", "0", "0"],
                                                     ["0", "0", "1", "0"], ["0", "0", "0", "1"]])

    def test_degenerate_point(self):
        tetrad = custom_spacetime(["t", "x", "y", "z"], [["1", "0", "0", "0"], ["0", "x", "0", "0"],
                                                          ["0", "0", "1", "0"], ["0", "0", "0", "1"]],
                                  bounds=[(-1, 1), (-1, 1), (-1, 1), (-1, 1)])
        with pytest.raises(DomainError):
            tetrad.jet(np.zeros(4), 0)


def test_boost_keeps_metric(schwarzschild, static_point):
    boosted = boost_tetrad(schwarzschild, 2 / sympy.Symbol("r", real=True))
    original = schwarzschild.geometry(static_point, 0).metric.value
    assert np.allclose(boosted.geometry(static_point, 0).metric.value, original)
    assert not boosted.chart.fermi_reference


def test_degenerate_metric_error_is_a_domain_error():
    assert issubclass(DegenerateMetricError, DomainError)
