"""
Tests for the derivative providers: shared caches and central-difference convergence
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
import sympy

from app.core.fields import ConvergenceResult, FiniteDifferenceField, SymbolicField, central_difference_convergence

SYMBOLS = sympy.symbols("t x y z")
POINT = np.array([0.3, 0.2, -0.4, 0.5])


def smooth_field() -> SymbolicField:
    t, x, y, z = SYMBOLS
    return SymbolicField([sympy.sin(t) * sympy.exp(x / 3) * sympy.cos(y), x * y * z ** 2 + sympy.cos(t * z)],
                         SYMBOLS)


class TestSharedCaches:
    def test_derivative_arrays_built_once_across_threads(self):
        field = smooth_field()
        with ThreadPoolExecutor(max_workers=8) as pool:
            arrays = list(pool.map(lambda _: field.derivative_array(2), range(32)))
        assert all(a is arrays[0] for a in arrays)
        assert arrays[0].shape == (4, 4, 2)
        assert len(field._derivatives) == 3

    def test_concurrent_evaluation_matches_serial(self):
        reference = smooth_field()
        serial = {k: reference.evaluate(POINT, k) for k in range(3)}
        field = smooth_field()
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda i: (i % 3, field.evaluate(POINT, 2 - i % 3)), range(24)))
        for i, result in results:
            np.testing.assert_array_equal(result, serial[2 - i])

    def test_finite_difference_cache_under_threads(self):
        symbolic = smooth_field()
        numeric = FiniteDifferenceField(lambda p: symbolic.evaluate(p, 0), 1e-4)
        expected = FiniteDifferenceField(lambda p: symbolic.evaluate(p, 0), 1e-4).jet(POINT, 1).parts[1]
        with ThreadPoolExecutor(max_workers=8) as pool:
            results = list(pool.map(lambda _: numeric.jet(POINT, 1).parts[1], range(16)))
        for result in results:
            np.testing.assert_array_equal(result, expected)


class TestConvergence:
    @pytest.mark.parametrize("order", [1, 2])
    def test_second_order_when_step_halves(self, order):
        field = smooth_field()
        result = central_difference_convergence(lambda p: field.evaluate(p, 0), field, POINT, 1e-3, order)
        assert result.order == order
        assert result.fine_error < result.coarse_error
        assert abs(result.rate - 2.0) < 0.25

    def test_default_step_is_accurate(self):
        field = smooth_field()
        result = central_difference_convergence(lambda p: field.evaluate(p, 0), field, POINT, 1e-5, 1)
        assert result.coarse_error < 1e-8

    def test_rate_undefined_without_error(self):
        assert np.isnan(ConvergenceResult(1, 0.0, 0.0).rate)
        assert np.isnan(ConvergenceResult(2, 1e-6, 0.0).rate)
        assert ConvergenceResult(1, 4e-6, 1e-6).rate == pytest.approx(2.0)

    @pytest.mark.parametrize("fixture", ["schwarzschild", "eds"])
    def test_coframe_converges(self, fixture, request, static_point, eds_point):
        tetrad = request.getfixturevalue(fixture)
        x = static_point if fixture == "schwarzschild" else eds_point
        for order in (1, 2):
            result = tetrad.fd_convergence(x, order, 1e-3)
            assert result.coarse_error > 1e-8
            assert abs(result.rate - 2.0) < 0.25
