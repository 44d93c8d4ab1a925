"""
Tests for derivative jets and the field providers behind them
"""
import numpy as np
import pytest
import sympy

from app.core import algebra as ga
from app.core import jets
from app.core.fields import FiniteDifferenceField, PolynomialField, SymbolicField
from app.core.jets import Jet


def test_product_rule_first_order(rng):
    x = np.array([0.1, -0.2, 0.3, 0.4])
    a = PolynomialField((ga.DIM,), rng).jet(x, 2)
    b = PolynomialField((ga.DIM,), rng).jet(x, 2)
    product = jets.gp(a, b)
    expected = ga.geometric_product(a.parts[1], b.value[None]) + ga.geometric_product(a.value[None], b.parts[1])
    assert product.value == pytest.approx(ga.geometric_product(a.value, b.value))
    assert ga.residual(product.parts[1] - expected) < 1e-10


def test_second_order_product_is_symmetric(rng):
    x = np.zeros(4)
    a = PolynomialField((ga.DIM,), rng).jet(x, 2)
    b = PolynomialField((ga.DIM,), rng).jet(x, 2)
    second = jets.gp(a, b).parts[2]
    assert ga.residual(second - np.swapaxes(second, 0, 1)) < 1e-10


def test_inverse_jet(rng):
    x = np.array([0.5, 0.1, 0.0, -0.3])
    m = PolynomialField((4, 4), rng, scale=0.1).jet(x, 3) + Jet.constant(np.eye(4), 3)
    product = jets.matmul(m, jets.inverse(m))
    assert np.allclose(product.value, np.eye(4))
    for part in product.parts[1:]:
        assert np.max(np.abs(part)) < 1e-10


def test_order_alignment():
    low = Jet.constant(np.ones(3), 1)
    high = Jet.constant(np.ones(3), 3)
    assert (low + high).order == 1
    assert (high * 2.0).value == pytest.approx(2.0 * np.ones(3))


class TestProviders:
    def test_symbolic_matches_closed_form(self):
        t, x = sympy.symbols("t x", real=True)
        y, z = sympy.symbols("y z", real=True)
        field = SymbolicField([sympy.sin(t) * x ** 2], [t, x, y, z])
        jet = field.jet(np.array([0.7, 2.0, 0.0, 0.0]), 2)
        assert jet.value[0] == pytest.approx(np.sin(0.7) * 4.0)
        assert jet.parts[1][0, 0] == pytest.approx(np.cos(0.7) * 4.0)
        assert jet.parts[1][1, 0] == pytest.approx(np.sin(0.7) * 4.0)
        assert jet.parts[2][1, 1, 0] == pytest.approx(2.0 * np.sin(0.7))

    def test_finite_differences_track_symbolic(self):
        symbols = sympy.symbols("t x y z", real=True)
        expressions = [sympy.exp(symbols[0]) * symbols[1], symbols[2] * symbols[3] ** 2]
        symbolic = SymbolicField(expressions, symbols)
        numeric = FiniteDifferenceField(lambda p: symbolic.evaluate(p, 0), 1e-4)
        point = np.array([0.2, 1.5, -0.7, 0.9])
        exact, approximate = symbolic.jet(point, 2), numeric.jet(point, 2)
        assert np.allclose(approximate.parts[1], exact.parts[1], atol=1e-6)
        assert np.allclose(approximate.parts[2], exact.parts[2], atol=1e-4)

    def test_polynomial_field_is_exact_cubic(self, rng):
        field = PolynomialField((2,), rng)
        jet = field.jet(np.array([1.0, 0.0, 0.0, 0.0]), 4)
        assert np.allclose(jet.parts[4], 0.0)
