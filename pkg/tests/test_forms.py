"""
Tests for Clifford-valued forms: torsion, curvature, Bianchi and D^2
"""
import numpy as np
import pytest

from app.core.errors import FormAlgebraError
from app.core.forms import (
    EmptyForm, FormJet, bianchi_residual, cartan_differential, connection_form, curvature, dsquared_identity,
    exterior_d, form_commutator, hodge_form, pairs_to_form, random_form, torsion, wedge_signs, wedge_tensor,
    zero_form
)
from app.core.jets import Jet


def test_wedge_signs():
    signs = wedge_signs(1, 1)
    # dx^1 ^ dx^0 = -dx^0 ^ dx^1
    assert signs[1, 0, 0] == -1.0
    assert signs[0, 1, 0] == 1.0
    assert signs[0, 0].sum() == 0.0
    assert wedge_signs(3, 2).shape[-1] == 0


def test_d_squared_vanishes(rng):
    x = np.array([0.1, 0.2, -0.3, 0.4])
    a = random_form(1, rng, x)(x, 2)
    assert exterior_d(exterior_d(a)).residual() < 1e-10


class TestCurvature:
    @pytest.mark.parametrize("fixture", ["schwarzschild", "infalling", "eds"])
    def test_torsion_free(self, fixture, request, static_point, eds_point):
        tetrad = request.getfixturevalue(fixture)
        x = eds_point if fixture == "eds" else static_point
        assert torsion(tetrad.geometry(x, 1)).residual() < 1e-10

    def test_cartan_structure(self, schwarzschild, static_point):
        data = curvature(schwarzschild.geometry(static_point, 2))
        bivectors = pairs_to_form(data.bivectors)
        assert (data.cartan - bivectors).residual() < 1e-10
        assert (data.literal - bivectors).residual() == pytest.approx(data.quarter_bracket.residual(), rel=1e-6)

    def test_bianchi(self, schwarzschild, static_point):
        cartan, literal, witness = bianchi_residual(schwarzschild.geometry(static_point, 2))
        assert cartan < 1e-10
        assert witness > 1e-6
        assert literal == pytest.approx(witness, rel=1e-6)

    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_dsquared(self, degree, schwarzschild, static_point, rng):
        geometry = schwarzschild.geometry(static_point, 2)
        omega = connection_form(geometry)
        a = random_form(degree, rng, static_point, scale=0.3)(static_point, 2)
        cartan, _, _ = dsquared_identity(a, omega, pairs_to_form(geometry.curvature_coordinate))
        assert cartan < 1e-8


class TestProducts:
    def test_leibniz(self, eds, eds_point, rng):
        geometry = eds.geometry(eds_point, 1)
        omega = connection_form(geometry)
        a = random_form(1, rng, eds_point, scale=0.3)(eds_point, 1)
        b = random_form(2, rng, eds_point, scale=0.3)(eds_point, 1)
        left = cartan_differential(wedge_tensor(a, b), omega)
        right = wedge_tensor(cartan_differential(a, omega), b) - wedge_tensor(a, cartan_differential(b, omega))
        assert (left - right).residual() < 1e-10

    def test_commutator_antisymmetry(self, rng):
        x = np.zeros(4)
        a = random_form(1, rng, x)(x, 0)
        b = random_form(2, rng, x)(x, 0)
        assert (form_commutator(a, b) + form_commutator(b, a)).residual() < 1e-10

    @pytest.mark.parametrize("degree", [0, 1, 2, 3, 4])
    def test_double_hodge(self, degree, schwarzschild, static_point, rng):
        geometry = schwarzschild.geometry(static_point, 0)
        a = random_form(degree, rng, static_point, scale=0.3)(static_point, 0)
        twice = hodge_form(hodge_form(a, geometry), geometry)
        assert (twice - a * ((-1.0) ** (degree + 1))).residual() < 1e-9


class TestDegreeOverflow:
    def test_empty_form_is_inert(self, rng):
        x = np.zeros(4)
        a = random_form(3, rng, x)(x, 1)
        empty = wedge_tensor(a, random_form(2, rng, x)(x, 1))
        assert isinstance(empty, EmptyForm)
        assert empty.truncate(0) is empty
        assert empty.map(lambda v: 2.0 * v) is empty
        assert (empty - empty * 3.0).residual() == 0.0

    def test_derivative_of_top_form_overflows(self, rng):
        x = np.zeros(4)
        top = random_form(4, rng, x)(x, 1)
        assert isinstance(exterior_d(top), EmptyForm)
        assert isinstance(cartan_differential(top, random_form(1, rng, x)(x, 1)), EmptyForm)

    def test_dsquared_of_three_form(self, eds, eds_point, rng):
        geometry = eds.geometry(eds_point, 2)
        omega = connection_form(geometry)
        a = random_form(3, rng, eds_point, scale=0.3)(eds_point, 2)
        assert dsquared_identity(a, omega, pairs_to_form(geometry.curvature_coordinate)) == (0.0, 0.0, 0.0)

    def test_bad_degree_and_flavour(self):
        with pytest.raises(FormAlgebraError):
            FormJet(5, Jet.constant(np.zeros((0, 16)), 1))
        with pytest.raises(FormAlgebraError):
            zero_form(1, 1, "cotangent") + zero_form(1, 1, "tangent")
        with pytest.raises(FormAlgebraError):
            zero_form(1, 1) + zero_form(2, 1)
