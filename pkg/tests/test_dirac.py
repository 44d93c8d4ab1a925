"""
Tests for the Dirac operator on multiform fields and the Maxwell system
"""
import numpy as np
import pytest
import sympy

from app.core import algebra as ga
from app.core.dirac import (
    MultiformField, codifferential, codifferential_by_hodge, coframe_field, covariant_derivative, dalembertian,
    dirac, dirac_squared, dirac_wedge_dirac, exterior, hodge_laplacian, maxwell_residuals, random_multiform,
    ricci_action, ricci_one_forms, symbolic_multiform
)


def value(field, x):
    return field.jet(x, 0).value


@pytest.mark.parametrize("fixture", ["minkowski_spherical", "schwarzschild", "eds"])
def test_dirac_splits(fixture, request, rng):
    tetrad = request.getfixturevalue(fixture)
    x = tetrad.sample_points(rng, 1)[0]
    field = random_multiform(tetrad, rng, x)
    assert ga.residual(value(dirac(field), x) - value(exterior(field) - codifferential(field), x)) < 1e-9
    assert ga.residual(value(codifferential(field), x) - value(codifferential_by_hodge(field), x)) < 1e-8


def test_square_is_hodge_laplacian(schwarzschild, static_point, rng):
    field = random_multiform(schwarzschild, rng, static_point)
    squared = value(dirac_squared(field), static_point)
    assert ga.residual(squared - value(hodge_laplacian(field), static_point)) < 1e-8
    split = value(dalembertian(field), static_point) + value(dirac_wedge_dirac(field), static_point)
    assert ga.residual(squared - split) < 1e-8


def test_coframe_derivative(schwarzschild, static_point):
    derivative = value(covariant_derivative(coframe_field(schwarzschild)), static_point)
    conn = schwarzschild.geometry(static_point, 0).connection.value
    assert ga.residual(derivative - ga.vector(-conn)) < 1e-12


def test_wedge_on_coframe_gives_ricci(eds, eds_point):
    theta = coframe_field(eds)
    assert ga.residual(value(dirac_wedge_dirac(theta), eds_point) + value(ricci_one_forms(eds), eds_point)) < 1e-8


def test_potential_wave_sign(eds, eds_point, rng):
    potential = random_multiform(eds, rng, eds_point, grades=[1])
    laplacian = value(hodge_laplacian(potential), eds_point)
    box = value(dalembertian(potential), eds_point)
    ricci = value(ricci_action(eds, potential), eds_point)
    assert ga.residual(laplacian - box + ricci) < 1e-8
    assert ga.residual(ricci) > 1e-3


class TestMaxwell:
    def test_plane_wave(self, minkowski, rng):
        t, x, _, _ = minkowski.symbols
        wave = sympy.sin(t - x)
        field = symbolic_multiform(minkowski, {5: wave, 6: -wave}, "F")
        zero = MultiformField.constant(minkowski, np.zeros(ga.DIM))
        for point in minkowski.sample_points(rng, 3):
            assert max(maxwell_residuals(field, zero, point)) < 1e-12

    def test_charged_ball(self, minkowski):
        _, x, y, z = minkowski.symbols
        field = symbolic_multiform(minkowski, {3: x / 3, 5: y / 3, 9: z / 3}, "F")
        current = MultiformField.constant(minkowski, ga.basis(1))
        assert max(maxwell_residuals(field, current, np.array([0.0, 0.2, -0.1, 0.3]))) < 1e-12

    def test_coulomb_field(self, minkowski_spherical):
        _, r, _, _ = minkowski_spherical.symbols
        field = symbolic_multiform(minkowski_spherical, {3: 1 / r ** 2}, "F")
        zero = MultiformField.constant(minkowski_spherical, np.zeros(ga.DIM))
        assert max(maxwell_residuals(field, zero, np.array([0.0, 2.0, 1.0, 0.5]))) < 1e-10

    def test_wrong_current_is_detected(self, minkowski):
        _, x, y, z = minkowski.symbols
        field = symbolic_multiform(minkowski, {3: x / 3, 5: y / 3, 9: z / 3}, "F")
        zero = MultiformField.constant(minkowski, np.zeros(ga.DIM))
        closed, sourced, _, _ = maxwell_residuals(field, zero, np.zeros(4))
        assert closed < 1e-12
        assert sourced == pytest.approx(1.0)
