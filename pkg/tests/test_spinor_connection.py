"""
Tests for the spinor connection, the paravector calculus and frame constraints
"""
import numpy as np
import pytest

from app.core.spinor_connection import (
    dotted_chain_residual, epsilon_hermitian_residual, epsilon_transpose_residual, fermi_transport_oracle,
    gamma_identity_residual, inertial_constraint_check, nonmetric_perturbation, pauli_constraint_residual,
    paravector_contractions, sachs_total_derivative, spinor_covariant_derivative, spinor_omega
)
from app.core.errors import DomainError


class TestSpinorConnection:
    def test_epsilon_transpose(self, schwarzschild, static_point):
        coeffs = spinor_omega(schwarzschild.geometry(static_point, 0))
        assert epsilon_transpose_residual(coeffs) < 1e-12

    def test_epsilon_hermitian_fails_with_rotations(self, schwarzschild, static_point):
        coeffs = spinor_omega(schwarzschild.geometry(static_point, 0))
        residual, witness = epsilon_hermitian_residual(coeffs)
        assert witness > 1e-3
        assert residual > 1e-3

    def test_dotted_chain(self, infalling, static_point, rng):
        coeffs = spinor_omega(infalling.geometry(static_point, 0))
        assert dotted_chain_residual(coeffs, rng) < 1e-12

    def test_unknown_flavor(self):
        with pytest.raises(DomainError):
            spinor_covariant_derivative(np.zeros(2), np.zeros(2), np.eye(2), "majorana")


class TestParavectors:
    def test_total_derivative_vanishes(self, schwarzschild, static_point):
        residual = sachs_total_derivative(schwarzschild.geometry(static_point, 1))
        assert np.max(np.abs(residual)) < 1e-10

    def test_contractions(self, eds, eds_point):
        out = paravector_contractions(eds.geometry(eds_point, 1))
        assert out["trace"] < 1e-12
        assert out["omega_rebuilt"] < 1e-10


class TestFrameConstraints:
    def test_cartesian_frame_is_teleparallel(self, minkowski):
        report = inertial_constraint_check(minkowski.geometry(np.zeros(4), 1))
        assert report.teleparallel == 0.0
        assert report.curvature == 0.0

    def test_static_frame_accelerates(self, schwarzschild, static_point):
        report = inertial_constraint_check(schwarzschild.geometry(static_point, 1))
        r = static_point[1]
        assert report.geodesic == pytest.approx(1.0 / (r ** 2 * np.sqrt(1 - 2 / r)))
        assert report.ricci_e0 < 1e-12

    def test_pauli_constraint_needs_flat_frame(self, schwarzschild, static_point, minkowski):
        assert np.max(pauli_constraint_residual(schwarzschild.geometry(static_point, 0))) > 1e-3
        assert np.max(pauli_constraint_residual(minkowski.geometry(np.zeros(4), 0))) == 0.0

    def test_gamma_identity(self, schwarzschild, static_point, rng):
        geometry = schwarzschild.geometry(static_point, 0)
        assert gamma_identity_residual(geometry) < 1e-12
        assert gamma_identity_residual(geometry, nonmetric_perturbation(rng)) > 1e-3


def test_fermi_transport_along_infall(infalling):
    start = np.array([0.0, 10.0, 1.0, 0.5])
    result = fermi_transport_oracle(infalling, start, 2.0, convergence=1e-8)
    assert result.endpoint[1] < start[1]
    assert result.residual < 1e-6
