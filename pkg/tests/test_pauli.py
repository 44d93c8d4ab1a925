"""
Tests for the Pauli representation, ideal spinors and spinor index gymnastics
"""
import numpy as np
import pytest

from app.core import algebra as ga
from app.core import pauli
from app.core.errors import DomainError


def random_even(rng, count=None):
    shape = (ga.DIM,) if count is None else (count, ga.DIM)
    return ga.even_part(rng.normal(size=shape))


class TestMatrixImage:
    def test_sigma_maps_to_pauli_matrices(self):
        for k in range(3):
            assert np.allclose(pauli.to_matrix(pauli.SIGMA[k]), pauli.PAULI_MATRICES[k + 1])

    def test_pseudoscalar_maps_to_i(self):
        assert np.allclose(pauli.to_matrix(pauli.I5), 1j * np.eye(2))

    def test_homomorphism(self, rng):
        a, b = random_even(rng, 50), random_even(rng, 50)
        left = pauli.to_matrix(ga.geometric_product(a, b))
        right = pauli.to_matrix(a) @ pauli.to_matrix(b)
        assert np.allclose(left, right)

    def test_from_matrix_inverts(self, rng):
        a = random_even(rng)
        assert ga.residual(pauli.from_matrix(pauli.to_matrix(a)) - a) < 1e-12

    def test_hermitian_conjugate_is_dagger(self, rng):
        a = random_even(rng)
        assert np.allclose(pauli.to_matrix(pauli.hermitian_conjugate(a)), pauli.to_matrix(a).conj().T)

    def test_odd_input_rejected(self):
        with pytest.raises(DomainError):
            pauli.to_matrix(ga.basis(1))


class TestIdealSpinors:
    def test_idempotent(self):
        e = pauli.idempotent()
        assert ga.residual(ga.geometric_product(e, e) - e) < 1e-12

    def test_ideal_spinor_round_trip(self):
        spinor = pauli.IdealSpinor([1 + 2j, -0.5j])
        again = pauli.IdealSpinor.from_multivector(spinor.multivector())
        assert np.allclose(again.column, spinor.column)

    def test_outside_ideal_rejected(self):
        with pytest.raises(DomainError):
            pauli.IdealSpinor.from_multivector(pauli.ONE)

    def test_sigma_reconstruction(self):
        rebuilt = pauli.ideal_reconstruction()
        assert ga.residual(rebuilt["sigma_0"] - pauli.ONE) < 1e-12
        for k in (1, 2, 3):
            assert ga.residual(rebuilt[f"sigma_{k}"] + pauli.SIGMA[k - 1]) < 1e-12

    def test_raise_undoes_lower(self):
        phi = np.array([0.3 - 1j, 2.0 + 0.5j])
        assert np.allclose(pauli.raise_index(pauli.lower_index(phi)), phi)


class TestQuaternions:
    def test_hamilton_relations(self):
        i = pauli.quaternion_embed(0, 1, 0, 0)
        j = pauli.quaternion_embed(0, 0, 1, 0)
        k = pauli.quaternion_embed(0, 0, 0, 1)
        for unit in (i, j, k):
            assert ga.residual(ga.geometric_product(unit, unit) + pauli.ONE) < 1e-12
        assert ga.residual(ga.geometric_product(i, j) - k) < 1e-12

    def test_paravectors_do_not_close(self):
        _, _, product = pauli.paravector_closure_witness()
        assert ga.residual(product - pauli.I_SIGMA[2]) < 1e-12
        assert pauli.quaternion_span_residual(pauli.SIGMA[0]) == pytest.approx(1.0)
        assert pauli.quaternion_span_residual(pauli.quaternion_embed(1, 2, 3, 4)) < 1e-12
