"""
Spinor suite: the Pauli representation, ideal spinors and spinor covariant derivatives
"""
import logging
from typing import Dict, List

import numpy as np

from app.core import algebra as ga
from app.core import pauli
from app.core.fields import PolynomialField
from app.core.spinor_connection import (
    dotted_chain_residual, epsilon_hermitian_residual, epsilon_transpose_residual, idempotent_derivative_residual,
    pauli_kernel_residual, pauli_leibniz_residuals, spinor_omega
)
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)

EVEN = (ga.GRADE % 2 == 0).astype(float)


class SpinorSuiteService(SuiteService):
    """Service for the matrix representation and the spinor connection"""

    name = "spinor"
    tolerance_name = "representation"

    def _representation(self) -> Dict[str, float]:
        rng = self.rng
        count = self.algebra_samples
        a = rng.normal(size=(count, ga.DIM)) * EVEN
        b = rng.normal(size=(count, ga.DIM)) * EVEN
        product = pauli.to_matrix(ga.geometric_product(a, b))
        scale = max(1.0, float(np.max(np.abs(product))))
        out = {"homomorphism": float(np.max(np.abs(product - pauli.to_matrix(a) @ pauli.to_matrix(b)))) / scale}

        x = rng.normal(size=(count, 2, 2)) + 1j * rng.normal(size=(count, 2, 2))
        out["matrix_total"] = float(np.max(np.abs(pauli.to_matrix(pauli.from_matrix(x)) - x)))

        rebuilt = pauli.ideal_reconstruction()
        expected = {"sigma_0": pauli.ONE, "sigma_1": -pauli.SIGMA[0], "sigma_2": -pauli.SIGMA[1],
                    "sigma_3": -pauli.SIGMA[2]}
        out["sigma_reconstruction"] = max(ga.residual(rebuilt[k] - expected[k]) for k in expected)

        phi = rng.normal(size=(count, 2)) + 1j * rng.normal(size=(count, 2))
        identity = pauli.EPSILON @ pauli.EPSILON.T
        out["epsilon_kronecker"] = max(
            float(np.max(np.abs(pauli.raise_index(pauli.lower_index(phi)) - phi))),
            float(np.max(np.abs(identity - np.eye(2)))),
            float(np.max(np.abs(pauli.EPSILON - 1j * pauli.PAULI_MATRICES[2]))),
        )

        e = pauli.idempotent()
        s1, s2 = pauli.ideal_basis()
        out["idempotent"] = max(ga.residual(ga.geometric_product(e, e) - e),
                                float(np.max(np.abs(pauli.to_matrix(e) - np.diag([1.0, 0.0])))),
                                ga.residual(ga.geometric_product(s2, e) - s2),
                                ga.residual(ga.geometric_product(s1, e) - s1))

        column = rng.normal(size=2) + 1j * rng.normal(size=2)
        spinor = pauli.IdealSpinor(column)
        out["ideal_spinor"] = float(np.max(np.abs(pauli.IdealSpinor.from_multivector(spinor.multivector()).column
                                                  - column)))

        i, j, k = (pauli.quaternion_embed(*row) for row in np.eye(4)[1:])
        minus_one = -pauli.ONE
        out["quaternions"] = max(ga.residual(ga.geometric_product(q, q) - minus_one) for q in (i, j, k))
        out["quaternions"] = max(out["quaternions"],
                                 ga.residual(ga.geometric_product(ga.geometric_product(i, j), k) - minus_one))

        xi = rng.normal(size=2) + 1j * rng.normal(size=2)
        out["dotted"] = float(np.max(np.abs(pauli.to_matrix(pauli.iota(phi[0], pauli.dotted(xi)))
                                            - np.outer(phi[0], np.conj(xi) @ pauli.EPSILON))))

        _, _, product = pauli.paravector_closure_witness()
        out["paravector_closure"] = ga.residual(product * ~np.isin(np.arange(ga.DIM), [0, 3, 5, 9]))
        out["quaternion_paravector"] = pauli.quaternion_span_residual(pauli.SIGMA[0])
        return out

    def _connection(self, x: np.ndarray) -> Dict[str, float]:
        geometry = self.tetrad.geometry(x, 1)
        coeffs = spinor_omega(geometry)
        hermitian, witness = epsilon_hermitian_residual(coeffs)
        leibniz, chain = pauli_leibniz_residuals(coeffs, self.rng)
        field = PolynomialField((ga.DIM,), self.rng, center=x, scale=0.3, mask=EVEN).jet(x, 1)
        return {
            "epsilon_transpose": epsilon_transpose_residual(coeffs),
            "epsilon_hermitian": hermitian,
            "epsilon_hermitian_witness": witness,
            "dotted_chain": dotted_chain_residual(coeffs, self.rng),
            "pauli_leibniz": leibniz,
            "pauli_leibniz_chain": chain,
            "pauli_kernel": pauli_kernel_residual(geometry, field),
            "idempotent_derivative": idempotent_derivative_residual(geometry),
        }

    def collect(self) -> List[CheckRecord]:
        representation = [
            Check("spinor.homomorphism", "to_matrix is an algebra homomorphism on even multivectors", "homomorphism"),
            Check("spinor.matrix_total", "from_matrix is total on C(2)", "matrix_total"),
            Check("spinor.sigma_reconstruction", "sigma_0..sigma_3 rebuilt from ideal spinor products",
                  "sigma_reconstruction"),
            Check("spinor.epsilon_kronecker", "eps raises and lowers spinor indices", "epsilon_kronecker"),
            Check("spinor.idempotent", "primitive idempotent and the ideal basis", "idempotent"),
            Check("spinor.ideal_spinor", "ideal spinor survives the trip through the kernel", "ideal_spinor"),
            Check("spinor.quaternions", "quaternion units square to -1 and ijk = -1", "quaternions"),
            Check("spinor.dotted_product", "iota(phi, xi-dot) is the matrix phi conj(xi) eps", "dotted"),
            Check("spinor.paravector_closure", "paravectors closed under the product", "paravector_closure",
                  expect="fails"),
            Check("spinor.quaternion_paravector", "quaternion image contains the paravectors",
                  "quaternion_paravector", expect="fails"),
        ]
        self.measure(representation, lambda _: self._representation(), details={"samples": self.algebra_samples})

        tolerance = "geometry"
        connection = [
            Check("spinor.epsilon_transpose", "eps Omega^T eps = Omega", "epsilon_transpose", tolerance=tolerance),
            Check("spinor.epsilon_hermitian", "eps Omega^dagger eps = Omega", "epsilon_hermitian",
                  witness="epsilon_hermitian_witness", tolerance=tolerance),
            Check("spinor.dotted_chain", "dotted derivative by conjugating the undotted one", "dotted_chain",
                  tolerance=tolerance),
            Check("spinor.pauli_leibniz", "Leibniz rule on phi xi-dot with the -xi-dot Omega / 2 rule",
                  "pauli_leibniz", tolerance=tolerance),
            Check("spinor.pauli_leibniz_conjugation", "Leibniz rule on phi xi-dot with the conjugation rule",
                  "pauli_leibniz_chain", witness="epsilon_hermitian_witness", tolerance=tolerance),
            Check("spinor.pauli_kernel", "matrix and kernel covariant derivatives of an even field agree",
                  "pauli_kernel", tolerance=tolerance),
            Check("spinor.idempotent_derivative", "derivative of the idempotent in both pictures",
                  "idempotent_derivative", tolerance=tolerance),
        ]
        self.measure(connection, self._connection, self.sample_points())
        return self.records
