"""
Geometry suite: metric, Levi-Civita connection, curvature and frame kinematics
"""
import logging
from typing import Dict, List, Optional

import numpy as np

from app.core import algebra as ga
from app.core.errors import ChartDomainError
from app.core.geometry import ETA, ObserverField, frame_kinematics
from app.core.tetrads import boost_tetrad
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)


def _relative(difference: np.ndarray, reference: np.ndarray) -> float:
    return ga.residual(difference) / max(1.0, ga.residual(reference))


class GeometrySuiteService(SuiteService):
    """Service for the chart geometry of a tetrad"""

    name = "geometry"
    tolerance_name = "geometry"
    _boosted = None

    def kretschmann_oracle(self, x: np.ndarray) -> Optional[float]:
        """Closed-form Kretschmann scalar of the builtin families, None for custom tetrads"""
        family = self.tetrad.family
        if family == "minkowski":
            return 0.0
        if family == "schwarzschild":
            m = self.tetrad.params["m"]
            return 48.0 * m ** 2 / self.tetrad.chart.areal_radius(x) ** 6
        if family == "einstein_de_sitter":
            return 80.0 / (27.0 * x[0] ** 4)
        return None

    def _static_oracles(self, geometry, kinematics) -> Dict[str, float]:
        if self.tetrad.family != "schwarzschild" or self.tetrad.variant not in ("static", "rotated"):
            return {}
        m = self.tetrad.params["m"]
        r = geometry.x[1]
        expected = m / (r ** 2 * np.sqrt(1.0 - 2.0 * m / r))
        out = {"acceleration": abs(kinematics.acceleration_magnitude - expected) / expected}
        if self.tetrad.variant == "static":
            # omega_0^{01} = -omega_0^{10}
            out["static_connection"] = abs(geometry.omega_tangent.value[0, 3] + expected) / expected
        return out

    def _observer_routes(self, geometry, x: np.ndarray) -> float:
        """Kinematics of the boosted e_0 as a velocity field against the boosted frame's own e_0"""
        field = frame_kinematics(geometry, ObserverField(self._boosted))
        frame = frame_kinematics(self._boosted.geometry(x, 1))
        return max(
            _relative(field.acceleration - frame.acceleration, frame.acceleration),
            _relative(field.rotation - frame.rotation, frame.rotation),
            _relative(field.shear - frame.shear, frame.shear),
            abs(field.expansion - frame.expansion) / max(1.0, abs(frame.expansion)),
        )

    def _fd_convergence(self, x: np.ndarray) -> Dict[str, float]:
        results = [self.tetrad.fd_convergence(x, order, self.settings.fd_convergence_step) for order in (1, 2)]
        measured = [r for r in results if r.coarse_error > 1e-8]
        if not measured:
            raise ChartDomainError(f"{self.metric}: central differences are exact at {x.tolist()}")
        return {"fd_rate": max(abs(r.rate - 2.0) for r in measured)}

    def _evaluate(self, x: np.ndarray) -> Dict[str, float]:
        geometry = self.tetrad.geometry(x, 1)
        h = geometry.h.value
        g = geometry.metric.value
        out: Dict[str, float] = {}

        vectors = ga.vector(h.T)
        products = ga.scalar_product(vectors[:, None, :], vectors[None, :, :])
        out["metric_product"] = max(_relative(products - g, g),
                                    _relative(geometry.metric_inverse.value @ g - np.eye(4), g))

        gamma = geometry.christoffel.value
        out["christoffel_routes"] = _relative(geometry.christoffel_from_frame.value - gamma, gamma)
        out["christoffel_symmetry"] = _relative(gamma - np.swapaxes(gamma, -1, -2), gamma)

        low = geometry.connection_low.value
        out["metricity"] = _relative(low + np.swapaxes(low, -1, -2), low)
        conn = geometry.connection.value
        commutator = np.einsum("bac->abc", conn) - np.einsum("cab->abc", conn)
        out["torsion_free"] = _relative(commutator - geometry.anholonomy.value, conn)

        riemann = geometry.riemann_mixed.value
        cyclic = riemann + np.einsum("acdb->abcd", riemann) + np.einsum("adbc->abcd", riemann)
        out["bianchi_cyclic"] = _relative(cyclic, riemann)
        out["riemann_routes"] = _relative(geometry.riemann_from_christoffel() - riemann, riemann)

        lowered = geometry.riemann.value * (ETA[:, None, None, None] * ETA[None, :, None, None])
        out["riemann_symmetries"] = max(
            _relative(lowered + np.swapaxes(lowered, 0, 1), lowered),
            _relative(lowered - lowered.transpose(2, 3, 0, 1), lowered),
        )

        kretschmann = geometry.kretschmann
        expected = self.kretschmann_oracle(x)
        if expected is not None:
            scale = abs(expected) if expected else 1.0
            out["kretschmann"] = abs(kretschmann - expected) / scale

        kinematics = frame_kinematics(geometry)
        out["kinematics_reassembly"] = kinematics.reassembly_residual
        out["kinematics_orthogonality"] = kinematics.orthogonality_residual
        if self.tetrad.family == "einstein_de_sitter":
            t = x[0]
            out["expansion"] = abs(kinematics.expansion - 2.0 / t) * t
            out["comoving_rest"] = t * max(float(np.max(np.abs(kinematics.acceleration))),
                                           float(np.max(np.abs(kinematics.rotation))),
                                           float(np.max(np.abs(kinematics.shear))))
        if self._boosted is not None:
            out["observer_routes"] = self._observer_routes(geometry, x)
        out.update(self._static_oracles(geometry, kinematics))
        return out

    def collect(self) -> List[CheckRecord]:
        checks = [
            Check("geometry.metric_product", "g = h^T eta h and g g^-1 = 1", "metric_product"),
            Check("geometry.christoffel_routes", "Christoffel symbols from the frame and from the metric",
                  "christoffel_routes"),
            Check("geometry.christoffel_symmetry", "Christoffel symbols symmetric in the lower pair",
                  "christoffel_symmetry"),
            Check("geometry.metricity", "connection coefficients antisymmetric when lowered", "metricity"),
            Check("geometry.torsion_free", "D_b e_c - D_c e_b = [e_b, e_c]", "torsion_free"),
            Check("geometry.bianchi_cyclic", "first Bianchi identity R^a_[bcd] = 0", "bianchi_cyclic"),
            Check("geometry.riemann_routes", "Riemann tensor from curvature bivectors and from Christoffel symbols",
                  "riemann_routes"),
            Check("geometry.riemann_symmetries", "pair antisymmetry and pair exchange of R_abcd",
                  "riemann_symmetries"),
            Check("geometry.kinematics_reassembly", "grad Z rebuilt from acceleration, rotation, shear, expansion",
                  "kinematics_reassembly"),
            Check("geometry.kinematics_orthogonality", "kinematic parts orthogonal to Z",
                  "kinematics_orthogonality"),
        ]
        if self.tetrad.family != "custom":
            checks.append(Check("geometry.kretschmann", "Kretschmann scalar against its closed form", "kretschmann"))
        if self.tetrad.family == "einstein_de_sitter":
            checks.append(Check("geometry.expansion", "comoving expansion equals 2 / t", "expansion"))
            checks.append(Check("geometry.comoving_rest", "comoving observers have no acceleration, rotation or shear",
                                "comoving_rest"))
        if self.tetrad.family == "schwarzschild" and self.tetrad.variant in ("static", "rotated"):
            checks.append(Check("geometry.static_acceleration", "static observers accelerate at m / (r^2 sqrt f)",
                                "acceleration"))
        if self.tetrad.family == "schwarzschild" and self.tetrad.variant == "static":
            checks.append(Check("geometry.static_connection", "omega_0^{10} = m / (r^2 sqrt f) on the static frame",
                                "static_connection"))
        rapidity = self.tetrad.chart.gauge_rapidity
        if rapidity is not None:
            self._boosted = boost_tetrad(self.tetrad, rapidity)
            checks.append(Check("geometry.observer_routes",
                                "kinematics of a boosted observer field match those of the boosted frame",
                                "observer_routes"))
        self.measure(checks, self._evaluate, self.sample_points())
        convergence = Check("geometry.fd_convergence", "central differences converge at second order when h halves",
                            "fd_rate", threshold=self.settings.fd_rate_tolerance,
                            details={"fd_step": self.settings.fd_convergence_step})
        self.measure([convergence], self._fd_convergence, self.sample_points(False))
        return self.records
