"""
Constraints suite: conditions on the frame that a spinor structure would impose, and the Fermi transport oracle
"""
import logging
from typing import Dict, List

import numpy as np

from app.core import algebra as ga
from app.core.dirac import matter_trace
from app.core.einstein import matter_jet
from app.core.geometry import frame_kinematics
from app.core.spinor_connection import (
    fermi_transport_oracle, gamma_identity_residual, inertial_constraint_check, nonmetric_perturbation,
    pauli_constraint_residual
)
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)


class ConstraintsSuiteService(SuiteService):
    """Service for frame constraints: inertial frames, the Pauli constraint and the gamma identity"""

    name = "constraints"
    tolerance_name = "constraint"

    def _evaluate(self, x: np.ndarray) -> Dict[str, float]:
        geometry = self.tetrad.geometry(x, 1)
        report = inertial_constraint_check(geometry)
        kinematics = frame_kinematics(geometry)

        matter = matter_jet(self.tetrad, x, 0).value
        trace = matter_trace(self.tetrad)(x)
        reversed_row = matter[0] - 0.5 * trace * np.diag(ga.ETA)[0]
        ricci_row = geometry.ricci.value[0]

        motion = max(kinematics.acceleration_magnitude, abs(kinematics.expansion) / 3.0,
                     float(np.max(np.abs(kinematics.rotation))), float(np.max(np.abs(kinematics.shear))))
        conn = geometry.connection.value
        return {
            "ricci_e0": report.ricci_e0,
            "ricci_e0_witness": float(np.max(np.abs(reversed_row))),
            "ricci_matter": float(np.max(np.abs(ricci_row - reversed_row))) / max(1.0, float(np.max(np.abs(matter)))),
            "d_e0": report.d_e0,
            "d_e0_witness": motion,
            "geodesic": report.geodesic,
            "fermi": report.fermi,
            "acceleration": kinematics.acceleration_magnitude,
            "teleparallel": report.teleparallel,
            "pauli": float(np.max(pauli_constraint_residual(geometry))),
            "connection_size": float(np.max(np.abs(conn))),
            "gamma_identity": gamma_identity_residual(geometry),
            "gamma_nonmetric": gamma_identity_residual(geometry, nonmetric_perturbation(self.rng)),
        }

    def _transport(self) -> None:
        check = Check("constraints.fermi_transport", "parallel transport along e_0 reproduces the tetrad",
                      "transport", tolerance="transport")
        if not self.tetrad.chart.fermi_reference:
            self.skip([check], f"{self.metric} is not a freely falling reference frame")
            return
        m = float(self.tetrad.params.get("m", 1.0))
        start = np.array([0.0, 10.0 * m, 1.0, 0.5])

        def evaluate(_) -> Dict[str, float]:
            result = fermi_transport_oracle(self.tetrad, start, self.settings.fermi_duration,
                                            self.settings.fermi_convergence)
            check.details.update({"steps": result.steps, "endpoint": result.endpoint.tolist(),
                                  "duration": self.settings.fermi_duration})
            return {"transport": result.residual}

        self.measure([check], evaluate)

    def collect(self) -> List[CheckRecord]:
        teleparallel = "holds" if self.tetrad.chart.teleparallel_reference else "fails"
        checks = [
            Check("constraints.ricci_e0", "Ric(e_0, .) = 0", "ricci_e0", witness="ricci_e0_witness"),
            Check("constraints.ricci_matter", "Ric(e_0, .) = T(e_0, .) - T eta(e_0, .) / 2", "ricci_matter"),
            Check("constraints.d_e0", "D e_0 = 0", "d_e0", witness="d_e0_witness"),
            Check("constraints.geodesic", "D_{e_0} e_0 = 0", "geodesic", witness="acceleration"),
            Check("constraints.fermi", "D_{e_0} e_i = 0", "fermi", witness="acceleration"),
            Check("constraints.teleparallel", "the connection vanishes in this frame", "teleparallel",
                  expect=teleparallel),
            Check("constraints.pauli", "D(e_i e_0) = 0", "pauli", witness="connection_size"),
            Check("constraints.gamma_identity", "conn[a, c, b] e_c = [omega_a, e_b] / 2", "gamma_identity"),
            Check("constraints.gamma_nonmetric", "gamma identity for a non-metric connection", "gamma_nonmetric",
                  expect="fails"),
        ]
        self.measure(checks, self._evaluate, self.sample_points())
        self._transport()
        return self.records
