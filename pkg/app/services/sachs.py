"""
Sachs suite: paravector fields, their total derivative and the Sachs form of Einstein's equations
"""
import logging
from typing import Dict, List

import numpy as np

from app.core import algebra as ga
from app.core import pauli
from app.core.einstein import sachs_equations, sachs_field_grades
from app.core.spinor_connection import (
    boost_antisymmetric_part, paravector_contractions, paravector_product_rule, q_tensor_decomposition,
    sachs_total_derivative, sachs_total_derivative_undaggered, spatial_antisymmetric_part
)
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)


class SachsSuiteService(SuiteService):
    """Service for the paravector calculus and the Sachs field equations"""

    name = "sachs"
    tolerance_name = "sachs"

    def _paravectors(self, geometry) -> Dict[str, float]:
        undaggered, undaggered_witness = sachs_total_derivative_undaggered(geometry)
        rule = paravector_product_rule(geometry)
        contractions = paravector_contractions(geometry)

        h = geometry.h.value
        metric = geometry.metric.value
        symmetric, antisymmetric = q_tensor_decomposition(geometry)
        boost = boost_antisymmetric_part(h)
        spatial = spatial_antisymmetric_part(h)
        return {
            "total_derivative": float(np.max(np.abs(sachs_total_derivative(geometry)))),
            "total_derivative_undaggered": undaggered,
            "total_derivative_undaggered_witness": undaggered_witness,
            "frame_form": rule["frame_form"],
            "product_rule": rule["product_rule"],
            "product_rule_witness": rule["witness"],
            "trace": max(contractions["trace"], contractions["trace_matrix"]),
            "sandwich": contractions["sandwich"],
            "omega_rebuilt": contractions["omega_rebuilt"],
            "omega_literal": contractions["omega_literal"],
            "omega_literal_witness": contractions["omega_literal_witness"],
            "q_symmetric": ga.residual(symmetric + metric[..., None] * pauli.ONE),
            "q_antisymmetric": ga.residual(antisymmetric - boost - spatial),
            "q_spatial_only": ga.residual(antisymmetric - spatial),
            "q_boost_part": ga.residual(boost),
        }

    def _evaluate(self, x: np.ndarray) -> Dict[str, float]:
        geometry = self.tetrad.geometry(x, 2)
        out = self._paravectors(geometry)
        out.update(sachs_equations(geometry, self.tetrad))
        return out

    def collect(self) -> List[CheckRecord]:
        checks = [
            Check("sachs.total_derivative", "D^S q_mu vanishes in the matrix picture", "total_derivative"),
            Check("sachs.total_derivative_undaggered", "D^S q_mu with q omega in place of q omega^dagger",
                  "total_derivative_undaggered", witness="total_derivative_undaggered_witness"),
            Check("sachs.frame_form", "Sachs rule on q_mu equals (D e_mu) e_0", "frame_form"),
            Check("sachs.product_rule", "Sachs rule on q_mu as the full product rule", "product_rule",
                  witness="product_rule_witness"),
            Check("sachs.trace", "q^mu q-check_mu = -4", "trace"),
            Check("sachs.sandwich", "q^mu omega_rho q-check_mu vanishes", "sandwich"),
            Check("sachs.omega_rebuilt", "omega_rho = (d_rho q^mu + Gamma^mu_{rho tau} q^tau) q-check_mu / 2",
                  "omega_rebuilt"),
            Check("sachs.omega_literal", "omega from the q fields in the uncorrected ordering", "omega_literal",
                  witness="omega_literal_witness"),
            Check("sachs.q_symmetric", "symmetric part of q_mu q-check_nu is -g_mu_nu", "q_symmetric"),
            Check("sachs.q_antisymmetric", "antisymmetric part of q_mu q-check_nu is boost plus spatial terms",
                  "q_antisymmetric"),
            Check("sachs.q_spatial_only", "antisymmetric part of q_mu q-check_nu from spatial legs alone",
                  "q_spatial_only", witness="q_boost_part"),
            Check("sachs.equation", "R_rl q^l + q^l R_rl^dagger - R q_rho = 2 T_rho", "equation"),
            Check("sachs.checked_form", "reversed Sachs equation in checked paravectors", "checked_form"),
            Check("sachs.literal", "Sachs equation with +R q_rho", "literal", witness="literal_witness"),
            Check("sachs.field", "Sachs field strength from curvature and from matter", "field"),
            Check("sachs.divergence", "D_rho F^rho_gamma equals the Sachs current", "divergence"),
            Check("sachs.divergence_literal", "Sachs divergence with the +R field", "divergence_literal",
                  witness="divergence_literal_witness"),
            Check("sachs.field_type", "Sachs field strength is a scalar", "non_scalar_part", witness="bivector_part"),
        ]
        points = self.sample_points()
        try:
            grades = sachs_field_grades(self.tetrad.geometry(points[-1], 2), self.tetrad)
            checks[-1].details["field_grades"] = list(grades)
        except Exception as e:
            logger.debug("sachs: no field grades at %s: %s", points[-1].tolist(), str(e))
        self.measure(checks, self._evaluate, points)
        return self.records
