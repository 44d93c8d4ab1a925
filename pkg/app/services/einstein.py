"""
Einstein suite: Ricci and Einstein 1-forms, the gauge current and the Maxwell-like dressing
"""
import logging
from typing import Dict, List

import numpy as np

from app.core import algebra as ga
from app.core.dirac import matter_trace
from app.core.einstein import dressings_cross_check, gauge_current, matter_jet, maxwell_like, ricci_vector_residual
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)


class EinsteinSuiteService(SuiteService):
    """Service for the 1-form and gauge dressings of Einstein's equations"""

    name = "einstein"
    tolerance_name = "einstein"

    def _evaluate(self, x: np.ndarray) -> Dict[str, float]:
        geometry = self.tetrad.geometry(x, 2)
        einstein = geometry.einstein.value
        matter = matter_jet(self.tetrad, x, 0).value
        scale = max(1.0, ga.residual(einstein))
        curvature_size = ga.residual(geometry.curvature_coordinate.value)

        current = gauge_current(geometry)
        out = {
            "ricci_vector": ricci_vector_residual(geometry),
            "einstein_matter": ga.residual(einstein - matter) / scale,
            "current_routes": ga.residual(current["direct"] - current["hodge"]),
            "current_vacuum": ga.residual(current["direct"]),
            "matter_size": ga.residual(matter),
            "current_literal": ga.residual(current["literal"] - current["hodge"]),
            "curvature_size": curvature_size,
        }

        fields = maxwell_like(geometry, self.tetrad)
        tensorial = maxwell_like(geometry, self.tetrad, tensorial=True)
        out.update({
            "maxwell_field": fields["field"],
            "maxwell_scalar_part": fields["scalar_part"],
            "matter_trace": abs(matter_trace(self.tetrad)(x)),
            "maxwell_equation": fields["equation"],
            "maxwell_equation_tensorial": tensorial["equation"],
            "vacuum_identity": fields["vacuum_identity"],
            "vacuum_witness": fields["vacuum_witness"],
        })

        dressings = dressings_cross_check(geometry, self.tetrad)
        out["dressing_three_form"] = dressings["three_form"]
        out["dressing_sachs"] = dressings["sachs"]
        return out

    def collect(self) -> List[CheckRecord]:
        checks = [
            Check("einstein.ricci_vector", "R_a = -e^b _| R_ab matches Ric_ab e^b", "ricci_vector"),
            Check("einstein.current_routes", "gauge current by direct divergence and by -star D^c star R",
                  "current_routes"),
            Check("einstein.current_vacuum", "gauge current vanishes", "current_vacuum", witness="matter_size"),
            Check("einstein.current_literal", "gauge current as d_mu R^mu_nu + [omega_mu, R^mu_nu]",
                  "current_literal", witness="curvature_size"),
            Check("einstein.maxwell_field", "[R_a, e_b] - R e_a ^ e_b = T_a e_b - e_b T_a", "maxwell_field"),
            Check("einstein.maxwell_scalar_part", "Maxwell-like field without its R e_a ^ e_b part",
                  "maxwell_scalar_part", witness="matter_trace"),
            Check("einstein.maxwell_equation", "D_a F^a_b equals the matter current", "maxwell_equation"),
            Check("einstein.maxwell_equation_tensorial", "Maxwell-like equation with frame-index terms",
                  "maxwell_equation_tensorial"),
            Check("einstein.vacuum_identity", "(e^c _| R_ac) e_b = (e^c _| R_bc) e_a", "vacuum_identity",
                  witness="vacuum_witness"),
            Check("einstein.dressing_three_form", "Einstein 3-form equals -star of the Einstein 1-form",
                  "dressing_three_form"),
            Check("einstein.dressing_sachs", "Sachs dressing reproduces G_rho^mu q_mu", "dressing_sachs"),
        ]
        matter = Check("einstein.einstein_matter", "G_ab = T_ab for the matter model", "einstein_matter")
        if self.tetrad.has_matter_model:
            checks.append(matter)
        else:
            self.skip([matter], "no matter model: T is taken from G")
        self.measure(checks, self._evaluate, self.sample_points())
        return self.records
