"""
Energy suite: superpotential form of Einstein's equations, gauge dependence and the mass integral
"""
import logging
from typing import Dict, List

import numpy as np

from app.core.einstein import gauge_dependence, superpotential_identities
from app.core.errors import ChartDomainError
from app.core.mass import companion_charts, mass_integral
from app.core.tetrads import boost_tetrad
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)


class EnergySuiteService(SuiteService):
    """Service for superpotentials, pseudo-energy and surface mass integrals"""

    name = "energy"
    tolerance_name = "energy"

    def _superpotentials(self) -> None:
        checks = [
            Check("energy.superpotential_identity", "G3 = -d star S - star t", "identity"),
            Check("energy.einstein_form", "-d star S = T3 + star t", "einstein_form"),
            Check("energy.einstein_hodge", "G3 = -star G", "hodge"),
            Check("energy.closedness", "d(T3 + star t) = 0", "closedness", tolerance="closedness"),
            Check("energy.bianchi", "D^c G3 = 0", "bianchi"),
            Check("energy.contraction", "star S_c = [omega_ab _| (theta^a ^ theta^b ^ theta_c)] theta5 / 2",
                  "contraction"),
        ]
        self.measure(checks, lambda x: superpotential_identities(self.tetrad, x), self.sample_points())

    def _gauge(self) -> None:
        einstein = Check("energy.gauge_einstein", "Einstein 3-form transforms tensorially under a local boost",
                         "einstein")
        pseudo_energy = Check("energy.gauge_pseudo_energy",
                              "pseudo-energy 3-form transforms tensorially under a local boost", "pseudo_energy",
                              threshold=self.settings.gauge_dependence_threshold, expect="fails")
        rapidity = self.tetrad.chart.gauge_rapidity
        if rapidity is None:
            self.skip([einstein, pseudo_energy], f"{self.metric} has no local boost to compare against")
            return
        boosted = boost_tetrad(self.tetrad, rapidity)
        strong = self.tetrad.chart.strong_field_point
        point = np.asarray(strong, dtype=float) if strong is not None else self.sample_points(False)[0]
        for check in (einstein, pseudo_energy):
            check.details["rapidity"] = str(rapidity)

        def compare(x: np.ndarray) -> Dict[str, float]:
            values = gauge_dependence(self.tetrad, boosted, x)
            if values["pseudo_energy_baseline"] < 1e-12:
                raise ChartDomainError(f"{self.metric}: the pseudo-energy vanishes in both frames at {x.tolist()}")
            return values

        self.measure([einstein], lambda x: gauge_dependence(self.tetrad, boosted, x), [point])
        self.measure([pseudo_energy], compare, [point])

    def _mass(self) -> None:
        family = self.tetrad.family
        m = float(self.tetrad.params.get("m", 0.0))
        if family == "schwarzschild":
            checks = [
                Check("energy.mass_isotropic", "surface mass integral in isotropic coordinates equals m",
                      "isotropic", tolerance="mass"),
                Check("energy.mass_alternative", "surface mass integral in the alternative chart equals m",
                      "alternative", threshold=self.settings.chart_dependence_threshold, expect="fails"),
            ]
        elif family == "minkowski":
            checks = [Check("energy.mass_flat", "surface mass integral vanishes on flat space", "cartesian",
                            tolerance="mass_flat")]
        else:
            checks = [Check("energy.mass", "surface mass integral", self.tetrad.variant, tolerance="mass")]
        by_key = {check.key: check for check in checks}

        def evaluate(_) -> Dict[str, float]:
            out = {}
            for key, chart in companion_charts(self.tetrad).items():
                estimate = mass_integral(chart, self.settings.mass_radii, self.settings.mass_quadrature_start,
                                         self.settings.mass_quadrature_max, self.settings.mass_convergence)
                out[key] = abs(estimate.value - m)
                if key in by_key:
                    by_key[key].details.update({
                        "mass": estimate.value,
                        "radii": estimate.radii,
                        "per_radius": estimate.per_radius,
                        "quadrature_orders": estimate.quadrature_orders,
                        "superpotential": estimate.superpotential,
                    })
            return out

        self.measure(checks, evaluate)

    def collect(self) -> List[CheckRecord]:
        self._superpotentials()
        self._gauge()
        self._mass()
        return self.records
