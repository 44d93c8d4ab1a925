"""
Dirac suite: the Dirac operator on multiform fields, wave equations of the tetrad and Maxwell's equations
"""
import logging
from typing import Dict, List, Tuple

import numpy as np
import sympy

from app.core import algebra as ga
from app.core.dirac import (
    MultiformField, codifferential, codifferential_by_hodge, coframe_field, coordinate_coframe_field,
    covariant_derivative, dalembertian, dirac, dirac_squared, dirac_wedge_dirac, exterior, hodge,
    hodge_laplacian, matter_one_forms, matter_trace, maxwell_residuals, random_multiform, ricci_action,
    ricci_one_forms, symbolic_multiform
)
from app.core.tetrads import builtin_spacetime
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)

MAXWELL_CASES = ("plane_wave", "charged_ball", "coulomb")


def _value(field: MultiformField, x: np.ndarray) -> np.ndarray:
    return field.jet(x, 0).value


def _gap(left: np.ndarray, right: np.ndarray) -> float:
    return ga.residual(left - right) / max(1.0, ga.residual(left), ga.residual(right))


class DiracSuiteService(SuiteService):
    """Service for the Dirac operator, the tetrad wave equations and Maxwell's equations"""

    name = "dirac"
    tolerance_name = "dirac"

    def _operators(self, x: np.ndarray) -> Dict[str, float]:
        tetrad = self.tetrad
        field = random_multiform(tetrad, self.rng, x)
        out = {
            "split": _gap(_value(dirac(field), x), _value(exterior(field) - codifferential(field), x)),
            "codifferential_routes": _gap(_value(codifferential(field), x),
                                          _value(codifferential_by_hodge(field), x)),
        }

        hodge_rule = 0.0
        for p in range(5):
            graded = random_multiform(tetrad, self.rng, x, grades=[p])
            left = _value(codifferential(hodge(graded)), x)
            right = (-1.0) ** (p + 1) * _value(hodge(exterior(graded)), x)
            hodge_rule = max(hodge_rule, _gap(left, right))
        out["hodge_codifferential"] = hodge_rule

        squared = _value(dirac_squared(field), x)
        out["laplacian"] = _gap(squared, _value(hodge_laplacian(field), x))
        out["square_split"] = _gap(squared, _value(dalembertian(field), x) + _value(dirac_wedge_dirac(field), x))
        out["hodge_commutes"] = _gap(ga.hodge_star(squared), _value(dirac_squared(hodge(field)), x))
        return out

    def _christoffel_route(self, x: np.ndarray) -> Dict[str, float]:
        tetrad = self.tetrad
        field = random_multiform(tetrad, self.rng, x, grades=[1])
        geometry = tetrad.geometry(x, 1)
        jet = field.jet(x, 1)
        alpha, d_alpha = jet.value[ga.VECTOR_MASKS], jet.parts[1][:, ga.VECTOR_MASKS]
        h, dh = geometry.h.value, geometry.h.parts[1]
        frame = geometry.frame.value
        coordinate = alpha @ h
        d_coordinate = d_alpha @ h + np.einsum("a,nam->nm", alpha, dh)
        nabla = d_coordinate - np.einsum("lnm,l->nm", geometry.christoffel.value, coordinate)
        expected = ga.vector(np.einsum("nb,mc,nm->bc", frame, frame, nabla))
        derivative = _value(covariant_derivative(field), x)

        coframe = _value(covariant_derivative(coframe_field(tetrad)), x)
        return {
            "christoffel_route": _gap(derivative, expected),
            "coframe_derivative": _gap(coframe, ga.vector(-geometry.connection.value)),
        }

    def _waves(self, x: np.ndarray) -> Dict[str, float]:
        tetrad = self.tetrad
        theta = coframe_field(tetrad)
        box = _value(dalembertian(theta), x)
        laplacian = _value(hodge_laplacian(theta), x)
        ricci = _value(ricci_one_forms(tetrad), x)
        reversed_matter = _value(matter_one_forms(tetrad, trace_reversed=True), x)
        trace = matter_trace(tetrad)(x)
        theta_value = _value(theta, x)
        out = {
            "wedge_coframe": _gap(_value(dirac_wedge_dirac(theta), x), -ricci),
            "tetrad_wave": _gap(laplacian - box, -reversed_matter),
            "box_trace": ga.residual(box + trace * theta_value),
            "box_trace_witness": ga.residual(laplacian + ricci + trace * theta_value),
        }

        potential = random_multiform(tetrad, self.rng, x, grades=[1])
        l_a = _value(hodge_laplacian(potential), x)
        box_a = _value(dalembertian(potential), x)
        ric_a = _value(ricci_action(tetrad, potential), x)
        out["potential_wave"] = _gap(l_a, box_a - ric_a)
        out["potential_wave_literal"] = _gap(l_a, box_a + ric_a)
        out["potential_wave_literal_witness"] = 2.0 * ga.residual(ric_a) / max(1.0, ga.residual(l_a))

        if tetrad.chart.harmonic:
            frame = tetrad.geometry(x, 0).frame.value
            coordinate = coordinate_coframe_field(tetrad)
            scalar = float(tetrad.geometry(x, 1).scalar_curvature.value)
            matter = np.einsum("ma,az->mz", frame, _value(matter_one_forms(tetrad), x))
            out["harmonic_wave"] = _gap(_value(dalembertian(coordinate), x) - 0.5 * scalar * _value(coordinate, x),
                                        matter)
        return out

    def _evaluate(self, x: np.ndarray) -> Dict[str, float]:
        out = self._operators(x)
        out.update(self._christoffel_route(x))
        out.update(self._waves(x))
        return out

    # --- Maxwell ---

    def _maxwell_chart(self, chart: str):
        if self.tetrad.variant == chart:
            return self.tetrad
        return builtin_spacetime("minkowski", {}, chart, self.tetrad.provider, self.tetrad.fd_step)

    def maxwell_case(self, case: str) -> Tuple[object, MultiformField, MultiformField]:
        """Tetrad, field strength and current of one of the Maxwell test configurations"""
        if case == "coulomb":
            tetrad = self._maxwell_chart("spherical")
            _, r, _, _ = tetrad.symbols
            field = symbolic_multiform(tetrad, {3: sympy.Rational(1) / r ** 2}, "coulomb")
            return tetrad, field, MultiformField.constant(tetrad, np.zeros(ga.DIM), "J0")
        tetrad = self._maxwell_chart("cartesian")
        t, x, y, z = tetrad.symbols
        if case == "plane_wave":
            wave = sympy.sin(t - x)
            field = symbolic_multiform(tetrad, {5: wave, 6: -wave}, "plane_wave")
            return tetrad, field, MultiformField.constant(tetrad, np.zeros(ga.DIM), "J0")
        density = sympy.Rational(3, 2)
        field = symbolic_multiform(tetrad, {3: density * x / 3, 5: density * y / 3, 9: density * z / 3}, "ball")
        return tetrad, field, MultiformField.constant(tetrad, float(density) * ga.basis(1), "J")

    def _maxwell(self, case: str) -> Dict[str, float]:
        tetrad, field, current = self.maxwell_case(case)
        out: Dict[str, float] = {}
        for x in tetrad.sample_points(self.rng, self.samples):
            closed, sourced, dirac_form, dual = maxwell_residuals(field, current, x)
            out["closed"] = max(out.get("closed", 0.0), closed)
            out["sourced"] = max(out.get("sourced", 0.0), sourced, dirac_form, dual)
        return out

    def _maxwell_checks(self) -> None:
        for case in MAXWELL_CASES:
            checks = [
                Check(f"dirac.maxwell_{case}_closed", f"dF = 0 for the {case.replace('_', ' ')} field", "closed"),
                Check(f"dirac.maxwell_{case}_sourced",
                      f"delta F + J = 0, dirac F = J and d star F + star J = 0 for the {case.replace('_', ' ')} field",
                      "sourced"),
            ]
            if self.tetrad.family != "minkowski":
                self.skip(checks, "Maxwell test fields live on flat space")
                continue
            self.measure(checks, lambda _, case=case: self._maxwell(case), details={"samples": self.samples})

    def collect(self) -> List[CheckRecord]:
        wave = "wave"
        checks = [
            Check("dirac.split", "dirac = d - delta", "split"),
            Check("dirac.codifferential_routes", "delta = -theta^a _| D_a equals the Hodge route",
                  "codifferential_routes"),
            Check("dirac.hodge_codifferential", "delta star A = (-1)^(p+1) star d A", "hodge_codifferential"),
            Check("dirac.laplacian", "dirac^2 = -(d delta + delta d)", "laplacian", tolerance=wave),
            Check("dirac.square_split", "dirac^2 = dirac . dirac + dirac ^ dirac", "square_split", tolerance=wave),
            Check("dirac.hodge_commutes", "star dirac^2 = dirac^2 star", "hodge_commutes", tolerance=wave),
            Check("dirac.christoffel_route", "covariant derivative of a 1-form against the Christoffel route",
                  "christoffel_route"),
            Check("dirac.coframe_derivative", "D_a theta^b = -conn[a, b, c] theta^c", "coframe_derivative"),
            Check("dirac.wedge_coframe", "(dirac ^ dirac) theta^a = -R^a", "wedge_coframe", tolerance=wave),
            Check("dirac.tetrad_wave", "-box theta^a + L theta^a = -(T^a - T theta^a / 2)", "tetrad_wave",
                  tolerance=wave),
            Check("dirac.box_trace", "(box + T) theta^a = 0", "box_trace", witness="box_trace_witness", tolerance=wave),
            Check("dirac.potential_wave", "dirac^2 A = box A - Ric(A)", "potential_wave", tolerance=wave),
            Check("dirac.potential_wave_literal", "dirac^2 A = box A + Ric(A)", "potential_wave_literal",
                  witness="potential_wave_literal_witness", tolerance=wave),
        ]
        harmonic = Check("dirac.harmonic_wave", "box theta^mu - R theta^mu / 2 = T^mu in harmonic charts",
                         "harmonic_wave", tolerance=wave)
        if self.tetrad.chart.harmonic:
            checks.append(harmonic)
        else:
            self.skip([harmonic], f"{self.metric} is not a harmonic chart")
        self.measure(checks, self._evaluate, self.sample_points())
        self._maxwell_checks()
        return self.records
