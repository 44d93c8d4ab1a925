"""
Forms suite: exterior covariant calculus of Clifford-valued forms
"""
import logging
from typing import Dict, List, Tuple

import numpy as np

from app.core import algebra as ga
from app.core.forms import (
    FormJet, connection_weight, bianchi_residual, cartan_differential, connection_form, curvature,
    dsquared_identity, exterior_covariant_D, extended_covariant_derivative, form_commutator, hodge_form,
    pairs_to_form, random_form, torsion, wedge_tensor
)
from app.core.jets import Jet
from app.models.schemas import CheckRecord
from app.services.suite import Check, SuiteService

logger = logging.getLogger(__name__)

E = ga.vector(np.eye(4))
PRODUCT_DEGREES: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 1))
TRIPLE_DEGREES: Tuple[Tuple[int, int, int], ...] = ((1, 1, 1), (0, 1, 2), (1, 2, 1), (2, 0, 2))


def _scaled(residual: float, *forms: FormJet) -> float:
    return residual / max([1.0] + [f.residual() for f in forms])


class FormsSuiteService(SuiteService):
    """Service for curvature, Bianchi, D^2 and product rules of the form calculus"""

    name = "forms"
    tolerance_name = "forms"

    def _form(self, degree: int, x: np.ndarray, order: int) -> FormJet:
        return random_form(degree, self.rng, x, scale=0.3)(x, order)

    def _curvature(self, geometry) -> Dict[str, float]:
        data = curvature(geometry)
        bivectors = pairs_to_form(data.bivectors)
        out = {
            "curvature_cartan": _scaled((data.cartan - bivectors).residual(), bivectors),
            "curvature_literal": _scaled((data.literal - bivectors).residual(), bivectors),
            "curvature_literal_witness": _scaled(data.quarter_bracket.residual(), bivectors),
        }

        frame_curvature = geometry.curvature_frame.value
        riemann = geometry.riemann_from_christoffel()
        expected = np.einsum("abcd,az->bcdz", riemann, E)
        rotated = 0.5 * ga.commutator(frame_curvature[None], E[:, None, None, :])
        literal = ga.left_contract(E[:, None, None, :], frame_curvature[None])
        scale = max(1.0, ga.residual(riemann))
        out["holonomy"] = ga.residual(rotated - expected) / scale
        out["holonomy_literal"] = ga.residual(literal - expected) / scale
        out["holonomy_literal_witness"] = ga.residual(literal) / scale

        cartan, literal_bianchi, witness = bianchi_residual(geometry)
        out["bianchi"] = cartan
        out["bianchi_literal"] = literal_bianchi
        out["bianchi_literal_witness"] = witness

        omega = connection_form(geometry)
        out["torsion"] = torsion(geometry, omega).residual()
        shift = FormJet(1, Jet.constant(ga.grade_project(self.rng.normal(scale=0.1, size=(4, ga.DIM)), 2),
                                        omega.order), "tangent")
        out["torsion_control"] = torsion(geometry, omega + shift).residual()
        return out

    def _second_derivative(self, geometry, x: np.ndarray) -> Dict[str, float]:
        omega = connection_form(geometry)
        curvature_form = pairs_to_form(geometry.curvature_coordinate)
        cartan, literal, witness = 0.0, 0.0, 0.0
        forms = [random_form(0, self.rng, x, grades=[1], scale=0.3)(x, 2)]
        forms += [self._form(p, x, 2) for p in range(4)]
        for form in forms:
            c, l, p = dsquared_identity(form, omega, curvature_form)
            scale = max(1.0, form.residual())
            cartan, literal, witness = max(cartan, c / scale), max(literal, l / scale), max(witness, p / scale)
        return {"dsquared": cartan, "dsquared_literal": literal, "dsquared_literal_witness": witness}

    def _products(self, geometry, x: np.ndarray) -> Dict[str, float]:
        omega = connection_form(geometry)
        out = {key: 0.0 for key in ("leibniz", "leibniz_literal", "leibniz_literal_witness", "derivation",
                                     "weighted_derivation", "weighted_derivation_witness", "reassembly")}
        for p, q in PRODUCT_DEGREES:
            a, b = self._form(p, x, 1), self._form(q, x, 1)
            sign = (-1.0) ** p
            scale = max(1.0, a.residual() * b.residual())

            product = wedge_tensor(a, b)
            split = wedge_tensor(cartan_differential(a, omega), b) \
                + wedge_tensor(a, cartan_differential(b, omega)) * sign
            out["leibniz"] = max(out["leibniz"], (cartan_differential(product, omega) - split).residual() / scale)

            literal_split = wedge_tensor(exterior_covariant_D(a, omega), b) \
                + wedge_tensor(a, exterior_covariant_D(b, omega)) * sign
            literal = exterior_covariant_D(product, omega) - literal_split
            a0, b0 = a.truncate(0), b.truncate(0)
            w0 = omega.truncate(0)
            # D = D^c + c_p [omega, .] with c_p = weight(p) - 1/2
            witness = form_commutator(w0, wedge_tensor(a0, b0)) * (connection_weight(p + q) - 0.5) \
                - wedge_tensor(form_commutator(w0, a0), b0) * (connection_weight(p) - 0.5) \
                - wedge_tensor(a0, form_commutator(w0, b0)) * (sign * (connection_weight(q) - 0.5))
            out["leibniz_literal"] = max(out["leibniz_literal"], literal.residual() / scale)
            out["leibniz_literal_witness"] = max(out["leibniz_literal_witness"], witness.residual() / scale)

            bracket = form_commutator(a, b)
            derivation = cartan_differential(bracket, omega) - form_commutator(cartan_differential(a, omega), b) \
                - form_commutator(a, cartan_differential(b, omega)) * sign
            out["derivation"] = max(out["derivation"], derivation.residual() / scale)

            whole = form_commutator(w0, wedge_tensor(a0, b0))
            left = wedge_tensor(form_commutator(w0, a0), b0)
            right = wedge_tensor(a0, form_commutator(w0, b0)) * sign
            weighted = whole * float(p + q) - left * float(p) - right * float(q)
            predicted = left * float(q) + right * float(p)
            out["weighted_derivation"] = max(out["weighted_derivation"], weighted.residual() / scale)
            out["weighted_derivation_witness"] = max(out["weighted_derivation_witness"], predicted.residual() / scale)

            reassembled, _ = extended_covariant_derivative(a, geometry)
            direct = exterior_covariant_D(a, omega)
            out["reassembly"] = max(out["reassembly"], _scaled((reassembled - direct).residual(), a))
        return out

    def _brackets(self, x: np.ndarray) -> Dict[str, float]:
        jacobi, antisymmetry = 0.0, 0.0
        for p, q, r in TRIPLE_DEGREES:
            a, b, c = self._form(p, x, 0), self._form(q, x, 0), self._form(r, x, 0)
            lhs = form_commutator(a, form_commutator(b, c))
            rhs = form_commutator(form_commutator(a, b), c) \
                + form_commutator(b, form_commutator(a, c)) * ((-1.0) ** (p * q))
            jacobi = max(jacobi, _scaled((lhs - rhs).residual(), lhs))
            swapped = form_commutator(a, b) + form_commutator(b, a) * ((-1.0) ** (p * q))
            antisymmetry = max(antisymmetry, _scaled(swapped.residual(), form_commutator(a, b)))
        return {"jacobi": jacobi, "antisymmetry": antisymmetry}

    def _hodge(self, geometry, x: np.ndarray) -> Dict[str, float]:
        worst = 0.0
        for p in range(5):
            a = self._form(p, x, 0)
            twice = hodge_form(hodge_form(a, geometry), geometry)
            worst = max(worst, _scaled((twice - a * ((-1.0) ** (p + 1))).residual(), a))
        return {"hodge_double": worst}

    def _evaluate(self, x: np.ndarray) -> Dict[str, float]:
        geometry = self.tetrad.geometry(x, 2)
        out: Dict[str, float] = {}
        out.update(self._curvature(geometry))
        out.update(self._second_derivative(geometry, x))
        out.update(self._products(self.tetrad.geometry(x, 1), x))
        out.update(self._brackets(x))
        out.update(self._hodge(geometry, x))
        return out

    def collect(self) -> List[CheckRecord]:
        tolerance = "forms_flat" if self.tetrad.family == "minkowski" else "forms"
        checks = [
            Check("forms.curvature", "curvature bivectors are d omega + [omega, omega] / 4", "curvature_cartan"),
            Check("forms.curvature_literal", "curvature as d omega + [omega, omega] / 2", "curvature_literal",
                  witness="curvature_literal_witness"),
            Check("forms.holonomy", "[D_c, D_d] e_b = [R_cd, e_b] / 2", "holonomy"),
            Check("forms.holonomy_literal", "[D_c, D_d] e_b = e_b _| R_cd", "holonomy_literal",
                  witness="holonomy_literal_witness"),
            Check("forms.bianchi", "second Bianchi identity D^c R = 0", "bianchi"),
            Check("forms.bianchi_literal", "second Bianchi identity with the p/2 rule", "bianchi_literal",
                  witness="bianchi_literal_witness"),
            Check("forms.torsion", "torsion D^c theta vanishes", "torsion"),
            Check("forms.torsion_control", "torsion of a perturbed connection", "torsion_control", expect="fails"),
            Check("forms.dsquared", "D^c D^c A = [R, A] / 2", "dsquared"),
            Check("forms.dsquared_literal", "D D A = [R, A] / 2 with the p/2 rule", "dsquared_literal",
                  witness="dsquared_literal_witness"),
            Check("forms.leibniz", "Leibniz rule for D^c over the tensor-wedge product", "leibniz"),
            Check("forms.leibniz_literal", "Leibniz rule with the p/2 rule", "leibniz_literal",
                  witness="leibniz_literal_witness"),
            Check("forms.derivation", "D^c is a graded derivation of the form commutator", "derivation"),
            Check("forms.weighted_derivation", "(p+q)[omega, AB] = p[omega, A]B + q(-1)^p A[omega, B]",
                  "weighted_derivation", witness="weighted_derivation_witness"),
            Check("forms.reassembly", "theta^r ^ D_{e_r} A equals the exterior covariant D", "reassembly"),
            Check("forms.jacobi", "graded Jacobi identity of the form commutator", "jacobi"),
            Check("forms.antisymmetry", "graded antisymmetry of the form commutator", "antisymmetry"),
            Check("forms.hodge_double", "double Hodge dual of forms equals (-1)^(p+1)", "hodge_double"),
        ]
        for check in checks:
            check.tolerance = tolerance
        self.measure(checks, self._evaluate, self.sample_points())
        return self.records
