"""
Dirac operator on Clifford multiform fields.

Fields are Cl(T*M)-valued and stored by their frame components in the
theta^a basis, optionally with batch axes in front of the 16 components.
Operators return new lazily evaluated fields, so they compose:
exterior(codifferential(A)) and the like only ask for the jet orders they need.
"""
import logging
from typing import Callable, Optional

import numpy as np

from app.core import algebra as ga
from app.core import jets
from app.core.fields import PolynomialField, SymbolicField
from app.core.jets import Jet

logger = logging.getLogger(__name__)

THETA = ga.vector(np.eye(4))
THETA_WEDGE = ga.outer_product(THETA[:, None, :], THETA[None, :, :])
THETA_PRODUCT = ga.geometric_product(THETA[:, None, :], THETA[None, :, :])

Evaluator = Callable[[np.ndarray, int], Jet]


class MultiformField:
    """Frame-component multiform field on a tetrad's chart"""

    def __init__(self, tetrad, evaluate: Evaluator, label: str = "A"):
        self.tetrad = tetrad
        self._evaluate = evaluate
        self.label = label

    def jet(self, x: np.ndarray, order: int) -> Jet:
        return self._evaluate(np.asarray(x, dtype=float), order)

    def map(self, fn: Callable[[np.ndarray], np.ndarray], label: Optional[str] = None) -> "MultiformField":
        """Pointwise linear map on the components"""
        return MultiformField(self.tetrad, lambda x, k: self.jet(x, k).map(fn), label or self.label)

    def __add__(self, other: "MultiformField") -> "MultiformField":
        return MultiformField(self.tetrad, lambda x, k: self.jet(x, k) + other.jet(x, k), f"({self.label}+{other.label})")

    def __sub__(self, other: "MultiformField") -> "MultiformField":
        return MultiformField(self.tetrad, lambda x, k: self.jet(x, k) - other.jet(x, k), f"({self.label}-{other.label})")

    def __mul__(self, scalar: float) -> "MultiformField":
        return MultiformField(self.tetrad, lambda x, k: self.jet(x, k) * scalar, self.label)

    __rmul__ = __mul__

    @classmethod
    def constant(cls, tetrad, value: np.ndarray, label: str = "const") -> "MultiformField":
        value = np.asarray(value, dtype=float)
        return cls(tetrad, lambda x, k: Jet.constant(value, k), label)

    @classmethod
    def from_field(cls, tetrad, source, label: str = "A") -> "MultiformField":
        """Wrap any provider with jet(x, order), e.g. a SymbolicField of 16 components"""
        return cls(tetrad, source.jet, label)


def _batch_rank(jet: Jet) -> int:
    return len(jet.shape) - 1


def covariant_derivative(field: MultiformField) -> MultiformField:
    """D_{e_r} A = d_{e_r} A + (1/2)[omega*_r, A], frame axis r in front"""
    tetrad = field.tetrad

    def evaluate(x: np.ndarray, order: int) -> Jet:
        value = field.jet(x, order + 1)
        geometry = tetrad.geometry(x, order)
        batch = _batch_rank(value)
        derivative = jets.directional(value, geometry.frame.truncate(order))

        def bracket(w: np.ndarray, v: np.ndarray) -> np.ndarray:
            w = w.reshape(w.shape[:-1] + (1,) * batch + (ga.DIM,))
            v = v.reshape(v.shape[:-(batch + 1)] + (1,) + v.shape[-(batch + 1):])
            return ga.commutator(w, v)

        rotated = jets.bilinear(geometry.omega_cotangent.truncate(order), value.truncate(order), bracket,
                                core=(2, batch + 1))
        return derivative + 0.5 * rotated

    return MultiformField(tetrad, evaluate, f"D{field.label}")


def _frame_sum(field: MultiformField, product, sign: float, label: str) -> MultiformField:
    derivative = covariant_derivative(field)

    def evaluate(x: np.ndarray, order: int) -> Jet:
        jet = derivative.jet(x, order)
        batch = _batch_rank(jet) - 1

        def combine(p: np.ndarray) -> np.ndarray:
            theta = THETA.reshape((4,) + (1,) * batch + (ga.DIM,))
            return sign * np.sum(product(theta, p), axis=-(batch + 2))

        return jet.map(combine)

    return MultiformField(field.tetrad, evaluate, label)


def dirac(field: MultiformField) -> MultiformField:
    """Dirac operator theta^a D_a"""
    return _frame_sum(field, ga.geometric_product, 1.0, f"dirac({field.label})")


def exterior(field: MultiformField) -> MultiformField:
    """d = theta^a ^ D_a"""
    return _frame_sum(field, ga.outer_product, 1.0, f"d({field.label})")


def codifferential(field: MultiformField) -> MultiformField:
    """delta = -theta^a _| D_a"""
    return _frame_sum(field, ga.left_contract, -1.0, f"delta({field.label})")


def hodge(field: MultiformField) -> MultiformField:
    return field.map(ga.hodge_star, f"star({field.label})")


def hodge_inverse(field: MultiformField) -> MultiformField:
    return field.map(ga.hodge_star_inverse, f"star^-1({field.label})")


def codifferential_by_hodge(field: MultiformField) -> MultiformField:
    """delta A_p = (-1)^p star^-1 d star A_p, summed over grades"""
    return hodge_inverse(exterior(hodge(field.map(ga.grade_involution))))


def second_derivative(field: MultiformField) -> MultiformField:
    """X_ab = D_a D_b A - conn[a, c, b] D_c A, axes (a, b) in front"""
    first = covariant_derivative(field)
    second = covariant_derivative(first)

    def evaluate(x: np.ndarray, order: int) -> Jet:
        outer_jet = second.jet(x, order)
        inner = first.jet(x, order)
        geometry = field.tetrad.geometry(x, order)
        batch = _batch_rank(inner) - 1

        def correction(c: np.ndarray, y: np.ndarray) -> np.ndarray:
            c = c.reshape(c.shape + (1,) * (batch + 1))
            y = y.reshape(y.shape[:-(batch + 2)] + (1, y.shape[-(batch + 2)], 1) + y.shape[-(batch + 1):])
            return np.sum(c * y, axis=-(batch + 3))

        shift = jets.bilinear(geometry.connection.truncate(order), inner, correction, core=(3, batch + 2))
        return outer_jet - shift

    return MultiformField(field.tetrad, evaluate, f"X({field.label})")


def _contract_pairs(field: MultiformField, weights: np.ndarray, label: str, product=None) -> MultiformField:
    hessian = second_derivative(field)

    def evaluate(x: np.ndarray, order: int) -> Jet:
        jet = hessian.jet(x, order)
        batch = _batch_rank(jet) - 2

        def combine(p: np.ndarray) -> np.ndarray:
            if product is None:
                w = weights.reshape(weights.shape + (1,) * (batch + 1))
                return np.sum(w * p, axis=(-(batch + 3), -(batch + 2)))
            blades = weights.reshape((4, 4) + (1,) * batch + (ga.DIM,))
            return np.sum(product(blades, p), axis=(-(batch + 3), -(batch + 2)))

        return jet.map(combine)

    return MultiformField(field.tetrad, evaluate, label)


def dalembertian(field: MultiformField) -> MultiformField:
    """(dirac . dirac) A = eta^ab X_ab"""
    return _contract_pairs(field, np.diag(ga.ETA), f"box({field.label})")


def dirac_wedge_dirac(field: MultiformField) -> MultiformField:
    """(dirac ^ dirac) A = (theta^a ^ theta^b) X_ab"""
    return _contract_pairs(field, THETA_WEDGE, f"wedge2({field.label})", ga.geometric_product)


def dirac_squared(field: MultiformField) -> MultiformField:
    """dirac^2 A = theta^a theta^b X_ab"""
    return _contract_pairs(field, THETA_PRODUCT, f"dirac2({field.label})", ga.geometric_product)


def hodge_laplacian(field: MultiformField) -> MultiformField:
    """-(d delta + delta d) A, equal to dirac^2 A"""
    return (exterior(codifferential(field)) + codifferential(exterior(field))) * -1.0


# --- matter and curvature as 1-forms ---

def ricci_one_forms(tetrad) -> MultiformField:
    """R^a = eta^aa Ric_ab theta^b, batch axis a"""
    def evaluate(x: np.ndarray, order: int) -> Jet:
        ricci = tetrad.geometry(x, order + 1).ricci
        return ricci.map(lambda p: ga.vector(p * ga.ETA[:, None]))

    return MultiformField(tetrad, evaluate, "Ricci")


def ricci_action(tetrad, field: MultiformField) -> MultiformField:
    """Ric(A) = alpha_a eta^aa Ric_ab theta^b for a 1-form A = alpha_a theta^a"""
    def evaluate(x: np.ndarray, order: int) -> Jet:
        ricci = tetrad.geometry(x, order + 1).ricci.truncate(order)
        value = field.jet(x, order)

        def act(r: np.ndarray, v: np.ndarray) -> np.ndarray:
            alpha = v[..., ga.VECTOR_MASKS]
            mixed = r * ga.ETA[:, None]
            return ga.vector(np.einsum("...a,...ab->...b", alpha, mixed))

        return jets.bilinear(ricci, value, act, core=(2, 1))

    return MultiformField(tetrad, evaluate, f"Ric({field.label})")


def matter_one_forms(tetrad, trace_reversed: bool = False) -> MultiformField:
    """T^a = eta^aa T_ab theta^b (or T^a - T theta^a / 2), batch axis a.

    Without a matter model T_ab is taken from the Einstein tensor.
    """
    def evaluate(x: np.ndarray, order: int) -> Jet:
        matter = tetrad.matter_jet(x, order)
        if matter is None:
            matter = tetrad.geometry(x, order + 1).einstein
        mixed = matter.map(lambda p: p * ga.ETA[:, None])
        if trace_reversed:
            trace = matter.map(lambda p: np.einsum("...aa,a->...", p, ga.ETA))
            mixed = mixed - trace.map(lambda s: 0.5 * s[..., None, None] * np.eye(4))
        return mixed.map(ga.vector)

    return MultiformField(tetrad, evaluate, "T")


def matter_trace(tetrad) -> Callable[[np.ndarray], float]:
    def trace(x: np.ndarray) -> float:
        matter = tetrad.matter_jet(x, 0)
        if matter is None:
            matter = tetrad.geometry(x, 1).einstein
        return float(np.einsum("aa,a->", matter.value, ga.ETA))

    return trace


def coframe_field(tetrad) -> MultiformField:
    """theta^a, constant frame components, batch axis a"""
    return MultiformField.constant(tetrad, THETA, "theta")


def coordinate_coframe_field(tetrad) -> MultiformField:
    """dx^mu = E^mu_a theta^a, batch axis mu"""
    def evaluate(x: np.ndarray, order: int) -> Jet:
        return tetrad.geometry(x, max(order - 1, 0)).frame.truncate(order).map(ga.vector)

    return MultiformField(tetrad, evaluate, "dx")


def random_multiform(tetrad, rng: np.random.Generator, center: np.ndarray, grades=None, scale: float = 0.3,
                     batch=(), label: str = "A") -> MultiformField:
    mask = None if grades is None else np.isin(ga.GRADE, list(grades)).astype(float)
    field = PolynomialField(tuple(batch) + (ga.DIM,), rng, center=center, scale=scale, mask=mask)
    return MultiformField(tetrad, field.jet, label)


def symbolic_multiform(tetrad, components, label: str) -> MultiformField:
    """Field from a dict {blade mask: sympy expression in the chart symbols}"""
    import sympy

    array = [sympy.sympify(components.get(mask, 0)) for mask in range(ga.DIM)]
    return MultiformField(tetrad, SymbolicField(array, tetrad.symbols).jet, label)


# --- Maxwell ---

def maxwell_residuals(field_strength: MultiformField, current: MultiformField, x: np.ndarray):
    """(dF, delta F + J, dirac F - J, d star F + star J) residuals at x"""
    d_f = exterior(field_strength).jet(x, 0).value
    delta_f = codifferential(field_strength).jet(x, 0).value
    dirac_f = dirac(field_strength).jet(x, 0).value
    j = current.jet(x, 0).value
    dual = exterior(hodge(field_strength)).jet(x, 0).value
    return (ga.residual(d_f), ga.residual(delta_f + j), ga.residual(dirac_f - j),
            ga.residual(dual + ga.hodge_star(j)))
