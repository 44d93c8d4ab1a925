"""
Clifford-valued differential forms at a point.

A form of degree p is a jet whose value ends in (C(4, p), 16): one multivector
coefficient per increasing coordinate index tuple, optionally preceded by
batch axes (for vector-valued families such as e_c-indexed forms).
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Dict, List, Tuple

import numpy as np

from app.core import algebra as ga
from app.core import jets
from app.core.errors import FormAlgebraError
from app.core.fields import PolynomialField
from app.core.jets import Jet

logger = logging.getLogger(__name__)

SUBSETS: List[List[Tuple[int, ...]]] = [list(combinations(range(4), p)) for p in range(5)]
SUBSET_INDEX: List[Dict[Tuple[int, ...], int]] = [{s: i for i, s in enumerate(group)} for group in SUBSETS]
FLAVORS = ("tangent", "cotangent", "scalar")


def _permutation_sign(sequence: Tuple[int, ...]) -> float:
    sign = 1.0
    items = list(sequence)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def wedge_signs(p: int, q: int) -> np.ndarray:
    """W[I, J, K] = sign of dx^I ^ dx^J along dx^K"""
    if p + q > 4:
        return np.zeros((len(SUBSETS[p]), len(SUBSETS[q]), 0))
    table = np.zeros((len(SUBSETS[p]), len(SUBSETS[q]), len(SUBSETS[p + q])))
    for i, left in enumerate(SUBSETS[p]):
        for j, right in enumerate(SUBSETS[q]):
            if set(left) & set(right):
                continue
            merged = left + right
            table[i, j, SUBSET_INDEX[p + q][tuple(sorted(merged))]] = _permutation_sign(merged)
    return table


@lru_cache(maxsize=None)
def hodge_matrix(p: int) -> np.ndarray:
    """H[A, B]: star theta^A = sum_B H[A, B] theta^B on increasing index tuples"""
    matrix = np.zeros((len(SUBSETS[p]), len(SUBSETS[4 - p])))
    for i, subset in enumerate(SUBSETS[p]):
        image = ga.hodge_star(ga.blade(subset))
        for j, target in enumerate(SUBSETS[4 - p]):
            matrix[i, j] = image[sum(1 << a for a in target)]
    return matrix


@dataclass
class FormJet:
    """Clifford-valued p-form at a point with its derivatives"""
    degree: int
    jet: Jet
    flavor: str = "tangent"

    def __post_init__(self):
        if not 0 <= self.degree <= 4:
            raise FormAlgebraError(f"form degree must lie in 0..4, got {self.degree}")
        if self.flavor not in FLAVORS:
            raise FormAlgebraError(f"unknown fibre flavour {self.flavor!r}")
        expected = len(SUBSETS[self.degree])
        if self.jet.shape[-2:] != (expected, ga.DIM):
            raise FormAlgebraError(f"a {self.degree}-form needs value shape (..., {expected}, 16), got {self.jet.shape}")

    @property
    def order(self) -> int:
        return self.jet.order

    def __add__(self, other: "FormJet") -> "FormJet":
        _check_same(self, other)
        return FormJet(self.degree, self.jet + other.jet, _merge(self.flavor, other.flavor))

    def __sub__(self, other: "FormJet") -> "FormJet":
        _check_same(self, other)
        return FormJet(self.degree, self.jet - other.jet, _merge(self.flavor, other.flavor))

    def __mul__(self, scalar: float) -> "FormJet":
        return FormJet(self.degree, self.jet * scalar, self.flavor)

    __rmul__ = __mul__

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "FormJet":
        """Apply a pointwise linear map on the multivector coefficients"""
        return FormJet(self.degree, self.jet.map(fn), self.flavor)

    def truncate(self, order: int) -> "FormJet":
        return FormJet(self.degree, self.jet.truncate(order), self.flavor)

    def residual(self) -> float:
        return ga.residual(self.jet.value)


def _merge(a: str, b: str) -> str:
    if a == "scalar":
        return b
    if b == "scalar" or a == b:
        return a
    raise FormAlgebraError(f"cannot combine {a} and {b} Clifford forms")


def _check_same(a: FormJet, b: FormJet):
    if a.degree != b.degree:
        raise FormAlgebraError(f"cannot add forms of degree {a.degree} and {b.degree}")


def zero_form(degree: int, order: int, flavor: str = "tangent", batch: Tuple[int, ...] = ()) -> FormJet:
    return FormJet(degree, Jet.constant(np.zeros(batch + (len(SUBSETS[degree]), ga.DIM)), order), flavor)


def wedge_tensor(a: FormJet, b: FormJet, product=ga.geometric_product) -> FormJet:
    """Tensor-wedge: coefficients multiplied by `product`, forms wedged"""
    flavor = _merge(a.flavor, b.flavor)
    degree = a.degree + b.degree
    signs = wedge_signs(a.degree, b.degree)
    if degree > 4:
        order = min(a.order, b.order)
        batch = np.broadcast_shapes(a.jet.shape[:-2], b.jet.shape[:-2])
        return _overflow(batch, order, flavor)

    def fn(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        pairs = product(x[..., :, None, :], y[..., None, :, :])
        return np.einsum("...ijz,ijk->...kz", pairs, signs)

    return FormJet(degree, jets.bilinear(a.jet, b.jet, fn, core=(2, 2)), flavor)


class EmptyForm(FormJet):
    """Degree overflow: a form with no components"""

    def __post_init__(self):
        pass

    def __add__(self, other: FormJet) -> "EmptyForm":
        return self

    __sub__ = __add__

    def __mul__(self, scalar: float) -> "EmptyForm":
        return self

    __rmul__ = __mul__

    def map(self, fn: Callable[[np.ndarray], np.ndarray]) -> "EmptyForm":
        return self

    def truncate(self, order: int) -> "EmptyForm":
        return self

    def residual(self) -> float:
        return 0.0


def _overflow(batch: Tuple[int, ...], order: int, flavor: str) -> FormJet:
    return EmptyForm(5, Jet.constant(np.zeros(batch + (0, ga.DIM)), order), flavor)


def form_commutator(a: FormJet, b: FormJet) -> FormJet:
    """[A, B] = A (x)^ B - (-1)^{pq} B (x)^ A"""
    first = wedge_tensor(a, b)
    second = wedge_tensor(b, a)
    if isinstance(first, EmptyForm):
        return first
    return first - second * ((-1.0) ** (a.degree * b.degree))


def exterior_d(a: FormJet) -> FormJet:
    if a.degree >= 4:
        return _overflow(a.jet.shape[:-2], a.order - 1, a.flavor)
    signs = wedge_signs(1, a.degree)
    batch = len(a.jet.shape) - 2

    def fn(p: np.ndarray) -> np.ndarray:
        p = np.moveaxis(p, -(batch + 3), -3)
        return np.einsum("...uiz,uik->...kz", p, signs)

    return FormJet(a.degree + 1, a.jet.grad().map(fn), a.flavor)


def connection_weight(degree: int) -> float:
    return 0.5 if degree == 0 else degree / 2.0


def exterior_covariant_D(a: FormJet, omega: FormJet) -> FormJet:
    """Literal rule DA = dA + (p/2)[omega, A], with 1/2 at p = 0"""
    if a.degree >= 4:
        return _overflow(a.jet.shape[:-2], a.order - 1, a.flavor)
    return exterior_d(a) + form_commutator(omega, a) * connection_weight(a.degree)


def cartan_differential(a: FormJet, omega: FormJet) -> FormJet:
    """D^c A = dA + (1/2)[omega, A]"""
    if a.degree >= 4:
        return _overflow(a.jet.shape[:-2], a.order - 1, a.flavor)
    return exterior_d(a) + form_commutator(omega, a) * 0.5


def connection_form(geometry, order: int = None) -> FormJet:
    """omega = omega_mu dx^mu acting on Cl(TM)"""
    jet = geometry.omega_coordinate
    return FormJet(1, jet if order is None else jet.truncate(order), "tangent")


def coframe_form(geometry) -> FormJet:
    """theta = h^a_mu dx^mu (x) e_a, the vector-valued solder form"""
    return FormJet(1, geometry.h.map(lambda p: ga.vector(np.swapaxes(p, -1, -2))), "tangent")


def scalar_coframe(geometry) -> FormJet:
    """theta^r as scalar 1-forms, batch axis r"""
    return FormJet(1, geometry.h.map(lambda p: p[..., None] * ga.basis(0)), "scalar")


_PAIR_ROWS = np.array([s[0] for s in SUBSETS[2]])
_PAIR_COLS = np.array([s[1] for s in SUBSETS[2]])


def pairs_to_form(jet: Jet, flavor: str = "tangent") -> FormJet:
    """2-form from antisymmetric coefficients X[mu, nu] (..., 4, 4, 16)"""
    return FormJet(2, jet.map(lambda p: p[..., _PAIR_ROWS, _PAIR_COLS, :]), flavor)


def torsion(geometry, omega: FormJet = None) -> FormJet:
    omega = omega if omega is not None else connection_form(geometry)
    return cartan_differential(coframe_form(geometry).truncate(omega.order), omega)


@dataclass
class CurvatureData:
    bivectors: Jet
    cartan: FormJet
    literal: FormJet
    quarter_bracket: FormJet
    riemann: Jet


def curvature(geometry) -> CurvatureData:
    """Cartan curvature d omega + [omega, omega]/4, the literal d omega + [omega, omega]/2 and the bivectors"""
    omega = connection_form(geometry)
    d_omega = exterior_d(omega)
    bracket = form_commutator(omega.truncate(d_omega.order), omega.truncate(d_omega.order))
    return CurvatureData(
        bivectors=geometry.curvature_coordinate,
        cartan=d_omega + bracket * 0.25,
        literal=d_omega + bracket * 0.5,
        quarter_bracket=bracket * 0.25,
        riemann=geometry.riemann,
    )


def bianchi_residual(geometry) -> Tuple[float, float, float]:
    """(D^c R, literal D R, its predicted discrepancy (1/2)[omega, R])"""
    omega = connection_form(geometry)
    curv = pairs_to_form(geometry.curvature_coordinate)
    omega = omega.truncate(curv.order)
    cartan = cartan_differential(curv, omega)
    literal = exterior_covariant_D(curv, omega)
    witness = form_commutator(omega, curv) * 0.5
    return cartan.residual(), literal.residual(), witness.residual()


def dsquared_identity(a: FormJet, omega: FormJet, curvature_form: FormJet) -> Tuple[float, float, float]:
    """(D^c D^c A - [R, A]/2, literal D D A - [R, A]/2, predicted literal discrepancy)"""
    first = cartan_differential(a, omega)
    second = cartan_differential(first, omega.truncate(first.order))
    order = second.order
    expected = form_commutator(curvature_form.truncate(order), a.truncate(order)) * 0.5
    literal_first = exterior_covariant_D(a, omega)
    literal = exterior_covariant_D(literal_first, omega.truncate(literal_first.order))
    # D = D^c + c_p [omega, .] with c_p = weight(p) - 1/2
    c_first = connection_weight(a.degree) - 0.5
    c_second = connection_weight(a.degree + 1) - 0.5
    rotated = form_commutator(omega.truncate(a.order), a)
    witness = cartan_differential(rotated, omega.truncate(rotated.order)).truncate(order) * c_first \
        + form_commutator(omega.truncate(order), literal_first.truncate(order)) * c_second
    return (second - expected).residual(), (literal - expected).residual(), witness.residual()


def extended_covariant_derivative(a: FormJet, geometry) -> Tuple[FormJet, Jet]:
    """D_{e_r} A = d_{e_r} A + (p/2)[omega_r, A], 1/2 at p = 0.

    Returns the reassembled theta^r ^ D_{e_r} A and the components with the
    frame axis r leading the value shape.
    """
    batch = len(a.jet.shape) - 2
    derivative = jets.directional(a.jet, geometry.frame.truncate(a.order - 1))
    omega = geometry.omega_tangent.truncate(a.order - 1)

    def bracket(w: np.ndarray, v: np.ndarray) -> np.ndarray:
        w = w.reshape(w.shape[:-1] + (1,) * (batch + 1) + (ga.DIM,))
        v = v.reshape(v.shape[:-(batch + 2)] + (1,) + v.shape[-(batch + 2):])
        return ga.commutator(w, v)

    rotated = jets.bilinear(omega, a.jet.truncate(a.order - 1), bracket, core=(2, batch + 2))
    components = derivative + rotated * connection_weight(a.degree)
    if a.degree >= 4:
        return _overflow(a.jet.shape[:-2], components.order, a.flavor), components
    signs = wedge_signs(1, a.degree)

    def assemble(t: np.ndarray, c: np.ndarray) -> np.ndarray:
        t = t.reshape(t.shape[:-2] + (1,) * batch + t.shape[-2:])
        c = np.moveaxis(c, -(batch + 3), -3)
        return np.einsum("...rm,...riz,mik->...kz", t, c, signs)

    reassembled = jets.bilinear(geometry.h.truncate(components.order), components, assemble, core=(2, batch + 3))
    return FormJet(a.degree + 1, reassembled, a.flavor), components


def random_form(degree: int, rng: np.random.Generator, center: np.ndarray, grades=None,
                flavor: str = "tangent", scale: float = 1.0):
    """Seeded cubic-polynomial Clifford form, optionally restricted to some grades"""
    mask = None
    if grades is not None:
        mask = np.isin(ga.GRADE, list(grades)).astype(float)
    field = PolynomialField((len(SUBSETS[degree]), ga.DIM), rng, center=center, scale=scale, mask=mask)
    return lambda x, order: FormJet(degree, field.jet(x, order), flavor)


@lru_cache(maxsize=None)
def _minor_indices(p: int):
    rows = SUBSETS[p]
    first_row = np.array([s[0] for s in rows])
    rest_row = np.array([SUBSET_INDEX[p - 1][s[1:]] for s in rows])
    col = np.array([[s[k] for k in range(p)] for s in rows])
    rest_col = np.array([[SUBSET_INDEX[p - 1][s[:k] + s[k + 1:]] for k in range(p)] for s in rows])
    signs = np.array([(-1.0) ** k for k in range(p)])
    return first_row, rest_row, col, rest_col, signs


def compound(m: Jet, p: int) -> Jet:
    """p-th compound matrix (all p x p minors on increasing index tuples) of a 4x4 matrix jet"""
    if p == 0:
        return Jet.constant(np.ones((1, 1)), m.order)
    if p == 1:
        return m
    first_row, rest_row, col, rest_col, signs = _minor_indices(p)

    def expand(a: np.ndarray, c: np.ndarray) -> np.ndarray:
        total = 0.0
        for k in range(p):
            total = total + signs[k] * a[..., first_row[:, None], col[None, :, k]] \
                * c[..., rest_row[:, None], rest_col[None, :, k]]
        return total

    return jets.bilinear(m, compound(m, p - 1), expand, core=(2, 2))


def hodge_form(a: FormJet, geometry) -> FormJet:
    """Hodge dual of a coordinate form: to the frame by the compound of E, kernel star, back by the compound of h"""
    p = a.degree
    order = a.order
    to_frame = compound(geometry.frame.truncate(order), p)
    to_chart = compound(geometry.h.truncate(order), 4 - p)
    star = jets.bilinear(to_frame, to_chart, lambda e, h: np.einsum("...ia,ab,...bj->...ij", e, hodge_matrix(p), h),
                         core=(2, 2))
    batch = len(a.jet.shape) - 2

    def apply(m: np.ndarray, v: np.ndarray) -> np.ndarray:
        m = m.reshape(m.shape[:-2] + (1,) * batch + m.shape[-2:])
        return np.einsum("...ij,...iz->...jz", m, v)

    return FormJet(4 - p, jets.bilinear(star, a.jet, apply, core=(2, batch + 2)), a.flavor)
