"""
Einstein's equations in their Clifford dressings: Ricci and Einstein 1-forms,
the Sl(2,C) gauge current, the Maxwell-like fields, the Sachs paravector form
and the superpotential 3-forms.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from app.core import algebra as ga
from app.core import jets
from app.core import pauli
from app.core.dirac import MultiformField, exterior, matter_one_forms
from app.core.forms import cartan_differential, connection_form, hodge_form, pairs_to_form
from app.core.jets import Jet
from app.core.spinor_connection import paravector_fields

logger = logging.getLogger(__name__)

ETA = ga.ETA
E = ga.vector(np.eye(4))
E_UP = ga.vector(np.diag(ETA))
E_WEDGE = ga.outer_product(E[:, None, :], E[None, :, :])


def _sigma_table() -> np.ndarray:
    table = np.zeros((4, 4, 4, ga.DIM))
    for a in range(4):
        for b in range(4):
            for c in range(4):
                table[a, b, c] = ga.hodge_star(ga.blade([a, b, c]))
    return table


# Sigma^{abc} = star(theta^a ^ theta^b ^ theta^c)
SIGMA3 = _sigma_table()


def matter_jet(tetrad, x: np.ndarray, order: int) -> Jet:
    """Frame T_ab, taken from the Einstein tensor when the tetrad has no matter model"""
    matter = tetrad.matter_jet(x, order)
    if matter is None:
        matter = tetrad.geometry(x, order + 1).einstein.truncate(order)
    return matter


# === RICCI AND EINSTEIN ===

@dataclass
class EinsteinData:
    ricci_vectors: np.ndarray
    ricci_forms: np.ndarray
    scalar: float
    einstein: np.ndarray
    einstein_forms: np.ndarray


def ricci_and_einstein(geometry) -> EinsteinData:
    """R_a = -e^b _| R_ab, the Ricci 1-forms R^a, R and G^a = R^a - R theta^a / 2.

    The geometry needs connection order >= 1.
    """
    ricci = geometry.ricci.value
    einstein = geometry.einstein.value
    return EinsteinData(
        ricci_vectors=geometry.ricci_vector().value,
        ricci_forms=ga.vector(ricci * ETA[:, None]),
        scalar=float(geometry.scalar_curvature.value),
        einstein=einstein,
        einstein_forms=ga.vector(einstein * ETA[:, None]),
    )


def ricci_vector_residual(geometry) -> float:
    """Bivector contraction route against Ric_ad e^d"""
    data = ricci_and_einstein(geometry)
    expected = ga.vector(geometry.ricci.value * ETA[None, :])
    return ga.residual(data.ricci_vectors - expected)


# === GAUGE CURRENT ===

def _raised_curvature(geometry) -> Jet:
    """R^mu_nu = g^{mu alpha} R_alpha_nu, value (mu, nu, 16)"""
    curvature = geometry.curvature_coordinate
    return jets.einsum("...ma,...anz->...mnz", geometry.metric_inverse.truncate(curvature.order), curvature,
                       core=(2, 3))


def gauge_current(geometry) -> Dict[str, np.ndarray]:
    """Gauge current J_nu by the direct divergence and by -star D^c star R.

    direct: d_mu R^mu_nu + G^mu_{mu s} R^s_nu - G^s_{mu nu} R^mu_s + [omega_mu, R^mu_nu] / 2
    literal: d_mu R^mu_nu + [omega_mu, R^mu_nu]
    The geometry needs connection order >= 2.
    """
    raised = _raised_curvature(geometry)
    r_up = raised.value
    divergence = np.einsum("mmnz->nz", raised.parts[1])
    gamma = geometry.christoffel.value
    omega = geometry.omega_coordinate.value
    rotation = np.sum(ga.commutator(omega[:, None, :], r_up), axis=0)
    christoffel_terms = np.einsum("mms,snz->nz", gamma, r_up) - np.einsum("smn,msz->nz", gamma, r_up)
    direct = divergence + christoffel_terms + 0.5 * rotation
    literal = divergence + rotation

    curvature_form = pairs_to_form(geometry.curvature_coordinate)
    dual = hodge_form(curvature_form, geometry)
    omega_form = connection_form(geometry, dual.order)
    derivative = cartan_differential(dual, omega_form)
    hodge = hodge_form(derivative, geometry).jet.value * -1.0
    return {"direct": direct, "hodge": hodge, "literal": literal}


# === MAXWELL-LIKE FIELDS ===

def _label_divergence(field: Jet, geometry, tensorial: bool = False) -> np.ndarray:
    """eta^aa D_{e_a} X_ab for a frame-labelled multivector field X, value (a, b, 16)"""
    derivative = jets.directional(field, geometry.frame.truncate(field.order - 1)).value
    value = field.value
    omega = geometry.omega_tangent.value
    covariant = derivative + 0.5 * ga.commutator(omega[:, None, None, :], value[None])
    if tensorial:
        conn = geometry.connection.value
        covariant = covariant - np.einsum("rca,cbz->rabz", conn, value) - np.einsum("rcb,acz->rabz", conn, value)
    return np.einsum("aabz,a->bz", covariant, ETA)


def _commutator_field(vectors: Jet) -> Jet:
    """[V_a, e_b] for vectors V_a, value (a, b, 16)"""
    return vectors.map(lambda p: ga.commutator(p[..., :, None, :], E))


def maxwell_like(geometry, tetrad, tensorial: bool = False) -> Dict[str, float]:
    """Maxwell-like fields F_ab = [R_a, e_b] - R e_a ^ e_b and their current.

    field: |F(curvature) - (T_a e_b - e_b T_a)|
    scalar_part: |R e_a ^ e_b|
    equation: |D_a F^a_b - D_a(T^a e_b - e_b T^a)|
    vacuum_identity: |(e^c _| R_ac) e_b - (e^c _| R_bc) e_a|, vacuum_witness the Ricci size
    The geometry needs connection order >= 2.
    """
    order = 1
    ricci_vectors = geometry.ricci_vector().truncate(order)
    scalar = geometry.scalar_curvature.truncate(order)
    curvature_field = _commutator_field(ricci_vectors) - jets.scale(scalar, Jet.constant(E_WEDGE, order))

    matter = matter_jet(tetrad, geometry.x, order)
    matter_vectors = matter.map(lambda p: ga.vector(p * ETA))
    matter_field = _commutator_field(matter_vectors)

    contracted = np.einsum("acz->az", ga.left_contract(E_UP[None, :, :], geometry.curvature_frame.value))
    vacuum = ga.geometric_product(contracted[:, None, :], E[None, :, :])
    return {
        "field": ga.residual(curvature_field.value - matter_field.value),
        "scalar_part": ga.residual(float(scalar.value) * E_WEDGE),
        "equation": ga.residual(_label_divergence(curvature_field, geometry, tensorial)
                                - _label_divergence(matter_field, geometry, tensorial)),
        "vacuum_identity": ga.residual(vacuum - np.swapaxes(vacuum, 0, 1)),
        "vacuum_witness": ga.residual(geometry.ricci.value),
    }


# === SACHS FORM ===

def _sachs_sources(geometry, tetrad, scalar_sign: float = -1.0) -> Tuple[Jet, Jet, Jet]:
    """(T_rho from curvature, T_rho from matter, q_rho) as order-1 jets, value (4, 16).

    curvature: (R_rl q^l + q^l R_rl^dagger + s R q_rho) / 2 with s = scalar_sign
    matter: T_rho^mu q_mu = h^a_rho T_a^b sigma_b
    """
    order = 1
    lower, upper = paravector_fields(geometry)
    lower, upper = lower.truncate(order), upper.truncate(order)
    curvature = geometry.curvature_coordinate.truncate(order)
    dagger = curvature.map(pauli.hermitian_conjugate)
    left = jets.bilinear(curvature, upper, lambda r, q: np.sum(ga.geometric_product(r, q[..., None, :, :]), axis=-2),
                         core=(3, 2))
    right = jets.bilinear(upper, dagger, lambda q, r: np.sum(ga.geometric_product(q[..., None, :, :], r), axis=-2),
                          core=(2, 3))
    scalar = jets.scale(geometry.scalar_curvature.truncate(order), lower)
    from_curvature = (left + right + scalar_sign * scalar) * 0.5

    matter = matter_jet(tetrad, geometry.x, order).map(lambda p: p * ETA)
    mixed = jets.einsum("...ar,...ab->...rb", geometry.h.truncate(order), matter, core=(2, 2))
    from_matter = mixed.map(pauli.paravector)
    return from_curvature, from_matter, lower


def _sachs_field(sources: Jet, lower: Jet) -> Jet:
    """F_rg = T_r q-check_g - q_g T-check_r, value (rho, gamma, 16)"""
    first = jets.bilinear(sources, lower, lambda t, q: ga.geometric_product(t[..., :, None, :],
                                                                            pauli.check(q)[..., None, :, :]),
                          core=(2, 2))
    second = jets.bilinear(lower, sources, lambda q, t: ga.geometric_product(q[..., None, :, :],
                                                                             pauli.check(t)[..., :, None, :]),
                           core=(2, 2))
    return first - second


def sachs_divergence(field: Jet, geometry) -> np.ndarray:
    """d_r X^r_g + [omega_r, X^r_g] / 2 + G^r_{rs} X^s_g - G^s_{rg} X^r_s"""
    raised = jets.einsum("...ra,...agz->...rgz", geometry.metric_inverse.truncate(field.order), field, core=(2, 3))
    x = raised.value
    gamma = geometry.christoffel.value
    omega = geometry.omega_coordinate.value
    return (np.einsum("rrgz->gz", raised.parts[1])
            + 0.5 * np.sum(ga.commutator(omega[:, None, :], x), axis=0)
            + np.einsum("rrs,sgz->gz", gamma, x)
            - np.einsum("srg,rsz->gz", gamma, x))


def sachs_equations(geometry, tetrad) -> Dict[str, float]:
    """Residuals of the Sachs paravector form of Einstein's equations.

    The geometry needs connection order >= 2.
    """
    from_curvature, from_matter, lower = _sachs_sources(geometry, tetrad)
    literal, _, _ = _sachs_sources(geometry, tetrad, scalar_sign=1.0)
    scalar_part = jets.scale(geometry.scalar_curvature.truncate(1), lower)

    _, upper = paravector_fields(geometry)
    curvature = geometry.curvature_coordinate.value
    dagger = pauli.hermitian_conjugate(curvature)
    checked_up = pauli.check(upper.value)
    checked_form = (np.sum(ga.geometric_product(dagger, checked_up[None]), axis=1)
                    + np.sum(ga.geometric_product(checked_up[None], curvature), axis=1)
                    + float(geometry.scalar_curvature.value) * pauli.check(lower.value))

    field_curvature = _sachs_field(from_curvature, lower)
    field_matter = _sachs_field(from_matter, lower)
    field_literal = _sachs_field(literal, lower)
    current = sachs_divergence(field_matter, geometry)
    non_scalar = field_matter.value * (ga.GRADE != 0)
    return {
        "equation": ga.residual(from_curvature.value - from_matter.value),
        "checked_form": ga.residual(checked_form + 2.0 * pauli.check(from_matter.value)),
        "literal": ga.residual(literal.value - from_matter.value),
        "literal_witness": ga.residual(scalar_part.value),
        "field": ga.residual(field_curvature.value - field_matter.value),
        "divergence": ga.residual(sachs_divergence(field_curvature, geometry) - current),
        "divergence_literal": ga.residual(sachs_divergence(field_literal, geometry) - current),
        "divergence_literal_witness": ga.residual(sachs_divergence(_sachs_field(scalar_part, lower), geometry)),
        "non_scalar_part": ga.residual(non_scalar),
        "bivector_part": ga.residual(field_matter.value * (ga.GRADE == 2)),
    }


def sachs_field_grades(geometry, tetrad, tolerance: float = 1e-12) -> Tuple[int, ...]:
    """Grades present in the Sachs field strength at the geometry's point"""
    _, from_matter, lower = _sachs_sources(geometry, tetrad)
    field = _sachs_field(from_matter, lower).value
    return tuple(k for k in range(5) if ga.residual(field * (ga.GRADE == k)) > tolerance)


# === SUPERPOTENTIALS ===

def _connection_forms(geometry, order: int) -> Jet:
    """omega_ab = conn_low[r, a, b] theta^r, value (a, b, 16)"""
    return geometry.connection_low.truncate(order).map(lambda p: ga.vector(np.moveaxis(p, -3, -1)))


def _wedge_sum(forms: np.ndarray, table: np.ndarray) -> np.ndarray:
    """sum_ab forms[a, b] ^ table[a, b, c]"""
    return np.sum(ga.outer_product(forms[..., :, :, None, :], table), axis=(-4, -3))


def _transport_inner(p: np.ndarray) -> np.ndarray:
    """omega^c_d ^ Sigma^{abd} + omega^b_d ^ Sigma^{adc}, value (a, b, c, 16)"""
    raised = p * ETA[:, None, None]
    first = ga.outer_product(raised[..., None, None, :, :, :], SIGMA3[:, :, None, :, :])
    second = ga.outer_product(raised[..., None, :, None, :, :], np.transpose(SIGMA3, (0, 2, 1, 3))[:, None])
    return np.sum(first, axis=-2) + np.sum(second, axis=-2)


def superpotential_field(tetrad) -> MultiformField:
    """star S^c = -omega_ab ^ Sigma^{abc} / 2, batch axis c"""
    def evaluate(x: np.ndarray, order: int) -> Jet:
        omega = _connection_forms(tetrad.geometry(x, order), order)
        return omega.map(lambda p: -0.5 * _wedge_sum(p, SIGMA3))
    return MultiformField(tetrad, evaluate, "starS")


def pseudo_energy_field(tetrad) -> MultiformField:
    """star t^c = omega_ab ^ [omega^c_d ^ Sigma^{abd} + omega^b_d ^ Sigma^{adc}] / 2"""
    def evaluate(x: np.ndarray, order: int) -> Jet:
        omega = _connection_forms(tetrad.geometry(x, order), order)
        inner = omega.map(_transport_inner)
        return jets.bilinear(omega, inner, lambda w, s: 0.5 * np.sum(ga.outer_product(w[..., :, :, None, :], s),
                                                                     axis=(-4, -3)), core=(3, 4))
    return MultiformField(tetrad, evaluate, "start")


def curvature_forms(geometry, order: int) -> Jet:
    """Omega_ab = R_abcd theta^c ^ theta^d / 2, value (a, b, 16)"""
    def lower(p: np.ndarray) -> np.ndarray:
        lowered = p * ETA[:, None, None, None] * ETA[None, :, None, None]
        return ga.bivector(lowered)
    return geometry.riemann.truncate(order).map(lower)


def einstein_three_form_field(tetrad) -> MultiformField:
    """G^d = Omega_ab ^ Sigma^{abd} / 2"""
    def evaluate(x: np.ndarray, order: int) -> Jet:
        omega = curvature_forms(tetrad.geometry(x, order + 1), order)
        return omega.map(lambda p: 0.5 * _wedge_sum(p, SIGMA3))
    return MultiformField(tetrad, evaluate, "G3")


def einstein_one_form_field(tetrad) -> MultiformField:
    def evaluate(x: np.ndarray, order: int) -> Jet:
        return tetrad.geometry(x, order + 1).einstein.truncate(order).map(lambda p: ga.vector(p * ETA[:, None]))
    return MultiformField(tetrad, evaluate, "G")


def matter_three_form_field(tetrad) -> MultiformField:
    """-star T^a"""
    return matter_one_forms(tetrad).map(lambda p: -ga.hodge_star(p), "T3")


def _covariant_exterior(field: MultiformField) -> MultiformField:
    """D V^d = d V^d + omega^d_e ^ V^e for a vector-valued multiform, batch axis d"""
    tetrad = field.tetrad
    derivative = exterior(field)

    def evaluate(x: np.ndarray, order: int) -> Jet:
        omega = _connection_forms(tetrad.geometry(x, order), order).map(lambda p: p * ETA[:, None, None])
        rotated = jets.bilinear(omega, field.jet(x, order),
                                lambda w, v: np.sum(ga.outer_product(w, v[..., None, :, :]), axis=-2),
                                core=(3, 2))
        return derivative.jet(x, order) + rotated

    return MultiformField(tetrad, evaluate, f"Dc({field.label})")


def contraction_superpotential(geometry) -> np.ndarray:
    """star S_c = [omega_ab _| (theta^a ^ theta^b ^ theta_c)] theta5 / 2, value (c, 16)"""
    omega = _connection_forms(geometry, 0).value
    blades = np.zeros((4, 4, 4, ga.DIM))
    for a in range(4):
        for b in range(4):
            for c in range(4):
                blades[a, b, c] = ETA[c] * ga.blade([a, b, c])
    contracted = np.sum(ga.left_contract(omega[:, :, None, :], blades), axis=(0, 1))
    return 0.5 * ga.geometric_product(contracted, ga.PSEUDOSCALAR_BLADE)


def superpotential_identities(tetrad, x: np.ndarray) -> Dict[str, float]:
    """Pointwise residuals of the superpotential form of Einstein's equations.

    identity: G3 + d star S + star t
    einstein_form: -d star S - (T3 + star t)
    hodge: G3 + star G
    closedness: d(T3 + star t)
    bianchi: D G3
    contraction: star S_c against eta_cc star S^c
    """
    star_s = superpotential_field(tetrad)
    star_t = pseudo_energy_field(tetrad)
    three_form = einstein_three_form_field(tetrad)
    matter = matter_three_form_field(tetrad)

    d_star_s = exterior(star_s).jet(x, 0).value
    t_value = star_t.jet(x, 0).value
    g_value = three_form.jet(x, 0).value
    one_form = einstein_one_form_field(tetrad).jet(x, 0).value
    m_value = matter.jet(x, 0).value
    closed = exterior(matter + star_t).jet(x, 0).value
    bianchi = _covariant_exterior(three_form).jet(x, 0).value
    geometry = tetrad.geometry(x, 0)
    upper = star_s.jet(x, 0).value
    return {
        "identity": ga.residual(g_value + d_star_s + t_value),
        "einstein_form": ga.residual(-d_star_s - m_value - t_value),
        "hodge": ga.residual(g_value + ga.hodge_star(one_form)),
        "closedness": ga.residual(closed),
        "bianchi": ga.residual(bianchi),
        "contraction": ga.residual(contraction_superpotential(geometry) - ETA[:, None] * upper),
        "superpotential_size": ga.residual(upper),
        "pseudo_energy_size": ga.residual(t_value),
    }


def outermorphism(matrix: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Extend theta^b -> matrix[a, b] theta^a to all grades"""
    images = ga.vector(np.asarray(matrix, dtype=float).T)
    out = np.zeros(np.shape(values))
    for mask in range(ga.DIM):
        blade = ga.basis(0)
        for bit in range(4):
            if mask & (1 << bit):
                blade = ga.outer_product(blade, images[bit])
        out = out + values[..., mask, None] * blade
    return out


def gauge_dependence(tetrad, boosted, x: np.ndarray) -> Dict[str, float]:
    """Compare 3-forms of a tetrad and of its locally boosted partner at x.

    With theta' = L theta, a covariant family transforms as V'^d = L^d_e V^e with
    the forms re-expressed in the primed coframe.
    einstein: |G3' - L G3| relative to |G3|
    pseudo_energy: |t' - L t| relative to |t| (infinite on a zero baseline)
    pseudo_energy_baseline: the larger of |t| and |t'|
    """
    h = tetrad.geometry(x, 0).h.value
    h_boosted = boosted.geometry(x, 0).h.value
    transform = h_boosted @ np.linalg.inv(h)
    inverse = np.linalg.inv(transform)

    def rotated(values: np.ndarray) -> np.ndarray:
        reexpressed = outermorphism(inverse.T, values)
        return np.einsum("de,ez->dz", transform, reexpressed)

    def relative(new: np.ndarray, old: np.ndarray) -> float:
        gap = ga.residual(new - rotated(old))
        scale = ga.residual(old)
        if scale == 0.0:
            return float("inf") if gap > 0.0 else 0.0
        return gap / scale

    g_old = einstein_three_form_field(tetrad).jet(x, 0).value
    g_new = einstein_three_form_field(boosted).jet(x, 0).value
    t_old = pseudo_energy_field(tetrad).jet(x, 0).value
    t_new = pseudo_energy_field(boosted).jet(x, 0).value
    return {
        "einstein": ga.residual(g_new - rotated(g_old)) / max(ga.residual(g_old), 1.0),
        "einstein_scale": ga.residual(g_old),
        "pseudo_energy": relative(t_new, t_old),
        "pseudo_energy_baseline": max(ga.residual(t_old), ga.residual(t_new)),
    }


def dressings_cross_check(geometry, tetrad) -> Dict[str, float]:
    """One-form, three-form and Sachs routes to the Einstein tensor at one point"""
    data = ricci_and_einstein(geometry)
    three_form = 0.5 * _wedge_sum(curvature_forms(geometry, 0).value, SIGMA3)
    from_curvature, _, lower = _sachs_sources(geometry, tetrad)
    h = geometry.h.value
    coordinate = np.einsum("ar,ab,bs->rs", h, data.einstein, h)
    metric_inverse = geometry.metric_inverse.value
    sachs_expected = np.einsum("rs,st,tz->rz", coordinate, metric_inverse, lower.value)
    return {
        "three_form": ga.residual(three_form + ga.hodge_star(data.einstein_forms)),
        "sachs": ga.residual(from_curvature.value - sachs_expected),
    }
