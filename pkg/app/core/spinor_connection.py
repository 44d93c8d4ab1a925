"""
Spinor covariant derivatives, paravector fields and the frame constraints
that spinor structures put on a tetrad.

Coordinate-indexed objects use the conventions of LocalGeometry:
omega_nu = h^b_nu omega_b acts on Cl(TM) by (1/2)[omega_nu, .] and
christoffel[alpha, nu, mu] = Gamma^alpha_{nu mu}.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from app.core import algebra as ga
from app.core import pauli
from app.core.errors import DomainError
from app.core.jets import Jet

logger = logging.getLogger(__name__)

FLAVORS = ("undotted", "dotted", "dotted_leibniz", "pauli")

E = ga.vector(np.eye(4))
SPATIAL_BIVECTOR_MASKS = [mask for (a, b), mask in zip(ga.BIVECTOR_PAIRS, ga.BIVECTOR_MASKS) if a > 0]
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0


def _mv_norm(a: np.ndarray) -> float:
    return ga.residual(a)


def _gp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return ga.geometric_product(a, b)


def rotation_part(omega: np.ndarray) -> np.ndarray:
    """Spatial (e_i e_j) part of a bivector"""
    out = np.zeros_like(omega)
    out[..., SPATIAL_BIVECTOR_MASKS] = omega[..., SPATIAL_BIVECTOR_MASKS]
    return out


def boost_part(omega: np.ndarray) -> np.ndarray:
    return ga.grade_project(omega, 2) - rotation_part(omega)


# === CONNECTION COEFFICIENTS ===

@dataclass
class SpinorConnectionCoeffs:
    """omega_{e_a} bivectors and their Pauli images, one per frame direction"""
    omega: np.ndarray
    matrices: np.ndarray


def spinor_omega(geometry) -> SpinorConnectionCoeffs:
    omega = geometry.omega_tangent.value
    return SpinorConnectionCoeffs(omega, pauli.to_matrix(omega))


def epsilon_transpose_residual(coeffs: SpinorConnectionCoeffs) -> float:
    """max |eps Omega^T eps - Omega|; zero for any traceless Omega"""
    eps = pauli.EPSILON
    mirrored = eps @ np.swapaxes(coeffs.matrices, -1, -2) @ eps
    return float(np.max(np.abs(mirrored - coeffs.matrices)))


def epsilon_hermitian_residual(coeffs: SpinorConnectionCoeffs) -> Tuple[float, float]:
    """(max |eps Omega^dagger eps - Omega|, max |Im Omega|)"""
    eps = pauli.EPSILON
    mirrored = eps @ np.conj(np.swapaxes(coeffs.matrices, -1, -2)) @ eps
    return float(np.max(np.abs(mirrored - coeffs.matrices))), float(np.max(np.abs(coeffs.matrices.imag)))


# === SPINOR DERIVATIVES ===

def spinor_covariant_derivative(value: np.ndarray, derivative: np.ndarray, matrix: np.ndarray,
                                flavor: str = "undotted") -> np.ndarray:
    """D_v of a two-component object given its value, d_v value and Omega_v.

    undotted columns: d xi + Omega xi / 2
    dotted rows by conjugation: d xidot - xidot (eps Omega^dagger eps) / 2
    dotted rows as needed by the Leibniz rule: d xidot - xidot Omega / 2
    Pauli matrices: d P + [Omega, P] / 2
    """
    value = np.asarray(value, dtype=complex)
    derivative = np.asarray(derivative, dtype=complex)
    if flavor == "undotted":
        return derivative + 0.5 * matrix @ value
    if flavor == "dotted":
        conjugated = pauli.EPSILON @ np.conj(matrix.T) @ pauli.EPSILON
        return derivative - 0.5 * value @ conjugated
    if flavor == "dotted_leibniz":
        return derivative - 0.5 * value @ matrix
    if flavor == "pauli":
        return derivative + 0.5 * (matrix @ value - value @ matrix)
    raise DomainError(f"unknown spinor flavor {flavor!r}; expected one of {FLAVORS}")


def _random_spinor(rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=2) + 1j * rng.normal(size=2)


def dotted_chain_residual(coeffs: SpinorConnectionCoeffs, rng: np.random.Generator, trials: int = 4) -> float:
    """Derivative of xidot = conj(xi) eps computed through D xi versus the dotted rule"""
    worst = 0.0
    for matrix in coeffs.matrices:
        for _ in range(trials):
            xi, d_xi = _random_spinor(rng), _random_spinor(rng)
            through_undotted = pauli.dotted(spinor_covariant_derivative(xi, d_xi, matrix, "undotted"))
            direct = spinor_covariant_derivative(pauli.dotted(xi), pauli.dotted(d_xi), matrix, "dotted")
            worst = max(worst, float(np.max(np.abs(through_undotted - direct))))
    return worst


def pauli_leibniz_residuals(coeffs: SpinorConnectionCoeffs, rng: np.random.Generator,
                            trials: int = 4) -> Tuple[float, float]:
    """Leibniz rule on P = phi xidot with the two dotted rules.

    Returns (residual with the Leibniz dotted rule, residual with the conjugation rule).
    """
    leibniz, chain = 0.0, 0.0
    for matrix in coeffs.matrices:
        for _ in range(trials):
            phi, d_phi = _random_spinor(rng), _random_spinor(rng)
            row, d_row = _random_spinor(rng), _random_spinor(rng)
            p = np.outer(phi, row)
            d_p = np.outer(d_phi, row) + np.outer(phi, d_row)
            whole = spinor_covariant_derivative(p, d_p, matrix, "pauli")
            d_phi_cov = spinor_covariant_derivative(phi, d_phi, matrix, "undotted")
            for flavor in ("dotted_leibniz", "dotted"):
                d_row_cov = spinor_covariant_derivative(row, d_row, matrix, flavor)
                parts = np.outer(d_phi_cov, row) + np.outer(phi, d_row_cov)
                gap = float(np.max(np.abs(whole - parts)))
                if flavor == "dotted":
                    chain = max(chain, gap)
                else:
                    leibniz = max(leibniz, gap)
    return leibniz, chain


def pauli_kernel_residual(geometry, field: Jet) -> float:
    """Matrix rule d P + [Omega, P] / 2 against the kernel rule for an even field P"""
    from app.core.jets import directional

    coeffs = spinor_omega(geometry)
    values = field.value
    derivatives = directional(field.truncate(1), geometry.frame.truncate(0)).value
    worst = 0.0
    for a in range(4):
        kernel = derivatives[a] + 0.5 * ga.commutator(coeffs.omega[a], values)
        matrix = spinor_covariant_derivative(pauli.to_matrix(values), pauli.to_matrix(derivatives[a]),
                                             coeffs.matrices[a], "pauli")
        worst = max(worst, float(np.max(np.abs(pauli.to_matrix(kernel) - matrix))))
    return worst


def idempotent_derivative_residual(geometry) -> float:
    """D_{e_0} e = [omega_0, e] / 2 in the kernel and in the matrix picture"""
    coeffs = spinor_omega(geometry)
    e = pauli.idempotent()
    kernel = 0.5 * ga.commutator(coeffs.omega[0], e)
    matrix = spinor_covariant_derivative(pauli.to_matrix(e), np.zeros((2, 2)), coeffs.matrices[0], "pauli")
    return float(np.max(np.abs(pauli.to_matrix(kernel) - matrix)))


# === PARAVECTOR FIELDS ===

def paravector_fields(geometry) -> Tuple[Jet, Jet]:
    """(q_mu = e_mu e_0, q^mu = e^mu e_0) as jets with value shape (4, 16)"""
    lower = geometry.h.map(lambda p: pauli.paravector(np.swapaxes(p, -1, -2)))
    upper = geometry.frame.map(lambda p: pauli.paravector(p * ga.ETA))
    return lower, upper


def paravector_derivative(geometry) -> np.ndarray:
    """d_nu q_mu + omega_nu q_mu / 2 + q_mu omega_nu^dagger / 2, axes (nu, mu)"""
    lower, _ = paravector_fields(geometry)
    q, dq = lower.value, lower.parts[1]
    omega = geometry.omega_coordinate.value
    dagger = pauli.hermitian_conjugate(omega)
    return dq + 0.5 * _gp(omega[:, None], q[None, :]) + 0.5 * _gp(q[None, :], dagger[:, None])


def frame_vector_derivative(geometry) -> np.ndarray:
    """D_nu e_mu for the coordinate vectors e_mu = h^a_mu e_a, axes (nu, mu)"""
    h, dh = geometry.h.value, geometry.h.parts[1]
    omega = geometry.omega_coordinate.value
    vectors = ga.vector(h.T)
    return ga.vector(np.swapaxes(dh, -1, -2)) + 0.5 * ga.commutator(omega[:, None], vectors[None, :])


def paravector_product_rule(geometry) -> Dict[str, float]:
    """Compare the Sachs rule with (D e_mu) e_0 and with the full product rule.

    frame_form: |Sachs - (D e_mu) e_0|, identically zero
    product_rule: |Sachs - (D e_mu) e_0 - e_mu (D e_0)|
    witness: |e_mu (D e_0)|
    """
    sachs = paravector_derivative(geometry)
    d_e = frame_vector_derivative(geometry)
    omega = geometry.omega_coordinate.value
    vectors = ga.vector(geometry.h.value.T)
    d_e0 = 0.5 * ga.commutator(omega, pauli.E0)
    frame_form = _gp(d_e, pauli.E0)
    extra = _gp(vectors[None, :], d_e0[:, None])
    return {
        "frame_form": _mv_norm(sachs - frame_form),
        "product_rule": _mv_norm(sachs - frame_form - extra),
        "witness": _mv_norm(extra),
    }


def sachs_total_derivative(geometry) -> np.ndarray:
    """D^S_nu q_mu in the matrix picture, axes (nu, mu, 2, 2); vanishes identically"""
    lower, _ = paravector_fields(geometry)
    q = pauli.to_matrix(lower.value)
    dq = pauli.to_matrix(lower.parts[1])
    omega = pauli.to_matrix(geometry.omega_coordinate.value)
    dagger = np.conj(np.swapaxes(omega, -1, -2))
    gamma = geometry.christoffel.value
    shift = np.einsum("anm,aij->nmij", gamma, q)
    return dq + 0.5 * omega[:, None] @ q[None, :] + 0.5 * q[None, :] @ dagger[:, None] - shift


def sachs_total_derivative_undaggered(geometry) -> Tuple[float, float]:
    """Multivector form with q_mu omega_nu in place of q_mu omega_nu^dagger.

    Returns (residual, witness) with witness |q_mu W_nu|, W the rotation part of omega.
    """
    lower, _ = paravector_fields(geometry)
    q, dq = lower.value, lower.parts[1]
    omega = geometry.omega_coordinate.value
    gamma = geometry.christoffel.value
    shift = np.einsum("anm,az->nmz", gamma, q)
    literal = dq + 0.5 * _gp(omega[:, None], q[None, :]) + 0.5 * _gp(q[None, :], omega[:, None]) - shift
    witness = _gp(q[None, :], rotation_part(omega)[:, None])
    return _mv_norm(literal), _mv_norm(witness)


def paravector_contractions(geometry) -> Dict[str, float]:
    """Contraction identities of the q fields and the reconstruction of omega from them"""
    lower, upper = paravector_fields(geometry)
    q_low = lower.value
    q_up, dq_up = upper.value, upper.parts[1]
    checked = pauli.check(q_low)
    omega = geometry.omega_coordinate.value
    gamma = geometry.christoffel.value

    trace = np.sum(_gp(q_up, checked), axis=0)
    trace_matrix = np.sum(pauli.to_matrix(q_up) @ pauli.to_matrix(checked), axis=0)
    sandwich = np.sum(_gp(_gp(q_up[None, :], omega[:, None]), checked[None, :]), axis=1)

    covariant = dq_up + np.einsum("mrt,tz->rmz", gamma, q_up)       # [rho, mu]
    rebuilt = 0.5 * np.sum(_gp(covariant, checked[None, :]), axis=1)
    literal = -0.5 * np.sum(_gp(checked[None, :], covariant), axis=1)
    return {
        "trace": _mv_norm(trace + 4.0 * pauli.ONE),
        "trace_matrix": float(np.max(np.abs(trace_matrix + 4.0 * np.eye(2)))),
        "sandwich": _mv_norm(sandwich),
        "omega_rebuilt": _mv_norm(rebuilt - omega),
        "omega_literal": _mv_norm(literal - omega),
        "omega_literal_witness": 2.0 * _mv_norm(boost_part(omega)),
    }


def q_tensor_decomposition(geometry) -> Tuple[np.ndarray, np.ndarray]:
    """Symmetric and antisymmetric parts of q_mu q-check_nu, axes (mu, nu, 16)"""
    lower, _ = paravector_fields(geometry)
    q = lower.value
    product = _gp(q[:, None], pauli.check(q)[None, :])
    transposed = np.swapaxes(product, 0, 1)
    return 0.5 * (product + transposed), 0.5 * (product - transposed)


def tetrad_antisymmetric_part(geometry) -> np.ndarray:
    return q_tensor_decomposition(geometry)[1]


def spatial_antisymmetric_part(h: np.ndarray) -> np.ndarray:
    """eps_ijk h^i_mu h^j_nu i sigma_k, the spatial-legs-only expression"""
    spatial = h[1:]
    coefficients = np.einsum("ijk,im,jn->mnk", LEVI_CIVITA, spatial, spatial)
    return np.einsum("mnk,kz->mnz", coefficients, pauli.I_SIGMA)


def boost_antisymmetric_part(h: np.ndarray) -> np.ndarray:
    """(h^0_mu h^j_nu - h^j_mu h^0_nu) sigma_j"""
    mixed = np.einsum("m,jn->mnj", h[0], h[1:])
    return np.einsum("mnj,jz->mnz", mixed - np.swapaxes(mixed, 0, 1), pauli.SIGMA)


# === FRAME CONSTRAINTS ===

@dataclass
class InertialReport:
    """Sizes of the frame conditions a spinor structure may demand"""
    d_e0: float
    ricci_e0: float
    geodesic: float
    fermi: float
    teleparallel: float
    curvature: float


def inertial_constraint_check(geometry) -> InertialReport:
    """D e_0, Ric(e_0, .), D_{e_0} e_0, D_{e_0} e_i and the teleparallel case at one point.

    The geometry needs connection order >= 1 for the curvature entries.
    """
    conn = geometry.connection.value
    ricci = geometry.ricci.value
    riemann = geometry.riemann.value
    return InertialReport(
        d_e0=float(np.max(np.abs(conn[:, :, 0]))),
        ricci_e0=float(np.max(np.abs(ricci[0]))),
        geodesic=float(np.max(np.abs(conn[0, :, 0]))),
        fermi=float(np.max(np.abs(conn[0, :, 1:]))),
        teleparallel=float(np.max(np.abs(conn))),
        curvature=float(np.max(np.abs(riemann))),
    )


def pauli_constraint_residual(geometry) -> np.ndarray:
    """max_i |D_{e_a}(e_i e_0)| for each frame direction a"""
    omega = geometry.omega_tangent.value
    derivative = 0.5 * ga.commutator(omega[:, None], pauli.SIGMA[None, :])
    return np.max(np.abs(derivative), axis=(1, 2))


def gamma_identity_residual(geometry, perturbation: Optional[np.ndarray] = None) -> float:
    """max |conn[a, c, b] e_c - [omega_a, e_b] / 2|.

    perturbation adds to conn[b, a, c] a part that is symmetric in the lowered
    indices, which no bivector can reproduce.
    """
    conn = geometry.connection.value
    if perturbation is not None:
        conn = conn + perturbation
    omega = geometry.omega_tangent.value
    rotated = 0.5 * ga.commutator(omega[:, None], E[None, :])
    expanded = ga.vector(np.swapaxes(conn, -1, -2))
    return _mv_norm(expanded - rotated)


def nonmetric_perturbation(rng: np.random.Generator, scale: float = 0.1) -> np.ndarray:
    """conn-shaped perturbation whose lowered form is symmetric in (a, c)"""
    raw = rng.normal(scale=scale, size=(4, 4, 4))
    symmetric = 0.5 * (raw + np.swapaxes(raw, 1, 2))
    return symmetric * ga.ETA[:, None]


# === FERMI TRANSPORT ORACLE ===

@dataclass
class TransportResult:
    endpoint: np.ndarray
    transported: np.ndarray
    frame: np.ndarray
    steps: int
    residual: float


def _transport_rhs(tetrad) -> Callable[[np.ndarray], np.ndarray]:
    def rhs(state: np.ndarray) -> np.ndarray:
        x = state[:4]
        vectors = state[4:].reshape(4, 4)                # rows: e_a^mu
        gamma = tetrad.geometry(x, 0).christoffel.value  # [alpha, nu, mu]
        velocity = vectors[0]
        d_vectors = -np.einsum("anm,n,bm->ba", gamma, velocity, vectors)
        return np.concatenate([velocity, d_vectors.ravel()])
    return rhs


def _rk4(rhs: Callable[[np.ndarray], np.ndarray], state: np.ndarray, duration: float, steps: int) -> np.ndarray:
    dt = duration / steps
    for _ in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * dt * k1)
        k3 = rhs(state + 0.5 * dt * k2)
        k4 = rhs(state + dt * k3)
        state = state + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return state


def fermi_transport_oracle(tetrad, start: np.ndarray, duration: float, convergence: float = 1e-8,
                           max_steps: int = 4096) -> TransportResult:
    """Integrate the geodesic of e_0 and parallel-transport the frame along it.

    Steps double until halving the step moves the final state by less than
    `convergence`; the residual compares the transported frame with the
    tetrad's own frame at the endpoint.
    """
    start = np.asarray(start, dtype=float)
    frame = tetrad.geometry(start, 0).frame.value
    initial = np.concatenate([start, frame.T.ravel()])
    rhs = _transport_rhs(tetrad)
    steps = 8
    previous = _rk4(rhs, initial, duration, steps)
    while True:
        steps *= 2
        current = _rk4(rhs, initial, duration, steps)
        change = float(np.max(np.abs(current - previous)))
        logger.debug("transport with %d steps changed by %.3e", steps, change)
        previous = current
        if change < convergence or steps >= max_steps:
            break
    endpoint = current[:4]
    transported = current[4:].reshape(4, 4)
    own = tetrad.geometry(endpoint, 0).frame.value.T
    return TransportResult(endpoint, transported, own, steps, float(np.max(np.abs(transported - own))))

