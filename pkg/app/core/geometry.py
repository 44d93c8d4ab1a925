"""
Chart geometry of a tetrad at a point, carried as jets.

Conventions: D_{e_b} e_c = conn[b, a, c] e_a, the tangent connection bivector
omega_b has blade coefficients omega_b^{ac} = conn[b, a, c] eta^{cc} so that
(1/2)[omega_b, v] = D_{e_b} v, and the curvature bivectors
R_mu_nu = d_mu omega_nu - d_nu omega_mu + (1/2)[omega_mu, omega_nu] satisfy
(1/2)[R_mu_nu, v] = [D_mu, D_nu] v.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from app.core import algebra as ga
from app.core import jets
from app.core.errors import DegenerateMetricError, DomainError
from app.core.jets import Jet

logger = logging.getLogger(__name__)

ETA = ga.ETA
ETA_MATRIX = np.diag(ETA)


def bivector_matrix(values: np.ndarray) -> np.ndarray:
    """Antisymmetric (..., 4, 4) coefficient matrix of the bivector part"""
    values = np.asarray(values, dtype=float)
    out = np.zeros(values.shape[:-1] + (4, 4))
    for (a, b), mask in zip(ga.BIVECTOR_PAIRS, ga.BIVECTOR_MASKS):
        out[..., a, b] = values[..., mask]
        out[..., b, a] = -values[..., mask]
    return out


def _curl(p: np.ndarray) -> np.ndarray:
    # (.., mu, a, nu) -> (.., a, mu, nu) antisymmetrised in mu, nu
    q = np.moveaxis(p, -2, -3)
    return q - np.swapaxes(q, -1, -2)


class LocalGeometry:
    """Tetrad-derived quantities at one chart point.

    `order` is the jet order of the connection; metric quantities are one
    order higher and curvature one order lower.
    """

    def __init__(self, tetrad, x: np.ndarray, order: int):
        self.tetrad = tetrad
        self.x = np.asarray(x, dtype=float)
        self.order = order
        self.h = tetrad.jet(self.x, order + 1)
        try:
            self.frame = jets.inverse(self.h)
        except DegenerateMetricError as e:
            raise DegenerateMetricError(f"{tetrad.label}: {str(e)} at {self.x.tolist()}") from e

    # --- metric ---

    @cached_property
    def metric(self) -> Jet:
        weighted = self.h.map(lambda p: p * ETA[:, None])
        return jets.einsum("...am,...an->...mn", self.h, weighted, core=(2, 2))

    @cached_property
    def metric_inverse(self) -> Jet:
        weighted = self.frame.map(lambda p: p * ETA)
        return jets.einsum("...ma,...na->...mn", self.frame, weighted, core=(2, 2))

    @cached_property
    def christoffel(self) -> Jet:
        """Gamma^alpha_{nu mu} from the metric, value shape (alpha, nu, mu)"""
        dg = self.metric.grad()

        def lower(p: np.ndarray) -> np.ndarray:
            # p[.., s, m, n] = d_s g_mn ; result [beta, nu, mu]
            first = np.swapaxes(p, -3, -2)           # [beta, nu, mu] <- d_nu g_beta_mu
            second = np.moveaxis(p, -3, -1)          # [beta, nu, mu] <- d_mu g_beta_nu
            return 0.5 * (first + second - p)

        return jets.einsum("...ab,...bnm->...anm", self.metric_inverse.truncate(self.order), dg.map(lower),
                           core=(2, 3))

    # --- frame connection ---

    @cached_property
    def anholonomy(self) -> Jet:
        """C^a_{bc} with [e_b, e_c] = C^a_{bc} e_a"""
        curl = self.h.grad().map(_curl)
        frame = self.frame.truncate(self.order)
        half = jets.einsum("...amn,...nc->...amc", curl, frame, core=(3, 2))
        return -1.0 * jets.einsum("...mb,...amc->...abc", frame, half, core=(2, 3))

    @cached_property
    def connection_low(self) -> Jet:
        """g(D_{e_b} e_c, e_a) stored as [b, a, c]"""
        def koszul(p: np.ndarray) -> np.ndarray:
            low = p * ETA[:, None, None]
            return 0.5 * (np.einsum("...abc->...bac", low) - np.einsum("...bca->...bac", low)
                          + np.einsum("...cab->...bac", low))

        return self.anholonomy.map(koszul)

    @cached_property
    def connection(self) -> Jet:
        """conn[b, a, c] with D_{e_b} e_c = conn[b, a, c] e_a"""
        return self.connection_low.map(lambda p: p * ETA[:, None])

    @cached_property
    def omega_tangent(self) -> Jet:
        """Connection bivectors omega_b acting on Cl(TM), value (4, 16)"""
        return self.connection.map(lambda p: ga.bivector(p * ETA))

    @cached_property
    def omega_cotangent(self) -> Jet:
        """Connection bivectors acting on Cl(T*M) frame components"""
        return self.connection_low.map(ga.bivector)

    @cached_property
    def omega_coordinate(self) -> Jet:
        """omega_mu = h^b_mu omega_b"""
        return jets.einsum("...bm,...bz->...mz", self.h.truncate(self.order), self.omega_tangent, core=(2, 2))

    @cached_property
    def christoffel_from_frame(self) -> Jet:
        """Gamma^alpha_{nu mu} = E^alpha_a (d_nu h^a_mu + h^b_nu conn[b, a, c] h^c_mu)"""
        h = self.h.truncate(self.order)
        mixed = jets.einsum("...bn,...bac->...nac", h, self.connection, core=(2, 3))
        mixed = jets.einsum("...nac,...cm->...nam", mixed, h, core=(3, 2))
        total = mixed + self.h.grad()
        return jets.einsum("...la,...nam->...lnm", self.frame.truncate(self.order), total, core=(2, 3))

    # --- curvature ---

    @cached_property
    def curvature_coordinate(self) -> Jet:
        """R_mu_nu bivectors, value (4, 4, 16), one order below the connection"""
        omega = self.omega_coordinate
        d_omega = omega.grad().map(lambda p: p - np.swapaxes(p, -2, -3))
        left = omega.truncate(self.order - 1)
        pairs = jets.bilinear(left, left, lambda a, b: ga.commutator(a[..., :, None, :], b[..., None, :, :]),
                              core=(2, 2))
        return d_omega + 0.5 * pairs

    @cached_property
    def curvature_frame(self) -> Jet:
        """R_cd = E^mu_c E^nu_d R_mu_nu"""
        frame = self.frame.truncate(self.order - 1)
        half = jets.einsum("...mc,...mnz->...cnz", frame, self.curvature_coordinate, core=(2, 3))
        return jets.einsum("...nd,...cnz->...cdz", frame, half, core=(2, 3))

    @cached_property
    def riemann(self) -> Jet:
        """R^{ab}_{cd}, value [a, b, c, d]"""
        return self.curvature_frame.map(lambda p: np.moveaxis(bivector_matrix(p), (-2, -1), (-4, -3)))

    @cached_property
    def riemann_mixed(self) -> Jet:
        """R^a_{bcd} with [D_c, D_d] e_b = R^a_{bcd} e_a"""
        return self.riemann.map(lambda p: p * ETA[:, None, None])

    @cached_property
    def ricci(self) -> Jet:
        """Ric_bd = R^a_{bad}"""
        return self.riemann_mixed.map(lambda p: np.einsum("...abad->...bd", p))

    @cached_property
    def scalar_curvature(self) -> Jet:
        return self.ricci.map(lambda p: np.einsum("...bb,b->...", p, ETA))

    @cached_property
    def einstein(self) -> Jet:
        """G_ab = Ric_ab - eta_ab R / 2"""
        return self.ricci - self.scalar_curvature.map(lambda s: 0.5 * s[..., None, None] * ETA_MATRIX)

    @cached_property
    def kretschmann(self) -> float:
        riemann = self.riemann.value
        signs = np.einsum("a,b,c,d->abcd", ETA, ETA, ETA, ETA)
        return float(np.sum(riemann * riemann * signs))

    def riemann_from_christoffel(self) -> np.ndarray:
        """Independent route: coordinate Riemann from Christoffel symbols, converted to R^a_{bcd}"""
        gamma = self.christoffel
        g0 = gamma.value
        dg = gamma.parts[1]                                   # [s, alpha, nu, mu]
        # R^alpha_{beta mu nu} = d_mu G^a_{nu b} - d_nu G^a_{mu b} + G^a_{mu s} G^s_{nu b} - G^a_{nu s} G^s_{mu b}
        d_mu = np.einsum("manb->abmn", dg)
        quadratic = np.einsum("ams,snb->abmn", g0, g0)
        coordinate = d_mu - np.swapaxes(d_mu, -1, -2) + quadratic - np.swapaxes(quadratic, -1, -2)
        h = self.h.value
        frame = self.frame.value
        return np.einsum("Aa,abmn,bB,mC,nD->ABCD", h, coordinate, frame, frame, frame)

    def ricci_vector(self) -> Jet:
        """R_a = -e^b _| R_ab as vectors, value (4, 16)"""
        curvature = self.curvature_frame
        upper = ga.vector(np.diag(ETA))                      # e^b = eta^bb e_b

        def contract(p: np.ndarray) -> np.ndarray:
            return -np.einsum("...abz->...az", ga.left_contract(upper[None, :, :], p))

        return curvature.map(contract)


@dataclass
class KinematicsResult:
    acceleration: np.ndarray
    rotation: np.ndarray
    shear: np.ndarray
    expansion: float
    acceleration_magnitude: float
    reassembly_residual: float
    orthogonality_residual: float


class ObserverField:
    """Frame vector e_index of a tetrad as a vector field, coordinate components"""

    def __init__(self, tetrad, index: int = 0):
        self.tetrad = tetrad
        self.index = index

    def jet(self, x: np.ndarray, order: int) -> Jet:
        frame = jets.inverse(self.tetrad.jet(x, order))
        return frame.map(lambda p: p[..., :, self.index])


def frame_kinematics(geometry: LocalGeometry, velocity=None, unit_tolerance: float = 1e-8) -> KinematicsResult:
    """Split of grad Z for a unit timelike Z (default e_0), covariant indices.

    grad_beta Z_alpha = Z_beta a_alpha + rot_{alpha beta} + shear_{alpha beta} + E p_{alpha beta} / 3

    A velocity field that is not unit timelike and future-directed raises DomainError.
    """
    if velocity is None:
        z_up = geometry.frame.value[:, 0]
        z_low = geometry.h.value[0]
        dz_low = geometry.h.parts[1][:, 0, :]
    else:
        up = velocity.jet(geometry.x, 1)
        low = jets.einsum("...mn,...n->...m", geometry.metric.truncate(1), up, core=(2, 1))
        z_up, z_low, dz_low = up.value, low.value, low.parts[1]
        norm = float(z_up @ z_low)
        if not np.isfinite(norm) or abs(norm - 1.0) > unit_tolerance:
            raise DomainError(f"observer field must satisfy Z.Z = 1, got {norm:.6g} at {geometry.x.tolist()}")
        if float(z_up @ geometry.h.value[0]) <= 0.0:
            raise DomainError(f"observer field is past-directed at {geometry.x.tolist()}")
    g = geometry.metric.value
    g_inv = geometry.metric_inverse.value
    gamma = geometry.christoffel.value
    nabla = dz_low - np.einsum("sba,s->ba", gamma, z_low)       # [beta, alpha]
    z_ab = nabla.T                                              # Z_{alpha;beta}
    projector = np.eye(4) - np.outer(z_up, z_low)               # p^alpha_mu
    p_low = g - np.outer(z_low, z_low)
    acceleration = z_up @ nabla
    expansion = float(np.einsum("ab,ab->", g_inv, z_ab))
    rotation = projector.T @ (0.5 * (z_ab - z_ab.T)) @ projector
    shear = projector.T @ (0.5 * (z_ab + z_ab.T) - expansion / 3.0 * p_low) @ projector
    rebuilt = np.outer(acceleration, z_low) + rotation + shear + expansion / 3.0 * p_low
    a_up = g_inv @ acceleration
    magnitude = float(np.sqrt(max(-(acceleration @ a_up), 0.0)))
    orthogonality = max(np.max(np.abs(rotation @ z_up)), np.max(np.abs(shear @ z_up)), abs(acceleration @ z_up))
    return KinematicsResult(acceleration, rotation, shear, expansion, magnitude,
                            float(np.max(np.abs(z_ab - rebuilt))), float(orthogonality))
