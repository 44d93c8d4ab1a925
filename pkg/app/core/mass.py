"""
Surface mass integrals on asymptotically flat quasi-Cartesian charts
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core import algebra as ga
from app.core.errors import ChartDomainError

logger = logging.getLogger(__name__)


@dataclass
class MassEstimate:
    """Extrapolated mass with the per-radius values behind it"""
    value: float
    radii: List[float]
    per_radius: List[float]
    quadrature_orders: List[int]
    superpotential: Optional[float] = None
    superpotential_per_radius: List[float] = field(default_factory=list)


def _require_flat(tetrad):
    if not tetrad.chart.asymptotically_flat:
        raise ChartDomainError(f"{tetrad.label}: the mass integral needs an asymptotically flat quasi-Cartesian chart")


def _sphere_point(radius: float, cos_theta: float, phi: float) -> Tuple[np.ndarray, np.ndarray]:
    sin_theta = np.sqrt(max(1.0 - cos_theta ** 2, 0.0))
    normal = np.array([0.0, sin_theta * np.cos(phi), sin_theta * np.sin(phi), cos_theta])
    return radius * normal, normal


def flux_density(tetrad, x: np.ndarray, normal: np.ndarray) -> float:
    """d_beta(g11 g22 g33 g^{alpha beta}) N_alpha at x"""
    geometry = tetrad.geometry(x, 0)
    metric = geometry.metric
    inverse = geometry.metric_inverse
    g, dg = metric.value, metric.parts[1]
    g_inv, dg_inv = inverse.value, inverse.parts[1]
    diagonal = np.array([g[i, i] for i in (1, 2, 3)])
    product = float(np.prod(diagonal))
    d_product = product * sum(dg[:, i, i] / g[i, i] for i in (1, 2, 3))
    divergence = np.einsum("b,ab->a", d_product, g_inv) + product * np.einsum("bab->a", dg_inv)
    return float(divergence @ normal)


def _sphere_quadrature(integrand: Callable[[float, float], float], order: int) -> float:
    """Gauss-Legendre in cos(theta) times the trapezoid rule in phi"""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    phis = np.linspace(0.0, 2 * np.pi, 2 * order, endpoint=False)
    step = 2 * np.pi / len(phis)
    total = 0.0
    for node, weight in zip(nodes, weights):
        for phi in phis:
            total += weight * step * integrand(node, phi)
    return total


def _refined(integrand: Callable[[float, float], float], start: int, maximum: int,
             convergence: float) -> Tuple[float, int]:
    order = start
    previous = _sphere_quadrature(integrand, order)
    while order < maximum:
        order *= 2
        current = _sphere_quadrature(integrand, order)
        change = abs(current - previous)
        logger.debug("sphere quadrature order %d changed by %.3e", order, change)
        previous = current
        if change < convergence:
            break
    return previous, order


def mass_at_radius(tetrad, radius: float, start: int = 8, maximum: int = 128,
                   convergence: float = 1e-8) -> Tuple[float, int]:
    """-(1/16 pi) of the flux through the coordinate sphere of the given radius"""
    def integrand(cos_theta: float, phi: float) -> float:
        x, normal = _sphere_point(radius, cos_theta, phi)
        return flux_density(tetrad, x, normal) * radius ** 2

    flux, order = _refined(integrand, start, maximum, convergence)
    return -flux / (16 * np.pi), order


def _extrapolate(radii: Sequence[float], values: Sequence[float]) -> float:
    """Intercept of a linear fit in 1/R"""
    if len(radii) == 1:
        return float(values[0])
    slope, intercept = np.polyfit(1.0 / np.asarray(radii, dtype=float), np.asarray(values, dtype=float), 1)
    return float(intercept)


def superpotential_flux(tetrad, radius: float, order: int = 16) -> float:
    """-(1/8 pi) times the integral of the 2-form star S^0 over the coordinate sphere.

    Gauss-Legendre in theta times the trapezoid rule in phi; the 2-form is
    evaluated on the coordinate tangent vectors d/dtheta and d/dphi.
    """
    from app.core.einstein import superpotential_field

    star_s = superpotential_field(tetrad)
    nodes, weights = np.polynomial.legendre.leggauss(order)
    thetas = 0.5 * np.pi * (nodes + 1.0)
    phis = np.linspace(0.0, 2 * np.pi, 2 * order, endpoint=False)
    step = 2 * np.pi / len(phis)
    total = 0.0
    for theta, weight in zip(thetas, weights):
        for phi in phis:
            x = radius * np.array([0.0, np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
            d_theta = radius * np.array([0.0, np.cos(theta) * np.cos(phi), np.cos(theta) * np.sin(phi),
                                         -np.sin(theta)])
            d_phi = radius * np.array([0.0, -np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), 0.0])
            h = tetrad.geometry(x, 0).h.value
            u, v = h @ d_theta, h @ d_phi
            pairs = np.outer(u, v) - np.outer(v, u)
            form = star_s.jet(x, 0).value[0]
            value = sum(form[mask] * pairs[a, b] for (a, b), mask in zip(ga.BIVECTOR_PAIRS, ga.BIVECTOR_MASKS))
            total += 0.5 * np.pi * weight * step * value
    return -total / (8 * np.pi)


def mass_integral(tetrad, radii: Sequence[float], start: int = 8, maximum: int = 128, convergence: float = 1e-8,
                  with_superpotential: bool = True) -> MassEstimate:
    """Inertial mass from the flux integral on a ladder of radii, extrapolated in 1/R.

    Radii are given in units of the chart's mass parameter when it has one.
    """
    _require_flat(tetrad)
    scale = float(tetrad.params.get("m", 1.0))
    absolute = [float(r) * scale for r in radii]
    values, orders = [], []
    for radius in absolute:
        value, order = mass_at_radius(tetrad, radius, start, maximum, convergence)
        logger.info("%s: mass %.10f at radius %g (quadrature order %d)", tetrad.label, value, radius, order)
        values.append(value)
        orders.append(order)
    estimate = MassEstimate(_extrapolate(absolute, values), absolute, values, orders)
    if with_superpotential:
        surface = [superpotential_flux(tetrad, radius) for radius in absolute]
        estimate.superpotential_per_radius = surface
        estimate.superpotential = _extrapolate(absolute, surface)
    return estimate


def companion_charts(tetrad) -> Dict[str, object]:
    """Asymptotically flat charts of the same family used by the energy checks"""
    from app.core.tetrads import builtin_spacetime

    if tetrad.family == "schwarzschild":
        params = {"m": tetrad.params.get("m", 1.0)}
        return {chart: builtin_spacetime("schwarzschild", params, chart, tetrad.provider, tetrad.fd_step)
                for chart in ("isotropic", "alternative")}
    if tetrad.family == "minkowski":
        return {"cartesian": builtin_spacetime("minkowski", {}, "cartesian", tetrad.provider, tetrad.fd_step)}
    if tetrad.chart.asymptotically_flat:
        return {tetrad.variant: tetrad}
    raise ChartDomainError(f"{tetrad.label}: no asymptotically flat chart is available for the mass integral")
