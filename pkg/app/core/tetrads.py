"""
Tetrad fields and the builtin spacetimes.

A TetradField carries the coframe h^a_mu as sympy expressions in its chart
coordinates, plus the derivative provider used to turn it into jets: exact
symbolic derivatives, or nested central differences of the compiled value.
"""
import logging
import threading
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from app.core.errors import ChartDomainError, ConfigError, DegenerateMetricError
from app.core.fields import ConvergenceResult, FiniteDifferenceField, SymbolicField, central_difference_convergence
from app.core.jets import Jet

logger = logging.getLogger(__name__)

Sampler = Callable[[np.random.Generator], np.ndarray]
DomainCheck = Callable[[np.ndarray], Optional[str]]

PROVIDERS = ("analytic", "fd")


@dataclass
class ChartData:
    """Everything about a chart that is not the coframe itself"""
    domain: DomainCheck
    sampler: Sampler
    areal_radius: Optional[Callable[[np.ndarray], float]] = None
    strong_field_point: Optional[np.ndarray] = None
    asymptotically_flat: bool = False
    gauge_rapidity: Optional[sympy.Expr] = None
    teleparallel_reference: bool = False
    fermi_reference: bool = False
    harmonic: bool = False


class TetradField:
    """Coframe h^a_mu(x) on one chart with a derivative provider"""

    def __init__(self, family: str, variant: str, params: Dict[str, float], symbols: Sequence[sympy.Symbol],
                 tetrad: sympy.Matrix, chart: ChartData, energy_momentum: Optional[sympy.Matrix] = None,
                 provider: str = "analytic", fd_step: float = 1e-5):
        if provider not in PROVIDERS:
            raise ConfigError(f"unknown derivative provider {provider!r}; expected one of {PROVIDERS}")
        self.family = family
        self.variant = variant
        self.params = dict(params)
        self.symbols = list(symbols)
        self.tetrad = sympy.Matrix(tetrad)
        self.chart = chart
        self.provider = provider
        self.fd_step = fd_step
        self._symbolic = SymbolicField(self.tetrad.tolist(), self.symbols)
        self._fd = FiniteDifferenceField(lambda x: self._symbolic.evaluate(x, 0), fd_step)
        self._matter = SymbolicField(sympy.Matrix(energy_momentum).tolist(), self.symbols) \
            if energy_momentum is not None else None
        self._jets: Dict[Tuple[bytes, int], Jet] = {}
        self._geometry: Dict[Tuple[bytes, int], "object"] = {}
        self._lock = threading.Lock()

    @property
    def label(self) -> str:
        params = ",".join(f"{k}={v:g}" for k, v in sorted(self.params.items()))
        return f"{self.family}/{self.variant}" + (f"({params})" if params else "")

    @property
    def has_matter_model(self) -> bool:
        return self._matter is not None

    def check_domain(self, x: np.ndarray):
        x = np.asarray(x, dtype=float)
        if x.shape != (4,) or not np.all(np.isfinite(x)):
            raise ChartDomainError(f"{self.label}: a chart point has 4 finite coordinates, got {x!r}")
        problem = self.chart.domain(x)
        if problem:
            raise ChartDomainError(f"{self.label}: point {x.tolist()} outside the chart ({problem})")

    def jet(self, x: np.ndarray, order: int) -> Jet:
        """Coframe jet h^a_mu with value shape (4, 4)"""
        x = np.asarray(x, dtype=float)
        key = (x.tobytes(), order)
        with self._lock:
            jet = self._jets.get(key)
        if jet is None:
            self.check_domain(x)
            source = self._symbolic if self.provider == "analytic" else self._fd
            jet = source.jet(x, order)
            if not np.all(np.isfinite(jet.value)):
                raise ChartDomainError(f"{self.label}: non-finite tetrad at {x.tolist()}")
            if abs(np.linalg.det(jet.value)) < 1e-12:
                raise DegenerateMetricError(f"{self.label}: degenerate tetrad at {x.tolist()}")
            with self._lock:
                if len(self._jets) > 256:
                    self._jets.clear()
                self._jets[key] = jet
        return jet

    def analytic_jet(self, x: np.ndarray, order: int) -> Jet:
        self.check_domain(x)
        return self._symbolic.jet(np.asarray(x, dtype=float), order)

    def fd_convergence(self, x: np.ndarray, order: int, fd_step: float) -> ConvergenceResult:
        """Central-difference error of the order-k coframe derivatives at fd_step and fd_step / 2"""
        self.check_domain(x)
        return central_difference_convergence(lambda y: self._symbolic.evaluate(y, 0), self._symbolic, x, fd_step,
                                              order)

    def matter_jet(self, x: np.ndarray, order: int) -> Optional[Jet]:
        """Frame components T_ab of the matter model, or None when none is given"""
        if self._matter is None:
            return None
        return self._matter.jet(np.asarray(x, dtype=float), order)

    def geometry(self, x: np.ndarray, order: int):
        """LocalGeometry at x with connection jets of the given order"""
        from app.core.geometry import LocalGeometry

        x = np.asarray(x, dtype=float)
        key = (x.tobytes(), order)
        with self._lock:
            geometry = self._geometry.get(key)
        if geometry is None:
            geometry = LocalGeometry(self, x, order)
            with self._lock:
                if len(self._geometry) > 64:
                    self._geometry.clear()
                geometry = self._geometry.setdefault(key, geometry)
        return geometry

    def sample_points(self, rng: np.random.Generator, count: int) -> List[np.ndarray]:
        points = []
        attempts = 0
        while len(points) < count:
            attempts += 1
            if attempts > 100 * max(count, 1):
                raise ChartDomainError(f"{self.label}: could not draw points inside the chart")
            x = self.chart.sampler(rng)
            if self.chart.domain(x) is None:
                points.append(x)
        return points

    def with_provider(self, provider: str, fd_step: Optional[float] = None) -> "TetradField":
        return TetradField(self.family, self.variant, self.params, self.symbols, self.tetrad, self.chart,
                           self._matter.expressions.tomatrix() if self._matter is not None else None,
                           provider, self.fd_step if fd_step is None else fd_step)


def lorentz_boost(rapidity: sympy.Expr, plane: Tuple[int, int] = (0, 1)) -> sympy.Matrix:
    a, b = plane
    matrix = sympy.eye(4)
    matrix[a, a] = sympy.cosh(rapidity)
    matrix[b, b] = sympy.cosh(rapidity)
    matrix[a, b] = sympy.sinh(rapidity)
    matrix[b, a] = sympy.sinh(rapidity)
    return matrix


def spatial_rotation(angle: sympy.Expr, plane: Tuple[int, int] = (1, 2)) -> sympy.Matrix:
    a, b = plane
    matrix = sympy.eye(4)
    matrix[a, a] = sympy.cos(angle)
    matrix[b, b] = sympy.cos(angle)
    matrix[a, b] = -sympy.sin(angle)
    matrix[b, a] = sympy.sin(angle)
    return matrix


def boost_tetrad(tetrad: TetradField, rapidity: sympy.Expr, plane: Tuple[int, int] = (0, 1),
                 variant: Optional[str] = None) -> TetradField:
    """Compose a local Lorentz boost with the coframe: h' = Lambda(x) h"""
    boosted = lorentz_boost(rapidity, plane) * tetrad.tetrad
    chart = ChartData(**{**tetrad.chart.__dict__, "teleparallel_reference": False, "fermi_reference": False,
                         "harmonic": tetrad.chart.harmonic})
    matter = tetrad._matter.expressions.tomatrix() if tetrad._matter is not None else None
    if matter is not None:
        inverse = lorentz_boost(-rapidity, plane)
        matter = inverse.T * matter * inverse
    return TetradField(tetrad.family, variant or f"{tetrad.variant}+boost", tetrad.params, tetrad.symbols,
                       boosted, chart, matter, tetrad.provider, tetrad.fd_step)


# === BUILTIN SPACETIMES ===

def _box_sampler(bounds: Sequence[Tuple[float, float]]) -> Sampler:
    low = np.array([b[0] for b in bounds], dtype=float)
    high = np.array([b[1] for b in bounds], dtype=float)
    return lambda rng: rng.uniform(low, high)


def _shell_sampler(inner: float, outer: float, time: Tuple[float, float] = (-1.0, 1.0)) -> Sampler:
    def sample(rng: np.random.Generator) -> np.ndarray:
        radius = rng.uniform(inner, outer)
        cos_theta = rng.uniform(-0.95, 0.95)
        phi = rng.uniform(0.0, 2 * np.pi)
        sin_theta = np.sqrt(1 - cos_theta ** 2)
        return np.array([rng.uniform(*time), radius * sin_theta * np.cos(phi),
                         radius * sin_theta * np.sin(phi), radius * cos_theta])
    return sample


def _cartesian_point(radius: float, theta: float = 1.0, phi: float = 0.5) -> np.ndarray:
    return np.array([0.0, radius * np.sin(theta) * np.cos(phi), radius * np.sin(theta) * np.sin(phi),
                     radius * np.cos(theta)])


def _minkowski(params: Dict[str, float], chart: str):
    if chart == "cartesian":
        symbols = sympy.symbols("t x y z", real=True)
        data = ChartData(
            domain=lambda x: None,
            sampler=_box_sampler([(-2.0, 2.0)] * 4),
            asymptotically_flat=True,
            gauge_rapidity=sympy.Rational(1, 5) * symbols[1] + sympy.Rational(1, 10) * symbols[2],
            teleparallel_reference=True,
            harmonic=True,
        )
        return symbols, sympy.eye(4), data, None
    if chart == "spherical":
        t, r, th, ph = sympy.symbols("t r theta phi", real=True)
        data = ChartData(
            domain=lambda x: ("r must be positive" if x[1] <= 0 else
                              "sin(theta) must stay away from zero" if abs(np.sin(x[2])) <= 1e-6 else None),
            sampler=_box_sampler([(-1.0, 1.0), (1.0, 5.0), (0.3, np.pi - 0.3), (0.0, 2 * np.pi)]),
            areal_radius=lambda x: float(x[1]),
            gauge_rapidity=1 / r,
        )
        return (t, r, th, ph), sympy.diag(1, 1, r, r * sympy.sin(th)), data, None
    raise ConfigError(f"minkowski has charts 'cartesian' and 'spherical', not {chart!r}")


def _schwarzschild_coordinates(m: float, variant: str):
    t, r, th, ph = sympy.symbols("t r theta phi", real=True)
    mass = sympy.nsimplify(m)
    f = 1 - 2 * mass / r
    static = sympy.diag(sympy.sqrt(f), 1 / sympy.sqrt(f), r, r * sympy.sin(th))
    if variant == "static":
        tetrad = static
    elif variant == "boosted":
        tetrad = lorentz_boost(2 * mass / r) * static
    elif variant == "rotated":
        tetrad = spatial_rotation(mass / r + ph) * static
    else:
        s = sympy.sqrt(2 * mass / r)
        tetrad = sympy.Matrix([
            [1, s / f, 0, 0],
            [s, 1 / f, 0, 0],
            [0, 0, r, 0],
            [0, 0, 0, r * sympy.sin(th)],
        ])

    def domain(x: np.ndarray) -> Optional[str]:
        if x[1] <= 2 * m * (1 + 1e-6):
            return "r must exceed 2m"
        if abs(np.sin(x[2])) <= 1e-6:
            return "sin(theta) must stay away from zero"
        return None

    data = ChartData(
        domain=domain,
        sampler=_box_sampler([(-1.0, 1.0), (3.0 * m, 50.0 * m), (0.3, np.pi - 0.3), (0.0, 2 * np.pi)]),
        areal_radius=lambda x: float(x[1]),
        strong_field_point=np.array([0.0, 4.0 * m, 1.0, 0.5]),
        gauge_rapidity=2 * mass / r,
        fermi_reference=variant == "infalling",
    )
    return (t, r, th, ph), tetrad, data


def _isotropic_radius_for(areal: float, m: float) -> float:
    # rho (1 + m / 2 rho)^2 = areal, outer branch
    return 0.5 * (areal - m + np.sqrt(areal * (areal - 2 * m)))


def _schwarzschild_cartesian(m: float, variant: str, beta: float = 1.0):
    t, x, y, z = sympy.symbols("t x y z", real=True)
    mass = sympy.nsimplify(m)
    rho = sympy.sqrt(x ** 2 + y ** 2 + z ** 2)
    if variant == "isotropic":
        psi = 1 + mass / (2 * rho)
        lapse = (1 - mass / (2 * rho)) / psi
        tetrad = sympy.diag(lapse, psi ** 2, psi ** 2, psi ** 2)
        minimum = m / 2

        def areal(point: np.ndarray) -> float:
            radius = float(np.linalg.norm(point[1:]))
            return radius * (1 + m / (2 * radius)) ** 2

        strong = _cartesian_point(_isotropic_radius_for(4.0 * m, m))
    else:
        b = sympy.nsimplify(beta)
        iso = rho + b * sympy.sqrt(mass * rho)
        iso_prime = 1 + b * sympy.sqrt(mass) / (2 * sympy.sqrt(rho))
        psi = 1 + mass / (2 * iso)
        lapse = (1 - mass / (2 * iso)) / psi
        coordinates = (x, y, z)
        spatial = sympy.zeros(3, 3)
        for i in range(3):
            for j in range(3):
                nn = coordinates[i] * coordinates[j] / rho ** 2
                delta = 1 if i == j else 0
                spatial[i, j] = psi ** 2 * (iso_prime * nn + iso / rho * (delta - nn))
        tetrad = sympy.diag(lapse, 1, 1, 1)
        tetrad[1:, 1:] = spatial
        # iso radius must exceed m / 2
        minimum = ((-np.sqrt(beta ** 2 * m) + np.sqrt(beta ** 2 * m + 2 * m)) / 2) ** 2

        def areal(point: np.ndarray) -> float:
            radius = float(np.linalg.norm(point[1:]))
            r_iso = radius + beta * np.sqrt(m * radius)
            return r_iso * (1 + m / (2 * r_iso)) ** 2

        r_target = _isotropic_radius_for(4.0 * m, m)
        root = (-beta * np.sqrt(m) + np.sqrt(beta ** 2 * m + 4 * r_target)) / 2
        strong = _cartesian_point(root ** 2)

    def domain(point: np.ndarray) -> Optional[str]:
        radius = float(np.linalg.norm(point[1:]))
        if radius <= minimum * (1 + 1e-6):
            return "inside the isotropic throat"
        return None

    data = ChartData(
        domain=domain,
        sampler=_shell_sampler(3.0 * m, 50.0 * m),
        areal_radius=areal,
        strong_field_point=strong,
        asymptotically_flat=True,
        gauge_rapidity=2 * mass / rho,
    )
    return (t, x, y, z), tetrad, data


SCHWARZSCHILD_CHARTS = ("static", "isotropic", "boosted", "rotated", "infalling", "alternative")


def _schwarzschild(params: Dict[str, float], chart: str):
    m = float(params.get("m", 1.0))
    if m <= 0:
        raise ConfigError("schwarzschild needs a positive mass parameter m")
    if chart in ("static", "boosted", "rotated", "infalling"):
        symbols, tetrad, data = _schwarzschild_coordinates(m, chart)
    elif chart in ("isotropic", "alternative"):
        symbols, tetrad, data = _schwarzschild_cartesian(m, chart, float(params.get("beta", 1.0)))
    else:
        raise ConfigError(f"schwarzschild charts are {SCHWARZSCHILD_CHARTS}, not {chart!r}")
    return symbols, tetrad, data, None


def _einstein_de_sitter(params: Dict[str, float], chart: str):
    if chart != "comoving":
        raise ConfigError(f"einstein_de_sitter has the chart 'comoving', not {chart!r}")
    t, x, y, z = sympy.symbols("t x y z", real=True)
    a = t ** sympy.Rational(2, 3)
    density = sympy.Rational(4, 3) / t ** 2
    data = ChartData(
        domain=lambda p: "t must be positive" if p[0] <= 0 else None,
        sampler=_box_sampler([(1.0, 5.0), (-2.0, 2.0), (-2.0, 2.0), (-2.0, 2.0)]),
        gauge_rapidity=sympy.Rational(1, 5) * x,
    )
    matter = sympy.zeros(4, 4)
    matter[0, 0] = density
    return (t, x, y, z), sympy.diag(1, a, a, a), data, matter


_FAMILIES = {
    "minkowski": (_minkowski, "cartesian", ()),
    "schwarzschild": (_schwarzschild, "static", ("m", "beta")),
    "einstein_de_sitter": (_einstein_de_sitter, "comoving", ()),
}
_ALIASES = {"eds": "einstein_de_sitter", "einstein-de-sitter": "einstein_de_sitter"}


def builtin_spacetime(name: str, params: Optional[Dict[str, float]] = None, chart: Optional[str] = None,
                      provider: str = "analytic", fd_step: float = 1e-5) -> TetradField:
    """Build one of the builtin tetrads; unknown names raise ConfigError"""
    params = dict(params or {})
    family = _ALIASES.get(name.lower(), name.lower())
    if family not in _FAMILIES:
        raise ConfigError(f"unknown metric {name!r}; builtins are {sorted(_FAMILIES)} or 'custom'")
    builder, default_chart, allowed = _FAMILIES[family]
    unknown = set(params) - set(allowed)
    if unknown:
        raise ConfigError(f"{family} does not take parameters {sorted(unknown)}")
    chart = chart or default_chart
    symbols, tetrad, data, matter = builder(params, chart)
    if family == "schwarzschild":
        params.setdefault("m", 1.0)
    if family != "einstein_de_sitter" and matter is None:
        matter = sympy.zeros(4, 4)
    logger.info("built tetrad %s/%s with %s provider", family, chart, provider)
    return TetradField(family, chart, params, symbols, tetrad, data, matter, provider, fd_step)


def custom_spacetime(coordinates: Sequence[str], tetrad: Sequence[Sequence[str]],
                     energy_momentum: Optional[Sequence[Sequence[str]]] = None,
                     bounds: Optional[Sequence[Tuple[float, float]]] = None,
                     params: Optional[Dict[str, float]] = None, provider: str = "analytic",
                     fd_step: float = 1e-5) -> TetradField:
    """Tetrad from sympy strings; without a matter model T is taken to be G"""
    if len(coordinates) != 4:
        raise ConfigError("a custom chart needs exactly four coordinate names")
    symbols = sympy.symbols(list(coordinates), real=True)
    local = {str(s): s for s in symbols}
    local.update({k: sympy.nsimplify(v) for k, v in (params or {}).items()})
    try:
        matrix = sympy.Matrix([[sympy.sympify(entry, locals=local) for entry in row] for row in tetrad])
        matter = sympy.Matrix([[sympy.sympify(entry, locals=local) for entry in row] for row in energy_momentum]) \
            if energy_momentum is not None else None
    except (sympy.SympifyError, TypeError) as e:
        raise ConfigError(f"could not parse custom tetrad: {str(e)}") from e
    if matrix.shape != (4, 4) or (matter is not None and matter.shape != (4, 4)):
        raise ConfigError("custom tetrad and energy-momentum must be 4x4")
    free = matrix.free_symbols - set(symbols)
    if free:
        raise ConfigError(f"custom tetrad has unbound symbols {sorted(map(str, free))}")
    box = list(bounds) if bounds is not None else [(0.5, 2.0)] * 4
    evaluator = SymbolicField(matrix.tolist(), symbols)

    def domain(x: np.ndarray) -> Optional[str]:
        value = evaluator.evaluate(x)
        if not np.all(np.isfinite(value)):
            return "tetrad is not finite"
        if abs(np.linalg.det(value)) < 1e-12:
            return "tetrad is degenerate"
        return None

    data = ChartData(domain=domain, sampler=_box_sampler(box))
    return TetradField("custom", "custom", params or {}, symbols, matrix, data, matter, provider, fd_step)
