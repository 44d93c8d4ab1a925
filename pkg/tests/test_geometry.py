"""
Geometry tests against closed forms and an independent sympy computation of the metric geometry
"""
import numpy as np
import pytest
import sympy

from app.core import algebra as ga
from app.core.errors import DomainError
from app.core.geometry import ObserverField, frame_kinematics
from app.core.tetrads import boost_tetrad


def sympy_christoffel(metric: sympy.Matrix, symbols):
    """Gamma^a_{bc} straight from the metric"""
    inverse = metric.inv()
    n = len(symbols)
    return [[[sympy.simplify(sum(inverse[a, d] * (sympy.diff(metric[d, b], symbols[c])
                                                  + sympy.diff(metric[d, c], symbols[b])
                                                  - sympy.diff(metric[b, c], symbols[d])) for d in range(n)) / 2)
              for c in range(n)] for b in range(n)] for a in range(n)]


@pytest.fixture(scope="module")
def schwarzschild_oracle():
    t, r, th, ph = sympy.symbols("t r theta phi", real=True)
    m = sympy.Integer(1)
    f = 1 - 2 * m / r
    metric = sympy.diag(f, -1 / f, -r ** 2, -r ** 2 * sympy.sin(th) ** 2)
    gamma = sympy_christoffel(metric, (t, r, th, ph))
    return sympy.lambdify((t, r, th, ph), gamma, modules="numpy")


class TestMetric:
    def test_schwarzschild_metric(self, schwarzschild, static_point):
        r, theta = static_point[1], static_point[2]
        f = 1 - 2 / r
        expected = np.diag([f, -1 / f, -r ** 2, -(r * np.sin(theta)) ** 2])
        assert np.allclose(schwarzschild.geometry(static_point, 0).metric.value, expected)

    def test_christoffel_against_sympy(self, schwarzschild, static_point, schwarzschild_oracle):
        computed = schwarzschild.geometry(static_point, 0).christoffel.value
        expected = np.array(schwarzschild_oracle(*static_point), dtype=float)
        assert np.allclose(computed, expected, atol=1e-12)

    def test_christoffel_closed_form(self, schwarzschild, static_point):
        r = static_point[1]
        gamma = schwarzschild.geometry(static_point, 0).christoffel.value
        assert gamma[1, 0, 0] == pytest.approx((r - 2) / r ** 3)

    def test_frame_route_agrees(self, infalling, static_point):
        geometry = infalling.geometry(static_point, 0)
        assert np.allclose(geometry.christoffel_from_frame.value, geometry.christoffel.value, atol=1e-10)


class TestCurvature:
    @pytest.mark.parametrize("chart", ["static", "boosted", "rotated", "infalling"])
    def test_kretschmann(self, chart, static_point):
        from app.core.tetrads import builtin_spacetime

        tetrad = builtin_spacetime("schwarzschild", {"m": 1.0}, chart)
        value = tetrad.geometry(static_point, 1).kretschmann
        assert value == pytest.approx(48.0 / static_point[1] ** 6, rel=1e-8)

    def test_kretschmann_isotropic_strong_field(self, isotropic):
        point = isotropic.chart.strong_field_point
        assert isotropic.geometry(point, 1).kretschmann == pytest.approx(48.0 / 4.0 ** 6, rel=1e-8)

    def test_schwarzschild_is_vacuum(self, schwarzschild, static_point):
        geometry = schwarzschild.geometry(static_point, 1)
        assert np.max(np.abs(geometry.ricci.value)) < 1e-12
        assert abs(float(geometry.scalar_curvature.value)) < 1e-12

    def test_friedmann_density(self, eds, eds_point):
        einstein = eds.geometry(eds_point, 1).einstein.value
        t = eds_point[0]
        assert einstein[0, 0] == pytest.approx(4.0 / (3.0 * t ** 2))
        assert np.allclose(einstein[1:, 1:], 0.0, atol=1e-12)

    def test_eds_kretschmann(self, eds, eds_point):
        assert eds.geometry(eds_point, 1).kretschmann == pytest.approx(80.0 / (27.0 * eds_point[0] ** 4))

    def test_flat_spherical_chart(self, minkowski_spherical):
        point = np.array([0.0, 2.0, 0.8, 1.0])
        geometry = minkowski_spherical.geometry(point, 1)
        assert np.max(np.abs(geometry.riemann.value)) < 1e-12
        assert np.max(np.abs(geometry.connection.value)) > 0.1

    def test_riemann_routes(self, schwarzschild, static_point):
        geometry = schwarzschild.geometry(static_point, 1)
        assert np.allclose(geometry.riemann_from_christoffel(), geometry.riemann_mixed.value, atol=1e-10)


class TestKinematics:
    def test_static_acceleration(self, schwarzschild, static_point):
        r = static_point[1]
        kinematics = frame_kinematics(schwarzschild.geometry(static_point, 1))
        assert kinematics.acceleration_magnitude == pytest.approx(1.0 / (r ** 2 * np.sqrt(1 - 2 / r)))
        assert kinematics.expansion == pytest.approx(0.0, abs=1e-12)

    def test_static_connection_bivector(self, schwarzschild, static_point):
        r = static_point[1]
        omega = schwarzschild.geometry(static_point, 1).omega_tangent.value
        assert omega[0, 3] == pytest.approx(-1.0 / (r ** 2 * np.sqrt(1 - 2 / r)))

    def test_eds_expansion(self, eds, eds_point):
        kinematics = frame_kinematics(eds.geometry(eds_point, 1))
        assert kinematics.expansion == pytest.approx(2.0 / eds_point[0])
        assert kinematics.acceleration_magnitude == pytest.approx(0.0, abs=1e-12)
        assert kinematics.reassembly_residual < 1e-12

    def test_infalling_frame_is_geodesic(self, infalling, static_point):
        kinematics = frame_kinematics(infalling.geometry(static_point, 1))
        assert kinematics.acceleration_magnitude < 1e-10

    def test_eds_comoving_rest(self, eds, eds_point):
        kinematics = frame_kinematics(eds.geometry(eds_point, 1))
        assert np.max(np.abs(kinematics.rotation)) < 1e-12
        assert np.max(np.abs(kinematics.shear)) < 1e-12
        assert np.max(np.abs(kinematics.acceleration)) < 1e-12


class ScaledField:
    def __init__(self, field, factor):
        self.field = field
        self.factor = factor

    def jet(self, x, order):
        return self.field.jet(x, order) * self.factor


class TestObserverFields:
    def test_own_frame_vector(self, schwarzschild, static_point):
        geometry = schwarzschild.geometry(static_point, 1)
        field = frame_kinematics(geometry, ObserverField(schwarzschild))
        frame = frame_kinematics(geometry)
        np.testing.assert_allclose(field.acceleration, frame.acceleration, atol=1e-10)
        assert field.acceleration_magnitude == pytest.approx(frame.acceleration_magnitude)

    def test_boosted_observer(self, schwarzschild, static_point):
        boosted = boost_tetrad(schwarzschild, schwarzschild.chart.gauge_rapidity)
        field = frame_kinematics(schwarzschild.geometry(static_point, 1), ObserverField(boosted))
        frame = frame_kinematics(boosted.geometry(static_point, 1))
        np.testing.assert_allclose(field.acceleration, frame.acceleration, atol=1e-9)
        np.testing.assert_allclose(field.rotation, frame.rotation, atol=1e-9)
        np.testing.assert_allclose(field.shear, frame.shear, atol=1e-9)
        assert field.expansion == pytest.approx(frame.expansion, abs=1e-9)
        assert field.expansion != pytest.approx(0.0, abs=1e-6)

    def test_spacelike_field_rejected(self, schwarzschild, static_point):
        with pytest.raises(DomainError, match="Z.Z = 1"):
            frame_kinematics(schwarzschild.geometry(static_point, 1), ObserverField(schwarzschild, 1))

    def test_unnormalised_field_rejected(self, eds, eds_point):
        with pytest.raises(DomainError, match="Z.Z = 1"):
            frame_kinematics(eds.geometry(eds_point, 1), ScaledField(ObserverField(eds), 2.0))

    def test_past_directed_field_rejected(self, eds, eds_point):
        with pytest.raises(DomainError, match="past-directed"):
            frame_kinematics(eds.geometry(eds_point, 1), ScaledField(ObserverField(eds), -1.0))


def test_metric_from_scalar_products(schwarzschild, static_point):
    geometry = schwarzschild.geometry(static_point, 0)
    vectors = ga.vector(geometry.h.value.T)
    products = ga.scalar_product(vectors[:, None, :], vectors[None, :, :])
    assert np.allclose(products, geometry.metric.value)
