"""
Tests for the surface mass integral
"""
import numpy as np
import pytest

from app.core.errors import DomainError
from app.core.mass import companion_charts, mass_at_radius, mass_integral


def test_isotropic_mass(isotropic):
    estimate = mass_integral(isotropic, [1e2, 1e3], with_superpotential=False)
    assert estimate.value == pytest.approx(1.0, abs=1e-3)
    assert len(estimate.per_radius) == 2
    assert all(order >= 8 for order in estimate.quadrature_orders)


def test_flat_space_has_no_mass(minkowski):
    value, _ = mass_at_radius(minkowski, 50.0)
    assert abs(value) < 1e-10


def test_radii_scale_with_mass():
    from app.core.tetrads import builtin_spacetime

    heavy = builtin_spacetime("schwarzschild", {"m": 2.0}, "isotropic")
    estimate = mass_integral(heavy, [1e2, 1e3], with_superpotential=False)
    assert estimate.radii == [200.0, 2000.0]
    assert estimate.value == pytest.approx(2.0, rel=1e-3)


def test_needs_asymptotically_flat_chart(schwarzschild, eds):
    with pytest.raises(DomainError):
        mass_integral(schwarzschild, [1e2])
    with pytest.raises(DomainError):
        companion_charts(eds)


def test_companion_charts(schwarzschild, minkowski_spherical):
    assert sorted(companion_charts(schwarzschild)) == ["alternative", "isotropic"]
    assert list(companion_charts(minkowski_spherical)) == ["cartesian"]
    assert np.isclose(companion_charts(schwarzschild)["isotropic"].params["m"], 1.0)
