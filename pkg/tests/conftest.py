"""
Shared fixtures: builtin tetrads and seeded random generators
"""
import numpy as np
import pytest

from app.core.tetrads import builtin_spacetime


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)


@pytest.fixture(scope="session")
def minkowski():
    return builtin_spacetime("minkowski")


@pytest.fixture(scope="session")
def minkowski_spherical():
    return builtin_spacetime("minkowski", chart="spherical")


@pytest.fixture(scope="session")
def schwarzschild():
    return builtin_spacetime("schwarzschild", {"m": 1.0}, "static")


@pytest.fixture(scope="session")
def isotropic():
    return builtin_spacetime("schwarzschild", {"m": 1.0}, "isotropic")


@pytest.fixture(scope="session")
def infalling():
    return builtin_spacetime("schwarzschild", {"m": 1.0}, "infalling")


@pytest.fixture(scope="session")
def eds():
    return builtin_spacetime("einstein_de_sitter")


@pytest.fixture
def static_point():
    return np.array([0.3, 6.0, 1.1, 0.4])


@pytest.fixture
def eds_point():
    return np.array([2.0, 0.3, -0.5, 0.7])
