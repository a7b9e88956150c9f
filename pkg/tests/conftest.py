"""Shared fixtures and hypothesis settings for the test suite."""

import math

import pytest
from hypothesis import HealthCheck, settings

import levyarc as la

settings.register_profile(
    "suite",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def catalog():
    return la.fixture_catalog()


@pytest.fixture(scope="session")
def delta1():
    return la.half_line_measure(atoms=[(1.0, 1.0)])


@pytest.fixture(scope="session")
def two_atoms():
    return la.half_line_measure(atoms=[(2.0, 1.0), (0.5, 1.0)])


@pytest.fixture(scope="session")
def ex1_measure(catalog):
    return catalog["EX1"].measure


@pytest.fixture(scope="session")
def ex2_measure(catalog):
    return catalog["EX2"].measure


@pytest.fixture(scope="session")
def gaussian_triplet():
    return la.Triplet([[1.0]], la.PolarMeasure.zero(1), [0.0])


@pytest.fixture(scope="session")
def poisson_triplet(delta1):
    return la.Triplet([[0.0]], delta1, [0.5])


def assert_rel_close(got, want, tol, label=""):
    scale = max(abs(want), 1e-300)
    err = abs(got - want) / scale
    assert err <= tol, f"{label}: got {got!r}, want {want!r}, rel err {err:.3e} > {tol:.1e}"


def log_grid(lo=0.1, hi=5.0, n=50):
    return [lo * (hi / lo) ** (i / (n - 1)) for i in range(n)]


def density_of(m, component=0):
    """Radial density of one component of a polar measure."""
    return m.components[component][1].density


@pytest.fixture(scope="session")
def helpers():
    class H:
        rel_close = staticmethod(assert_rel_close)
        grid = staticmethod(log_grid)
        density = staticmethod(density_of)
        SQRT_PI = math.sqrt(math.pi)

    return H
