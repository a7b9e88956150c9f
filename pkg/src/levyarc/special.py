"""Bessel K0 closed forms, arcsine kernel densities, and the named fixtures
the verification suite replays.

K0 is the modified Bessel function of the second kind, order 0. It is the
exact output of the first arcsine transform applied to the density
(pi/4) x^(-1/2) e^(-sqrt(x)), which is what makes it usable as ground truth
for the transform machinery: every kernel evaluation can be compared against
an independent special-function implementation.

The quadrature cross-check uses the integral form
    K0(x) = int_1^oo (t^2 - 1)^(-1/2) e^(-x t) dt,
and the Laplace transform of K0 has the piecewise closed form implemented in
k0_laplace (continuous across s = 1, where both branches degenerate to 0/0
and a short series takes over).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import scipy.special as sc

from .errors import DomainError
from .measures import ExpPowerDensity, PolarMeasure, half_line_measure, to_json
from .quadrature import adaptive_quad
from .transforms import ArcsineDilationDensity


def k0(x: float) -> float:
    """Modified Bessel function K0. Relative accuracy well below 1e-10 over
    [1e-6, 50] (series at small argument, asymptotic expansion at large,
    via the underlying cephes routine)."""
    if not x > 0.0:
        raise DomainError(f"k0 needs x > 0, got {x}")
    return float(sc.k0(x))


def k0_integral_form(x: float, abs_tol: float = 1e-12) -> float:
    """Independent quadrature route to K0 through its integral representation
    int_1^oo (t^2 - 1)^(-1/2) e^(-x t) dt; used to validate k0()."""
    if not x > 0.0:
        raise DomainError(f"k0 needs x > 0, got {x}")
    return adaptive_quad(
        lambda t: math.exp(-x * t) / math.sqrt((t - 1.0) * (t + 1.0)),
        1.0, math.inf, abs_tol=abs_tol, singular_left=True, label="k0 integral form")


_LAPLACE_SERIES_CUT = 1e-4


def k0_laplace(s: float) -> float:
    """Laplace transform of K0 at s > 0:
    arccos(s)/sqrt(1-s^2) below 1, log(s + sqrt(s^2-1))/sqrt(s^2-1) above,
    1 at s = 1. Within 1e-4 of s = 1 a 3-term expansion replaces the closed
    forms, whose direct evaluation cancels catastrophically there."""
    if not s > 0.0:
        raise DomainError(f"k0_laplace needs s > 0, got {s}")
    e = s - 1.0
    if abs(e) < _LAPLACE_SERIES_CUT:
        return 1.0 - e / 3.0 + (2.0 / 15.0) * e * e
    if s < 1.0:
        return math.acos(s) / math.sqrt(1.0 - s * s)
    return math.log(s + math.sqrt(s * s - 1.0)) / math.sqrt(s * s - 1.0)


# ---------------------------------------------------------------------------
# arcsine kernels
# ---------------------------------------------------------------------------

_VARIANTS = ("symmetric", "one_sided", "squared")


@dataclass(frozen=True)
class ArcsineKernel:
    """Arcsine-law density kernel. Variants:

    symmetric:  a(x; s)  = (pi * sqrt(s - x^2))^(-1)   on |x| < sqrt(s)
    one_sided:  a1(r; s) = 2 (pi * sqrt(s - r^2))^(-1) on 0 < r < sqrt(s)
    squared:    a2(r; s) = a1(r; s^2)                  on 0 < r < s

    symmetric and one_sided integrate to 1 over their support.
    """

    variant: str
    s: float

    def __post_init__(self):
        if self.variant not in _VARIANTS:
            raise DomainError(f"variant must be one of {_VARIANTS}, got {self.variant!r}")
        if not (self.s > 0.0 and math.isfinite(self.s)):
            raise DomainError(f"kernel parameter must be positive and finite, got {self.s}")


def arcsine_density(k: ArcsineKernel, point: float) -> float:
    if k.variant == "squared":
        return arcsine_density(ArcsineKernel("one_sided", k.s * k.s), point)
    w = k.s - point * point
    if w <= 0.0:
        return 0.0
    if k.variant == "symmetric":
        return 1.0 / (math.pi * math.sqrt(w))
    if point <= 0.0:
        return 0.0
    return 2.0 / (math.pi * math.sqrt(w))


def gauss_arcsine_residual(x: float, t: float | None = None, v: float | None = None,
                           abs_tol: float = 1e-12) -> float:
    """Quadrature residual of the identity expressing a Gaussian kernel as an
    exponential mixture of one-sided arcsine densities:

        e^(-x^2 v) = int_0^oo a1(x; s) * (sqrt(pi)/2) * sqrt(v) * e^(-s v) ds.

    The classical time-parametrized form corresponds to v = 1/(2t), which is
    what t is converted to when v is not given. Returns |lhs - rhs|; the
    identity is exact, so anything above quadrature noise signals a bug.
    """
    if v is None:
        if t is None:
            raise DomainError("need one of t or v")
        if not t > 0.0:
            raise DomainError(f"t must be positive, got {t}")
        v = 1.0 / (2.0 * t)
    if not v > 0.0:
        raise DomainError(f"v must be positive, got {v}")
    lhs = math.exp(-x * x * v)
    pref = 0.5 * math.sqrt(math.pi) * math.sqrt(v)

    def integrand(s: float) -> float:
        w = s - x * x
        if w <= 0.0:
            return 0.0
        return (2.0 / (math.pi * math.sqrt(w))) * pref * math.exp(-s * v)

    rhs = adaptive_quad(integrand, x * x, math.inf, abs_tol=abs_tol,
                        singular_left=True, label="gauss arcsine mixture")
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# named fixtures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Fixture:
    """A named input measure, the transform it feeds, and the closed form the
    transform output must match (None when the fixture is the measure itself)."""

    name: str
    measure: PolarMeasure
    transform: str
    closed_form: Callable[[float], float] | None
    closed_form_id: str
    description: str

    def to_json(self) -> dict:
        return {"name": self.name, "measure": to_json(self.measure),
                "transform": self.transform, "closed_form": self.closed_form_id,
                "description": self.description}


def ex1_input_density() -> ExpPowerDensity:
    return ExpPowerDensity(math.pi / 4.0, -0.5, 1.0, 0.5)


def ex2_input_density() -> ExpPowerDensity:
    return ExpPowerDensity(math.sqrt(math.pi) / 4.0, -0.5, 0.25, 1.0)


def ex3_closed_form(r: float) -> float:
    w = r * r / 8.0
    return 0.5 / math.sqrt(math.pi) * math.exp(-w) * k0(w)


def fixture_catalog() -> dict[str, Fixture]:
    """The reference fixtures: three transform identities with Bessel closed
    forms and the boundary density separating the inversion range from the
    Jurek class."""
    ex1_dens = ex1_input_density()
    ex2_dens = ex2_input_density()
    return {
        "EX1": Fixture(
            "EX1", half_line_measure(density=ex1_dens), "arcsine1",
            k0, "k0",
            "first arcsine transform of (pi/4) r^(-1/2) e^(-sqrt(r)) equals K0"),
        "EX2": Fixture(
            "EX2", half_line_measure(density=ex2_dens), "upsilon0",
            ex1_dens.value, "ex1_input_density",
            "exponential scale mixture of (sqrt(pi)/4) r^(-1/2) e^(-r/4) "
            "reproduces the EX1 input density"),
        "EX3": Fixture(
            "EX3", half_line_measure(density=ex2_dens), "arcsine1",
            ex3_closed_form, "ex3_closed_form",
            "first arcsine transform of the EX2 input equals "
            "(2 sqrt(pi))^(-1) e^(-r^2/8) K0(r^2/8)"),
        "JUREK_CE": Fixture(
            "JUREK_CE", half_line_measure(density=ArcsineDilationDensity()), "",
            ArcsineDilationDensity().value, "one_sided_arcsine",
            "(2/pi)(1-r^2)^(-1/2) on (0,1): accepted by the inversion's "
            "monotone-tail gate yet outside the Jurek class"),
    }
