"""Triplets, characteristic functions, and the triplet calculus of
stochastic-integral mappings.

A law is carried as its triplet (Sigma, nu, gamma) with the x/(1+|x|^2)
centering. The mapping induced by integrating a deterministic function f over
[0, T] against the Levy process acts on triplets in closed form:

    Sigma_out = (int_0^T f^2) * Sigma
    nu_out    = scale mixture of nu by tau_f, the image of Lebesgue measure
                on [0, T] under |f|
    gamma_out = (int_0^T f) * gamma + int u * C(u) tau_f(du),
    C(u)      = sum_xi w_xi * xi * int r [ (1+u^2 r^2)^(-1) - (1+r^2)^(-1) ]
                nu_xi(dr)

Four integrands are registered, each with its exact dilation measure and the
closed-form constants the formulas need:

    cos_pi_half        f(t) = cos(pi t / 2)       on [0, 1]
    log                f(t) = -log t              on [0, 1]
    log_sqrt           f(t) = sqrt(-log t)        on [0, 1]
    gauss_tail_inverse f(t) = h*(t), the inverse of h(u) = int_u^oo e^(-v^2) dv,
                       on [0, sqrt(pi)/2]

cos_pi_half's dilation is exactly the arcsine dilation on (0, 1), which ties
the triplet calculus to the second arcsine transform; log gives the
exponential dilation, log_sqrt gives 2 s e^(-s^2) ds, and gauss_tail_inverse
gives e^(-u^2) du.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import erfc, erfcinv

from .errors import GridMismatch, MalformedMeasure
from .measures import (ExpPowerDensity, PolarMeasure, RadialComponent,
                       from_json, integrate, to_json, validate)
from .transforms import (DilationMeasure, arcsine_dilation, exp_dilation,
                         power_exp_dilation, upsilon_tau)

SQRT_PI = math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# gaussian tail function and its inverse
# ---------------------------------------------------------------------------

def gauss_tail(u: float) -> float:
    """h(u) = int_u^oo e^(-v^2) dv = (sqrt(pi)/2) erfc(u)."""
    return 0.5 * SQRT_PI * float(erfc(u))


def gauss_tail_inverse(t: float) -> float:
    """h*(t): the decreasing inverse of gauss_tail on (0, sqrt(pi)/2)."""
    if not 0.0 < t < 0.5 * SQRT_PI:
        if t == 0.5 * SQRT_PI:
            return 0.0
        raise ValueError(f"gauss_tail_inverse needs t in (0, sqrt(pi)/2], got {t}")
    return float(erfcinv(2.0 * t / SQRT_PI))


# ---------------------------------------------------------------------------
# integrand registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegrandSpec:
    """A deterministic integrand f on [0, T] with the exact quantities the
    triplet calculus and the simulator consume: the antiderivative F
    (F(0) = 0), the integrals of f and f^2 over [0, T], and the dilation
    measure tau_f (image of Lebesgue on [0, T] under |f|)."""

    name: str
    T: float
    f: Callable[[float], float]
    F: Callable[[float], float]
    lin_integral: float
    sq_integral: float
    tau_factory: Callable[[], DilationMeasure]
    square_integrable: bool = True

    def tau(self) -> DilationMeasure:
        return self.tau_factory()


def _f_log_sqrt(t: float) -> float:
    return math.sqrt(-math.log(t))


def _F_log_sqrt(t: float) -> float:
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 0.5 * SQRT_PI
    w = math.sqrt(-math.log(t))
    return t * w + 0.5 * SQRT_PI * float(erfc(w))


def _F_log(t: float) -> float:
    if t <= 0.0:
        return 0.0
    return t - t * math.log(t)


def _F_gauss(t: float) -> float:
    if t <= 0.0:
        return 0.0
    if t >= 0.5 * SQRT_PI:
        return 0.5
    hstar = gauss_tail_inverse(t)
    return 0.5 * math.exp(-hstar * hstar)


def _gauss_dilation() -> DilationMeasure:
    return RadialComponent((), ExpPowerDensity(1.0, 0.0, 1.0, 2.0), 1.0)


INTEGRANDS: dict[str, IntegrandSpec] = {
    "cos_pi_half": IntegrandSpec(
        "cos_pi_half", 1.0,
        lambda t: math.cos(0.5 * math.pi * t),
        lambda t: (2.0 / math.pi) * math.sin(0.5 * math.pi * min(max(t, 0.0), 1.0)),
        2.0 / math.pi, 0.5, arcsine_dilation),
    "log": IntegrandSpec(
        "log", 1.0, lambda t: -math.log(t), _F_log,
        1.0, 2.0, exp_dilation),
    "log_sqrt": IntegrandSpec(
        "log_sqrt", 1.0, _f_log_sqrt, _F_log_sqrt,
        0.5 * SQRT_PI, 1.0, lambda: power_exp_dilation(-2.0, 2.0)),
    "gauss_tail_inverse": IntegrandSpec(
        "gauss_tail_inverse", 0.5 * SQRT_PI, gauss_tail_inverse, _F_gauss,
        0.5, 0.25 * SQRT_PI, _gauss_dilation),
}


def integrand(name: str | IntegrandSpec) -> IntegrandSpec:
    if isinstance(name, IntegrandSpec):
        return name
    try:
        return INTEGRANDS[name]
    except KeyError:
        raise ValueError(f"unknown integrand {name!r}; choose from {sorted(INTEGRANDS)}") from None


# ---------------------------------------------------------------------------
# triplets
# ---------------------------------------------------------------------------

def _as_matrix(x, d: int) -> np.ndarray:
    a = np.atleast_2d(np.asarray(x, float))
    if a.shape != (d, d):
        raise MalformedMeasure(f"Sigma must be {d}x{d}, got shape {a.shape}")
    return a


def _as_vector(x, d: int) -> np.ndarray:
    a = np.atleast_1d(np.asarray(x, float))
    if a.shape != (d,):
        raise MalformedMeasure(f"gamma must have length {d}, got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class Triplet:
    """(Sigma, nu, gamma) with centering x/(1+|x|^2). Sigma must be symmetric
    nonnegative-definite within 1e-12 and nu must pass the levy check."""

    Sigma: np.ndarray
    nu: PolarMeasure
    gamma: np.ndarray

    def __post_init__(self):
        if not isinstance(self.nu, PolarMeasure):
            raise MalformedMeasure(f"nu must be a PolarMeasure, got {type(self.nu)!r}")
        d = self.nu.d
        sig = _as_matrix(self.Sigma, d)
        gam = _as_vector(self.gamma, d)
        if not np.all(np.isfinite(sig)) or not np.all(np.isfinite(gam)):
            raise MalformedMeasure("triplet entries must be finite")
        if np.max(np.abs(sig - sig.T)) > 1e-12:
            raise MalformedMeasure("Sigma must be symmetric within 1e-12")
        if np.min(np.linalg.eigvalsh(0.5 * (sig + sig.T))) < -1e-12:
            raise MalformedMeasure("Sigma must be nonnegative definite within 1e-12")
        report = validate(self.nu, "levy")
        if not report.ok:
            bad = "; ".join(f"component {c.index}: {c.detail}"
                            for c in report.components if not c.ok)
            raise MalformedMeasure(f"nu fails the levy check: {bad}")
        object.__setattr__(self, "Sigma", sig)
        object.__setattr__(self, "gamma", gam)

    @property
    def d(self) -> int:
        return self.nu.d

    @staticmethod
    def zero(d: int = 1) -> "Triplet":
        return Triplet(np.zeros((d, d)), PolarMeasure.zero(d), np.zeros(d))

    def to_json(self) -> dict:
        return {"Sigma": self.Sigma.tolist(), "nu": to_json(self.nu),
                "gamma": self.gamma.tolist()}

    @staticmethod
    def from_json(obj: dict) -> "Triplet":
        return Triplet(np.asarray(obj["Sigma"], float), from_json(obj["nu"]),
                       np.asarray(obj["gamma"], float))


# ---------------------------------------------------------------------------
# characteristic functions
# ---------------------------------------------------------------------------

def char_exponent(t: Triplet, z: Sequence[float], *, abs_tol: float = 1e-10) -> complex:
    """log of the characteristic function at z:
    -(1/2)<Sigma z, z> + i<gamma, z>
    + sum_xi w_xi int (e^{i r s} - 1 - i r s/(1+r^2)) nu_xi(dr),  s = <xi, z>.
    """
    zv = np.atleast_1d(np.asarray(z, float))
    if zv.shape != (t.d,):
        raise ValueError(f"z must have length {t.d}, got shape {zv.shape}")
    val = complex(-0.5 * float(zv @ t.Sigma @ zv), float(t.gamma @ zv))
    for dirn, rc in t.nu.components:
        s = float(dirn.array @ zv)
        if s == 0.0:
            continue
        re = integrate(rc, lambda r: math.cos(r * s) - 1.0, (0.0, math.inf),
                       abs_tol=abs_tol, g_moment=0.0)
        im = integrate(rc, lambda r: math.sin(r * s) - r * s / (1.0 + r * r),
                       (0.0, math.inf), abs_tol=abs_tol, g_moment=0.0)
        val += rc.weight * complex(re, im)
    return val


def char_fn(t: Triplet, z: Sequence[float], *, abs_tol: float = 1e-10) -> complex:
    return complex(np.exp(char_exponent(t, z, abs_tol=abs_tol)))


@dataclass(frozen=True)
class CharFnGrid:
    """Characteristic-function values on a grid of z points."""

    zs: tuple[tuple[float, ...], ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if len(self.zs) != len(self.values):
            raise GridMismatch("zs and values must have equal length")

    def to_csv(self) -> str:
        d = len(self.zs[0]) if self.zs else 1
        header = ",".join([f"z{i + 1}" for i in range(d)] + ["re", "im"])
        lines = [header]
        for z, v in zip(self.zs, self.values):
            cells = [f"{x:.17g}" for x in z] + [f"{v.real:.17g}", f"{v.imag:.17g}"]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def char_fn_grid(t: Triplet, zs: Sequence[Sequence[float]], *,
                 abs_tol: float = 1e-10) -> CharFnGrid:
    pts = tuple(tuple(float(x) for x in np.atleast_1d(z)) for z in zs)
    vals = tuple(char_fn(t, z, abs_tol=abs_tol) for z in pts)
    return CharFnGrid(pts, vals)


# ---------------------------------------------------------------------------
# the triplet transform
# ---------------------------------------------------------------------------

def _centering_shift(rc, u: float, abs_tol: float) -> float:
    """int r [ (1+u^2 r^2)^(-1) - (1+r^2)^(-1) ] against one radial measure."""
    if u == 1.0:
        return 0.0
    uu = u * u

    def g(r: float) -> float:
        rr = r * r
        return r * (1.0 / (1.0 + uu * rr) - 1.0 / (1.0 + rr))

    return integrate(rc, g, (0.0, math.inf), abs_tol=abs_tol, g_moment=-1.0)


def transform_triplet(t: Triplet, f: IntegrandSpec | str, *,
                      with_bound: bool = False):
    """Triplet of the law of the integral of f against the Levy process whose
    time-1 law has triplet t. Returns the new Triplet, or (Triplet, bound)
    when with_bound is set, where bound is a conservative absolute error
    estimate on the drift coordinates from the two quadrature layers.

    The drift correction integrates, over the dilation measure, the mismatch
    between the centering term evaluated at scaled and unscaled jump sizes;
    that is the change-of-variables form of the time integral of the
    integrand against the centering defect."""
    spec = integrand(f)
    sigma_out = spec.sq_integral * t.Sigma
    nu_out = upsilon_tau(t.nu, spec.tau()) if not t.nu.is_zero() else t.nu
    gamma_out = spec.lin_integral * t.gamma.copy()
    outer_tol = 1e-10
    if not t.nu.is_zero():
        tau = spec.tau()
        corr = np.zeros(t.d)
        for dirn, rc in t.nu.components:
            val = integrate(
                tau, lambda u: u * _centering_shift(rc, u, 1e-12),
                (0.0, math.inf), abs_tol=outer_tol, g_moment=1.0)
            corr += rc.weight * val * dirn.array
        gamma_out = gamma_out + corr
    out = Triplet(sigma_out, nu_out, gamma_out)
    if with_bound:
        bound = outer_tol + 1e-12 * max(_tau_mass(spec), 1.0)
        return out, bound
    return out


def _tau_mass(spec: IntegrandSpec) -> float:
    return integrate(spec.tau(), lambda u: 1.0, (0.0, math.inf), abs_tol=1e-9)


def compose_g(t: Triplet) -> Triplet:
    """The composite map applying cos_pi_half first and log_sqrt second; the
    two orders agree, which the test suite asserts pointwise."""
    return transform_triplet(transform_triplet(t, "cos_pi_half"), "log_sqrt")


def compose_g_reversed(t: Triplet) -> Triplet:
    return transform_triplet(transform_triplet(t, "log_sqrt"), "cos_pi_half")
