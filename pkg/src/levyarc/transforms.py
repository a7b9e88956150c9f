"""Integral transforms of polar measures.

Four kernels act on a radial component (atoms + density) and produce a new
radial density evaluated lazily by quadrature:

* a1:        out(r) = (2/pi) * int_(r^2,oo) (u - r^2)^(-1/2) src(du)
* a2:        out(r) = (2/pi) * int_(r,oo)  (s^2 - r^2)^(-1/2) src(ds)
* frac_half: out(u) = pi^(-1/2) * int_(u,oo) (s - u)^(-1/2) src(ds)
* upsilon:   image of src under scaling by an independent factor drawn from a
             dilation measure tau; density part
             out(r) = int u^(-1) src_dens(r/u) tau(du), with atom-by-atom
             cross terms handled in closed form.

a1 and frac_half share the half-integral int_(x,oo) (s - x)^(-1/2) src(ds);
a1 is that object evaluated at x = r^2, which is also why a1 equals a2 after
the r -> r^2 reparametrization of the source.

The scale-mixture (upsilon) form with the arcsine dilation
(2/pi) (1 - u^2)^(-1/2) du on (0, 1) reproduces a2 exactly; arcsine2() uses
that route, and arcsine2_direct() keeps the direct kernel as an independent
cross-check.

Nesting discipline: each kernel whose source carries a density adds one
quadrature level. Two levels are evaluated exactly (outer tolerance 1e-10,
inner 1e-12); beyond that the intermediate density is tabulated on a fine
geometric grid before the next kernel is applied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NotInRange, RangeError
from .measures import (DEFAULT_ABS_TOL, Density, Direction, ExpPowerDensity,
                       PolarMeasure, RadialComponent, TableDensity, integrate,
                       tabulate_density, validate)
from .quadrature import adaptive_quad

# a dilation measure is structurally a radial component: atoms plus a density
# on (0, oo), total mass finite near infinity and integrating u^2 near zero.
DilationMeasure = RadialComponent

INNER_ABS_TOL = 1e-12
MAX_KERNEL_DEPTH = 2
TWO_OVER_PI = 2.0 / math.pi
INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# dilation measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArcsineDilationDensity(Density):
    """(2/pi) (1 - u^2)^(-1/2) on (0, 1); total mass 1."""

    support: tuple[float, float] = field(default=(0.0, 1.0), init=False)
    depth: int = field(default=0, init=False, repr=False, compare=False)

    def value(self, u: float) -> float:
        if not 0.0 < u < 1.0:
            return 0.0
        return TWO_OVER_PI / math.sqrt((1.0 - u) * (1.0 + u))

    def singular_at_high(self) -> bool:
        return True

    def tail_all_moments(self) -> bool:
        return True

    def provenance_name(self) -> str:
        return "arcsine_dilation"


def arcsine_dilation() -> DilationMeasure:
    return RadialComponent((), ArcsineDilationDensity(), 1.0)


def exp_dilation() -> DilationMeasure:
    """e^(-u) du on (0, oo)."""
    return RadialComponent((), ExpPowerDensity(1.0, 0.0, 1.0, 1.0), 1.0)


def power_exp_dilation(alpha: float, beta: float) -> DilationMeasure:
    """beta * s^(-alpha-1) * exp(-s^beta) ds on (0, oo); needs alpha < 2 so
    u^2 is integrable at zero, and 0 < beta <= 2."""
    if not (alpha < 2.0):
        raise DomainError(f"alpha must be < 2, got {alpha}")
    if not (0.0 < beta <= 2.0):
        raise DomainError(f"beta must lie in (0, 2], got {beta}")
    return RadialComponent((), ExpPowerDensity(beta, -alpha - 1.0, 1.0, beta), 1.0)


# ---------------------------------------------------------------------------
# shared quadrature pieces
# ---------------------------------------------------------------------------

def _half_integral(src: RadialComponent, x: float, abs_tol: float) -> float:
    """int over (x, oo) of (s - x)^(-1/2) against the source radial measure."""
    total = 0.0
    for loc, mass in src.atoms:
        if loc > x:
            total += mass / math.sqrt(loc - x)
    dens = src.density
    if dens is None:
        return total
    lo = max(x, dens.support[0])
    hi = dens.support[1]
    if hi <= lo:
        return total
    if math.isinf(hi) and dens.tail_all_moments():
        try:
            # beyond max(2x, R): (s - x)^(-1/2) <= sqrt(2) s^(-1/2)
            hi = max(2.0 * x, dens.weighted_tail_radius(abs_tol / math.sqrt(2.0), -0.5))
            hi = max(hi, lo * (1.0 + 1e-12))
        except NotImplementedError:
            pass
    sing_lo = lo == x
    sing_hi = (dens.singular_at_high() and math.isfinite(dens.support[1])
               and hi >= dens.support[1])
    total += adaptive_quad(lambda s: dens.value(s) / math.sqrt(s - x), lo, hi,
                           abs_tol=abs_tol, singular_left=sing_lo,
                           singular_right=sing_hi, label="half integral")
    return total


def _rc_sup(rc: RadialComponent) -> float:
    return rc.sup_support


def _rc_tail_radius(rc: RadialComponent, tol: float, moment: float = 0.0) -> float:
    """Radius beyond which the weighted radial mass is certified below tol.
    Raises NotImplementedError when the density has no envelope."""
    r = max((loc for loc, _ in rc.atoms), default=0.0)
    if rc.density is not None:
        r = max(r, rc.density.weighted_tail_radius(tol, moment))
    return r


def _rc_moment(rc: RadialComponent, moment: float) -> float:
    return integrate(rc, lambda u: u ** moment if moment else 1.0,
                     (0.0, math.inf), abs_tol=1e-12, g_moment=moment)


def _zero_bound(dens: Density) -> tuple[float, float]:
    """(C, a) with density(x) <= C * x**a certified-or-estimated near zero.
    Exact for exp_power and tables; a probe-based estimate for kernels, used
    only to place truncation radii (the quadrature after truncation is exact).
    """
    if isinstance(dens, ExpPowerDensity):
        return dens.c, dens.a
    if isinstance(dens, TableDensity):
        return (max(dens.ys) or 1.0), 0.0
    # kernels: calibrate at a moderate probe and give the exponent half an
    # order of slack, so a logarithmic factor at zero (the boundary case of
    # the exponent algebra) stays below the envelope all the way down
    a = dens.exponent_at_zero() - 0.5
    lo, hi = dens.support
    probe = max(lo * 1.000001, min(1.0, dens.table_radius()) * 1e-2)
    v = dens.value(probe)
    c = 2.0 * v / probe ** a if v > 0 else 1.0
    return c, a


# ---------------------------------------------------------------------------
# the lazy kernel density
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TransformedDensity(Density):
    """Radial density produced by one of the transform kernels, evaluated by
    quadrature on demand and memoized per point."""

    kernel: str
    source: RadialComponent
    dilation: DilationMeasure | None = None
    abs_tol: float = INNER_ABS_TOL
    label: str = ""

    def __post_init__(self):
        if self.kernel not in ("a1", "a2", "frac_half", "upsilon"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.kernel == "upsilon" and self.dilation is None:
            raise ValueError("upsilon kernel needs a dilation measure")
        sup = _rc_sup(self.source)
        if self.kernel == "a1":
            hi = math.sqrt(sup)
        elif self.kernel == "upsilon":
            hi = sup * _rc_sup(self.dilation)
        else:
            hi = sup
        object.__setattr__(self, "support", (0.0, hi))
        object.__setattr__(self, "depth", self._compute_depth())
        object.__setattr__(self, "_memo", {})
        object.__setattr__(self, "_cache", {})

    def _compute_depth(self) -> int:
        src = self.source
        if self.kernel != "upsilon":
            return src.kernel_depth() + (1 if src.density is not None else 0)
        tau = self.dilation
        d = 0
        if src.atoms and tau.density is not None:
            d = max(d, tau.density.depth)
        if src.density is not None and tau.atoms:
            d = max(d, src.density.depth)
        if src.density is not None and tau.density is not None:
            d = max(d, max(src.density.depth, tau.density.depth) + 1)
        return d

    # -- evaluation ---------------------------------------------------------

    def value(self, r: float) -> float:
        if not math.isfinite(r) or r <= self.support[0] or r > self.support[1] or r <= 0.0:
            return 0.0
        memo = self._memo
        got = memo.get(r)
        if got is None:
            got = self._evaluate(r)
            if len(memo) < 200000:
                memo[r] = got
        return got

    def _evaluate(self, r: float) -> float:
        if self.kernel == "a1":
            return TWO_OVER_PI * _half_integral(self.source, r * r, self.abs_tol)
        if self.kernel == "frac_half":
            return INV_SQRT_PI * _half_integral(self.source, r, self.abs_tol)
        if self.kernel == "a2":
            return self._eval_a2(r)
        return self._eval_upsilon(r)

    def _eval_a2(self, r: float) -> float:
        total = 0.0
        for loc, mass in self.source.atoms:
            if loc > r:
                total += mass / math.sqrt((loc - r) * (loc + r))
        dens = self.source.density
        if dens is not None:
            lo = max(r, dens.support[0])
            hi = dens.support[1]
            if math.isinf(hi) and dens.tail_all_moments():
                try:
                    # beyond max(2r, R): (s^2 - r^2)^(-1/2) <= (2/sqrt(3)) s^(-1)
                    hi = max(2.0 * r, dens.weighted_tail_radius(self.abs_tol * math.sqrt(3.0) / 2.0, -1.0))
                    hi = max(hi, lo * (1.0 + 1e-12))
                except NotImplementedError:
                    hi = math.inf
            if hi > lo:
                sing_lo = lo == r
                sing_hi = (dens.singular_at_high() and math.isfinite(dens.support[1])
                           and hi >= dens.support[1])
                total += adaptive_quad(
                    lambda s: dens.value(s) / math.sqrt((s - r) * (s + r)),
                    lo, hi, abs_tol=self.abs_tol, singular_left=sing_lo,
                    singular_right=sing_hi, label="a2 kernel")
        return TWO_OVER_PI * total

    def _eval_upsilon(self, r: float) -> float:
        src, tau = self.source, self.dilation
        total = 0.0
        tau_dens = tau.density
        if tau_dens is not None:
            for s, m in src.atoms:
                total += m * tau_dens.value(r / s) / s
        f = src.density
        if f is not None:
            for u0, w in tau.atoms:
                total += w * f.value(r / u0) / u0
            if tau_dens is not None:
                total += self._upsilon_double(r, f, tau_dens)
        return total

    def _upsilon_double(self, r: float, f: Density, t: Density) -> float:
        f_lo, f_hi = f.support
        t_lo, t_hi = t.support
        lo_u = max(t_lo, r / f_hi if math.isfinite(f_hi) else 0.0)
        hi_u = min(t_hi, r / f_lo if f_lo > 0.0 else math.inf)
        if math.isinf(hi_u):
            hi_u = self._upsilon_u_cut(r, f, t, hi_u)
        if hi_u <= lo_u:
            return 0.0
        sing_lo = (f.singular_at_high() and math.isfinite(f_hi) and lo_u <= (r / f_hi) * (1 + 1e-12))
        sing_hi = ((t.singular_at_high() and math.isfinite(t_hi) and hi_u >= t_hi)
                   or (f_lo > 0.0 and f.singular_at_low() and math.isfinite(hi_u)
                       and hi_u >= (r / f_lo) * (1 - 1e-12)))

        def integrand(u: float) -> float:
            if u <= 0.0:
                return 0.0
            return f.value(r / u) * t.value(u) / u

        return adaptive_quad(integrand, lo_u, hi_u, abs_tol=self.abs_tol,
                             singular_left=sing_lo, singular_right=sing_hi,
                             label="upsilon kernel")

    def _upsilon_u_cut(self, r: float, f: Density, t: Density, hi_u: float) -> float:
        """Truncation point for the u-integral when the dilation has unbounded
        support: the remainder beyond R equals (after s = r/u) a tail moment
        of the dilation weighted by the source's behavior near zero."""
        if not t.tail_all_moments():
            return hi_u
        c_f, a_f = _zero_bound(f)
        try:
            cut = t.weighted_tail_radius(self.abs_tol / max(c_f * r ** a_f, 1e-300), -a_f - 1.0)
        except NotImplementedError:
            return hi_u
        return max(cut, 1.0)

    # -- metadata -----------------------------------------------------------

    def exponent_at_zero(self) -> float:
        cache = self._cache
        if "exp0" not in cache:
            cache["exp0"] = self._compute_exponent()
        return cache["exp0"]

    def _compute_exponent(self) -> float:
        src = self.source
        if self.kernel in ("a1", "a2", "frac_half"):
            exps = []
            if src.atoms:
                exps.append(0.0)
            if src.density is not None:
                a = src.density.exponent_at_zero()
                if src.density.support[0] > 0.0:
                    exps.append(0.0)
                elif self.kernel == "a1":
                    exps.append(0.0 if a >= -0.5 else 2.0 * a + 1.0)
                elif self.kernel == "frac_half":
                    exps.append(0.0 if a >= -0.5 else a + 0.5)
                else:  # a2
                    exps.append(0.0 if a >= 0.0 else a)
            return min(exps) if exps else 0.0
        # upsilon: each cross term contributes, output behaves like the worst
        src_exp = None
        if src.density is not None:
            d = src.density
            src_exp = d.exponent_at_zero() if d.support[0] == 0.0 else 0.0
        tau = self.dilation
        tau_exp = None
        if tau.density is not None:
            d = tau.density
            tau_exp = d.exponent_at_zero() if d.support[0] == 0.0 else 0.0
        exps = []
        if src.atoms and tau_exp is not None:
            exps.append(tau_exp)
        if src_exp is not None and tau.atoms:
            exps.append(src_exp)
        if src_exp is not None and tau_exp is not None:
            exps.append(min(src_exp, tau_exp))
        return min(exps) if exps else 0.0

    def singular_at_low(self) -> bool:
        return self.exponent_at_zero() < 0.0

    def singular_at_high(self) -> bool:
        if self.kernel == "upsilon":
            return False
        return self.source.atom_at_sup() and math.isfinite(self.support[1])

    def interior_singular_radii(self) -> tuple[float, ...]:
        """Each source atom leaves an inverse-square-root blowup in the image;
        all but the one at the supremum sit strictly inside the support.
        Densities in the source never do: smearing an atom-free or even an
        integrably singular density through any of these kernels keeps the
        image locally bounded away from the atom images."""
        hi = self.support[1]
        if self.kernel == "a1":
            radii = [math.sqrt(loc) for loc, _ in self.source.atoms]
        elif self.kernel in ("a2", "frac_half"):
            radii = [loc for loc, _ in self.source.atoms]
        else:
            radii = []
            tau = self.dilation
            t_hi = _rc_sup(tau)
            if (tau.density is not None and tau.density.singular_at_high()
                    and math.isfinite(t_hi)):
                radii += [loc * t_hi for loc, _ in self.source.atoms]
            f = self.source.density
            if f is not None and tau.atoms:
                scaled = list(f.interior_singular_radii())
                if f.singular_at_high() and math.isfinite(f.support[1]):
                    scaled.append(f.support[1])
                radii += [u0 * rho for u0, _ in tau.atoms for rho in scaled]
        return tuple(sorted(r for r in set(radii) if 0.0 < r < hi))

    def tail_all_moments(self) -> bool:
        if math.isfinite(self.support[1]):
            return True
        src_ok = self.source.density is None or self.source.density.tail_all_moments()
        if self.kernel != "upsilon":
            return src_ok
        tau_ok = self.dilation.density is None or self.dilation.density.tail_all_moments()
        return src_ok and tau_ok

    def weighted_tail_radius(self, tol: float, moment: float = 0.0) -> float:
        lo, hi = self.support
        if math.isfinite(hi):
            return hi
        k = moment
        if self.kernel == "a1":
            # tail_out(R) <= weighted source tail beyond R^2 at moment k/2
            return math.sqrt(_rc_tail_radius(self.source, tol, k / 2.0))
        if self.kernel == "a2":
            return _rc_tail_radius(self.source, tol, k)
        if self.kernel == "frac_half":
            # tail_out(R) <= (2/sqrt(pi)) * weighted source tail, moment k + 1/2
            return _rc_tail_radius(self.source, tol * math.sqrt(math.pi) / 2.0, k + 0.5)
        tau = self.dilation
        tau_hi = _rc_sup(tau)
        if math.isfinite(tau_hi):
            cache = self._cache
            key = ("tau_mass",)
            if key not in cache:
                cache[key] = _rc_moment(tau, 0.0)
            scale = cache[key] * tau_hi ** k
            return tau_hi * _rc_tail_radius(self.source, tol / max(scale, 1e-300), k)
        raise NotImplementedError("no certified tail envelope for this dilation")

    def table_radius(self) -> float:
        lo, hi = self.support
        if math.isfinite(hi):
            return hi
        try:
            return self.weighted_tail_radius(1e-13, 0.0)
        except NotImplementedError:
            pass
        cache = self._cache
        if "table_r" not in cache:
            r = 1.0
            try:
                r = max(1.0, _rc_tail_radius(self.source, 1e-10, 0.0))
            except NotImplementedError:
                pass
            while r < 1e9 and max(self.value(r), self.value(0.7 * r)) * r > 1e-13:
                r *= 2.0
            cache["table_r"] = r
        return cache["table_r"]

    def provenance_name(self) -> str:
        if self.label:
            return self.label
        parts = []
        if self.source.atoms:
            parts.append("atoms")
        if self.source.density is not None:
            parts.append(self.source.density.provenance_name())
        return f"{self.kernel}({'+'.join(parts)})"


def _maybe_tabulated(dens: TransformedDensity) -> Density:
    """Tabulate a kernel whose nesting depth exceeds the evaluation budget."""
    if dens.depth <= MAX_KERNEL_DEPTH:
        return dens
    return tabulate_density(dens)


# ---------------------------------------------------------------------------
# public transforms
# ---------------------------------------------------------------------------

def _require(m: PolarMeasure, level: str, op: str) -> None:
    report = validate(m, level)
    if not report.ok:
        bad = "; ".join(f"component {c.index}: {c.detail}" for c in report.components if not c.ok)
        raise DomainError(f"{op} requires a measure passing the {level} check: {bad}")


def _kernel_component(kernel: str, rc: RadialComponent,
                      tau: DilationMeasure | None = None,
                      label: str = "") -> RadialComponent:
    dens = TransformedDensity(kernel, rc, tau, label=label)
    return RadialComponent((), _maybe_tabulated(dens), rc.weight)


def arcsine1(m: PolarMeasure) -> PolarMeasure:
    """First arcsine transform. Needs the radial first-moment condition near
    zero (levy_l1); the output is again a valid polar measure, atom-free."""
    _require(m, "levy_l1", "arcsine1")
    return m.map_components(lambda rc: _kernel_component("a1", rc))


def arcsine2(m: PolarMeasure) -> PolarMeasure:
    """Second arcsine transform, realized as the scale mixture against the
    arcsine dilation on (0, 1). Valid on any measure passing the levy check."""
    _require(m, "levy", "arcsine2")
    tau = arcsine_dilation()
    return m.map_components(lambda rc: _kernel_component("upsilon", rc, tau, label="a2"))


def arcsine2_direct(m: PolarMeasure) -> PolarMeasure:
    """Second arcsine transform through its defining kernel; cross-check route
    for arcsine2()."""
    _require(m, "levy", "arcsine2")
    return m.map_components(lambda rc: _kernel_component("a2", rc))


def upsilon_tau(m: PolarMeasure, tau: DilationMeasure) -> PolarMeasure:
    """Scale mixture of a polar measure by a dilation measure on (0, oo):
    the image of nu x tau under (s, u) -> s*u, direction by direction.
    Source atoms crossed with dilation atoms stay atoms; every other cross
    term becomes a density. The output must itself pass the levy check,
    verified post hoc (symbolically) and reported as RangeError."""
    if not isinstance(tau, RadialComponent):
        raise DomainError(f"dilation must be a radial component, got {type(tau)!r}")
    if tau.density is not None:
        td = tau.density
        if td.support[0] == 0.0 and not td.exponent_at_zero() > -3.0:
            raise DomainError("dilation density must integrate u^2 near zero")
        if math.isinf(td.support[1]) and not td.tail_all_moments():
            raise DomainError("dilation density must have finite mass at infinity")

    def mapper(rc: RadialComponent) -> RadialComponent:
        atoms = tuple((s * u0, ms * w) for s, ms in rc.atoms for u0, w in tau.atoms)
        needs_density = ((rc.atoms and tau.density is not None)
                         or (rc.density is not None and (tau.atoms or tau.density is not None)))
        dens = None
        if needs_density:
            dens = _maybe_tabulated(TransformedDensity("upsilon", rc, tau))
        return RadialComponent(atoms, dens, rc.weight)

    out = m.map_components(mapper)
    report = validate(out, "levy")
    if not report.ok:
        bad = "; ".join(f"component {c.index}: {c.detail}"
                        for c in report.components if not c.ok)
        raise RangeError(f"scale mixture output fails the levy check: {bad}")
    return out


def upsilon0(m: PolarMeasure) -> PolarMeasure:
    """Scale mixture against e^(-u) du."""
    return upsilon_tau(m, exp_dilation())


def upsilon_alpha_beta(m: PolarMeasure, alpha: float, beta: float) -> PolarMeasure:
    """Scale mixture against beta * s^(-alpha-1) * exp(-s^beta) ds,
    alpha < 2 and 0 < beta <= 2. (alpha, beta) = (-1, 1) reproduces upsilon0."""
    _require(m, "levy", "upsilon_alpha_beta")
    return upsilon_tau(m, power_exp_dilation(alpha, beta))


def frac_half(rc: RadialComponent) -> RadialComponent:
    """Half-order fractional integral of a radial component:
    out(u) = pi^(-1/2) * int_(u,oo) (s - u)^(-1/2) src(ds).
    Applying it twice to a point mass at s yields the flat density 1 on (0, s).
    """
    if not isinstance(rc, RadialComponent):
        raise DomainError(f"frac_half expects a radial component, got {type(rc)!r}")
    return _kernel_component("frac_half", rc)


# ---------------------------------------------------------------------------
# inversion of the first arcsine transform
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailTable:
    """Tabulated tail function u -> mass of (u, oo), nonincreasing."""

    us: tuple[float, ...]
    tails: tuple[float, ...]

    def tail(self, u: float) -> float:
        us = np.asarray(self.us)
        ts = np.asarray(self.tails)
        if u <= us[0]:
            return float(ts[0])
        if u >= us[-1]:
            return 0.0
        return float(np.interp(u, us, ts))


@dataclass(frozen=True)
class TailDecomposition:
    """Recovered pre-image of the first arcsine transform, one tail table per
    direction (the transform determines the radial measure only through its
    tails, which is what gets returned)."""

    d: int
    components: tuple[tuple[Direction, float, TailTable], ...]

    def to_json(self) -> dict:
        return {"d": self.d,
                "components": [{"direction": list(dirn.coords), "weight": w,
                                "us": list(tt.us), "tails": list(tt.tails)}
                               for dirn, w, tt in self.components]}


MONOTONE_SLACK = 1e-7


def invert_arcsine1(m: PolarMeasure, grid: tuple[float, float, int] | None = None,
                    *, abs_tol: float = DEFAULT_ABS_TOL) -> TailDecomposition:
    """Recover the source tails from a first-arcsine image.

    For each direction the candidate pre-image tail is
        tail(u) = (1/2) * int_u^oo (s - u)^(-1/2) dens(sqrt(s)) ds.
    A genuine image produces a nonincreasing, nonnegative tail; any rise (or
    negativity) beyond MONOTONE_SLACK relative to the tail at the left edge of
    the grid raises NotInRange. Atoms in the input are rejected outright: the
    transform always outputs a continuous density.
    """
    comps = []
    for idx, (dirn, rc) in enumerate(m.components):
        if rc.atoms:
            raise NotInRange(f"component {idx} carries atoms; images of the transform are atom-free")
        dens = rc.density
        if dens is None:
            raise NotInRange(f"component {idx} has no density")
        if dens.depth >= MAX_KERNEL_DEPTH:
            dens = tabulate_density(dens)
        us = _inversion_grid(dens, grid)
        tails = [_preimage_tail(dens, u, abs_tol) for u in us]
        t0 = max(tails[0], 0.0)
        floor = -MONOTONE_SLACK * max(t0, 1e-300)
        for j in range(len(tails)):
            if tails[j] < floor:
                raise NotInRange(
                    f"component {idx}: recovered tail is negative at u={us[j]:.6g}")
            if j and tails[j] - tails[j - 1] > MONOTONE_SLACK * max(t0, 1e-300):
                raise NotInRange(
                    f"component {idx}: recovered tail increases at u={us[j]:.6g} "
                    f"({tails[j - 1]:.6g} -> {tails[j]:.6g}); not an image of the transform")
        cleaned = tuple(max(t, 0.0) for t in tails)
        comps.append((dirn, rc.weight, TailTable(tuple(us), cleaned)))
    return TailDecomposition(m.d, tuple(comps))


def _inversion_grid(dens: Density, grid: tuple[float, float, int] | None) -> list[float]:
    if grid is not None:
        lo, hi, n = grid
        n = int(n)
        if not (0.0 < lo < hi) or n < 2:
            raise ValueError(f"bad inversion grid {grid}")
        return [lo * (hi / lo) ** (i / (n - 1)) for i in range(n)]
    # the recovered radial variable u lives on the square scale of the image
    hi_r = dens.table_radius()
    hi = max(hi_r * hi_r, 1e-6)
    lo = hi * 1e-8
    n = 257
    return [lo * (hi / lo) ** (i / (n - 1)) for i in range(n)]


def _sine_mapped_piece(dens: Density, u: float, a: float, b: float,
                       pts: list[float], abs_tol: float) -> float:
    """Integral of dens(sqrt(s)) / sqrt(s - u) over (a, b) with u <= a < b,
    via s = a + (b - a) sin^2(theta). The jacobian absorbs inverse square
    root blowups at both edges, including the s = u anchor when a == u, so
    the integrand never divides by a difference that can underflow."""
    span = b - a
    root_span = math.sqrt(span)
    anchored = (a == u)

    def integrand(theta: float) -> float:
        st = math.sin(theta)
        ct = math.cos(theta)
        s = a + span * st * st
        v = dens.value(math.sqrt(s))
        if anchored:
            return 2.0 * root_span * ct * v
        return 2.0 * span * st * ct * v / math.sqrt(s - u)

    mapped = None
    if pts:
        mapped = [math.asin(min(1.0, math.sqrt((p - a) / span))) for p in pts]
    return adaptive_quad(integrand, 0.0, 0.5 * math.pi, abs_tol=abs_tol,
                         points=mapped, label="inversion tail")


def _preimage_tail(dens: Density, u: float, abs_tol: float) -> float:
    hi = dens.support[1]
    s_hi = math.inf if math.isinf(hi) else hi * hi
    if math.isinf(s_hi) and dens.tail_all_moments():
        try:
            r_cut = dens.weighted_tail_radius(abs_tol, 0.0)
            s_hi = max(2.0 * u, r_cut * r_cut)
        except NotImplementedError:
            s_hi = math.inf
    if s_hi <= u:
        return 0.0
    # the integrand blows up (integrably) wherever the density does; split
    # there so every blowup sits at a piece edge, where the sine
    # substitution absorbs it
    raw = sorted({rho * rho for rho in dens.interior_singular_radii()
                  if u < rho * rho < s_hi})
    cuts: list[float] = []
    for c in raw:
        if c - u <= 1e-12 * c:
            # u sits at this blowup to machine resolution; the density is
            # unresolvable on the sliver, so read the tail right
            # continuously from above
            continue
        if math.isfinite(s_hi) and s_hi - c <= 1e-12 * s_hi:
            continue
        if cuts and c - cuts[-1] <= 1e-12 * c:
            continue
        cuts.append(c)
    # tabulated images are piecewise linear in the radius, so the integrand
    # kinks at every squared knot; hand those to the quadrature as break points
    knot_pts: list[float] = []
    if isinstance(dens, TableDensity):
        knot_pts = [x * x for x in dens.xs if u < x * x < s_hi]
    edges = [u] + cuts + [s_hi]
    n = len(edges) - 1
    val = 0.0
    for i in range(n):
        a, b = edges[i], edges[i + 1]
        pts = [p for p in knot_pts if a < p < b]
        if math.isinf(b):
            # no truncation radius is available; the quotient is safe here
            # because a > u holds on any unbounded piece with cuts before it,
            # and the anchored case falls back to the endpoint substitution
            val += adaptive_quad(
                lambda s: dens.value(math.sqrt(s)) / math.sqrt(s - u),
                a, b, abs_tol=abs_tol / n,
                singular_left=True, points=pts or None,
                label="inversion tail")
            continue
        floor = max(a, b * 1e-12)
        if b > 1e4 * floor:
            # wide pieces hide small-scale structure from the initial rule;
            # decade marks force a look at every scale
            x = floor * 10.0
            while x < b * 0.999:
                pts.append(x)
                x *= 10.0
        val += _sine_mapped_piece(dens, u, a, b, sorted(set(pts)), abs_tol / n)
    return 0.5 * val
