"""Radial-measure transform calculus for infinitely divisible laws:
arcsine-kernel and scale-mixture transforms of polar Lévy measures, the
induced triplet maps of stochastic integrals, membership screens for the
classical nested distribution classes, and a reproducible Monte Carlo
sampler, cross-checked against Bessel closed forms."""

from .errors import (ConfigError, DomainError, GridMismatch, LevyArcError,
                     MalformedMeasure, NotInRange, QuadratureNonConvergence,
                     RangeError)
from .measures import (Direction, ExpPowerDensity, PolarMeasure,
                       PowerImageDensity, RadialComponent, TableDensity,
                       ValidationReport, from_json, half_line_measure,
                       integrate, power_reparam, tabulate_density, tail,
                       to_json, validate)
from .transforms import (ArcsineDilationDensity, TailDecomposition, TailTable,
                         TransformedDensity, arcsine1, arcsine2,
                         arcsine2_direct, arcsine_dilation, exp_dilation,
                         frac_half, invert_arcsine1, power_exp_dilation,
                         upsilon0, upsilon_alpha_beta, upsilon_tau)
from .mappings import (CharFnGrid, IntegrandSpec, Triplet, char_exponent,
                       char_fn, char_fn_grid, compose_g, compose_g_reversed,
                       gauss_tail, gauss_tail_inverse, integrand,
                       transform_triplet)
from .classes import (MembershipReport, class_a_necessary,
                      is_completely_monotone, is_class_b, is_jurek, is_type_g)
from .simulate import (SampleSet, SimConfig, cf_distance, empirical_cf,
                       sample_id, sample_integral)
from .special import (ArcsineKernel, Fixture, arcsine_density,
                      ex1_input_density, ex2_input_density, ex3_closed_form,
                      fixture_catalog, gauss_arcsine_residual, k0,
                      k0_integral_form, k0_laplace)
from .quadrature import adaptive_quad, exp_tail_radius, geometric_grid

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DomainError", "GridMismatch", "LevyArcError",
    "MalformedMeasure", "NotInRange", "QuadratureNonConvergence", "RangeError",
    "Direction", "ExpPowerDensity", "PolarMeasure", "PowerImageDensity",
    "RadialComponent", "TableDensity", "ValidationReport", "from_json",
    "half_line_measure", "integrate", "power_reparam", "tabulate_density",
    "tail", "to_json", "validate",
    "ArcsineDilationDensity", "TailDecomposition", "TailTable",
    "TransformedDensity", "arcsine1", "arcsine2", "arcsine2_direct",
    "arcsine_dilation", "exp_dilation", "frac_half", "invert_arcsine1",
    "power_exp_dilation", "upsilon0", "upsilon_alpha_beta", "upsilon_tau",
    "CharFnGrid", "IntegrandSpec", "Triplet", "char_exponent", "char_fn",
    "char_fn_grid", "compose_g", "compose_g_reversed", "gauss_tail",
    "gauss_tail_inverse", "integrand", "transform_triplet",
    "MembershipReport", "class_a_necessary", "is_completely_monotone",
    "is_class_b", "is_jurek", "is_type_g",
    "SampleSet", "SimConfig", "cf_distance", "empirical_cf", "sample_id",
    "sample_integral",
    "ArcsineKernel", "Fixture", "arcsine_density", "ex1_input_density",
    "ex2_input_density", "ex3_closed_form", "fixture_catalog",
    "gauss_arcsine_residual", "k0", "k0_integral_form", "k0_laplace",
    "adaptive_quad", "exp_tail_radius", "geometric_grid",
    "__version__",
]
