"""Acceptance gate: every shipped claim, one test per criterion.

Each test replays one named verification check at its stated tolerance and
prints the check's pass/fail line (run pytest with -s to see the lines for
passing criteria; failures always show them). The same checks back the CLI
verb `verify`, so `python -m levyarc.cli verify all` reproduces this table
outside pytest.
"""

import pytest

from levyarc import verify


def _run(name):
    r = verify.run_check(name)
    print(r.line())
    assert r.passed, r.line()
    return r


def test_criterion_01_arcsine_image_matches_k0():
    # relative error <= 1e-6 on 50 log points of [0.1, 5]; under 10 s
    _run("ex1")


def test_criterion_02_exponential_mixture_closed_form():
    # relative error <= 1e-8 against (pi/4) r^(-1/2) e^(-sqrt(r))
    _run("ex2")


def test_criterion_03_arcsine_image_of_mixture_input():
    # relative error <= 1e-6 against (2 sqrt(pi))^(-1) e^(-r^2/8) K0(r^2/8)
    _run("ex3")


def test_criterion_04_mixture_commutes_with_arcsine_route():
    # pointwise <= 1e-5 on both source fixtures; both routes match K0
    _run("commute")


def test_criterion_05_noncommutation_moment_witness():
    # first moments 2/pi and 1/sqrt(pi) within 1e-8; ratio sqrt(pi)/2
    _run("noncommute")


def test_criterion_06_inversion_round_trips_and_rejection():
    # tails within 1e-6 on three fixtures; non-image input rejected
    _run("invert")


def test_criterion_07_half_integral_squared_is_flat():
    # density 1 on (0, s) within 1e-8 for s in {0.5, 1, 3}
    _run("frachalf")


def test_criterion_08_triplet_map_consistency():
    # jump part <= 1e-8 vs the direct mixture; Gaussian x 1/2 and drift
    # x 2/pi exact to 1e-12
    _run("cosmap")


def test_criterion_09_k0_laplace_transform():
    # quadrature vs closed form at s in {1/2, 1, 2} and total mass pi/2,
    # all within 1e-8
    _run("laplace")


def test_criterion_10_gaussian_arcsine_mixture_identity():
    # residual <= 1e-8 on the 12-point (x, t) grid
    _run("gauss_arcsine")


def test_criterion_11_class_screens_separate_fixtures():
    # nonincreasing screen rejects the boundary density, necessary
    # conditions accept it, e^(-r) accepted
    _run("classes")


def test_criterion_12_type_g_chain():
    # completely monotone input + l1 check, image passes the squared-radius
    # screen
    _run("typeg")


def test_criterion_13_monte_carlo_agreement():
    # ecf distance <= 0.02 per fixture/integrand combination, < 60 s per
    # fixture, bit-identical seeded reruns
    _run("montecarlo")


def test_criterion_14_composition_order_independence():
    # composed triplet maps agree to 1e-5 either way around
    _run("compose")


def test_every_criterion_is_covered():
    names = set(verify.CHECKS)
    covered = {"ex1", "ex2", "ex3", "commute", "noncommute", "invert",
               "frachalf", "cosmap", "laplace", "gauss_arcsine", "classes",
               "typeg", "montecarlo", "compose"}
    assert names == covered
