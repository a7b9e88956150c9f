"""Monte Carlo sampler: config validation, exactness on degenerate triplets,
law marginals, reproducibility, threading, and the small-jump compensation
scheme's convergence."""

import json
import math

import numpy as np
import pytest

import levyarc as la
from levyarc.errors import ConfigError, GridMismatch

ZS = [(float(z),) for z in np.linspace(-5.0, 5.0, 21)]


def small(paths=4000, steps=200, seed=3, **kw):
    return la.SimConfig(paths=paths, time_steps=steps, eps=1e-3, seed=seed, **kw)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ValueError):
        la.SimConfig(paths=0, time_steps=10, eps=1e-3, seed=0)
    with pytest.raises(ValueError):
        la.SimConfig(paths=10, time_steps=0, eps=1e-3, seed=0)
    with pytest.raises(ValueError):
        la.SimConfig(paths=10, time_steps=10, eps=0.0, seed=0)


def test_cutoff_swallowing_all_jumps_warns():
    t = la.Triplet([[0.0]], la.half_line_measure(atoms=[(0.5, 1.0)]), [0.0])
    cfg = la.SimConfig(paths=16, time_steps=4, eps=2.0, seed=0)
    with pytest.warns(ConfigError):
        la.sample_id(t, cfg)


# ---------------------------------------------------------------------------
# exactness on degenerate inputs
# ---------------------------------------------------------------------------

def test_drift_only_integral_is_exact():
    t = la.Triplet([[0.0]], la.PolarMeasure.zero(1), [3.0])
    ss = la.sample_integral(t, "cos_pi_half", small(paths=8, steps=64))
    want = 3.0 * 2.0 / math.pi
    assert np.max(np.abs(ss.draws - want)) < 1e-14


def test_drift_only_identity_is_exact():
    t = la.Triplet([[0.0]], la.PolarMeasure.zero(1), [-1.25])
    ss = la.sample_id(t, small(paths=8, steps=1))
    assert np.max(np.abs(ss.draws + 1.25)) < 1e-14


# ---------------------------------------------------------------------------
# marginal laws
# ---------------------------------------------------------------------------

def test_gaussian_identity_moments(gaussian_triplet):
    ss = la.sample_id(gaussian_triplet, small(paths=60_000, steps=1, seed=5))
    x = ss.draws[:, 0]
    assert abs(x.mean()) < 0.02
    assert abs(x.var() - 1.0) < 0.03


def test_poisson_identity_is_integer_valued(poisson_triplet):
    ss = la.sample_id(poisson_triplet, small(paths=30_000, steps=1, seed=5))
    x = ss.draws[:, 0]
    # drift 1/2 cancels the centering of the unit atom, leaving a Poisson(1)
    # count exactly
    assert np.allclose(x, np.round(x))
    assert abs(x.mean() - 1.0) < 0.03
    assert abs(x.var() - 1.0) < 0.04


def test_empirical_cf_basics(poisson_triplet):
    ss = la.sample_id(poisson_triplet, small(paths=2000, steps=1))
    g = la.empirical_cf(ss, [(0.0,), (1.3,)])
    assert abs(g.values[0] - 1.0) < 1e-14
    assert abs(g.values[1]) <= 1.0 + 1e-12


# ---------------------------------------------------------------------------
# reproducibility
# ---------------------------------------------------------------------------

def test_seeded_rerun_is_bit_identical(poisson_triplet):
    a = la.sample_integral(poisson_triplet, "cos_pi_half", small())
    b = la.sample_integral(poisson_triplet, "cos_pi_half", small())
    assert np.array_equal(a.draws, b.draws)


def test_path_prefix_independent_of_path_count(poisson_triplet):
    a = la.sample_integral(poisson_triplet, "cos_pi_half", small(paths=500))
    b = la.sample_integral(poisson_triplet, "cos_pi_half", small(paths=900))
    assert np.array_equal(b.draws[:500], a.draws)


def test_thread_count_does_not_change_draws(poisson_triplet, monkeypatch):
    serial = la.sample_integral(poisson_triplet, "cos_pi_half", small())
    monkeypatch.setenv("LEVY_ARCSINE_THREADS", "4")
    threaded = la.sample_integral(poisson_triplet, "cos_pi_half", small())
    assert np.array_equal(serial.draws, threaded.draws)


def test_different_seeds_differ(poisson_triplet):
    a = la.sample_integral(poisson_triplet, "cos_pi_half", small(seed=1))
    b = la.sample_integral(poisson_triplet, "cos_pi_half", small(seed=2))
    assert not np.array_equal(a.draws, b.draws)


# ---------------------------------------------------------------------------
# distributional agreement with the triplet calculus
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("spec", ["cos_pi_half", "log_sqrt"])
def test_integral_law_matches_transformed_triplet(poisson_triplet, spec):
    ref = la.char_fn_grid(la.transform_triplet(poisson_triplet, spec), ZS)
    ss = la.sample_integral(poisson_triplet, spec,
                            la.SimConfig(paths=20_000, time_steps=400, eps=1e-3, seed=7))
    assert la.cf_distance(la.empirical_cf(ss, ZS), ref) <= 0.03


def test_compensation_improves_and_converges():
    heavy = la.Triplet([[0.0]],
                       la.half_line_measure(density=la.ExpPowerDensity(1.0, -1.5, 1.0, 1.0)),
                       [0.0])
    ref = la.char_fn_grid(la.transform_triplet(heavy, "cos_pi_half"), ZS)
    dist = {}
    for eps in (1e-1, 1e-2, 1e-3):
        for comp in (True, False):
            cfg = la.SimConfig(paths=40_000, time_steps=500, eps=eps, seed=11,
                               compensate_small_jumps=comp)
            ss = la.sample_integral(heavy, "cos_pi_half", cfg)
            dist[eps, comp] = la.cf_distance(la.empirical_cf(ss, ZS), ref)
    # truncation bias decreases monotonically with the cutoff
    assert dist[1e-1, False] > dist[1e-2, False] > dist[1e-3, False]
    # the Gaussian proxy never hurts beyond Monte Carlo noise
    for eps in (1e-1, 1e-2, 1e-3):
        assert dist[eps, True] <= dist[eps, False] + 1e-3
    # and at the coarsest cutoff it is a large win
    assert dist[1e-1, True] < 0.5 * dist[1e-1, False]


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------

def test_sample_set_csv_and_sidecar(poisson_triplet):
    ss = la.sample_id(poisson_triplet, small(paths=5, steps=1))
    lines = ss.to_csv().strip().splitlines()
    assert lines[0] == "x1"
    assert len(lines) == 6
    for ln in lines[1:]:
        float(ln)  # parses, full precision
    side = json.loads(ss.sidecar_json())
    assert side["d"] == 1 and side["config"]["paths"] == 5


def test_cf_distance_grid_mismatch(poisson_triplet):
    a = la.char_fn_grid(poisson_triplet, [(0.0,), (1.0,)])
    b = la.char_fn_grid(poisson_triplet, [(0.0,), (2.0,)])
    with pytest.raises(GridMismatch):
        la.cf_distance(a, b)
