import math
from statistics import NormalDist

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsslink import geometry as g
from rsslink import metrics as m
from rsslink.scenario import RadioConfig
from rsslink.standards import EnvironmentClass

CFG = m.NoiseConfig(100e6, 290.0, 7.0)
dbm = st.floats(-200.0, 50.0)
sigma = st.floats(0.01, 20.0)


def test_pr_3gpp_examples():
    assert m.pr_3gpp_dbm(33.0, 43.2, 0.0, 150.0, 150.0, 10_000) == pytest.approx(-143.8)
    assert m.pr_3gpp_dbm(1.0, 2.0, 3.0, 4.0, 5.0, 1) == pytest.approx(-3.0)
    delta = m.pr_3gpp_dbm(0, 0, 0, 0, 0, 70) - m.pr_3gpp_dbm(0, 0, 0, 0, 0, 7)
    assert delta == pytest.approx(20.0)
    with pytest.raises(ValueError):
        m.pr_3gpp_dbm(0, 0, 0, 0, 0, 0)


@given(st.floats(-10, 50), st.floats(-10, 50), st.floats(-10, 50), st.floats(20, 250), st.floats(20, 250), st.integers(1, 10**9))
def test_pr_3gpp_matches_linear_product(pt, gt, gr, pl1, pl2, n):
    lin = 10 ** (pt / 10) * 10 ** (gt / 10) * 10 ** (gr / 10) * n**2 / (10 ** (pl1 / 10) * 10 ** (pl2 / 10))
    assert m.pr_3gpp_dbm(pt, gt, gr, pl1, pl2, n) == pytest.approx(10 * math.log10(lin), abs=1e-9)


def test_noise_power_examples():
    assert m.noise_power_dbm(m.NoiseConfig(100e6, 290.0, 0.0)) == pytest.approx(-93.97, abs=0.01)
    assert m.noise_power_dbm(CFG) == pytest.approx(-86.97, abs=0.01)
    wide = m.noise_power_dbm(m.NoiseConfig(1e9, 290.0, 7.0))
    assert wide - m.noise_power_dbm(CFG) == pytest.approx(10.0)


def test_noise_config_validation():
    for bad in ({"bandwidth_hz": 0}, {"temperature_k": -1}, {"noise_figure_db": -0.5}):
        with pytest.raises(ValueError):
            m.NoiseConfig(**bad)


def test_shannon_rate_examples():
    floor = m.noise_power_dbm(CFG)
    assert m.shannon_rate(floor, CFG) == pytest.approx(100e6)
    assert m.shannon_rate(floor + 10 * math.log10(3), CFG) == pytest.approx(200e6)
    assert m.shannon_rate(floor + 10.0, CFG) == pytest.approx(1e8 * math.log2(11), rel=1e-12)
    assert m.shannon_rate(-76.97, CFG) == pytest.approx(3.459e8, rel=1e-3)


def test_strict_mode_applies_noise_figure_twice():
    assert m.snr_db(-80.0, CFG) - m.snr_db(-80.0, CFG, strict_paper=True) == pytest.approx(7.0)


@given(dbm, dbm)
def test_rate_monotone_in_power(a, b):
    lo, hi = sorted((a, b))
    assert m.shannon_rate(lo, CFG) <= m.shannon_rate(hi, CFG)


def test_rate_monotone_in_bandwidth():
    # Fixed SNR: rate scales with bandwidth.
    narrow, wide = m.NoiseConfig(10e6), m.NoiseConfig(100e6)
    pr = -80.0
    assert m.shannon_rate(pr + 10.0, wide) > m.shannon_rate(pr, narrow)


def test_sigma_combined_examples():
    assert m.sigma_combined(0.0, 0.0) == 0.0
    assert m.sigma_combined(1.15, 1.15) == pytest.approx(1.626, abs=1e-3)
    assert m.sigma_combined(3.0, 4.0) == 5.0


def test_outage_examples():
    assert m.outage_probability(-100.0, 3.0, -100.0) == 0.5
    assert m.outage_probability(-100.0, 3.0, -1e6) == 0.0
    assert m.outage_probability(-100.0, 1.626, -100.0 + 1.626) == pytest.approx(0.841, abs=1e-3)
    assert m.outage_probability(-100.0, 0.0, -101.0) == 0.0
    assert m.outage_probability(-100.0, 0.0, -99.0) == 1.0


@given(dbm, sigma, dbm)
def test_outage_is_normal_cdf(pr, s, x):
    expected = NormalDist(pr, s).cdf(x)
    assert m.outage_probability(pr, s, x) == pytest.approx(expected, abs=1e-12)
    assert m.outage_probability(pr, s, x, strict_paper=True) == pytest.approx(expected, abs=1e-12)


@given(dbm, sigma, dbm, dbm)
def test_outage_monotone_in_threshold(pr, s, x1, x2):
    lo, hi = sorted((x1, x2))
    assert m.outage_probability(pr, s, lo) <= m.outage_probability(pr, s, hi)
    assert m.outage_probability(lo, s, pr) >= m.outage_probability(hi, s, pr)


@given(dbm, sigma, dbm, st.floats(-50.0, 50.0))
def test_outage_shift_invariant(pr, s, x, delta):
    assert m.outage_probability(pr + delta, s, x + delta) == pytest.approx(m.outage_probability(pr, s, x), abs=1e-9)


def test_monte_carlo_examples():
    assert m.outage_monte_carlo(-90.0, 0.0, -95.0, 10_000) == 0.0
    assert m.outage_monte_carlo(-90.0, 4.0, -90.0) == pytest.approx(0.5, abs=0.002)
    assert m.outage_monte_carlo(-90.0, 4.0, -92.0, seed=3) == m.outage_monte_carlo(-90.0, 4.0, -92.0, seed=3)
    with pytest.raises(ValueError):
        m.outage_monte_carlo(-90.0, 4.0, -92.0, samples=100)


def test_radius_grid():
    grid = m.radius_grid()
    assert grid[0] == pytest.approx(10.0)
    assert grid[-1] == pytest.approx(1e6)
    assert len(grid) == 5 * 200 + 1


# -- coverage radius -------------------------------------------------------------


def _coverage(cls, env, target):
    radio = RadioConfig(pt_dbm=33.0, gt_dbi=43.2, gr_dbi=0.0, f_ghz=30.0, c1=0.2, c2=0.2)
    return m.max_coverage_radius(g.preset(cls), radio, EnvironmentClass(env), -115.0, target, refine_steps=10)


def test_coverage_vacuous_and_impossible_targets():
    assert _coverage("haps", "urban", 1.0) == pytest.approx(1e6)
    assert _coverage("haps", "urban", 0.0) == 0.0


def test_coverage_monotone_in_target():
    loose = _coverage("haps", "urban", 0.3)
    tight = _coverage("haps", "urban", 0.05)
    assert 0.0 < tight <= loose
