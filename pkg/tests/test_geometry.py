import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsslink import geometry as g
from rsslink.geometry import LinkGeometry, PlatformClass, ReflectorUnitSpec

heights = st.floats(10.0, 5e5)
spans = st.floats(10.0, 5e5)


def test_presets_match_platform_table():
    assert g.preset("haps") == g.PlatformSpec(PlatformClass.HAPS, 20_000.0, 50_000.0, 800.0)
    assert g.preset("TERRESTRIAL").rss_area_m2 == 50.0
    assert g.preset("uav").rss_area_m2 == 0.0625
    leo = g.preset(PlatformClass.LEO)
    assert (leo.altitude_m, leo.coverage_radius_m, leo.rss_area_m2) == (500_000.0, 500_000.0, 50.0)


def test_platform_spec_rejects_nonpositive():
    with pytest.raises(ValueError):
        g.PlatformSpec(PlatformClass.UAV, 0.0, 10.0, 1.0)


def test_unit_regime_rules():
    assert g.LRSS_UNIT.regime is g.Regime.LRSS
    assert ReflectorUnitSpec(0.2, 0.2, "srss").regime is g.Regime.SRSS
    with pytest.raises(ValueError):
        ReflectorUnitSpec(1.0, 1.0, g.Regime.LRSS)
    with pytest.raises(ValueError):
        ReflectorUnitSpec(10.0, 10.0, g.Regime.SRSS)


@pytest.mark.parametrize(
    "H,d,r,expected",
    [
        (0.0, 1.0, 0.0, (0.0, 2.0)),
        (20_000.0, 50_000.0, 50_000.0, (53_851.6, 53_851.6)),
        (200.0, 2_000.0, 2_000.0, (2_009.98, 2_009.98)),
    ],
)
def test_endpoint_distances(H, d, r, expected):
    got = g.endpoint_distances(LinkGeometry(H, d, r))
    assert got == pytest.approx(expected, abs=0.05)


@pytest.mark.parametrize(
    "alt,horiz,deg", [(100.0, 0.0, 90.0), (20_000.0, 50_000.0, 21.801), (7.0, 7.0, 45.0)]
)
def test_elevation_angle(alt, horiz, deg):
    assert g.elevation_angle(alt, horiz) == pytest.approx(deg, abs=1e-3)


def test_specular_limit():
    assert g.specular_limit_distance(0.0, 0.01) == 0.0
    assert g.specular_limit_distance(800.0, 0.01) == pytest.approx(160_000.0)
    assert g.specular_limit_distance(50.0, 0.01) == pytest.approx(10_000.0)
    with pytest.raises(ValueError):
        g.specular_limit_distance(1.0, 0.0)


def test_n_min_examples():
    lam = 0.01
    assert g.n_min_specular(200 * lam, lam) == 1
    assert g.n_min_specular(math.hypot(20_000, 50_000), lam) == 26_926
    assert g.n_min_specular(math.hypot(200, 2_000), lam) == 1_005


def test_n_max_examples():
    lam = 0.01
    assert g.n_max(10 * 10 * lam**2, g.LRSS_UNIT, lam) == 1
    assert g.n_max(800.0, g.LRSS_UNIT, lam) == 80_000
    assert g.n_max(0.0625, g.LRSS_UNIT, lam) == 6


def test_optimal_placement_examples():
    assert g.optimal_placement_specular(20_000.0, 50_000.0) == 50_000.0
    assert g.optimal_placement_specular(1.0, 1.0) == 1.0
    assert g.optimal_placement_scattering(5.0, 5.0) == (5.0,)
    assert g.optimal_placement_scattering(20_000.0, 50_000.0) == pytest.approx((4_174.2, 95_825.8), abs=0.05)
    assert g.optimal_placement_scattering(200.0, 2_000.0) == pytest.approx((10.03, 3_989.97), abs=0.01)


def test_equivalent_scattering_distance():
    assert g.equivalent_distance_scattering_opt(7.0, 7.0) == pytest.approx(2 * 49.0)
    assert g.equivalent_distance_scattering_opt(20_000.0, 50_000.0) == pytest.approx(2.0e9)
    assert g.equivalent_distance_scattering_opt(5e5, 5e5) == pytest.approx(5.0e11)


def test_feasibility_ordering_at_presets():
    lam = g.wavelength_m(30.0)
    verdict = {}
    for cls in PlatformClass:
        p = g.preset(cls)
        verdict[cls] = g.n_min_specular(g.specular_hop_distance(p), lam) <= g.n_max(p.rss_area_m2, g.LRSS_UNIT, lam)
    assert verdict == {
        PlatformClass.TERRESTRIAL: True,
        PlatformClass.UAV: False,
        PlatformClass.HAPS: True,
        PlatformClass.LEO: False,
    }


# -- grid oracles -------------------------------------------------------------


def _grid(d):
    r = np.linspace(0.0, 2.0 * d, 10_000)
    return r, r[1] - r[0]


def _sum_oracle(H, d, r):
    return np.hypot(r, H) + np.hypot(2 * d - r, H)


def _prod_oracle(H, d, r):
    return np.hypot(r, H) * np.hypot(2 * d - r, H)


@settings(max_examples=60, deadline=None)
@given(heights, spans)
def test_specular_optimum_beats_grid(H, d):
    r, _ = _grid(d)
    best = g.specular_distance(H, d, g.optimal_placement_specular(H, d))
    assert best <= _sum_oracle(H, d, r).min() * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(heights, spans)
def test_scattering_optima_beat_grid(H, d):
    r, _ = _grid(d)
    floor = _prod_oracle(H, d, r).min()
    for r_star in g.optimal_placement_scattering(H, d):
        assert g.scattering_distance(H, d, r_star) <= floor * (1 + 1e-12)


@settings(max_examples=60, deadline=None)
@given(heights, spans)
def test_scattering_optima_mirror(H, d):
    roots = g.optimal_placement_scattering(H, d)
    if d > H and len(roots) == 2:
        assert roots[0] + roots[1] == pytest.approx(2 * d, rel=1e-12)
    else:
        assert roots == (d,)


@settings(max_examples=60, deadline=None)
@given(heights, spans)
def test_closed_form_scattering_distance(H, d):
    r = g.optimal_placement_scattering(H, d)[0]
    assert g.scattering_distance(H, d, r) == pytest.approx(g.equivalent_distance_scattering_opt(H, d), rel=1e-9)


@given(st.floats(0.01, 1e6), st.floats(0.01, 1e6), st.floats(1e-4, 1.0))
def test_n_min_monotone_in_distance(d1, d2, lam):
    lo, hi = sorted((d1, d2))
    assert g.n_min_specular(lo, lam) <= g.n_min_specular(hi, lam)


@given(st.floats(1e-4, 1.0), st.floats(1e-4, 1.0), st.floats(0.01, 1e3))
def test_n_max_monotone_in_wavelength(l1, l2, area):
    lo, hi = sorted((l1, l2))
    assert g.n_max(area, g.LRSS_UNIT, hi) <= g.n_max(area, g.LRSS_UNIT, lo)
