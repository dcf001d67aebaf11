import csv
import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rsslink import scenario as sc
from rsslink.geometry import PlatformClass
from rsslink.metrics import Feasibility, LinkBudgetResult
from rsslink.reflection import Paradigm
from rsslink.scenario import Channel, ScenarioError


def load(doc):
    return sc.load_scenario(json.dumps(doc))


def test_bare_platform_expands_preset():
    s = load({"platform": "HAPS"})
    p = s.platform
    assert (p.platform_class, p.altitude_m, p.coverage_radius_m, p.rss_area_m2) == (
        PlatformClass.HAPS,
        20_000.0,
        50_000.0,
        800.0,
    )
    assert s.paradigm is Paradigm.SCATTERING and s.channel is Channel.STANDARDS
    assert (s.radio.pt_dbm, s.radio.gt_dbi) == (33.0, 43.2)


@pytest.mark.parametrize(
    "doc,pt,gt",
    [
        ({"platform": "uav"}, 35.0, 8.0),
        ({"platform": "terrestrial"}, 35.0, 8.0),
        ({"platform": "leo"}, 33.0, 43.2),
        ({"platform": "haps", "paradigm": "specular", "channel": "log_distance"}, 40.0, 0.0),
    ],
)
def test_default_radio(doc, pt, gt):
    s = load(doc)
    assert (s.radio.pt_dbm, s.radio.gt_dbi, s.radio.gr_dbi) == (pt, gt, 0.0)


def test_platform_overrides():
    s = load({"platform": {"class": "uav", "altitude_m": 120}})
    assert s.platform.altitude_m == 120.0
    assert s.platform.rss_area_m2 == 0.0625


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"platform": "haps", "radio": {"c1": 10, "c2": 10}}, "radio.c1"),
        ({"platform": "haps", "paradigm": "specular", "channel": "log_distance", "radio": {"c1": 0.2, "c2": 0.2}}, "radio.c1"),
        ({"platform": "haps", "colour": "red"}, "colour"),
        ({"platform": "haps", "radio": {"power": 3}}, "radio.power"),
        ({"platform": "haps", "schema": 2}, "schema"),
        ({"platform": "zeppelin"}, "platform"),
        ({"platform": "haps", "paradigm": "specular"}, "channel"),
        ({"platform": "haps", "reflectors": "min"}, "reflectors"),
        ({"platform": "haps", "reflectors": 0}, "reflectors"),
        ({"platform": "haps", "radio": {"f_ghz": -1}}, "radio.f_ghz"),
        ({"platform": "haps", "outage_target": 2}, "outage_target"),
        ({"radio": {}}, "document"),
    ],
)
def test_rejections_name_the_field(doc, field):
    with pytest.raises(ScenarioError) as info:
        load(doc)
    assert info.value.field == field


def test_unit_rule_message():
    with pytest.raises(ScenarioError, match="0.1"):
        load({"platform": "haps", "radio": {"c1": 10, "c2": 10}})


@pytest.mark.parametrize("text", ["", "   ", "{}", "[]", "{not json"])
def test_empty_or_malformed_documents(text):
    with pytest.raises(ScenarioError) as info:
        sc.load_scenario(text)
    assert info.value.field == "document"
    if text.strip() in ("", "{}"):
        assert "platform" in str(info.value)


@pytest.mark.parametrize("name", sc.preset_names())
def test_presets_validate_and_round_trip(name):
    s = sc.load_preset(name)
    again = sc.load_scenario(sc.dump_scenario(s))
    assert again == s
    assert sc.dump_scenario(again) == sc.dump_scenario(s)


def test_unknown_preset():
    with pytest.raises(KeyError):
        sc.load_preset("nope")


docs = st.fixed_dictionaries(
    {"platform": st.sampled_from(["terrestrial", "uav", "haps", "leo"])},
    optional={
        "environment": st.sampled_from(["rural", "urban", "dense_urban"]),
        "seed": st.integers(0, 2**31),
        "threshold_dbm": st.floats(-200, 0),
        "reflectors": st.integers(1, 10**6),
        "placement": st.builds(lambda r: {"fixed_m": r}, st.floats(0, 1000)),
        "radio": st.fixed_dictionaries({}, optional={"f_ghz": st.floats(1, 300), "gr_dbi": st.floats(-5, 40)}),
    },
)


@given(docs)
def test_load_is_idempotent(doc):
    s = load(doc)
    assert sc.load_scenario(sc.dump_scenario(s)) == s


def test_sweep_spec_rules():
    spec = sc.SweepSpec("frequency_ghz", 1, 100, 3, "log")
    assert spec.values() == pytest.approx([1.0, 10.0, 100.0])
    for bad in (("rx_gain_dbi", 0, 1, 1), ("rx_gain_dbi", 2, 1, 5), ("frequency_ghz", 0, 1, 3, "log")):
        with pytest.raises(ValueError):
            sc.SweepSpec(*bad)


# -- CSV -------------------------------------------------------------------------


def result(x):
    return LinkBudgetResult(-90.0 - x / 7, 1.0 / 3, 0.1 + x, 1e8 / 3, x / 1e5, int(x) + 1, Feasibility.FEASIBLE)


def test_sweep_csv_single_row():
    text = sc.emit_sweep_csv([(1.0, result(1.0))])
    lines = text.splitlines()
    assert lines[0] == "x,pr_mean_dbm,sigma_s_db,snr_db,rate_bps,outage,n_used,feasible"
    assert len(lines) == 2


def test_sweep_csv_round_trip_and_order():
    xs = [float(x) for x in range(10_000)][::-1]
    text = sc.emit_sweep_csv([(x, result(x)) for x in xs])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(text.splitlines()) == 10_001
    assert [float(r["x"]) for r in rows] == sorted(xs)
    for r in rows[:50]:
        x = float(r["x"])
        expected = result(x)
        assert float(r["pr_mean_dbm"]) == expected.pr_mean_dbm
        assert float(r["rate_bps"]) == expected.rate_bps
        assert r["sigma_s_db"] == repr(expected.sigma_s_db)
        assert int(r["n_used"]) == expected.n_used
        assert r["feasible"] == "true"


def test_sweep_csv_rejects_empty():
    with pytest.raises(ValueError):
        sc.emit_sweep_csv([])


def test_table_csv_blank_cells():
    assert sc.emit_table_csv(["x", "a"], [[1.0, None]]) == "x,a\n1.0,\n"
