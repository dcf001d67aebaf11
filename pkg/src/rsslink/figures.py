"""Canned sweeps, one per figure id, emitted as wide CSV tables.

Every table has the swept variable in the first column and one column
per curve. Cells are empty where a curve is undefined (for instance more
reflectors than the platform can host).
"""
from __future__ import annotations

import copy
import math
from typing import Callable

import numpy as np

from rsslink import budget, metrics, standards
from rsslink.scenario import Scenario, emit_table_csv, scenario_from_dict

FIGURES = ("fig3", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12")

PLATFORMS = ("terrestrial", "uav", "haps", "leo")
ENVIRONMENTS = ("dense_urban", "urban", "rural")
# Average tropospheric scintillation assumed for the HAPS/LEO frequency sweep.
FIG8_SCINTILLATION_DB = 0.5


class UnknownFigure(KeyError):
    pass


def _merge(base: dict, overrides: dict | None) -> dict:
    doc = copy.deepcopy(base)
    for key, value in (overrides or {}).items():
        if isinstance(value, dict) and isinstance(doc.get(key), dict):
            doc[key] = {**doc[key], **value}
        else:
            doc[key] = value
    return doc


def _standards_curves(overrides, platforms=PLATFORMS, extra: dict | None = None) -> dict[str, Scenario]:
    """Scattering/standards scenario per curve; the terrestrial model has no environment split."""
    curves = {}
    for p in platforms:
        envs = ("urban",) if p == "terrestrial" else ENVIRONMENTS
        for env in envs:
            name = p if p == "terrestrial" else f"{p}_{env}"
            doc = {"platform": p, "environment": env, "paradigm": "scattering", "channel": "standards"}
            if extra and p in extra:
                doc = _merge(doc, extra[p])
            curves[name] = scenario_from_dict(_merge(doc, overrides))
    return curves


def _finite(x: float) -> float | None:
    return x if math.isfinite(x) else None


def _table(xs, curves: dict, value: Callable[[Scenario, float], float | None]) -> str:
    names = list(curves)

    def row(x):
        return [x] + [value(curves[n], x) for n in names]

    rows = budget.parallel_map(row, list(xs))
    return emit_table_csv(["x", *names], rows)


def fig3(overrides=None) -> str:
    """LoS probability vs elevation angle per environment."""
    xs = [float(a) for a in range(10, 91)]
    rows = [[a] + [standards.plos_ntn(a, env) for env in ENVIRONMENTS] for a in xs]
    return emit_table_csv(["elevation_deg", *ENVIRONMENTS], rows)


def _n_grid(stop_exp: int, extra=()) -> list[float]:
    grid = {float(round(x)) for x in np.logspace(0, stop_exp, 10 * stop_exp + 1)}
    grid.update(float(n) for n in extra if n and n >= 1)
    return sorted(grid)


def fig5(overrides=None) -> str:
    """Specular log-distance power vs reflector count (blank past N_max)."""
    curves = {
        p: scenario_from_dict(_merge({"platform": p, "paradigm": "specular", "channel": "log_distance"}, overrides))
        for p in PLATFORMS
    }
    marks = []
    for s in curves.values():
        c = budget.reflector_counts(s)
        marks += [c.n_min, c.n_max]

    def value(s, n):
        if n > budget.reflector_counts(s).n_max:
            return None
        return _finite(budget.evaluate(budget.with_reflectors(s, int(n))).pr_mean_dbm)

    return _table(_n_grid(6, marks), curves, value).replace("x,", "n_reflectors,", 1)


def fig6(overrides=None) -> str:
    """Scattering standards-model power vs reflector count."""
    curves = _standards_curves(overrides)

    def value(s, n):
        if n > budget.reflector_counts(s).n_max:
            return None
        return _finite(budget.evaluate(budget.with_reflectors(s, int(n))).pr_mean_dbm)

    marks = [budget.reflector_counts(s).n_max for s in curves.values()]
    return _table(_n_grid(9, marks), curves, value).replace("x,", "n_reflectors,", 1)


def _freq_grid() -> list[float]:
    grid = {float(f) for f in np.logspace(0, 3, 31)}
    grid.update((6.0, 12.0, 30.0, 100.0, 300.0))
    return sorted(grid)


def fig7(overrides=None) -> str:
    """Log-distance power vs carrier frequency, fully populated surfaces."""
    curves = {}
    for p in PLATFORMS:
        for paradigm in ("specular", "scattering"):
            doc = {"platform": p, "paradigm": paradigm, "channel": "log_distance", "reflectors": "max"}
            curves[f"{p}_{paradigm}"] = scenario_from_dict(_merge(doc, overrides))

    def value(s, f):
        return _finite(budget.evaluate(budget.with_frequency(s, f)).pr_mean_dbm)

    return _table(_freq_grid(), curves, value).replace("x,", "f_ghz,", 1)


def fig8(overrides=None) -> str:
    """Standards-model power vs carrier frequency at N_max."""
    fixed = {"scintillation_override_db": FIG8_SCINTILLATION_DB}
    curves = _standards_curves(overrides, extra={"haps": fixed, "leo": fixed})

    def value(s, f):
        return _finite(budget.evaluate(budget.with_frequency(s, f)).pr_mean_dbm)

    return _table(_freq_grid(), curves, value).replace("x,", "f_ghz,", 1)


def fig9(overrides=None) -> str:
    """Shannon rate at 100 MHz vs receive antenna gain."""
    curves = _standards_curves(_merge({"radio": {"bandwidth_hz": 100e6}}, overrides))

    def value(s, g):
        return budget.evaluate(budget.with_rx_gain(s, g)).rate_bps

    xs = [float(g) for g in range(-5, 41)]
    return _table(xs, curves, value).replace("x,", "gr_dbi,", 1)


def fig10(overrides=None) -> str:
    """Rate vs normalized Rx-platform distance ``nu = 2 - r/d``."""
    base = _merge({"radio": {"gr_dbi": 0.0}}, overrides)
    curves = {}
    for name, s in _standards_curves(base, platforms=("terrestrial", "uav", "haps")).items():
        if name.startswith("haps"):
            curves[name.replace("haps", "haps_d50km")] = s
            curves[name.replace("haps", "haps_d10km")] = budget.with_radius(s, 10_000.0)
        else:
            curves[name] = s

    def value(s, nu):
        return budget.evaluate(budget.with_normalized_placement(s, nu)).rate_bps

    xs = [float(x) for x in np.linspace(0.0, 2.0, 201)]
    return _table(xs, curves, value).replace("x,", "nu,", 1)


def fig11(overrides=None) -> str:
    """CDF of received power (outage vs sensitivity) for the aerial platforms."""
    curves = _standards_curves(overrides, platforms=("uav", "haps", "leo"))

    def value(s, x):
        r = budget.evaluate(s)
        return metrics.outage_probability(r.pr_mean_dbm, r.sigma_s_db, x, s.strict_paper)

    xs = [float(x) for x in range(-200, -19)]
    return _table(xs, curves, value).replace("x,", "threshold_dbm,", 1)


def fig12(overrides=None) -> str:
    """Outage at -115 dBm vs coverage radius."""
    curves = _standards_curves(_merge({"threshold_dbm": -115.0}, overrides), platforms=("terrestrial", "uav", "haps"))

    def value(s, d):
        return budget.evaluate(budget.with_radius(s, d)).outage

    xs = [float(x) for x in metrics.radius_grid(10.0, 1e6, 20)]
    return _table(xs, curves, value).replace("x,", "radius_m,", 1)


_RUNNERS = {
    "fig3": fig3,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "fig8": fig8,
    "fig9": fig9,
    "fig10": fig10,
    "fig11": fig11,
    "fig12": fig12,
}


def run_figure(figure_id: str, overrides: dict | None = None) -> str:
    try:
        runner = _RUNNERS[figure_id.lower()]
    except KeyError:
        raise UnknownFigure(f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}") from None
    return runner(overrides)
