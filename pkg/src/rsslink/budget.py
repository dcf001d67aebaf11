"""End-to-end link budget for a :class:`~rsslink.scenario.Scenario`."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Iterable, Sequence, TypeVar

from rsslink import geometry, reflection, standards
from rsslink.geometry import LinkGeometry, PlatformClass
from rsslink.metrics import (
    Feasibility,
    LinkBudgetResult,
    NoiseConfig,
    outage_probability,
    pr_3gpp_dbm,
    shannon_rate,
    sigma_combined,
    snr_db,
)
from rsslink.reflection import LogDistanceParams, Paradigm
from rsslink.scenario import Channel, Placement, PlacementKind, RadioConfig, Scenario
from rsslink.standards import PathLossBreakdown

# Floor on 3-D distances fed to log10 when a terminal sits right under the RSS.
_MIN_LINK_M = 1.0

T = TypeVar("T")


@dataclass(frozen=True)
class Counts:
    n_min: int | None
    n_max: int
    n_max_continuous: float
    n_used: int
    feasibility: Feasibility


@lru_cache(maxsize=32)
def load_gas_table(path: str) -> standards.TableGas:
    return standards.TableGas.from_csv(path)


def gas_provider(s: Scenario) -> standards.GasAttenuationProvider:
    if s.gas.provider == "table":
        return load_gas_table(s.gas.path)
    return standards.ZeroGas()


def noise_config(radio: RadioConfig) -> NoiseConfig:
    return NoiseConfig(radio.bandwidth_hz, radio.temperature_k, radio.noise_figure_db)


def reflector_counts(s: Scenario) -> Counts:
    lam = geometry.wavelength_m(s.radio.f_ghz)
    unit = s.unit
    n_max_c = geometry.n_max_continuous(s.platform.rss_area_m2, unit, lam)
    n_max = geometry.n_max(s.platform.rss_area_m2, unit, lam)
    n_min = None
    feasibility = Feasibility.FEASIBLE
    if s.paradigm is Paradigm.SPECULAR:
        n_min = geometry.n_min_specular(geometry.specular_hop_distance(s.platform), lam)
        if n_min > n_max:
            feasibility = Feasibility.NMIN_EXCEEDS_NMAX
    if s.reflectors == "max":
        n_used = n_max
    elif s.reflectors == "min":
        n_used = n_min
    else:
        n_used = int(s.reflectors)
    return Counts(n_min, n_max, n_max_c, n_used, feasibility)


def placement_offset(s: Scenario) -> float:
    """Horizontal platform-Tx distance actually used."""
    p = s.platform
    if s.placement.kind is PlacementKind.FIXED:
        return s.placement.tx_offset_m
    H, d = p.altitude_m, p.coverage_radius_m
    if p.platform_class is PlatformClass.TERRESTRIAL:
        # Buildings cannot move; the surface sits midway between Tx and Rx.
        return d
    if s.paradigm is Paradigm.SPECULAR:
        return geometry.optimal_placement_specular(H, d)
    # Two mirror optima when d > H; take the one nearer the Tx.
    return geometry.optimal_placement_scattering(H, d)[0]


def link_geometry(s: Scenario) -> LinkGeometry:
    r = min(placement_offset(s), 2.0 * s.platform.coverage_radius_m)
    return LinkGeometry(
        s.platform.altitude_m, s.platform.coverage_radius_m, r, s.tx_height_m, s.rx_height_m
    )


def _log_distance_pr_w(s: Scenario, counts: Counts, geom: LinkGeometry) -> float:
    r = s.radio
    lam = geometry.wavelength_m(r.f_ghz)
    aerial = s.platform.platform_class.is_aerial
    alpha = 2.0 if aerial else s.path_loss_exp
    params = LogDistanceParams(
        tx_power_w=reflection.dbm_to_watts(r.pt_dbm),
        tx_gain=reflection.db_to_linear(r.gt_dbi),
        rx_gain=reflection.db_to_linear(r.gr_dbi),
        wavelength_m=lam,
        ref_distance_m=s.ref_distance_m,
        path_loss_exp=alpha,
    )
    d_t, d_r = geometry.endpoint_distances(geom)
    if s.paradigm is Paradigm.SPECULAR:
        if aerial:
            return reflection.pr_specular_aerial(params, d_t, d_r, counts.n_used)
        return reflection.pr_specular_terrestrial(params, geom.half_span_m, counts.n_used)
    if s.reflectors == "max":
        # Fully populated surface: use the wavelength-free form so the
        # result does not pick up flooring or rounding from N_max.
        return reflection.pr_max_scattering(params, s.platform.rss_area_m2, s.unit, d_t=d_t, d_r=d_r)
    if aerial:
        return reflection.pr_scattering_aerial(params, d_t * d_r, counts.n_used)
    return reflection.pr_scattering_terrestrial(params, d_t, d_r, counts.n_used)


def standards_links(s: Scenario, geom: LinkGeometry) -> tuple[PathLossBreakdown, PathLossBreakdown]:
    """Mean path loss of the Tx-RSS and RSS-Rx links."""
    f = s.radio.f_ghz
    H = geom.altitude_m
    cls = s.platform.platform_class
    legs = (
        (geom.tx_offset_m, geom.tx_height_m),
        (geom.rx_offset_m, geom.rx_height_m),
    )
    out = []
    for leg, (horizontal, h_term) in enumerate(legs):
        dz = abs(H - h_term)
        d3d = max(math.hypot(horizontal, dz), _MIN_LINK_M)
        if cls is PlatformClass.TERRESTRIAL:
            # Tx-RSS link uses the building height, RSS-Rx link the Rx height.
            h_x = H if leg == 0 else geom.rx_height_m
            out.append(standards.terrestrial_link(horizontal, d3d, f, h_x))
        elif cls is PlatformClass.UAV:
            out.append(standards.uav_link(d3d, f, H, s.env))
        else:
            elev = geometry.elevation_angle(H - h_term, horizontal)
            out.append(
                standards.pl_ntn_mean(
                    f,
                    elev,
                    H - h_term,
                    s.env,
                    gas_provider(s),
                    scintillation_db=s.scintillation_override_db,
                )
            )
    return out[0], out[1]


def _finish(s: Scenario, counts: Counts, geom: LinkGeometry, pr_dbm: float, sigma: float, links) -> LinkBudgetResult:
    cfg = noise_config(s.radio)
    if math.isinf(pr_dbm):
        snr, rate = -math.inf, 0.0
    else:
        snr = snr_db(pr_dbm, cfg, s.strict_paper)
        rate = shannon_rate(pr_dbm, cfg, s.strict_paper)
    return LinkBudgetResult(
        pr_mean_dbm=pr_dbm,
        sigma_s_db=sigma,
        snr_db=snr,
        rate_bps=rate,
        outage=outage_probability(pr_dbm, sigma, s.threshold_dbm, s.strict_paper),
        n_used=counts.n_used,
        feasibility=counts.feasibility,
        n_min=counts.n_min,
        n_max=counts.n_max,
        placement_m=geom.tx_offset_m,
        links=tuple(links),
    )


def evaluate(s: Scenario) -> LinkBudgetResult:
    counts = reflector_counts(s)
    geom = link_geometry(s)
    if s.channel is Channel.LOG_DISTANCE:
        pr_w = _log_distance_pr_w(s, counts, geom)
        return _finish(s, counts, geom, reflection.watts_to_dbm(pr_w), 0.0, ())
    tx_link, rx_link = standards_links(s, geom)
    sigma = sigma_combined(tx_link.shadow_sigma_db, rx_link.shadow_sigma_db)
    if counts.n_used < 1:
        pr_dbm = -math.inf
    else:
        r = s.radio
        pr_dbm = pr_3gpp_dbm(r.pt_dbm, r.gt_dbi, r.gr_dbi, tx_link.mean_pl_db, rx_link.mean_pl_db, counts.n_used)
    return _finish(s, counts, geom, pr_dbm, sigma, (tx_link, rx_link))


# -- scenario transforms used by sweeps ---------------------------------------


def with_radius(s: Scenario, d: float) -> Scenario:
    platform = replace(s.platform, coverage_radius_m=float(d))
    return replace(s, platform=platform, placement=Placement())


def with_frequency(s: Scenario, f_ghz: float) -> Scenario:
    return replace(s, radio=replace(s.radio, f_ghz=float(f_ghz)))


def with_rx_gain(s: Scenario, gr_dbi: float) -> Scenario:
    return replace(s, radio=replace(s.radio, gr_dbi=float(gr_dbi)))


def with_reflectors(s: Scenario, n: int) -> Scenario:
    return replace(s, reflectors=int(n))


def with_normalized_placement(s: Scenario, nu: float) -> Scenario:
    """Place the platform at ``nu = 2 - r/d`` (0 above the Rx, 2 above the Tx)."""
    d = s.platform.coverage_radius_m
    r = min(max((2.0 - nu) * d, 0.0), 2.0 * d)
    return replace(s, placement=Placement.fixed(r))


def with_threshold(s: Scenario, threshold_dbm: float) -> Scenario:
    return replace(s, threshold_dbm=float(threshold_dbm))


def coverage_scenario(platform, radio, env, threshold_dbm: float, scenario: Scenario | None = None) -> Scenario:
    if scenario is None:
        return Scenario(platform=platform, radio=radio, env=env, threshold_dbm=threshold_dbm)
    return replace(scenario, platform=platform, radio=radio, env=env, threshold_dbm=threshold_dbm)


# -- parallel evaluation -----------------------------------------------------


def worker_count() -> int:
    raw = os.environ.get("RSS_LB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return min(8, os.cpu_count() or 1)
    return n


def parallel_map(fn: Callable[[T], object], items: Sequence[T] | Iterable[T]) -> list:
    """``fn`` over ``items`` with results in input order."""
    items = list(items)
    workers = worker_count()
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
