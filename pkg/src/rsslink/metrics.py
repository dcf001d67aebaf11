"""Received power assembly, noise, rate and outage."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc

BOLTZMANN = 1.38e-23  # J/K


class Feasibility(str, enum.Enum):
    FEASIBLE = "feasible"
    NMIN_EXCEEDS_NMAX = "nmin_exceeds_nmax"


@dataclass(frozen=True)
class NoiseConfig:
    bandwidth_hz: float = 100e6
    temperature_k: float = 290.0
    noise_figure_db: float = 7.0
    boltzmann: float = BOLTZMANN

    def __post_init__(self):
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth_hz must be > 0")
        if self.temperature_k <= 0:
            raise ValueError("temperature_k must be > 0")
        if self.noise_figure_db < 0:
            raise ValueError("noise_figure_db must be >= 0")


@dataclass(frozen=True)
class LinkBudgetResult:
    """Outcome of one link-budget evaluation.

    The first eight fields are the sweep CSV columns; the rest carry the
    detail shown by the budget report.
    """

    pr_mean_dbm: float
    sigma_s_db: float
    snr_db: float
    rate_bps: float
    outage: float
    n_used: int
    feasibility: Feasibility = Feasibility.FEASIBLE
    n_min: int | None = None
    n_max: int | None = None
    placement_m: float | None = None
    links: tuple = field(default=())

    @property
    def feasible(self) -> bool:
        return self.feasibility is Feasibility.FEASIBLE


def pr_3gpp_dbm(pt_dbm: float, gt_dbi: float, gr_dbi: float, pl1_db: float, pl2_db: float, n) -> float:
    if n < 1:
        raise ValueError("n must be >= 1")
    return pt_dbm + gt_dbi + gr_dbi - pl1_db - pl2_db + 20.0 * math.log10(n)


def noise_power_dbm(cfg: NoiseConfig) -> float:
    """Thermal noise ``k T B F`` in dBm."""
    f_lin = 10.0 ** (cfg.noise_figure_db / 10.0)
    return 10.0 * math.log10(cfg.boltzmann * cfg.temperature_k * cfg.bandwidth_hz * f_lin) + 30.0


def snr_db(pr_dbm: float, cfg: NoiseConfig, strict_paper: bool = False) -> float:
    """SNR with the noise figure applied once, or twice when ``strict_paper``."""
    extra = cfg.noise_figure_db if strict_paper else 0.0
    return pr_dbm - noise_power_dbm(cfg) - extra


def shannon_rate(pr_dbm: float, cfg: NoiseConfig, strict_paper: bool = False) -> float:
    snr = 10.0 ** (snr_db(pr_dbm, cfg, strict_paper) / 10.0)
    return cfg.bandwidth_hz * math.log2(1.0 + snr)


def sigma_combined(sigma1_db: float, sigma2_db: float) -> float:
    """Std of the sum of two independent Gaussian shadow terms."""
    if sigma1_db < 0 or sigma2_db < 0:
        raise ValueError("sigmas must be >= 0")
    return math.hypot(sigma1_db, sigma2_db)


def outage_probability(
    pr_mean_dbm: float, sigma_s_db: float, threshold_dbm: float, strict_paper: bool = False
) -> float:
    """Probability that the shadowed received power is below ``threshold_dbm``.

    Gaussian cdf of the threshold around the mean power. ``strict_paper``
    evaluates the same cdf through the ``1 - erfc/2`` form.
    """
    if sigma_s_db < 0:
        raise ValueError("sigma_s_db must be >= 0")
    if sigma_s_db == 0:
        return 1.0 if threshold_dbm > pr_mean_dbm else 0.0
    z = (threshold_dbm - pr_mean_dbm) / (sigma_s_db * math.sqrt(2.0))
    if strict_paper:
        return float(1.0 - 0.5 * erfc(z))
    return float(0.5 * erfc(-z))


def outage_monte_carlo(
    pr_mean_dbm: float,
    sigma_s_db: float,
    threshold_dbm: float,
    samples: int = 1_000_000,
    seed: int | None = 0,
) -> float:
    if samples < 10_000:
        raise ValueError("samples must be >= 10^4")
    if sigma_s_db < 0:
        raise ValueError("sigma_s_db must be >= 0")
    rng = np.random.default_rng(seed)
    draws = pr_mean_dbm + sigma_s_db * rng.standard_normal(samples)
    return float(np.count_nonzero(draws < threshold_dbm)) / samples


def radius_grid(start_m: float = 10.0, stop_m: float = 1e6, per_decade: int = 200) -> np.ndarray:
    decades = math.log10(stop_m / start_m)
    points = int(round(decades * per_decade)) + 1
    return np.logspace(math.log10(start_m), math.log10(stop_m), points)


def max_coverage_radius(
    platform,
    radio,
    env,
    threshold_dbm: float = -115.0,
    outage_target: float = 0.1,
    *,
    scenario=None,
    refine_steps: int = 40,
) -> float:
    """Largest coverage radius whose outage stays at or below ``outage_target``.

    Sweeps radii from 10 m to 1000 km (200 points per decade) with the
    platform at its optimal placement and fully populated, then bisects
    inside the grid step where the constraint stops holding. Returns 0
    when no radius qualifies. ``scenario`` supplies the remaining settings
    (paradigm, channel, gas, ...); a standards/scattering scenario is
    built from ``platform``, ``radio`` and ``env`` when omitted.
    """
    from rsslink import budget

    base = budget.coverage_scenario(platform, radio, env, threshold_dbm, scenario)

    def outage_at(d: float) -> float:
        return budget.evaluate(budget.with_radius(base, d)).outage

    grid = radius_grid()
    ok = [outage_at(d) <= outage_target for d in grid]
    if not any(ok):
        return 0.0
    last = max(i for i, good in enumerate(ok) if good)
    if last == len(grid) - 1:
        return float(grid[-1])
    lo, hi = float(grid[last]), float(grid[last + 1])
    for _ in range(refine_steps):
        mid = math.sqrt(lo * hi)
        if outage_at(mid) <= outage_target:
            lo = mid
        else:
            hi = mid
    return lo
