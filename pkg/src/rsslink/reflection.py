"""Received power through an RSS under the log-distance channel model.

Closed forms for the specular (mirror-like, near-field) and scattering
(far-field, cascaded) paradigms, terrestrial and aerial, plus a coherent
per-reflector summation used to check them. Everything here works in
linear watts; convert with :func:`watts_to_dbm` only for presentation.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from rsslink.geometry import ReflectorUnitSpec


class Paradigm(str, enum.Enum):
    SPECULAR = "specular"
    SCATTERING = "scattering"


@dataclass(frozen=True)
class LogDistanceParams:
    """Transmitter/receiver constants of the log-distance model.

    ``path_loss_exp`` is the exponent alpha (twice the amplitude exponent).
    """

    tx_power_w: float
    tx_gain: float
    rx_gain: float
    wavelength_m: float
    ref_distance_m: float = 1.0
    path_loss_exp: float = 2.0

    def __post_init__(self):
        if self.tx_power_w <= 0:
            raise ValueError("tx_power_w must be > 0")
        if self.tx_gain <= 0 or self.rx_gain <= 0:
            raise ValueError("antenna gains must be > 0 (linear)")
        if self.wavelength_m <= 0:
            raise ValueError("wavelength_m must be > 0")
        if self.ref_distance_m <= 0:
            raise ValueError("ref_distance_m must be > 0")
        if self.path_loss_exp < 2:
            raise ValueError("path_loss_exp must be >= 2")

    @property
    def eirp_gain(self) -> float:
        return self.tx_power_w * self.tx_gain * self.rx_gain

    @property
    def free_space_factor(self) -> float:
        """``lambda / (4 pi)``."""
        return self.wavelength_m / (4.0 * math.pi)


@dataclass(frozen=True)
class ReflectorState:
    """One reflector unit with its distances, phases and reflection loss."""

    tx_distance_m: float
    rx_distance_m: float
    reflection_loss: float = 1.0
    incident_phase_rad: float = 0.0
    applied_phase_rad: float = 0.0
    channel_phases_rad: tuple[float, float] = field(default=(0.0, 0.0))

    def __post_init__(self):
        if not 0.0 <= self.reflection_loss <= 1.0:
            raise ValueError("reflection_loss must be in [0, 1]")
        if self.tx_distance_m <= 0 or self.rx_distance_m <= 0:
            raise ValueError("reflector distances must be > 0")


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0:
        return -math.inf
    return 10.0 * math.log10(p_w) + 30.0


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** ((p_dbm - 30.0) / 10.0)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def pr_specular_terrestrial(p: LogDistanceParams, d: float, n: int) -> float:
    """Building-mounted LRSS with the direct Tx-Rx link, separation ``2*d``.

    The direct link and the ``n`` reflected paths add coherently, hence
    the ``(1 + n)**2`` gain.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if d <= 0:
        raise ValueError("d must be > 0")
    a = p.path_loss_exp
    return (
        p.eirp_gain
        * p.free_space_factor**2
        * p.ref_distance_m ** (a - 2.0)
        * (1.0 + n) ** 2
        / (2.0 * d) ** a
    )


def pr_scattering_terrestrial(p: LogDistanceParams, d_t: float, d_r: float, n: int) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    a = p.path_loss_exp
    return (
        p.eirp_gain
        * p.free_space_factor**4
        * p.ref_distance_m ** (2.0 * a - 4.0)
        * float(n) ** 2
        / (d_t * d_r) ** a
    )


def pr_specular_aerial(p: LogDistanceParams, d_t: float, d_r: float, n: int) -> float:
    """Aerial LRSS; line of sight so the exponent is 2 regardless of ``p``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return p.eirp_gain * p.free_space_factor**2 * float(n) ** 2 / (d_t + d_r) ** 2


def pr_scattering_aerial(p: LogDistanceParams, d_sc_star: float, n: int | float) -> float:
    """Aerial SRSS given the equivalent distance product ``d_t * d_r`` (m^2)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return p.eirp_gain * p.free_space_factor**4 * float(n) ** 2 / d_sc_star**2


def pr_reflector_sum_oracle(
    p: LogDistanceParams,
    reflectors: Sequence[ReflectorState],
    mode: Paradigm | str,
    direct_link_d: float | None = None,
) -> float:
    """Coherent sum over individual reflectors, no equal-distance shortcut.

    Specular: each path contributes ``rho * exp(-j(theta + phi)) /
    (d_ti + d_ir)**gamma``; ``direct_link_d`` adds the Tx-Rx path
    ``1 / d_l**gamma``. Scattering: each path contributes ``rho *
    exp(-j(phi - theta_ti - theta_ir)) / (d_ti * d_ir)**gamma``; no
    direct link is modelled there.
    """
    mode = Paradigm(mode)
    if not reflectors and direct_link_d is None:
        raise ValueError("need at least one reflector or a direct link")
    gamma = p.path_loss_exp / 2.0
    d0 = p.ref_distance_m

    if mode is Paradigm.SPECULAR:
        total = 0j
        if direct_link_d is not None:
            total += 1.0 / direct_link_d**gamma
        for s in reflectors:
            phase = cmath.exp(-1j * (s.incident_phase_rad + s.applied_phase_rad))
            total += s.reflection_loss * phase / (s.tx_distance_m + s.rx_distance_m) ** gamma
        scale = (p.free_space_factor * d0 ** (gamma - 1.0)) ** 2
        return p.eirp_gain * scale * abs(total) ** 2

    if direct_link_d is not None:
        raise ValueError("the scattering model carries no direct-link term")
    total = 0j
    for s in reflectors:
        theta_t, theta_r = s.channel_phases_rad
        phase = cmath.exp(-1j * (s.applied_phase_rad - theta_t - theta_r))
        total += s.reflection_loss * phase / (s.tx_distance_m * s.rx_distance_m) ** gamma
    scale = (p.free_space_factor / d0) ** 4 * d0 ** (2.0 * p.path_loss_exp)
    return p.eirp_gain * scale * abs(total) ** 2


def pr_max_scattering(
    p: LogDistanceParams,
    rss_area_m2: float,
    unit: ReflectorUnitSpec,
    *,
    d_t: float | None = None,
    d_r: float | None = None,
    altitude_m: float | None = None,
    half_span_m: float | None = None,
) -> float:
    """Scattering power with the surface fully populated.

    Pass ``d_t`` and ``d_r`` for the terrestrial form (uses the exponent
    in ``p``), or ``altitude_m`` and ``half_span_m`` for an aerial
    platform at its optimal placement. Written without the wavelength:
    the ``lambda**4`` of the cascade cancels against ``N_max**2``.
    """
    base = p.eirp_gain / (4.0 * math.pi) ** 4 * (rss_area_m2 / (unit.c1 * unit.c2)) ** 2
    if d_t is not None and d_r is not None:
        a = p.path_loss_exp
        return base * p.ref_distance_m ** (2.0 * a - 4.0) / (d_t * d_r) ** a
    if altitude_m is None or half_span_m is None:
        raise ValueError("give either (d_t, d_r) or (altitude_m, half_span_m)")
    H, d = altitude_m, half_span_m
    if d <= H:
        return base / (H * H + d * d) ** 2
    return base / (2.0 * H * d) ** 2
