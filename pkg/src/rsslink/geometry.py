"""Platform geometry, paradigm gating and closed-form placement.

The canonical geometry is the collinear reduction used throughout the
package: Tx at the origin, Rx at horizontal distance ``2*d``, and the
RSS-carrying platform at altitude ``H`` and horizontal offset ``r`` from
the Tx. Angles on the public surface are in degrees.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

SPEED_OF_LIGHT = 3.0e8  # m/s; keeps 30 GHz <-> 0.01 m exact

# Tolerance for snapping ratios that are integers up to rounding noise
# (e.g. 800 / (100 * 0.01**2)) before ceil/floor.
_SNAP_RTOL = 1e-9


class PlatformClass(str, enum.Enum):
    TERRESTRIAL = "terrestrial"
    UAV = "uav"
    HAPS = "haps"
    LEO = "leo"

    @property
    def is_aerial(self) -> bool:
        return self is not PlatformClass.TERRESTRIAL

    @classmethod
    def parse(cls, value: str | PlatformClass) -> PlatformClass:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown platform class {value!r} (expected one of: {names})") from None


class Regime(str, enum.Enum):
    LRSS = "lrss"
    SRSS = "srss"


@dataclass(frozen=True)
class PlatformSpec:
    """Where an RSS is mounted and how large it is.

    Attributes:
        platform_class: Terrestrial building, UAV, HAPS or LEO satellite.
        altitude_m: RSS height above ground (H_RSS).
        coverage_radius_m: Half of the Tx-Rx separation (d).
        rss_area_m2: Total surface area reserved for reflectors (A_t).
    """

    platform_class: PlatformClass
    altitude_m: float
    coverage_radius_m: float
    rss_area_m2: float

    def __post_init__(self):
        object.__setattr__(self, "platform_class", PlatformClass.parse(self.platform_class))
        for name in ("altitude_m", "coverage_radius_m", "rss_area_m2"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"PlatformSpec.{name} must be > 0, got {value!r}")


# Typical platform parameters used for every figure reproduction.
PRESETS: dict[PlatformClass, PlatformSpec] = {
    PlatformClass.TERRESTRIAL: PlatformSpec(PlatformClass.TERRESTRIAL, 5.0, 500.0, 5.0 * 10.0),
    PlatformClass.UAV: PlatformSpec(PlatformClass.UAV, 200.0, 2_000.0, 0.25 * 0.25),
    PlatformClass.HAPS: PlatformSpec(PlatformClass.HAPS, 20_000.0, 50_000.0, 40.0 * 20.0),
    PlatformClass.LEO: PlatformSpec(PlatformClass.LEO, 500_000.0, 500_000.0, 5.0 * 10.0),
}


def preset(platform_class: str | PlatformClass) -> PlatformSpec:
    return PRESETS[PlatformClass.parse(platform_class)]


@dataclass(frozen=True)
class LinkGeometry:
    """Collinear Tx / platform / Rx arrangement.

    ``tx_offset_m`` is the horizontal platform-Tx distance and must lie in
    ``[0, 2 * half_span_m]``. Terminal heights only matter for the
    standardized channel models; the log-distance closed forms use the
    altitude alone.
    """

    altitude_m: float
    half_span_m: float
    tx_offset_m: float
    tx_height_m: float = 25.0
    rx_height_m: float = 1.5

    def __post_init__(self):
        if self.altitude_m < 0 or self.half_span_m <= 0:
            raise ValueError("LinkGeometry needs altitude_m >= 0 and half_span_m > 0")
        if not 0.0 <= self.tx_offset_m <= 2.0 * self.half_span_m:
            raise ValueError(
                f"tx_offset_m={self.tx_offset_m!r} outside [0, {2.0 * self.half_span_m!r}]"
            )
        if self.tx_height_m < 0 or self.rx_height_m < 0:
            raise ValueError("terminal heights must be >= 0")

    @property
    def rx_offset_m(self) -> float:
        return 2.0 * self.half_span_m - self.tx_offset_m

    @property
    def normalized_placement(self) -> float:
        """Normalized Rx-platform horizontal distance, ``2 - r/d``."""
        return 2.0 - self.tx_offset_m / self.half_span_m


@dataclass(frozen=True)
class ReflectorUnitSpec:
    """Reflector unit footprint as multiples of the wavelength."""

    c1: float
    c2: float
    regime: Regime | None = None

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("reflector scale factors must be > 0")
        if self.regime is None:
            return
        regime = Regime(self.regime)
        object.__setattr__(self, "regime", regime)
        if regime is Regime.LRSS and not (self.c1 == 10.0 and self.c2 == 10.0):
            raise ValueError(
                "LRSS units must be 10 wavelengths on each side (c1 = c2 = 10), "
                f"got c1={self.c1!r}, c2={self.c2!r}"
            )
        if regime is Regime.SRSS and not (0.1 <= self.c1 <= 0.2 and 0.1 <= self.c2 <= 0.2):
            raise ValueError(
                "SRSS units must be between 0.1 and 0.2 wavelengths on each side, "
                f"got c1={self.c1!r}, c2={self.c2!r}"
            )

    def area_m2(self, wavelength_m: float) -> float:
        return self.c1 * self.c2 * wavelength_m**2


LRSS_UNIT = ReflectorUnitSpec(10.0, 10.0, Regime.LRSS)
SRSS_UNIT = ReflectorUnitSpec(0.1, 0.1, Regime.SRSS)


def wavelength_m(f_ghz: float) -> float:
    if f_ghz <= 0:
        raise ValueError(f"frequency must be > 0 GHz, got {f_ghz!r}")
    return SPEED_OF_LIGHT / (f_ghz * 1e9)


def endpoint_distances(geom: LinkGeometry) -> tuple[float, float]:
    """Platform-Tx and platform-Rx distances ``(d_t, d_r)``."""
    h = geom.altitude_m
    return math.hypot(h, geom.tx_offset_m), math.hypot(h, geom.rx_offset_m)


def terminal_distances(geom: LinkGeometry) -> tuple[float, float]:
    """Like :func:`endpoint_distances` but using height differences to the terminals."""
    return (
        math.hypot(geom.altitude_m - geom.tx_height_m, geom.tx_offset_m),
        math.hypot(geom.altitude_m - geom.rx_height_m, geom.rx_offset_m),
    )


def elevation_angle(altitude: float, horizontal: float) -> float:
    """Elevation of a point at ``altitude`` seen from ``horizontal`` metres away, in degrees."""
    if altitude <= 0:
        raise ValueError(f"altitude must be > 0, got {altitude!r}")
    if horizontal < 0:
        raise ValueError(f"horizontal distance must be >= 0, got {horizontal!r}")
    return math.degrees(math.atan2(altitude, horizontal))


def specular_limit_distance(rss_area_m2: float, wavelength_m: float) -> float:
    """Largest RSS-endpoint distance at which the surface still acts as a mirror."""
    if wavelength_m <= 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_m!r}")
    return 2.0 * rss_area_m2 / wavelength_m


def _snap(x: float) -> float:
    nearest = round(x)
    if abs(x - nearest) <= _SNAP_RTOL * max(1.0, abs(x)):
        return float(nearest)
    return x


def n_min_specular(max_endpoint_distance_m: float, wavelength_m: float) -> int:
    """Fewest 10-wavelength LRSS units that keep distance ``D`` inside the specular limit."""
    if wavelength_m <= 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_m!r}")
    return math.ceil(_snap(max_endpoint_distance_m / (200.0 * wavelength_m)))


def n_max_continuous(rss_area_m2: float, unit: ReflectorUnitSpec, wavelength_m: float) -> float:
    if wavelength_m <= 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength_m!r}")
    return rss_area_m2 / unit.area_m2(wavelength_m)


def n_max(rss_area_m2: float, unit: ReflectorUnitSpec, wavelength_m: float) -> int:
    """Whole reflector units that fit on ``rss_area_m2``."""
    return math.floor(_snap(n_max_continuous(rss_area_m2, unit, wavelength_m)))


def specular_hop_distance(platform: PlatformSpec) -> float:
    """Binding RSS-endpoint distance for the specular feasibility check.

    Building-mounted surfaces use the flat half-span ``d``, the same
    per-hop distance the terrestrial specular model assumes. Aerial
    platforms sit at their specular optimum ``r = d`` where both hops
    measure ``sqrt(H**2 + d**2)``.
    """
    if platform.platform_class is PlatformClass.TERRESTRIAL:
        return platform.coverage_radius_m
    geom = LinkGeometry(platform.altitude_m, platform.coverage_radius_m, platform.coverage_radius_m)
    return max(endpoint_distances(geom))


def optimal_placement_specular(H: float, d: float) -> float:
    """Tx offset minimizing ``d_t + d_r``: directly above the Tx-Rx midpoint."""
    if H <= 0 or d <= 0:
        raise ValueError("H and d must be > 0")
    return d


def optimal_placement_scattering(H: float, d: float) -> tuple[float, ...]:
    """Tx offsets minimizing ``d_t * d_r``, ascending.

    Two mirror-image optima exist when the half-span exceeds the altitude;
    otherwise the midpoint is the only minimum.
    """
    if H <= 0 or d <= 0:
        raise ValueError("H and d must be > 0")
    if d > H:
        root = math.sqrt(d * d - H * H)
        return (d - root, d + root)
    return (d,)


def equivalent_distance_scattering_opt(H: float, d: float) -> float:
    """``d_t * d_r`` at the scattering optimum, in m^2."""
    if H <= 0 or d <= 0:
        raise ValueError("H and d must be > 0")
    if d <= H:
        return H * H + d * d
    return 2.0 * H * d


def specular_distance(H: float, d: float, r: float) -> float:
    return math.hypot(H, r) + math.hypot(H, 2.0 * d - r)


def scattering_distance(H: float, d: float, r: float) -> float:
    return math.hypot(H, r) * math.hypot(H, 2.0 * d - r)
