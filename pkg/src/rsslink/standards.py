"""3GPP-derived path-loss models for terrestrial, UAV and HAPS/LEO links.

All losses are in dB, frequencies in GHz and distances in metres unless a
name says otherwise. Mean path loss is computed with the shadow-fading
term at its zero mean; :func:`sample_shadow` draws the random part.
"""
from __future__ import annotations

import csv
import enum
import io
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np
from scipy.interpolate import RegularGridInterpolator

EARTH_RADIUS_M = 6_371_000.0


class Environment(str, enum.Enum):
    DENSE_URBAN = "dense_urban"
    URBAN = "urban"
    RURAL = "rural"

    @classmethod
    def parse(cls, value: str | Environment) -> Environment:
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("-", "_").replace(" ", "_")
        if key == "denseurban":
            key = "dense_urban"
        try:
            return cls(key)
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown environment {value!r} (expected one of: {names})") from None


@dataclass(frozen=True)
class EnvironmentClass:
    kind: Environment = Environment.URBAN
    latitude_deg: float = 45.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Environment.parse(self.kind))
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise ValueError(f"latitude must be in [-90, 90] degrees, got {self.latitude_deg!r}")


@dataclass(frozen=True)
class LosFitCoefficients:
    b1: float
    b2: float
    b3: float


@dataclass(frozen=True)
class ClutterShadow:
    cl_nlos_db: float
    sigma_los_db: float
    sigma_nlos_db: float


# HAPS/LoS-probability fit, result in percent.
LOS_FIT: dict[Environment, LosFitCoefficients] = {
    Environment.DENSE_URBAN: LosFitCoefficients(0.04235, 1.644, 27.32),
    Environment.URBAN: LosFitCoefficients(9.668, 0.547, -10.58),
    Environment.RURAL: LosFitCoefficients(-99.95, -0.5895, 104.1),
}

# Ka-band averages.
CLUTTER_SHADOW: dict[Environment, ClutterShadow] = {
    Environment.DENSE_URBAN: ClutterShadow(38.6, 1.75, 14.7),
    Environment.URBAN: ClutterShadow(38.6, 4.0, 6.0),
    Environment.RURAL: ClutterShadow(23.15, 1.15, 10.75),
}

TERRESTRIAL_SIGMA_LOS_DB = 4.0
TERRESTRIAL_SIGMA_NLOS_DB = 7.8


@dataclass(frozen=True)
class PathLossBreakdown:
    """Per-link path loss decomposition (dB).

    ``basic_pl_los_db`` / ``basic_pl_nlos_db`` hold the condition-specific
    losses that ``mean_pl_db`` averages with ``p_los``. ``shadow_sigma_db``
    is the standard deviation of the link's shadow fading, taken over the
    LoS/NLoS mixture.
    """

    mean_pl_db: float
    basic_pl_los_db: float
    basic_pl_nlos_db: float
    p_los: float
    clutter_db: float = 0.0
    gas_db: float = 0.0
    scintillation_db: float = 0.0
    shadow_sigma_db: float = 0.0
    d3d_m: float = math.nan
    elevation_deg: float = math.nan
    gas_clamped: bool = False


def mixture_sigma(p_los: float, sigma_los: float, sigma_nlos: float) -> float:
    return math.sqrt(p_los * sigma_los**2 + (1.0 - p_los) * sigma_nlos**2)


# -- terrestrial urban -------------------------------------------------------


def plos_terrestrial(d2d_m: float) -> float:
    if d2d_m < 0:
        raise ValueError("d2d_m must be >= 0")
    if d2d_m <= 18.0:
        return 1.0
    ratio = 18.0 / d2d_m
    return ratio + math.exp(-d2d_m / 63.0) * (1.0 - ratio)


def pl_terrestrial(d3d_m: float, f_ghz: float, h_x_m: float, shadow_db: float = 0.0) -> tuple[float, float]:
    """``(PL_LoS, PL_NLoS)``; the NLoS value never drops below the LoS one."""
    pl_los = 28.0 + 22.0 * math.log10(d3d_m) + 20.0 * math.log10(f_ghz) + shadow_db
    pl_nlos_raw = (
        13.54
        + 39.08 * math.log10(d3d_m)
        + 20.0 * math.log10(f_ghz)
        - 0.6 * (h_x_m - 1.5)
        + shadow_db
    )
    return pl_los, max(pl_los, pl_nlos_raw)


def terrestrial_link(d2d_m: float, d3d_m: float, f_ghz: float, h_x_m: float) -> PathLossBreakdown:
    p_los = plos_terrestrial(d2d_m)
    pl_los, pl_nlos = pl_terrestrial(d3d_m, f_ghz, h_x_m)
    return PathLossBreakdown(
        mean_pl_db=p_los * pl_los + (1.0 - p_los) * pl_nlos,
        basic_pl_los_db=pl_los,
        basic_pl_nlos_db=pl_nlos,
        p_los=p_los,
        shadow_sigma_db=mixture_sigma(p_los, TERRESTRIAL_SIGMA_LOS_DB, TERRESTRIAL_SIGMA_NLOS_DB),
        d3d_m=d3d_m,
    )


# -- UAV air-to-ground -------------------------------------------------------


def pl_uav(
    d3d_m: float,
    f_ghz: float,
    h_uav_m: float,
    env: Environment | EnvironmentClass | str,
    shadow_db: float = 0.0,
) -> float:
    """Line-of-sight UAV link loss. Dense urban uses the urban formula."""
    kind = _kind(env)
    if kind is Environment.RURAL:
        slope = max(23.9 - 1.8 * math.log10(h_uav_m), 20.0)
        return slope * math.log10(d3d_m) + 20.0 * math.log10(40.0 * math.pi * f_ghz / 3.0) + shadow_db
    return 28.0 + 22.0 * math.log10(d3d_m) + 20.0 * math.log10(f_ghz) + shadow_db


def uav_shadow_sigma(h_uav_m: float, env: Environment | EnvironmentClass | str) -> float:
    if _kind(env) is Environment.RURAL:
        return 4.2 * math.exp(-0.0046 * h_uav_m)
    return 4.64 * math.exp(-0.0066 * h_uav_m)


def uav_link(d3d_m: float, f_ghz: float, h_uav_m: float, env) -> PathLossBreakdown:
    pl = pl_uav(d3d_m, f_ghz, h_uav_m, env)
    return PathLossBreakdown(
        mean_pl_db=pl,
        basic_pl_los_db=pl,
        basic_pl_nlos_db=pl,
        p_los=1.0,
        shadow_sigma_db=uav_shadow_sigma(h_uav_m, env),
        d3d_m=d3d_m,
    )


# -- HAPS / LEO --------------------------------------------------------------


def plos_ntn(elev_deg: float, env: Environment | EnvironmentClass | str) -> float:
    if not 0.0 < elev_deg <= 90.0:
        raise ValueError(f"elevation must be in (0, 90] degrees, got {elev_deg!r}")
    c = LOS_FIT[_kind(env)]
    percent = c.b1 * elev_deg**c.b2 + c.b3
    return min(max(percent / 100.0, 0.0), 1.0)


def slant_range_ntn(h_z_m: float, elev_deg: float) -> float:
    """Ground-to-platform distance over a spherical Earth."""
    if h_z_m <= 0:
        raise ValueError("platform altitude must be > 0")
    if elev_deg == 90.0:
        return h_z_m
    s = math.sin(math.radians(elev_deg))
    re = EARTH_RADIUS_M
    return math.sqrt((re * s) ** 2 + h_z_m**2 + 2.0 * h_z_m * re) - re * s


def fspl(f_ghz: float, d3d_m: float) -> float:
    return 32.45 + 20.0 * math.log10(f_ghz) + 20.0 * math.log10(d3d_m)


def clutter_loss(env: Environment | EnvironmentClass | str, los: bool) -> float:
    if los:
        return 0.0
    return CLUTTER_SHADOW[_kind(env)].cl_nlos_db


def scintillation_loss(f_ghz: float, elev_deg: float, latitude_deg: float) -> float:
    """Ionospheric (f <= 6 GHz, |lat| <= 20) or tropospheric (f > 6 GHz) loss."""
    if not 0.0 < elev_deg <= 90.0:
        raise ValueError(f"elevation must be in (0, 90] degrees, got {elev_deg!r}")
    if f_ghz <= 6.0:
        if abs(latitude_deg) > 20.0:
            return 0.0
        peak_to_peak = 1.1 * (f_ghz / 4.0) ** -1.5
        return peak_to_peak / math.sqrt(2.0)
    return 14.7 * elev_deg**-1.136


class GasTableError(ValueError):
    pass


class GasTableRangeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class GasLookup:
    value_db: float
    clamped: bool


class GasAttenuationProvider(Protocol):
    def lookup(self, f_ghz: float, path_length_m: float) -> GasLookup: ...


class ZeroGas:
    """Ignores atmospheric absorption."""

    def lookup(self, f_ghz: float, path_length_m: float) -> GasLookup:
        return GasLookup(0.0, False)

    def __eq__(self, other):
        return isinstance(other, ZeroGas)

    def __hash__(self):
        return hash(ZeroGas)


class TableGas:
    """Bilinear lookup of gas loss over (frequency, path length).

    CSV layout: the header row holds a label cell followed by frequencies
    in GHz; every other row starts with a path length in km followed by the
    loss in dB at each frequency. Both axes must be strictly increasing.
    Queries outside the grid are clamped to its edge.
    """

    def __init__(self, freqs_ghz, paths_km, values_db, source: str | None = None):
        self.freqs_ghz = np.asarray(freqs_ghz, dtype=float)
        self.paths_km = np.asarray(paths_km, dtype=float)
        self.values_db = np.asarray(values_db, dtype=float)
        self.source = source
        for name, axis in (("frequency", self.freqs_ghz), ("path length", self.paths_km)):
            if axis.ndim != 1 or axis.size < 1:
                raise GasTableError(f"{name} axis is empty")
            if axis.size > 1 and not np.all(np.diff(axis) > 0):
                raise GasTableError(f"{name} axis must be strictly increasing")
        if self.values_db.shape != (self.paths_km.size, self.freqs_ghz.size):
            raise GasTableError(
                f"table shape {self.values_db.shape} does not match "
                f"{self.paths_km.size} path rows x {self.freqs_ghz.size} frequency columns"
            )
        if not np.all(np.isfinite(self.values_db)):
            raise GasTableError("table contains non-finite values")
        # Degenerate single-point axes are padded so the interpolator has two knots.
        f_axis, p_axis, vals = self.freqs_ghz, self.paths_km, self.values_db
        if f_axis.size == 1:
            f_axis = np.array([f_axis[0], f_axis[0] + 1.0])
            vals = np.repeat(vals, 2, axis=1)
        if p_axis.size == 1:
            p_axis = np.array([p_axis[0], p_axis[0] + 1.0])
            vals = np.repeat(vals, 2, axis=0)
        self._interp = RegularGridInterpolator((p_axis, f_axis), vals, method="linear")

    @classmethod
    def from_csv_text(cls, text: str, source: str | None = None) -> TableGas:
        rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
        if len(rows) < 2:
            raise GasTableError("gas table needs a header row and at least one data row")
        try:
            freqs = [float(c) for c in rows[0][1:]]
            paths, values = [], []
            for row in rows[1:]:
                paths.append(float(row[0]))
                values.append([float(c) for c in row[1:]])
        except ValueError as exc:
            raise GasTableError(f"non-numeric entry in gas table: {exc}") from None
        if any(len(v) != len(freqs) for v in values):
            raise GasTableError("every gas table row must have one value per frequency column")
        return cls(freqs, paths, values, source=source)

    @classmethod
    def from_csv(cls, path: str | Path) -> TableGas:
        path = Path(path)
        return cls.from_csv_text(path.read_text(), source=str(path))

    def lookup(self, f_ghz: float, path_length_m: float) -> GasLookup:
        path_km = path_length_m / 1000.0
        f_c = min(max(f_ghz, self.freqs_ghz[0]), self.freqs_ghz[-1])
        p_c = min(max(path_km, self.paths_km[0]), self.paths_km[-1])
        clamped = f_c != f_ghz or p_c != path_km
        return GasLookup(float(self._interp((p_c, f_c))), clamped)

    def __eq__(self, other):
        return (
            isinstance(other, TableGas)
            and np.array_equal(self.freqs_ghz, other.freqs_ghz)
            and np.array_equal(self.paths_km, other.paths_km)
            and np.array_equal(self.values_db, other.values_db)
        )

    def __hash__(self):
        return hash((TableGas, self.freqs_ghz.tobytes(), self.paths_km.tobytes()))


def gas_attenuation(
    provider: GasAttenuationProvider,
    f_ghz: float,
    path_length_m: float,
    elev_deg: float | None = None,
) -> float:
    """Gas absorption along a path; warns with :class:`GasTableRangeWarning` when clamped.

    ``elev_deg`` is accepted for interface symmetry and not used: the table
    is indexed by path length directly.
    """
    result = provider.lookup(f_ghz, path_length_m)
    if result.clamped:
        warnings.warn(
            f"gas table query ({f_ghz} GHz, {path_length_m / 1000.0} km) outside grid; clamped",
            GasTableRangeWarning,
            stacklevel=2,
        )
    return result.value_db


def pl_ntn_mean(
    f_ghz: float,
    elev_deg: float,
    h_z_m: float,
    env: EnvironmentClass | Environment | str,
    gas_provider: GasAttenuationProvider | None = None,
    *,
    scintillation_db: float | None = None,
    p_los: float | None = None,
) -> PathLossBreakdown:
    """Mean loss of one HAPS/LEO-to-ground link.

    ``scintillation_db`` replaces the fitted scintillation term and
    ``p_los`` forces the LoS probability; both exist for figure setups
    and checks.
    """
    env_c = env if isinstance(env, EnvironmentClass) else EnvironmentClass(Environment.parse(env))
    gas_provider = gas_provider if gas_provider is not None else ZeroGas()
    d3d = slant_range_ntn(h_z_m, elev_deg)
    free_space = fspl(f_ghz, d3d)
    lookup = gas_provider.lookup(f_ghz, d3d)
    if lookup.clamped:
        warnings.warn(
            f"gas table query ({f_ghz} GHz, {d3d / 1000.0} km) outside grid; clamped",
            GasTableRangeWarning,
            stacklevel=2,
        )
    gas = lookup.value_db
    if scintillation_db is None:
        scint = scintillation_loss(f_ghz, elev_deg, env_c.latitude_deg)
    else:
        scint = scintillation_db
    pl_los_prob = plos_ntn(elev_deg, env_c.kind) if p_los is None else p_los
    if not 0.0 <= pl_los_prob <= 1.0:
        raise ValueError("p_los must be in [0, 1]")
    table = CLUTTER_SHADOW[env_c.kind]
    pl_los = free_space + clutter_loss(env_c.kind, True) + gas + scint
    pl_nlos = free_space + clutter_loss(env_c.kind, False) + gas + scint
    return PathLossBreakdown(
        mean_pl_db=pl_los_prob * pl_los + (1.0 - pl_los_prob) * pl_nlos,
        basic_pl_los_db=pl_los,
        basic_pl_nlos_db=pl_nlos,
        p_los=pl_los_prob,
        clutter_db=(1.0 - pl_los_prob) * table.cl_nlos_db,
        gas_db=gas,
        scintillation_db=scint,
        shadow_sigma_db=mixture_sigma(pl_los_prob, table.sigma_los_db, table.sigma_nlos_db),
        d3d_m=d3d,
        elevation_deg=elev_deg,
        gas_clamped=lookup.clamped,
    )


def sample_shadow(sigma_db: float, rng_seed: int | np.random.Generator | None, size=None):
    """Zero-mean Gaussian shadow fading in dB; returns exactly 0 when ``sigma_db`` is 0."""
    if sigma_db < 0:
        raise ValueError("sigma_db must be >= 0")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) else np.random.default_rng(rng_seed)
    if sigma_db == 0:
        return 0.0 if size is None else np.zeros(size)
    draw = rng.normal(0.0, sigma_db, size)
    return float(draw) if size is None else draw


def _kind(env) -> Environment:
    if isinstance(env, EnvironmentClass):
        return env.kind
    return Environment.parse(env)
