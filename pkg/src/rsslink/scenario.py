"""Scenario documents, validation, presets and sweep CSV output.

A scenario is a JSON object. Only ``platform`` is required; everything
else falls back to built-in defaults. See
``docs/scenario.md`` for the full schema.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import asdict, dataclass, field, replace
from importlib import resources
from typing import Any, Iterable, Sequence

from rsslink.geometry import PRESETS, PlatformClass, PlatformSpec, Regime, ReflectorUnitSpec
from rsslink.metrics import LinkBudgetResult
from rsslink.reflection import Paradigm
from rsslink.standards import Environment, EnvironmentClass

SCHEMA_VERSION = 1
DEFAULT_SRSS_SCALE = 0.2
DEFAULT_LATITUDE_DEG = 45.0


class ScenarioError(ValueError):
    """Raised for any schema or consistency violation in a scenario document."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


class Channel(str, enum.Enum):
    LOG_DISTANCE = "log_distance"
    STANDARDS = "standards"


class PlacementKind(str, enum.Enum):
    OPTIMAL = "optimal"
    FIXED = "fixed"


@dataclass(frozen=True)
class Placement:
    kind: PlacementKind = PlacementKind.OPTIMAL
    tx_offset_m: float | None = None

    @classmethod
    def fixed(cls, tx_offset_m: float) -> Placement:
        return cls(PlacementKind.FIXED, float(tx_offset_m))


@dataclass(frozen=True)
class RadioConfig:
    pt_dbm: float
    gt_dbi: float
    gr_dbi: float = 0.0
    f_ghz: float = 30.0
    c1: float = 10.0
    c2: float = 10.0
    bandwidth_hz: float = 100e6
    noise_figure_db: float = 7.0
    temperature_k: float = 290.0


@dataclass(frozen=True)
class GasConfig:
    provider: str = "zero"
    path: str | None = None


@dataclass(frozen=True)
class Scenario:
    platform: PlatformSpec
    radio: RadioConfig
    env: EnvironmentClass = field(default_factory=EnvironmentClass)
    paradigm: Paradigm = Paradigm.SCATTERING
    channel: Channel = Channel.STANDARDS
    placement: Placement = field(default_factory=Placement)
    reflectors: str | int = "max"
    gas: GasConfig = field(default_factory=GasConfig)
    seed: int = 0
    path_loss_exp: float = 4.0
    ref_distance_m: float = 1.0
    tx_height_m: float = 25.0
    rx_height_m: float = 1.5
    threshold_dbm: float = -115.0
    outage_target: float = 0.1
    scintillation_override_db: float | None = None
    strict_paper: bool = False

    @property
    def unit(self) -> ReflectorUnitSpec:
        return ReflectorUnitSpec(self.radio.c1, self.radio.c2)


class SweepVariable(str, enum.Enum):
    REFLECTOR_COUNT = "reflector_count"
    FREQUENCY_GHZ = "frequency_ghz"
    RX_GAIN_DBI = "rx_gain_dbi"
    NORMALIZED_PLACEMENT = "normalized_placement"
    COVERAGE_RADIUS = "coverage_radius"
    THRESHOLD_DBM = "threshold_dbm"


@dataclass(frozen=True)
class SweepSpec:
    variable: SweepVariable
    start: float
    stop: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "variable", SweepVariable(self.variable))
        if self.points < 2:
            raise ValueError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("sweep start must be < stop")
        if self.scale not in ("linear", "log"):
            raise ValueError("sweep scale must be 'linear' or 'log'")
        if self.scale == "log" and self.start <= 0:
            raise ValueError("log sweeps need start > 0")

    def values(self) -> list[float]:
        import numpy as np

        if self.scale == "log":
            return [float(x) for x in np.logspace(math.log10(self.start), math.log10(self.stop), self.points)]
        return [float(x) for x in np.linspace(self.start, self.stop, self.points)]


# -- loading -----------------------------------------------------------------

_TOP_FIELDS = {
    "schema",
    "platform",
    "radio",
    "environment",
    "paradigm",
    "channel",
    "placement",
    "reflectors",
    "gas",
    "seed",
    "path_loss_exp",
    "ref_distance_m",
    "tx_height_m",
    "rx_height_m",
    "threshold_dbm",
    "outage_target",
    "scintillation_override_db",
    "strict_paper",
}
_REQUIRED = ("platform",)
_RADIO_FIELDS = {f for f in RadioConfig.__dataclass_fields__}


def default_radio(platform_class: PlatformClass, channel: Channel, paradigm: Paradigm) -> RadioConfig:
    """Transmit settings and unit size used when a document omits them."""
    if channel is Channel.LOG_DISTANCE:
        pt, gt = 40.0, 0.0
    elif platform_class in (PlatformClass.TERRESTRIAL, PlatformClass.UAV):
        pt, gt = 35.0, 8.0
    else:
        pt, gt = 33.0, 43.2
    scale = 10.0 if paradigm is Paradigm.SPECULAR else DEFAULT_SRSS_SCALE
    return RadioConfig(pt_dbm=pt, gt_dbi=gt, c1=scale, c2=scale)


def _enum(cls, value, field_name):
    try:
        if hasattr(cls, "parse"):
            return cls.parse(value)
        return cls(str(value).strip().lower().replace("-", "_"))
    except ValueError:
        choices = ", ".join(m.value for m in cls)
        raise ScenarioError(field_name, f"must be one of: {choices} (got {value!r})") from None


def _number(value, field_name, *, positive=False, nonneg=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(field_name, f"must be a number (got {value!r})")
    if integer and not float(value).is_integer():
        raise ScenarioError(field_name, f"must be an integer (got {value!r})")
    if not math.isfinite(value):
        raise ScenarioError(field_name, "must be finite")
    if positive and value <= 0:
        raise ScenarioError(field_name, f"must be > 0 (got {value!r})")
    if nonneg and value < 0:
        raise ScenarioError(field_name, f"must be >= 0 (got {value!r})")
    return int(value) if integer else float(value)


def _platform(raw) -> PlatformSpec:
    if isinstance(raw, str):
        return PRESETS[_enum(PlatformClass, raw, "platform")]
    if not isinstance(raw, dict):
        raise ScenarioError("platform", "must be a preset name or an object")
    allowed = {"class", "altitude_m", "coverage_radius_m", "rss_area_m2"}
    unknown = sorted(set(raw) - allowed)
    if unknown:
        raise ScenarioError(f"platform.{unknown[0]}", "unknown field")
    if "class" not in raw:
        raise ScenarioError("platform.class", "required field missing")
    cls = _enum(PlatformClass, raw["class"], "platform.class")
    base = PRESETS[cls]
    values = {
        k: _number(raw[k], f"platform.{k}", positive=True)
        for k in ("altitude_m", "coverage_radius_m", "rss_area_m2")
        if k in raw
    }
    return replace(base, **values)


def _environment(raw) -> EnvironmentClass:
    if raw is None:
        return EnvironmentClass(Environment.URBAN, DEFAULT_LATITUDE_DEG)
    if isinstance(raw, str):
        return EnvironmentClass(_enum(Environment, raw, "environment"), DEFAULT_LATITUDE_DEG)
    if not isinstance(raw, dict):
        raise ScenarioError("environment", "must be an environment name or an object")
    unknown = sorted(set(raw) - {"kind", "latitude_deg"})
    if unknown:
        raise ScenarioError(f"environment.{unknown[0]}", "unknown field")
    kind = _enum(Environment, raw.get("kind", "urban"), "environment.kind")
    lat = _number(raw.get("latitude_deg", DEFAULT_LATITUDE_DEG), "environment.latitude_deg")
    if not -90.0 <= lat <= 90.0:
        raise ScenarioError("environment.latitude_deg", "must be in [-90, 90]")
    return EnvironmentClass(kind, lat)


def _placement(raw, platform: PlatformSpec) -> Placement:
    if raw is None or raw == "optimal":
        return Placement()
    if isinstance(raw, dict) and set(raw) == {"fixed_m"}:
        r = _number(raw["fixed_m"], "placement.fixed_m", nonneg=True)
        if r > 2.0 * platform.coverage_radius_m:
            raise ScenarioError(
                "placement.fixed_m", f"must lie in [0, 2 * coverage_radius_m] = [0, {2 * platform.coverage_radius_m}]"
            )
        return Placement.fixed(r)
    raise ScenarioError("placement", "must be \"optimal\" or {\"fixed_m\": <metres>}")


def _gas(raw) -> GasConfig:
    if raw is None:
        return GasConfig()
    if isinstance(raw, str):
        raw = {"provider": raw}
    if not isinstance(raw, dict):
        raise ScenarioError("gas", "must be \"zero\" or {\"provider\": \"table\", \"path\": ...}")
    unknown = sorted(set(raw) - {"provider", "path"})
    if unknown:
        raise ScenarioError(f"gas.{unknown[0]}", "unknown field")
    provider = str(raw.get("provider", "zero")).lower()
    if provider == "zero":
        if raw.get("path") is not None:
            raise ScenarioError("gas.path", "only valid with provider \"table\"")
        return GasConfig()
    if provider == "table":
        path = raw.get("path")
        if not isinstance(path, str) or not path:
            raise ScenarioError("gas.path", "table provider needs a CSV path")
        return GasConfig("table", path)
    raise ScenarioError("gas.provider", f"must be \"zero\" or \"table\" (got {provider!r})")


def _check_unit(paradigm: Paradigm, radio: RadioConfig) -> None:
    regime = Regime.LRSS if paradigm is Paradigm.SPECULAR else Regime.SRSS
    try:
        ReflectorUnitSpec(radio.c1, radio.c2, regime)
    except ValueError as exc:
        raise ScenarioError("radio.c1", f"{paradigm.value} reflection requires {exc}") from None


def scenario_from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("document", "top level must be an object")
    missing = [k for k in _REQUIRED if k not in doc]
    if missing:
        raise ScenarioError("document", f"missing required field(s): {', '.join(missing)}")
    unknown = sorted(set(doc) - _TOP_FIELDS)
    if unknown:
        raise ScenarioError(unknown[0], "unknown field")
    if doc.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ScenarioError("schema", f"unsupported schema version {doc['schema']!r} (expected {SCHEMA_VERSION})")

    platform = _platform(doc["platform"])
    paradigm = _enum(Paradigm, doc.get("paradigm", "scattering"), "paradigm")
    channel = _enum(Channel, doc.get("channel", "standards"), "channel")
    if channel is Channel.STANDARDS and paradigm is Paradigm.SPECULAR:
        raise ScenarioError("channel", "the standards channel models cover the scattering paradigm only")

    radio_raw = doc.get("radio", {})
    if not isinstance(radio_raw, dict):
        raise ScenarioError("radio", "must be an object")
    unknown = sorted(set(radio_raw) - _RADIO_FIELDS)
    if unknown:
        raise ScenarioError(f"radio.{unknown[0]}", "unknown field")
    radio = default_radio(platform.platform_class, channel, paradigm)
    overrides = {}
    for key, value in radio_raw.items():
        positive = key in ("f_ghz", "c1", "c2", "bandwidth_hz", "temperature_k")
        overrides[key] = _number(value, f"radio.{key}", positive=positive, nonneg=key == "noise_figure_db")
    radio = replace(radio, **overrides)
    _check_unit(paradigm, radio)

    reflectors = doc.get("reflectors", "max")
    if isinstance(reflectors, str):
        if reflectors not in ("max", "min"):
            raise ScenarioError("reflectors", "must be \"max\", \"min\" or a positive integer")
        if reflectors == "min" and paradigm is not Paradigm.SPECULAR:
            raise ScenarioError("reflectors", "\"min\" is only defined for specular reflection")
    else:
        reflectors = _number(reflectors, "reflectors", positive=True, integer=True)

    alpha = _number(doc.get("path_loss_exp", 4.0), "path_loss_exp")
    if alpha < 2:
        raise ScenarioError("path_loss_exp", "must be >= 2")
    seed = _number(doc.get("seed", 0), "seed", nonneg=True, integer=True)
    target = _number(doc.get("outage_target", 0.1), "outage_target")
    if not 0.0 <= target <= 1.0:
        raise ScenarioError("outage_target", "must be in [0, 1]")
    scint = doc.get("scintillation_override_db")
    if scint is not None:
        scint = _number(scint, "scintillation_override_db", nonneg=True)
    strict = doc.get("strict_paper", False)
    if not isinstance(strict, bool):
        raise ScenarioError("strict_paper", "must be true or false")

    return Scenario(
        platform=platform,
        radio=radio,
        env=_environment(doc.get("environment")),
        paradigm=paradigm,
        channel=channel,
        placement=_placement(doc.get("placement"), platform),
        reflectors=reflectors,
        gas=_gas(doc.get("gas")),
        seed=seed,
        path_loss_exp=alpha,
        ref_distance_m=_number(doc.get("ref_distance_m", 1.0), "ref_distance_m", positive=True),
        tx_height_m=_number(doc.get("tx_height_m", 25.0), "tx_height_m", nonneg=True),
        rx_height_m=_number(doc.get("rx_height_m", 1.5), "rx_height_m", nonneg=True),
        threshold_dbm=_number(doc.get("threshold_dbm", -115.0), "threshold_dbm"),
        outage_target=target,
        scintillation_override_db=scint,
        strict_paper=strict,
    )


def load_scenario(text: str) -> Scenario:
    """Parse and validate a JSON scenario document."""
    if not text.strip():
        raise ScenarioError("document", f"empty document; missing required field(s): {', '.join(_REQUIRED)}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("document", f"invalid JSON ({exc})") from None
    return scenario_from_dict(doc)


def scenario_to_dict(s: Scenario) -> dict:
    """Canonical, fully explicit form of ``s``."""
    p = s.platform
    placement: Any = "optimal"
    if s.placement.kind is PlacementKind.FIXED:
        placement = {"fixed_m": s.placement.tx_offset_m}
    gas: dict = {"provider": s.gas.provider}
    if s.gas.path is not None:
        gas["path"] = s.gas.path
    return {
        "schema": SCHEMA_VERSION,
        "platform": {
            "class": p.platform_class.value,
            "altitude_m": p.altitude_m,
            "coverage_radius_m": p.coverage_radius_m,
            "rss_area_m2": p.rss_area_m2,
        },
        "radio": asdict(s.radio),
        "environment": {"kind": s.env.kind.value, "latitude_deg": s.env.latitude_deg},
        "paradigm": s.paradigm.value,
        "channel": s.channel.value,
        "placement": placement,
        "reflectors": s.reflectors,
        "gas": gas,
        "seed": s.seed,
        "path_loss_exp": s.path_loss_exp,
        "ref_distance_m": s.ref_distance_m,
        "tx_height_m": s.tx_height_m,
        "rx_height_m": s.rx_height_m,
        "threshold_dbm": s.threshold_dbm,
        "outage_target": s.outage_target,
        "scintillation_override_db": s.scintillation_override_db,
        "strict_paper": s.strict_paper,
    }


def dump_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"


def preset_names() -> list[str]:
    files = resources.files("rsslink.presets")
    return sorted(f.name[: -len(".json")] for f in files.iterdir() if f.name.endswith(".json"))


def preset_text(name: str) -> str:
    path = resources.files("rsslink.presets") / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"no bundled scenario named {name!r}; available: {', '.join(preset_names())}")
    return path.read_text()


def load_preset(name: str) -> Scenario:
    return load_scenario(preset_text(name))


# -- output ------------------------------------------------------------------

SWEEP_HEADER = ("x", "pr_mean_dbm", "sigma_s_db", "snr_db", "rate_bps", "outage", "n_used", "feasible")


def format_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def emit_sweep_csv(rows: Sequence[tuple[float, LinkBudgetResult]]) -> str:
    """One CSV line per ``(x, result)``, sorted by ``x``; floats written with ``repr``."""
    if not rows:
        raise ValueError("nothing to emit")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for x, r in sorted(rows, key=lambda row: row[0]):
        writer.writerow(
            [
                format_number(x),
                format_number(r.pr_mean_dbm),
                format_number(r.sigma_s_db),
                format_number(r.snr_db),
                format_number(r.rate_bps),
                format_number(r.outage),
                format_number(int(r.n_used)),
                format_number(r.feasible),
            ]
        )
    return out.getvalue()


def emit_table_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """Generic figure table; ``None`` cells are left empty."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else format_number(v) for v in row])
    return out.getvalue()
