"""Command line front end: ``rsslink {budget,sweep,figure,validate}``.

Exit codes: 0 success, 2 usage error, 3 scenario validation error,
4 infeasible specular configuration when ``--strict`` is given.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

from rsslink import budget, figures, geometry, metrics
from rsslink.metrics import LinkBudgetResult
from rsslink.scenario import (
    GasConfig,
    PlacementKind,
    Scenario,
    ScenarioError,
    SweepSpec,
    SweepVariable,
    emit_sweep_csv,
    load_preset,
    load_scenario,
    preset_names,
    preset_text,
)
from rsslink.standards import GasTableError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_INFEASIBLE = 4

MC_SAMPLES = 100_000


class UsageError(Exception):
    pass


# -- library entry points ----------------------------------------------------


def run_budget(s: Scenario) -> LinkBudgetResult:
    return budget.evaluate(s)


_SWEEP_APPLY = {
    SweepVariable.REFLECTOR_COUNT: lambda s, x: budget.with_reflectors(s, int(round(x))),
    SweepVariable.FREQUENCY_GHZ: budget.with_frequency,
    SweepVariable.RX_GAIN_DBI: budget.with_rx_gain,
    SweepVariable.NORMALIZED_PLACEMENT: budget.with_normalized_placement,
    SweepVariable.COVERAGE_RADIUS: budget.with_radius,
    SweepVariable.THRESHOLD_DBM: budget.with_threshold,
}


def run_sweep(s: Scenario, sweep: SweepSpec) -> str:
    """Evaluate ``s`` over the sweep grid and return the sweep CSV."""
    placement_sweeps = (SweepVariable.NORMALIZED_PLACEMENT, SweepVariable.COVERAGE_RADIUS)
    if sweep.variable in placement_sweeps and s.placement.kind is PlacementKind.FIXED:
        raise UsageError(f"a {sweep.variable.value} sweep needs \"placement\": \"optimal\" in the scenario")
    if sweep.variable is SweepVariable.NORMALIZED_PLACEMENT and not (0.0 <= sweep.start and sweep.stop <= 2.0):
        raise UsageError("normalized placement must stay within [0, 2]")
    if sweep.variable is SweepVariable.REFLECTOR_COUNT and sweep.start < 1:
        raise UsageError("reflector counts start at 1")
    apply = _SWEEP_APPLY[sweep.variable]
    xs = sweep.values()
    results = budget.parallel_map(lambda x: budget.evaluate(apply(s, x)), xs)
    return emit_sweep_csv(list(zip(xs, results)))


# -- report ------------------------------------------------------------------


def _fmt(x, unit="") -> str:
    if x is None:
        return "n/a"
    if isinstance(x, float):
        if math.isinf(x):
            return ("-inf" if x < 0 else "inf") + (f" {unit}" if unit else "")
        return f"{x:.2f}" + (f" {unit}" if unit else "")
    return f"{x}" + (f" {unit}" if unit else "")


def format_report(s: Scenario, r: LinkBudgetResult) -> str:
    p = s.platform
    lam = geometry.wavelength_m(s.radio.f_ghz)
    rows: list[tuple[str, str]] = [
        ("platform", p.platform_class.value),
        ("altitude", _fmt(p.altitude_m, "m")),
        ("coverage radius", _fmt(p.coverage_radius_m, "m")),
        ("rss area", _fmt(p.rss_area_m2, "m^2")),
        ("environment", f"{s.env.kind.value} (lat {s.env.latitude_deg:g} deg)"),
        ("paradigm", s.paradigm.value),
        ("channel", s.channel.value),
        ("frequency", _fmt(s.radio.f_ghz, "GHz")),
        ("unit size", f"{s.radio.c1:g} x {s.radio.c2:g} wavelengths"),
        ("placement r", _fmt(r.placement_m, "m") + f" (nu = {2.0 - r.placement_m / p.coverage_radius_m:.4f})"),
        ("specular limit", _fmt(geometry.specular_limit_distance(p.rss_area_m2, lam), "m")),
        ("N_min", _fmt(r.n_min)),
        ("N_max", _fmt(r.n_max)),
        ("N used", _fmt(r.n_used)),
        ("feasibility", r.feasibility.value),
    ]
    for name, link in zip(("Tx-RSS", "RSS-Rx"), r.links):
        rows += [
            (f"{name} d3D", _fmt(link.d3d_m, "m")),
            (f"{name} elevation", "n/a" if math.isnan(link.elevation_deg) else _fmt(link.elevation_deg, "deg")),
            (f"{name} P_LoS", f"{link.p_los:.4f}"),
            (f"{name} PL LoS", _fmt(link.basic_pl_los_db, "dB")),
            (f"{name} PL NLoS", _fmt(link.basic_pl_nlos_db, "dB")),
            (f"{name} clutter", _fmt(link.clutter_db, "dB")),
            (f"{name} gas", _fmt(link.gas_db, "dB") + (" (clamped)" if link.gas_clamped else "")),
            (f"{name} scintillation", _fmt(link.scintillation_db, "dB")),
            (f"{name} shadow sigma", _fmt(link.shadow_sigma_db, "dB")),
            (f"{name} mean PL", _fmt(link.mean_pl_db, "dB")),
        ]
    noise = metrics.noise_power_dbm(budget.noise_config(s.radio))
    mc = math.nan
    if math.isfinite(r.pr_mean_dbm):
        mc = metrics.outage_monte_carlo(r.pr_mean_dbm, r.sigma_s_db, s.threshold_dbm, MC_SAMPLES, s.seed)
    rows += [
        ("received power", _fmt(r.pr_mean_dbm, "dBm")),
        ("shadow sigma", _fmt(r.sigma_s_db, "dB")),
        ("noise power", _fmt(noise, "dBm")),
        ("SNR", _fmt(r.snr_db, "dB")),
        ("rate", f"{r.rate_bps:.6g} bps"),
        ("threshold", _fmt(s.threshold_dbm, "dBm")),
        ("outage", f"{r.outage:.6f}"),
        (f"outage (MC, seed {s.seed})", "n/a" if math.isnan(mc) else f"{mc:.6f}"),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


# -- argument handling -------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rsslink", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, scenario=True):
        if scenario:
            src = p.add_mutually_exclusive_group(required=True)
            src.add_argument("--scenario", type=Path, help="scenario JSON document")
            src.add_argument("--preset", help=f"bundled scenario ({', '.join(preset_names())})")
        p.add_argument("--out", type=Path, help="output file (default: stdout)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--strict-paper", action="store_true", help="double noise figure and literal outage form")
        p.add_argument("--gas-table", type=Path, help="gas attenuation CSV (frequency x path length)")

    p = sub.add_parser("budget", help="single link budget report")
    common(p)
    p.add_argument("--csv", type=Path, help="also write the result as a one-row sweep CSV")
    p.add_argument("--strict", action="store_true", help="exit 4 when N_min exceeds N_max")

    p = sub.add_parser("sweep", help="sweep one variable")
    common(p)
    p.add_argument("--variable", required=True, choices=[v.value for v in SweepVariable])
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")

    p = sub.add_parser("figure", help="reproduce a figure sweep as CSV")
    p.add_argument("figure_id", choices=figures.FIGURES)
    common(p, scenario=False)

    p = sub.add_parser("validate", help="validate scenarios (all bundled presets by default)")
    p.add_argument("scenarios", nargs="*", type=Path)
    return parser


def _load(args) -> Scenario:
    if args.scenario is not None:
        try:
            text = args.scenario.read_text()
        except OSError as exc:
            raise UsageError(f"cannot read scenario: {exc}") from None
        s = load_scenario(text)
    else:
        try:
            s = load_preset(args.preset)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    return _apply_flags(s, args)


def _apply_flags(s: Scenario, args) -> Scenario:
    if args.seed is not None:
        s = replace(s, seed=args.seed)
    if args.strict_paper:
        s = replace(s, strict_paper=True)
    if args.gas_table is not None:
        s = replace(s, gas=GasConfig("table", str(args.gas_table)))
    if s.gas.provider == "table":
        budget.load_gas_table(s.gas.path)  # surfaces table errors before any evaluation
    return s


def _overrides(args) -> dict:
    out: dict = {}
    if args.seed is not None:
        out["seed"] = args.seed
    if args.strict_paper:
        out["strict_paper"] = True
    if args.gas_table is not None:
        budget.load_gas_table(str(args.gas_table))
        out["gas"] = {"provider": "table", "path": str(args.gas_table)}
    return out


def _write(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        if args.verb == "validate":
            return _validate(args.scenarios)
        if args.verb == "figure":
            _write(args, figures.run_figure(args.figure_id, _overrides(args)))
            return EXIT_OK
        s = _load(args)
        if args.verb == "budget":
            result = run_budget(s)
            _write(args, format_report(s, result))
            if args.csv is not None:
                args.csv.write_text(emit_sweep_csv([(s.platform.coverage_radius_m, result)]))
            if args.strict and not result.feasible:
                return EXIT_INFEASIBLE
            return EXIT_OK
        try:
            spec = SweepSpec(args.variable, args.start, args.stop, args.points, args.scale)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        _write(args, run_sweep(s, spec))
        return EXIT_OK
    except UsageError as exc:
        print(f"rsslink: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioError, GasTableError) as exc:
        print(f"rsslink: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"rsslink: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _validate(paths: list[Path]) -> int:
    status = EXIT_OK
    targets = [(str(p), None) for p in paths] or [(f"preset:{n}", n) for n in preset_names()]
    for label, name in targets:
        try:
            text = preset_text(name) if name else Path(label).read_text()
            load_scenario(text)
            print(f"ok       {label}")
        except ScenarioError as exc:
            print(f"invalid  {label}: {exc}")
            status = EXIT_INVALID
        except OSError as exc:
            print(f"error    {label}: {exc}")
            status = EXIT_USAGE if status == EXIT_OK else status
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
