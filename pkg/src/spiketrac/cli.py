"""Command-line front end.

One executable, four subcommands:

* ``analyze``  - reduce a trial log to a JSON report and plot-ready CSVs;
* ``crescent`` - maximize the crescent force over the shear-plane angle;
* ``design``   - grid-search a design space against the constraints;
* ``simulate`` - forward model a draft schedule into a predicted series.

All file outputs are written atomically (temp then rename) and floats
are formatted at 6 significant digits, so identical inputs and flags
produce byte-identical outputs.  Exit codes: 0 success, 2 parse or
validation failure, 3 domain error, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .design import (
    DesignConstraints,
    DesignSpace,
    GridSearchResult,
    ParameterRange,
    grid_search,
)
from .geometry import SpikeDesign
from .simulate import predict_series
from .soilmech import (
    DRY_SAND,
    MOIST_SAND,
    CriticalDepthModel,
    ForceLaw,
    SoilProperties,
    max_crescent_force,
)
from .trials import (
    DEFAULT_DEPTH_JUMP_M,
    DEFAULT_MOTION_JUMP_M,
    DerivedSeries,
    TrialLog,
    TrialLogError,
    derive_series,
    detect_landslides,
    estimate_effective_application,
    landslide_filter,
    parse_trial_log,
    stability_check,
    tractive_efficiency,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

_SOIL_PRESETS = {"preset:dry": DRY_SAND, "preset:moist": MOIST_SAND}


class ConfigError(ValueError):
    """Invalid configuration file or flag combination."""


@dataclass
class RunConfig:
    """Parsed invocation: one subcommand plus its inputs and overrides."""

    command: str
    log_path: Path | None = None
    out_path: Path | None = None
    series_dir: Path | None = None
    push_distance_m: float | None = None
    depth_threshold_m: float = DEFAULT_DEPTH_JUMP_M
    motion_threshold_m: float = DEFAULT_MOTION_JUMP_M
    depth_m: float | None = None
    width_m: float | None = None
    soil_spec: str | None = None
    law: str = "active"
    beta_min_deg: float | None = None
    beta_max_deg: float | None = None
    space_path: Path | None = None
    constraints_path: Path | None = None
    top: int | None = None
    design_path: Path | None = None
    schedule_path: Path | None = None
    k0: float = 6.0
    k1: float = 1.0


def _fmt(value: float) -> str:
    return format(value, ".6g")


def _json_ready(value):
    """Round floats to 6 significant digits; non-finite becomes null."""
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            return None
        return float(_fmt(value))
    if isinstance(value, dict):
        return {key: _json_ready(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(item) for item in value]
    return value


def _atomic_write_text(path: Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    _atomic_write_text(path, "\n".join(lines) + "\n")


def _load_json(path: Path, what: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{what} file {path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{what} file {path}: expected a JSON object")
    return data


def _check_keys(data: dict, allowed: set[str], path: Path, what: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{what} file {path}: unknown keys {', '.join(unknown)}")


def load_soil(spec: str) -> SoilProperties:
    """Soil from ``preset:dry``, ``preset:moist``, or a JSON file."""
    if spec in _SOIL_PRESETS:
        return _SOIL_PRESETS[spec]
    if spec.startswith("preset:"):
        raise ConfigError(f"unknown soil preset {spec!r}; use preset:dry or preset:moist")
    path = Path(spec)
    data = _load_json(path, "soil")
    allowed = {"bulk_density_kg_m3", "friction_angle_deg", "moisture_label", "gravity_m_s2"}
    _check_keys(data, allowed, path, "soil")
    try:
        return SoilProperties(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"soil file {path}: {exc}") from exc


def load_design(path: Path) -> SpikeDesign:
    data = _load_json(path, "design")
    allowed = {
        "radius_m",
        "hinge_height_m",
        "initial_rake_deg",
        "diameter_mm",
        "design_depth_m",
        "tip_mass_kg",
    }
    _check_keys(data, allowed, path, "design")
    try:
        return SpikeDesign(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"design file {path}: {exc}") from exc


def load_constraints(path: Path | None) -> DesignConstraints:
    if path is None:
        return DesignConstraints()
    data = _load_json(path, "constraints")
    allowed = {
        "max_thrust_deg",
        "window_low_deg",
        "window_high_deg",
        "require_lateral_at_design_depth",
    }
    _check_keys(data, allowed, path, "constraints")
    try:
        return DesignConstraints(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"constraints file {path}: {exc}") from exc


def load_space(path: Path) -> DesignSpace:
    data = _load_json(path, "design-space")
    fields = {"radius_m", "hinge_height_m", "initial_rake_deg", "diameter_mm", "design_depth_m"}
    _check_keys(data, fields, path, "design-space")
    missing = sorted(fields - set(data))
    if missing:
        raise ConfigError(f"design-space file {path}: missing keys {', '.join(missing)}")
    ranges = {}
    for name in fields:
        entry = data[name]
        if not isinstance(entry, dict) or set(entry) != {"start", "stop", "step"}:
            raise ConfigError(
                f"design-space file {path}: {name} must be an object with start, stop, step"
            )
        try:
            ranges[name] = ParameterRange(**entry)
        except ValueError as exc:
            raise ConfigError(f"design-space file {path}: {name}: {exc}") from exc
    return DesignSpace(**ranges)


def load_draft_schedule(path: Path) -> list[float]:
    """Draft schedule CSV: a ``draft_N`` header then one force per line."""
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines or lines[0].strip() != "draft_N":
        raise ConfigError(f"draft-schedule file {path}: first line must be 'draft_N'")
    drafts = []
    for number, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            value = float(raw)
        except ValueError as exc:
            raise ConfigError(f"draft-schedule file {path}: line {number}: {exc}") from exc
        if value < 0 or not math.isfinite(value):
            raise ConfigError(
                f"draft-schedule file {path}: line {number}: draft must be finite and >= 0"
            )
        drafts.append(value)
    return drafts


def _build_report(
    log: TrialLog,
    series: DerivedSeries,
    filtered: DerivedSeries,
    events: list[int],
    cfg: RunConfig,
) -> dict:
    meta = log.metadata
    vehicle = meta.vehicle()
    design = meta.spike_design()

    summary: dict = {
        "max_draft_N": None,
        "final_depth_m": None,
        "penetration_work_J": None,
        "efficiency_at_push": None,
        "stability": {"first_liftoff_step": None},
        "kappa_estimate": None,
    }
    if len(series):
        stability = stability_check(series, vehicle)
        first_liftoff = next(
            (i for i, record in enumerate(stability) if record.liftoff), None
        )
        # No liftoff column exists in the raw logs; a recorded trial implies
        # the vehicle stayed on its wheels throughout.
        observed = [False] * len(series)
        kappa = estimate_effective_application(series, design, vehicle, observed)
        summary["max_draft_N"] = max(series.draft_n)
        summary["final_depth_m"] = series.depth_m[-1]
        summary["penetration_work_J"] = series.cumulative_work_j[-1]
        summary["stability"]["first_liftoff_step"] = first_liftoff
        summary["kappa_estimate"] = kappa.kappa
        if cfg.push_distance_m is not None:
            try:
                summary["efficiency_at_push"] = tractive_efficiency(
                    series.cumulative_work_j[-1], series.draft_n[-1], cfg.push_distance_m
                )
            except ValueError:
                summary["efficiency_at_push"] = None

    report = {
        "metadata": {
            "site": meta.site,
            "diameter_mm": meta.diameter_mm,
            "radius_m": meta.radius_m,
            "hinge_m": meta.hinge_m,
            "rake0_deg": meta.rake0_deg,
            "vehicle_kg": meta.vehicle_kg,
            "pulley_mu": meta.pulley_mu,
        },
        "series": {
            "draft_N": series.draft_n,
            "depth_m": series.depth_m,
            "thrust_deg": series.thrust_deg,
            "lift_N": series.lift_n,
            "tip_x_m": series.tip_x_m,
            "cumulative_work_J": series.cumulative_work_j,
            "motion_m": series.motion_m,
            "airborne": series.airborne,
            "depth_filtered_m": filtered.depth_m,
            "thrust_filtered_deg": filtered.thrust_deg,
            "lift_filtered_N": filtered.lift_n,
        },
        "events": events,
        "summary": summary,
    }
    return _json_ready(report)


def _write_series_csvs(
    directory: Path,
    series: DerivedSeries,
    filtered: DerivedSeries,
    weight_n: float,
) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    n = len(series)

    def rows(*columns: list[float]) -> list[list[str]]:
        return [[_fmt(column[i]) for column in columns] for i in range(n)]

    _write_csv(directory / "depth_raw.csv", ["draft_N", "depth_m"], rows(series.draft_n, series.depth_m))
    _write_csv(
        directory / "depth_filtered.csv",
        ["draft_N", "depth_m"],
        rows(filtered.draft_n, filtered.depth_m),
    )
    _write_csv(
        directory / "tip_trajectory.csv",
        ["tip_x_m", "depth_m"],
        rows(series.tip_x_m, series.depth_m),
    )
    _write_csv(
        directory / "penetration_work.csv",
        ["draft_N", "cumulative_work_J"],
        rows(series.draft_n, series.cumulative_work_j),
    )
    _write_csv(
        directory / "thrust_angle.csv",
        ["draft_N", "thrust_deg"],
        rows(series.draft_n, series.thrust_deg),
    )
    _write_csv(
        directory / "lift_force.csv",
        ["draft_N", "lift_N", "weight_N"],
        rows(series.draft_n, series.lift_n, [weight_n] * n),
    )


def run_analyze(cfg: RunConfig) -> int:
    try:
        log = parse_trial_log(cfg.log_path)
    except TrialLogError as exc:
        raise TrialLogError(f"{cfg.log_path}: {exc}") from exc
    design = log.metadata.spike_design()
    rig = log.metadata.pulley_rig()
    series = derive_series(log, design, rig)
    events = detect_landslides(series, cfg.depth_threshold_m, cfg.motion_threshold_m)
    series.events = events
    filtered = landslide_filter(series, events)

    report = _build_report(log, series, filtered, events, cfg)
    _atomic_write_text(cfg.out_path, json.dumps(report, indent=2) + "\n")
    if cfg.series_dir is not None:
        _write_series_csvs(cfg.series_dir, series, filtered, log.metadata.vehicle().weight_n)
    print(f"wrote {cfg.out_path}: {len(series)} steps, {len(events)} landslide events")
    return EXIT_OK


def run_crescent(cfg: RunConfig) -> int:
    if (
        cfg.beta_min_deg is not None
        and cfg.beta_max_deg is not None
        and cfg.beta_min_deg >= cfg.beta_max_deg
    ):
        raise ConfigError(
            f"--beta-min ({cfg.beta_min_deg}) must be below --beta-max ({cfg.beta_max_deg})"
        )
    soil = load_soil(cfg.soil_spec)
    law = ForceLaw.ACTIVE_WEDGE if cfg.law == "active" else ForceLaw.PASSIVE_WEDGE
    result = max_crescent_force(
        cfg.depth_m,
        cfg.width_m,
        soil,
        law,
        beta_min_deg=cfg.beta_min_deg,
        beta_max_deg=cfg.beta_max_deg,
    )
    if cfg.out_path is not None:
        _write_csv(
            cfg.out_path,
            ["beta_deg", "force_N"],
            [[_fmt(beta), _fmt(force)] for beta, force in result.curve],
        )
    print(f"beta_star_deg={_fmt(result.beta_star_deg)} force_N={_fmt(result.force_n)}")
    return EXIT_OK


def _design_rows(result: GridSearchResult, top: int | None) -> list[list[str]]:
    ranked = result.ranked if top is None else result.ranked[:top]
    rows = []
    for item in ranked:
        d, e = item.design, item.evaluation
        rows.append(
            [
                _fmt(d.radius_m),
                _fmt(d.hinge_height_m),
                _fmt(d.initial_rake_deg),
                _fmt(d.diameter_mm),
                _fmt(d.design_depth_m),
                _fmt(e.objective),
                _fmt(e.thrust_deg),
                _fmt(e.window_deg),
            ]
        )
    return rows


def run_design(cfg: RunConfig) -> int:
    space = load_space(cfg.space_path)
    constraints = load_constraints(cfg.constraints_path)
    soil = load_soil(cfg.soil_spec)
    cd_model = CriticalDepthModel(k0=cfg.k0, k1=cfg.k1)
    result = grid_search(space, soil, constraints, cd_model)
    header = [
        "radius_m",
        "hinge_height_m",
        "initial_rake_deg",
        "diameter_mm",
        "design_depth_m",
        "objective",
        "thrust_deg",
        "window_deg",
    ]
    rows = _design_rows(result, cfg.top)
    if cfg.out_path is not None:
        _write_csv(cfg.out_path, header, rows)
    print(
        f"evaluated {result.evaluated} designs ({result.invalid} invalid grid points): "
        f"{len(result.ranked)} feasible"
    )
    if not result.ranked:
        worst = result.most_common_violation()
        if worst is not None:
            print(f"no feasible designs; most common violation: {worst}")
    elif cfg.out_path is None:
        print(",".join(header))
        for row in rows:
            print(",".join(row))
    return EXIT_OK


def run_simulate(cfg: RunConfig) -> int:
    design = load_design(cfg.design_path)
    soil = load_soil(cfg.soil_spec)
    drafts = load_draft_schedule(cfg.schedule_path)
    cd_model = CriticalDepthModel(k0=cfg.k0, k1=cfg.k1)
    steps = predict_series(design, soil, drafts, cd_model)
    header = ["draft_N", "depth_m", "regime", "sustained", "thrust_deg", "rake_deg", "lift_N"]
    rows = [
        [
            _fmt(s.draft_n),
            _fmt(s.depth_m),
            s.regime.value,
            "true" if s.sustained else "false",
            _fmt(s.thrust_deg),
            _fmt(s.rake_deg),
            _fmt(s.lift_n),
        ]
        for s in steps
    ]
    if cfg.out_path is not None:
        _write_csv(cfg.out_path, header, rows)
    if steps:
        final = steps[-1]
        print(
            f"{len(steps)} steps: final depth {_fmt(final.depth_m)} m, "
            f"regime {final.regime.value}, sustained {'yes' if final.sustained else 'no'}"
        )
    else:
        print("0 steps: empty draft schedule")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spiketrac",
        description="Interlocking-spike traction analysis on granular soil",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="reduce a trial log to a report")
    analyze.add_argument("--log", required=True, type=Path, help="trial-log CSV")
    analyze.add_argument("--out", required=True, type=Path, help="JSON report path")
    analyze.add_argument("--series", type=Path, help="directory for plot-ready CSVs")
    analyze.add_argument("--push-distance", type=float, help="push distance for efficiency (m)")
    analyze.add_argument(
        "--depth-threshold", type=float, default=DEFAULT_DEPTH_JUMP_M,
        help="landslide depth jump threshold (m)",
    )
    analyze.add_argument(
        "--motion-threshold", type=float, default=DEFAULT_MOTION_JUMP_M,
        help="landslide motion jump threshold (m)",
    )

    crescent = sub.add_parser("crescent", help="maximize the crescent force over beta")
    crescent.add_argument("--depth", required=True, type=float, help="tip depth (m)")
    crescent.add_argument("--width", required=True, type=float, help="spike width (m)")
    crescent.add_argument(
        "--soil", required=True, help="soil JSON file, preset:dry, or preset:moist"
    )
    crescent.add_argument("--law", choices=("active", "passive"), default="active")
    crescent.add_argument("--beta-min", type=float, help="scan lower bound (deg)")
    crescent.add_argument("--beta-max", type=float, help="scan upper bound (deg)")
    crescent.add_argument("--out", type=Path, help="curve CSV path")

    design = sub.add_parser("design", help="grid-search a design space")
    design.add_argument("--space", required=True, type=Path, help="design-space JSON")
    design.add_argument("--constraints", type=Path, help="constraints JSON (defaults apply)")
    design.add_argument("--soil", default="preset:dry", help="soil file or preset")
    design.add_argument("--top", type=int, help="keep only the N best designs")
    design.add_argument("--out", type=Path, help="ranked CSV path")
    design.add_argument("--k0", type=float, default=6.0, help="critical-depth aspect ratio")
    design.add_argument("--k1", type=float, default=1.0, help="critical-depth rake sensitivity")

    simulate = sub.add_parser("simulate", help="forward model a draft schedule")
    simulate.add_argument("--design", required=True, type=Path, help="design JSON")
    simulate.add_argument("--soil", required=True, help="soil file or preset")
    simulate.add_argument("--draft-schedule", required=True, type=Path, help="schedule CSV")
    simulate.add_argument("--out", type=Path, help="predicted series CSV path")
    simulate.add_argument("--k0", type=float, default=6.0, help="critical-depth aspect ratio")
    simulate.add_argument("--k1", type=float, default=1.0, help="critical-depth rake sensitivity")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    if args.command == "analyze":
        cfg.log_path = args.log
        cfg.out_path = args.out
        cfg.series_dir = args.series
        cfg.push_distance_m = args.push_distance
        cfg.depth_threshold_m = args.depth_threshold
        cfg.motion_threshold_m = args.motion_threshold
    elif args.command == "crescent":
        cfg.depth_m = args.depth
        cfg.width_m = args.width
        cfg.soil_spec = args.soil
        cfg.law = args.law
        cfg.beta_min_deg = args.beta_min
        cfg.beta_max_deg = args.beta_max
        cfg.out_path = args.out
    elif args.command == "design":
        cfg.space_path = args.space
        cfg.constraints_path = args.constraints
        cfg.soil_spec = args.soil
        cfg.top = args.top
        cfg.out_path = args.out
        cfg.k0 = args.k0
        cfg.k1 = args.k1
    elif args.command == "simulate":
        cfg.design_path = args.design
        cfg.soil_spec = args.soil
        cfg.schedule_path = args.draft_schedule
        cfg.out_path = args.out
        cfg.k0 = args.k0
        cfg.k1 = args.k1
    return cfg


_COMMANDS = {
    "analyze": run_analyze,
    "crescent": run_crescent,
    "design": run_design,
    "simulate": run_simulate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = _config_from_args(args)
    try:
        return _COMMANDS[cfg.command](cfg)
    except (TrialLogError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
