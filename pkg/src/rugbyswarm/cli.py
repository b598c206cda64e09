"""Command-line interface: single runs, sweeps, scenario presets, heat-maps,
and power-model tables.

Precedence for every run parameter: explicit flag > config file (--config or
$RUGBYSWARM_CONFIG) > built-in default. Outputs are deterministic for a
fixed seed; timestamped output folders are opt-in.

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .errors import ConfigurationError, InvariantViolation
from .harness import (
    MAIN_GRID_DRONES,
    MAIN_GRID_RADII,
    MAIN_GRID_SPEEDS,
    SimConfig,
    SweepResult,
    export_heatmap,
    export_results,
    run_simulation,
    run_to_state,
    scenario_presets,
    sweep,
    write_collisions_csv,
)
from .power import PowerParams, flight_time, moderate_power, optimal_moderate_speed
from .strategies import AllocationPolicy, StrategyMode

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_INTERNAL = 4

CONFIG_ENV_VAR = "RUGBYSWARM_CONFIG"
STRATEGY_NAMES = [m.value for m in StrategyMode]

RUN_COLUMNS = (
    "strategy,n_drones,speed,radius,seed,ticks,rc,dc,accuracy,energy_wh,"
    "score_red,score_blue"
)


def parse_axis(text: str) -> list[float]:
    """Axis syntax: 'a-b' integer range, 'a:b:step' float range, or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"bad axis range {text!r}, expected start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ConfigurationError("axis step must be positive")
        values = []
        v = start
        while v <= stop + 1e-9:
            values.append(round(v, 10))
            v += step
        return values
    if "-" in text[1:]:  # allow leading minus sign
        lo, hi = text.split("-", 1) if not text.startswith("-") else (None, None)
        if lo is not None:
            return [float(v) for v in range(int(lo), int(hi) + 1)]
    return [float(v) for v in text.split(",") if v]


def parse_int_axis(text: str) -> list[int]:
    values = parse_axis(text)
    if any(v != int(v) for v in values):
        raise ConfigurationError(f"axis {text!r} must contain integers")
    return [int(v) for v in values]


def _load_config_file(path: str | None) -> dict:
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    return data


def _resolve(args: argparse.Namespace, filecfg: dict, key: str, default):
    value = getattr(args, key.replace("-", "_"), None)
    if value is not None:
        return value
    if key in filecfg:
        return filecfg[key]
    return default


def _sim_config(args: argparse.Namespace, filecfg: dict) -> SimConfig:
    strategy = _resolve(args, filecfg, "strategy", "follow-ball")
    allocation = _resolve(args, filecfg, "allocation", "halving")
    try:
        mode = StrategyMode(strategy)
    except ValueError:
        raise ConfigurationError(
            f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGY_NAMES)}"
        )
    try:
        policy = AllocationPolicy(allocation)
    except ValueError:
        raise ConfigurationError(f"unknown allocation policy {allocation!r}")
    return SimConfig(
        strategy=mode,
        n_drones=int(_resolve(args, filecfg, "drones", 12)),
        v_max=float(_resolve(args, filecfg, "speed", 8.0)),
        detect_radius=float(_resolve(args, filecfg, "radius", 8.0)),
        formation_radius=_resolve(args, filecfg, "formation-radius", None),
        dt=float(_resolve(args, filecfg, "dt", 0.1)),
        ticks=int(_resolve(args, filecfg, "ticks", 10_000)),
        seed=int(_resolve(args, filecfg, "seed", 0)),
        allocation=policy,
    )


def _out_dir(args: argparse.Namespace, filecfg: dict) -> Path:
    out = Path(_resolve(args, filecfg, "out", "./out"))
    if getattr(args, "timestamped", False):
        out = out / time.strftime("%Y%m%d-%H%M%S")
    out.mkdir(parents=True, exist_ok=True)
    return out


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def _cmd_run(args: argparse.Namespace) -> int:
    filecfg = _load_config_file(args.config)
    config = _sim_config(args, filecfg)
    out = _out_dir(args, filecfg)
    record = run_simulation(config)

    acc = "" if record.accuracy is None else f"{record.accuracy:.6f}"
    row = ",".join(
        [
            config.strategy.value,
            str(config.n_drones),
            format(config.v_max, "g"),
            format(config.detect_radius, "g"),
            str(config.seed),
            str(config.ticks),
            str(record.rc),
            str(record.dc),
            acc,
            f"{record.energy_wh:.6f}",
            str(record.score_red),
            str(record.score_blue),
        ]
    )
    (out / "run_metrics.csv").write_text(RUN_COLUMNS + "\n" + row + "\n")
    sidecar = {
        "config": {
            **{k: v for k, v in vars(config).items() if not isinstance(v, (StrategyMode, AllocationPolicy))},
            "strategy": config.strategy.value,
            "allocation": config.allocation.value,
        }
    }
    (out / "run_metrics.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")

    state = run_to_state(config)
    write_collisions_csv(state.collisions, out / "collisions.csv")

    print(
        f"strategy={config.strategy.value} drones={config.n_drones} "
        f"speed={config.v_max:g} radius={config.detect_radius:g} seed={config.seed} "
        f"rc={record.rc} dc={record.dc} accuracy={acc or 'n/a'} "
        f"energy_wh={record.energy_wh:.3f} score={record.score_red}-{record.score_blue}"
    )
    print(f"wrote {out / 'run_metrics.csv'}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    filecfg = _load_config_file(args.config)
    base = _sim_config(args, filecfg)
    out = _out_dir(args, filecfg)

    strategies = [
        StrategyMode(s)
        for s in (args.strategies.split(",") if args.strategies else
                  filecfg.get("strategies", STRATEGY_NAMES))
    ]
    drones = parse_int_axis(args.drones_axis) if args.drones_axis else [
        int(v) for v in filecfg.get("drone_counts", MAIN_GRID_DRONES)
    ]
    speeds = parse_axis(args.speeds) if args.speeds else [
        float(v) for v in filecfg.get("speeds", MAIN_GRID_SPEEDS)
    ]
    radii = parse_axis(args.radii) if args.radii else [
        float(v) for v in filecfg.get("radii", MAIN_GRID_RADII)
    ]
    reps = int(_resolve(args, filecfg, "reps", 30))

    cells = len(strategies) * len(drones) * len(speeds) * len(radii)
    print(f"sweeping {cells} cells x {reps} replicates ({cells * reps} runs)")
    result = sweep(base, strategies, drones, speeds, radii, reps,
                   seed_base=base.seed, workers=args.workers)
    path = export_results(result, out / "sweep.csv")
    print(f"wrote {path}")
    return EXIT_OK


def _cmd_scenario(args: argparse.Namespace) -> int:
    filecfg = _load_config_file(args.config)
    base = _sim_config(args, filecfg)
    out = _out_dir(args, filecfg)
    reps = int(_resolve(args, filecfg, "reps", 30))

    presets = scenario_presets()
    wanted = presets if args.preset == "all" else [presets[int(args.preset) - 1]]
    drones = parse_int_axis(args.drones_axis) if args.drones_axis else None
    for preset in wanted:
        counts = drones if drones is not None else list(preset.drone_counts)
        print(f"{preset.name}: radius={preset.detect_radius:g} speed={preset.v_max:g} "
              f"fleets {counts[0]}..{counts[-1]} x {reps} reps")
        result = sweep(
            base,
            strategies=[base.strategy] if args.strategies is None else [
                StrategyMode(s) for s in args.strategies.split(",")
            ],
            drone_counts=counts,
            speeds=[preset.v_max],
            radii=[preset.detect_radius],
            n_reps=reps,
            seed_base=base.seed,
            workers=args.workers,
        )
        path = export_results(result, out / f"{preset.name}.csv")
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_heatmap(args: argparse.Namespace) -> int:
    filecfg = _load_config_file(args.config)
    config = _sim_config(args, filecfg)
    out = _out_dir(args, filecfg)
    state = run_to_state(config)
    grid = export_heatmap(state.collisions, state.field, out / "heatmap")
    write_collisions_csv(state.collisions, out / "collisions.csv")
    print(f"{len(state.collisions)} collisions over {config.ticks} ticks "
          f"(grid {grid.nx}x{grid.ny}, total {grid.total})")
    print(f"wrote {out / 'heatmap.csv'} and {out / 'heatmap.pgm'}")
    return EXIT_OK


def _cmd_power(args: argparse.Namespace) -> int:
    filecfg = _load_config_file(args.config)
    out = _out_dir(args, filecfg)
    params = PowerParams(efficiency=args.efficiency)
    if args.speed_min <= 0 or args.speed_max <= args.speed_min or args.speed_step <= 0:
        raise ConfigurationError("need 0 < speed-min < speed-max and positive step")

    lines = ["v,p_moderate,flight_time_h"]
    v = args.speed_min
    while v <= args.speed_max + 1e-9:
        p = moderate_power(params, v)
        lines.append(f"{v:.3f},{p:.6f},{flight_time(params, v):.6f}")
        v += args.speed_step
    path = out / "power.csv"
    path.write_text("\n".join(lines) + "\n")

    v_opt = optimal_moderate_speed(params)
    print(
        f"optimal speed = {v_opt:.2f} m/s "
        f"(power {moderate_power(params, v_opt):.2f} W, "
        f"endurance {flight_time(params, v_opt):.1f} h)"
    )
    print(f"wrote {path}")
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--strategy", choices=STRATEGY_NAMES, default=None,
                        help="drone behaviour mode")
    parser.add_argument("--drones", type=int, default=None, help="fleet size")
    parser.add_argument("--speed", type=float, default=None, help="drone speed limit (m/s)")
    parser.add_argument("--radius", type=float, default=None, help="detection radius (m)")
    parser.add_argument("--formation-radius", type=float, default=None,
                        help="ring radius (m); defaults to the detection radius")
    parser.add_argument("--ticks", type=int, default=None, help="match length in ticks")
    parser.add_argument("--dt", type=float, default=None, help="tick duration (s)")
    parser.add_argument("--seed", type=int, default=None, help="master seed")
    parser.add_argument("--allocation", choices=[p.value for p in AllocationPolicy],
                        default=None, help="density-mode drone allocation policy")
    parser.add_argument("--config", default=None,
                        help=f"JSON config file (or ${CONFIG_ENV_VAR})")
    parser.add_argument("--out", default=None, help="output directory (default ./out)")
    parser.add_argument("--timestamped", action="store_true",
                        help="write into a timestamped subfolder")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rugbyswarm",
        description="Rugby match simulator with a drone fleet watching for "
                    "player collisions. Strategies: " + ", ".join(STRATEGY_NAMES) + ".",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one seeded match and report dc/rc")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="grid sweep over strategy/fleet/speed/radius")
    _add_common(p_sweep)
    p_sweep.add_argument("--strategies", default=None,
                         help="comma list of strategies (default: all six)")
    p_sweep.add_argument("--drones-axis", default=None,
                         help="fleet sizes, e.g. 4-20 or 4,8,12")
    p_sweep.add_argument("--speeds", default=None,
                         help="speed axis, e.g. 0.1,2.1,4.1 or 0.1:10.1:2")
    p_sweep.add_argument("--radii", default=None, help="radius axis, e.g. 3-8 or 2:15:0.5")
    p_sweep.add_argument("--reps", type=int, default=None, help="replicates per cell (default 30)")
    p_sweep.add_argument("--workers", type=int, default=1, help="parallel worker processes")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_scen = sub.add_parser("scenario", help="fixed radius/speed presets, fleet size swept")
    _add_common(p_scen)
    p_scen.add_argument("--preset", choices=["1", "2", "3", "4", "all"], default="all")
    p_scen.add_argument("--strategies", default=None,
                        help="comma list of strategies (default: the --strategy value)")
    p_scen.add_argument("--drones-axis", default=None, help="fleet sizes (default 1-35)")
    p_scen.add_argument("--reps", type=int, default=None, help="replicates per cell (default 30)")
    p_scen.add_argument("--workers", type=int, default=1)
    p_scen.set_defaults(func=_cmd_scenario)

    p_heat = sub.add_parser("heatmap", help="run a bare match and export its collision heat-map")
    _add_common(p_heat)
    p_heat.set_defaults(func=_cmd_heatmap)

    p_power = sub.add_parser("power", help="cruise power and endurance over a speed grid")
    p_power.add_argument("--speed-min", type=float, default=0.5)
    p_power.add_argument("--speed-max", type=float, default=12.0)
    p_power.add_argument("--speed-step", type=float, default=0.1)
    p_power.add_argument("--efficiency", type=float, default=1.0)
    p_power.add_argument("--config", default=None)
    p_power.add_argument("--out", default=None)
    p_power.add_argument("--timestamped", action="store_true")
    p_power.set_defaults(func=_cmd_power)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
