"""Experiment harness: seeded runs, replicate statistics, parameter sweeps.

A run couples one seeded match with one drone strategy and reports the
detection ratio dc/rc (detected over real collisions). The match streams
are independent of the strategy stream, so rc is identical across
strategies at a fixed seed and accuracy differences are attributable to
the strategy alone. Cells with rc = 0 report a missing accuracy rather
than zero.
"""

from __future__ import annotations

import dataclasses
import json
import math
import statistics
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import partial
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigurationError
from .game import CollisionEvent, GameState, MatchParams, setup_match, step_game
from .geometry import FieldConfig, Vec2
from .heatmap import (
    HeatmapGrid,
    build_frequency_map,
    fixed_positions,
    write_heatmap_csv,
    write_heatmap_pgm,
)
from .power import PowerParams, hover_power
from .rng import make_stream, stream_seed
from .strategies import (
    AllocationPolicy,
    Drone,
    FleetController,
    StrategyMode,
    count_detected,
    ring_targets,
)

FLY_EPS_M = 1e-6  # displacement above which a tick counts as flying

# Sweep axes of the headline experiment grid.
MAIN_GRID_DRONES = tuple(range(4, 21))
MAIN_GRID_SPEEDS = (0.1, 2.1, 4.1, 6.1, 8.1, 10.1)
MAIN_GRID_RADII = tuple(range(3, 9))

# Fleet-size bands used to report per-group maxima.
UAV_GROUPS = ((4, 7), (7, 13), (13, 16), (16, 20))


@dataclass(frozen=True)
class SimConfig:
    """Full parameterisation of one simulation cell."""

    strategy: StrategyMode
    n_drones: int
    v_max: float
    detect_radius: float
    formation_radius: float | None = None  # None: same as detect_radius
    dt: float = 0.1
    ticks: int = 10_000
    seed: int = 0
    allocation: AllocationPolicy = AllocationPolicy.HALVING
    d_in: float = 3.0
    d_out: float = 15.0
    collision_threshold: float = 1.5
    fixed_train_ticks: int = 10_000  # burn-in length for the placement heat-map

    def __post_init__(self) -> None:
        if self.n_drones < 1:
            raise ConfigurationError("n_drones must be >= 1")
        if self.ticks < 1:
            raise ConfigurationError("ticks must be >= 1")
        if self.v_max <= 0 or self.detect_radius <= 0:
            raise ConfigurationError("speed and radius must be positive")
        if self.formation_radius is not None and self.formation_radius <= 0:
            raise ConfigurationError("formation radius must be positive")
        if self.dt <= 0:
            raise ConfigurationError("dt must be positive")
        if self.fixed_train_ticks < 1:
            raise ConfigurationError("fixed_train_ticks must be >= 1")

    @property
    def ring_radius(self) -> float:
        return self.detect_radius if self.formation_radius is None else self.formation_radius

    def match_params(self) -> MatchParams:
        return MatchParams(
            collision_threshold=self.collision_threshold,
            d_in=self.d_in,
            d_out=self.d_out,
        )


@dataclass
class MetricsRecord:
    """Per-run outcome; accuracy is None when the match logged no collisions."""

    config: SimConfig
    rc: int
    dc: int
    accuracy: float | None
    energy_wh: float
    score_red: int
    score_blue: int
    wall_ticks: int


@dataclass
class ReplicateStats:
    """Aggregate over seeds of one grid cell."""

    config: SimConfig
    n_reps: int
    seed_base: int
    rc_mean: float
    dc_mean: float
    accuracy_mean: float | None
    accuracy_std: float | None
    accuracy_min: float | None
    accuracy_max: float | None
    energy_mean_wh: float
    excluded: int  # replicates with rc = 0, left out of the accuracy stats
    error: str | None = None

    @property
    def group(self) -> str | None:
        return group_label(self.config.n_drones)


@dataclass
class SweepResult:
    rows: list[ReplicateStats]
    meta: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class ScenarioPreset:
    """A fixed (radius, speed) operating point swept over fleet sizes."""

    name: str
    detect_radius: float
    v_max: float
    drone_counts: tuple[int, ...] = tuple(range(1, 36))


def group_label(n_drones: int) -> str | None:
    """Band label for a fleet size; bands are half-open above their start."""
    for lo, hi in UAV_GROUPS:
        if (n_drones == lo and lo == UAV_GROUPS[0][0]) or lo < n_drones <= hi:
            return f"{lo}-{hi}"
    return None


# --------------------------------------------------------------------------
# Single runs
# --------------------------------------------------------------------------


def _initial_fleet(
    config: SimConfig, field: FieldConfig, fixed_spots: list[Vec2] | None = None
) -> list[Drone]:
    n = config.n_drones
    if config.strategy is StrategyMode.FIXED:
        spots = fixed_spots if fixed_spots is not None else trained_positions(config, field)
        positions = [
            field.clamp(spots[i % len(spots)]) if spots else field.center()
            for i in range(n)
        ]
    else:
        positions = [field.clamp(p) for p in ring_targets(field.center(), n, config.ring_radius)]
    return [
        Drone(
            id=i,
            position=positions[i],
            v_max=config.v_max,
            detect_radius=config.detect_radius,
            formation_radius=config.ring_radius,
        )
        for i in range(n)
    ]


def trained_positions(config: SimConfig, field: FieldConfig) -> list[Vec2]:
    """Greedy placement trained on a burn-in match from a disjoint seed stream."""
    state = setup_match(
        stream_seed(config.seed, "fixed-train"), field, config.match_params()
    )
    for _ in range(config.fixed_train_ticks):
        step_game(state, config.dt)
    points = [ev.position for ev in state.collisions]
    return fixed_positions(points, config.n_drones, config.detect_radius, bounds=field)


def run_simulation(
    config: SimConfig,
    field: FieldConfig | None = None,
    power_params: PowerParams | None = None,
    fixed_spots: list[Vec2] | None = None,
) -> MetricsRecord:
    """Execute one seeded match under one strategy and collect the metrics.

    Each tick advances the match, steps the fleet, then marks the tick's
    new collisions detected when a drone sits within the detection radius.
    Energy integrates cruise power at each drone's realised speed, or hover
    power when it did not move. ``fixed_spots`` short-circuits stationary
    placement training when the caller already trained the cell.
    """
    field = field or FieldConfig()
    power_params = power_params or PowerParams()
    state = setup_match(config.seed, field, config.match_params())
    fleet = _initial_fleet(config, field, fixed_spots)
    controller = FleetController(
        config.strategy,
        fleet,
        field,
        dt=config.dt,
        detect_radius=config.detect_radius,
        formation_radius=config.ring_radius,
        d_in=config.d_in,
        d_out=config.d_out,
        allocation=config.allocation,
        rng=make_stream(config.seed, "strategy"),
    )

    hover_w = hover_power(power_params)
    cubic = power_params.efficiency * power_params.cubic_coeff
    induced = power_params.efficiency * power_params.induced_coeff
    dt = config.dt
    energy_j = 0.0
    dc = 0

    for _ in range(config.ticks):
        seen = len(state.collisions)
        step_game(state, dt)
        prev = [(d.position.x, d.position.y) for d in fleet]
        controller.step(state)
        new_events = state.collisions[seen:]
        if new_events:
            count_detected(new_events, fleet, config.detect_radius)
            dc += sum(1 for ev in new_events if ev.detected)
        for (px, py), d in zip(prev, fleet):
            disp = math.hypot(d.position.x - px, d.position.y - py)
            if disp > FLY_EPS_M:
                v = disp / dt
                energy_j += (cubic * v**3 + induced / v) * dt
            else:
                energy_j += hover_w * dt

    rc = len(state.collisions)
    return MetricsRecord(
        config=config,
        rc=rc,
        dc=dc,
        accuracy=(dc / rc) if rc > 0 else None,
        energy_wh=energy_j / 3600.0,
        score_red=state.score[0],
        score_blue=state.score[1],
        wall_ticks=config.ticks,
    )


# --------------------------------------------------------------------------
# Replicates and sweeps
# --------------------------------------------------------------------------


def _aggregate(config: SimConfig, seed_base: int, records: list[MetricsRecord]) -> ReplicateStats:
    accs = [r.accuracy for r in records if r.accuracy is not None]
    if accs:
        mean = sum(accs) / len(accs)
        std = statistics.stdev(accs) if len(accs) >= 2 else 0.0
        amin, amax = min(accs), max(accs)
    else:
        mean = std = amin = amax = None
    return ReplicateStats(
        config=config,
        n_reps=len(records),
        seed_base=seed_base,
        rc_mean=sum(r.rc for r in records) / len(records),
        dc_mean=sum(r.dc for r in records) / len(records),
        accuracy_mean=mean,
        accuracy_std=std,
        accuracy_min=amin,
        accuracy_max=amax,
        energy_mean_wh=sum(r.energy_wh for r in records) / len(records),
        excluded=sum(1 for r in records if r.accuracy is None),
    )


def run_replicates(
    config: SimConfig, n_reps: int, seed_base: int, workers: int = 1
) -> ReplicateStats:
    """Run seeds seed_base..seed_base+n_reps-1 and aggregate the accuracies.

    Stationary placement is trained once per cell (burn-in keyed off
    seed_base's disjoint stream) and frozen across the replicates. rc = 0
    replicates are excluded from the accuracy statistics and counted in
    ``excluded``; a single replicate reports std 0 by convention.
    """
    if n_reps < 1:
        raise ConfigurationError("n_reps must be >= 1")
    spots: list[Vec2] | None = None
    if config.strategy is StrategyMode.FIXED:
        spots = trained_positions(
            dataclasses.replace(config, seed=seed_base), FieldConfig()
        )
    configs = [dataclasses.replace(config, seed=seed_base + k) for k in range(n_reps)]
    run_one = partial(run_simulation, fixed_spots=spots)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_one, configs))
    else:
        records = [run_one(c) for c in configs]
    return _aggregate(config, seed_base, records)


def sweep(
    base: SimConfig,
    strategies: Sequence[StrategyMode],
    drone_counts: Sequence[int],
    speeds: Sequence[float],
    radii: Sequence[float],
    n_reps: int,
    seed_base: int = 0,
    workers: int = 1,
) -> SweepResult:
    """Cartesian sweep of strategy x fleet size x speed x radius.

    Failing cells are recorded with their error message and the sweep
    continues. Row order follows the axes; exports re-sort lexicographically.
    """
    if not (strategies and drone_counts and speeds and radii):
        raise ConfigurationError("sweep axes must be non-empty")
    rows: list[ReplicateStats] = []
    for strat in strategies:
        for n in drone_counts:
            for v in speeds:
                for r in radii:
                    cfg = dataclasses.replace(
                        base,
                        strategy=strat,
                        n_drones=n,
                        v_max=v,
                        detect_radius=r,
                        formation_radius=None,
                    )
                    try:
                        rows.append(run_replicates(cfg, n_reps, seed_base, workers))
                    except Exception as exc:  # record, keep sweeping
                        rows.append(
                            ReplicateStats(
                                config=cfg,
                                n_reps=0,
                                seed_base=seed_base,
                                rc_mean=0.0,
                                dc_mean=0.0,
                                accuracy_mean=None,
                                accuracy_std=None,
                                accuracy_min=None,
                                accuracy_max=None,
                                energy_mean_wh=0.0,
                                excluded=0,
                                error=f"{type(exc).__name__}: {exc}",
                            )
                        )
    meta = {
        "strategies": [s.value for s in strategies],
        "drone_counts": list(drone_counts),
        "speeds": list(speeds),
        "radii": list(radii),
        "n_reps": n_reps,
        "seed_base": seed_base,
        "base_config": _config_dict(base),
    }
    return SweepResult(rows=rows, meta=meta)


def best_by_group(result: SweepResult) -> list[ReplicateStats]:
    """Best-accuracy row per (strategy, fleet-size band), mirroring the
    headline results table."""
    best: dict[tuple[str, str], ReplicateStats] = {}
    for row in result.rows:
        if row.accuracy_mean is None or row.group is None:
            continue
        key = (row.config.strategy.value, row.group)
        cur = best.get(key)
        if cur is None or row.accuracy_mean > cur.accuracy_mean:
            best[key] = row
    return [best[k] for k in sorted(best)]


def scenario_presets() -> list[ScenarioPreset]:
    """The four fixed (radius, speed) study points, fleets of 1..35 drones."""
    return [
        ScenarioPreset("scenario-1", detect_radius=8.0, v_max=8.1),
        ScenarioPreset("scenario-2", detect_radius=8.0, v_max=6.1),
        ScenarioPreset("scenario-3", detect_radius=5.0, v_max=10.1),
        ScenarioPreset("scenario-4", detect_radius=3.0, v_max=2.1),
    ]


# --------------------------------------------------------------------------
# Exports
# --------------------------------------------------------------------------

RESULT_COLUMNS = (
    "strategy,n_drones,speed,radius,reps,rc_mean,dc_mean,"
    "accuracy_mean,accuracy_std,energy_mean_wh"
)


def _config_dict(config: SimConfig) -> dict:
    d = dataclasses.asdict(config)
    d["strategy"] = config.strategy.value
    d["allocation"] = config.allocation.value
    return d


def _fmt(value: float | None, spec: str = ".6f") -> str:
    return "" if value is None else format(value, spec)


def export_results(result: SweepResult, path: str | Path) -> Path:
    """Write the sweep as CSV plus a JSON sidecar with full provenance.

    Rows are sorted on (strategy, n_drones, speed, radius) so re-exporting
    the same result is byte-identical.
    """
    path = Path(path)
    rows = sorted(
        result.rows,
        key=lambda r: (r.config.strategy.value, r.config.n_drones, r.config.v_max, r.config.detect_radius),
    )
    lines = [RESULT_COLUMNS]
    for r in rows:
        c = r.config
        lines.append(
            ",".join(
                [
                    c.strategy.value,
                    str(c.n_drones),
                    format(c.v_max, "g"),
                    format(c.detect_radius, "g"),
                    str(r.n_reps),
                    _fmt(r.rc_mean, ".3f"),
                    _fmt(r.dc_mean, ".3f"),
                    _fmt(r.accuracy_mean),
                    _fmt(r.accuracy_std),
                    _fmt(r.energy_mean_wh),
                ]
            )
        )
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n")
        sidecar = path.with_suffix(".json")
        errors = [
            {"strategy": r.config.strategy.value, "n_drones": r.config.n_drones,
             "speed": r.config.v_max, "radius": r.config.detect_radius, "error": r.error}
            for r in rows
            if r.error
        ]
        sidecar.write_text(
            json.dumps({"meta": result.meta, "errors": errors}, indent=2, sort_keys=True)
            + "\n"
        )
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
    return path


def export_heatmap(
    collisions: Iterable[CollisionEvent | Vec2],
    field: FieldConfig,
    path_base: str | Path,
) -> HeatmapGrid:
    """Build the full-field frequency grid and write CSV + PGM next to it."""
    points = [c.position if isinstance(c, CollisionEvent) else c for c in collisions]
    if not points:
        warnings.warn("exporting heat-map from an empty collision log")
    grid = build_frequency_map(points, bounds=field)
    base = Path(path_base)
    base.parent.mkdir(parents=True, exist_ok=True)
    write_heatmap_csv(grid, base.with_suffix(".csv"))
    write_heatmap_pgm(grid, base.with_suffix(".pgm"))
    return grid


def write_collisions_csv(events: Sequence[CollisionEvent], path: str | Path) -> Path:
    """CSV log ``tick,x,y,player_a,player_b,detected``."""
    path = Path(path)
    lines = ["tick,x,y,player_a,player_b,detected"]
    for ev in events:
        lines.append(
            f"{ev.tick},{ev.position.x:.6f},{ev.position.y:.6f},"
            f"{ev.player_a},{ev.player_b},{int(ev.detected)}"
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def run_to_state(config: SimConfig, field: FieldConfig | None = None) -> GameState:
    """Run the bare match (no fleet) for the configured ticks; used for
    heat-map generation where only the collision log matters."""
    field = field or FieldConfig()
    state = setup_match(config.seed, field, config.match_params())
    for _ in range(config.ticks):
        step_game(state, config.dt)
    return state
