"""rugbyswarm: a seeded rugby match simulator monitored by a drone fleet.

The match model, the six fleet behaviours, the drone power model and the
experiment harness are importable from the package root; the ``rugbyswarm``
console script wraps them for the command line.
"""

from .errors import ConfigurationError, InvariantViolation
from .game import (
    Ball,
    BehaviorProfile,
    CollisionEvent,
    GameState,
    MatchParams,
    Player,
    Team,
    apply_scoring_and_reset,
    detect_player_collisions,
    find_high_risk,
    mark_high_risk,
    setup_match,
    step_game,
)
from .geometry import FieldConfig, Rect, Vec2
from .harness import (
    MetricsRecord,
    ReplicateStats,
    ScenarioPreset,
    SimConfig,
    SweepResult,
    best_by_group,
    export_heatmap,
    export_results,
    group_label,
    run_replicates,
    run_simulation,
    scenario_presets,
    sweep,
    write_collisions_csv,
)
from .heatmap import (
    HeatmapGrid,
    build_frequency_map,
    coverage_score,
    fixed_positions,
    quantize,
)
from .power import (
    EnergyBudget,
    PowerParams,
    energy_budget,
    energy_budget_delta,
    flight_time,
    high_speed_power,
    hover_power,
    moderate_power,
    optimal_moderate_speed,
)
from .strategies import (
    AllocationPolicy,
    ClusterInfo,
    Drone,
    FleetController,
    StrategyMode,
    allocate_drones,
    count_detected,
    density_step,
    find_density_centers,
    follow_ball_step,
    follow_players_step,
    move_toward,
    random_step,
    repulsive_step,
    ring_targets,
)

__version__ = "0.1.0"
