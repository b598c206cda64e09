"""Drone fleet behaviours: ring formations, clustering, repulsion, kinematics.

Every mode is a pure transformation of (fleet, observable game state, its
own random stream); none of them touches the match model, so swapping modes
never changes the collision log of a seeded match. Formation modes compute
target rings and drones fly towards them at bounded speed -- positions are
never teleported.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from .errors import ConfigurationError
from .game import GameState, find_high_risk
from .geometry import FieldConfig, Vec2

TARGET_REACHED_EPS = 0.5  # roam targets count as reached within this distance
_MIN_SEPARATION = 1e-9  # below this, inverse-cube repulsion is skipped


class StrategyMode(str, Enum):
    FIXED = "fixed"
    FOLLOW_BALL = "follow-ball"
    REPULSIVE = "repulsive"
    FOLLOW_PLAYERS = "follow-players"
    DENSITY = "density"
    RANDOM = "random"


class AllocationPolicy(str, Enum):
    PROPORTIONAL = "proportional"
    HALVING = "halving"


@dataclass
class Drone:
    id: int
    position: Vec2
    v_max: float
    detect_radius: float
    formation_radius: float
    follow_level: int | None = None
    follow_idx: int = 0
    target: Vec2 | None = None

    def __post_init__(self) -> None:
        if self.v_max <= 0 or self.detect_radius <= 0 or self.formation_radius <= 0:
            raise ConfigurationError("drone speed and radii must be positive")


@dataclass
class ClusterInfo:
    centroid: Vec2
    density: int
    members: list[int]
    assigned_drones: int = 0


# --------------------------------------------------------------------------
# Shared kinematics
# --------------------------------------------------------------------------


def ring_targets(center: Vec2, n: int, radius: float) -> list[Vec2]:
    """Evenly spaced ring of n points, first at angle 0, step 2*pi/n."""
    step = 2.0 * math.pi / n
    return [
        Vec2(center.x + radius * math.cos(step * i), center.y + radius * math.sin(step * i))
        for i in range(n)
    ]


def move_toward(
    drone: Drone, target: Vec2, dt: float, bounds: FieldConfig | None = None
) -> Drone:
    """Fly the drone towards target at most v_max*dt, never overshooting."""
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    dx = target.x - drone.position.x
    dy = target.y - drone.position.y
    dist = math.hypot(dx, dy)
    budget = drone.v_max * dt
    if dist <= budget:
        nx, ny = target.x, target.y
    else:
        k = budget / dist
        nx = drone.position.x + dx * k
        ny = drone.position.y + dy * k
    if bounds is not None:
        nx, ny = bounds.clamp_xy(nx, ny)
    drone.position = Vec2(nx, ny)
    return drone


# --------------------------------------------------------------------------
# Mode target computations
# --------------------------------------------------------------------------


def follow_ball_step(
    fleet: list[Drone], ball_pos: Vec2, formation_radius: float
) -> list[Vec2]:
    """Ring targets around the ball, one per drone in fleet order."""
    return ring_targets(ball_pos, len(fleet), formation_radius)


def follow_players_step(
    fleet: list[Drone],
    state: GameState,
    formation_radius: float,
    d_in: float,
    d_out: float,
) -> list[Vec2]:
    """Ring around the current high-risk player; falls back to the ball."""
    pid = find_high_risk(state, d_in, d_out)
    center = state.players[pid].position if pid is not None else state.ball.position
    return ring_targets(center, len(fleet), formation_radius)


def repulsive_step(
    fleet: list[Drone],
    ball_pos: Vec2,
    detect_radius: float,
    rng: random.Random,
    dt: float,
    bounds: FieldConfig | None = None,
) -> list[Drone]:
    """Chase the ball, then scatter away from the local centre of mass.

    Phase 1 flies each drone towards the ball; phase 2 moves drones with
    neighbours inside 2r a random distance in [0, 2r - d_mean] directly away
    from the neighbours' centre of mass. Both phases share the v_max*dt
    displacement budget so per-tick motion stays kinematically bounded.
    """
    if detect_radius <= 0:
        raise ConfigurationError("detect radius must be positive")
    near = 2.0 * detect_radius

    budgets: list[float] = []
    for d in fleet:
        before = d.position
        move_toward(d, ball_pos, dt, bounds)
        budgets.append(d.v_max * dt - before.dist(d.position))

    snapshot = [d.position for d in fleet]
    for i, d in enumerate(fleet):
        neighbors = [
            p for j, p in enumerate(snapshot) if j != i and p.dist(snapshot[i]) <= near
        ]
        if not neighbors:
            continue
        mx = sum(p.x for p in neighbors) / len(neighbors)
        my = sum(p.y for p in neighbors) / len(neighbors)
        d_mean = math.hypot(snapshot[i].x - mx, snapshot[i].y - my)
        if d_mean >= near:
            continue
        heading = math.atan2(snapshot[i].y - my, snapshot[i].x - mx)
        step = min(rng.uniform(0.0, near - d_mean), max(0.0, budgets[i]))
        nx = d.position.x + step * math.cos(heading)
        ny = d.position.y + step * math.sin(heading)
        if bounds is not None:
            nx, ny = bounds.clamp_xy(nx, ny)
        d.position = Vec2(nx, ny)
    return fleet


def find_density_centers(
    positions: list[tuple[int, Vec2]], detect_radius: float, max_centers: int = 4
) -> list[ClusterInfo]:
    """Greedy density peaks: repeatedly take the not-yet-excluded player with
    the most not-yet-excluded neighbours within the radius, then exclude that
    whole ball of players. Ties break to the lowest player id. The cluster
    centroid is the centre player's own position.
    """
    if detect_radius <= 0:
        raise ConfigurationError("detect radius must be positive")
    if max_centers < 1:
        raise ConfigurationError("max_centers must be >= 1")
    if not positions:
        return []

    positions = sorted(positions, key=lambda item: item[0])
    ids = [pid for pid, _ in positions]
    arr = np.array([[p.x, p.y] for _, p in positions])
    d2 = ((arr[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2)
    within = d2 <= detect_radius * detect_radius  # includes self on the diagonal

    alive = np.ones(len(ids), dtype=bool)
    clusters: list[ClusterInfo] = []
    while alive.any() and len(clusters) < max_centers:
        counts = (within & alive[None, :]).sum(axis=1)
        counts[~alive] = -1
        best = int(np.argmax(counts))  # first max = lowest index = lowest id order
        members_mask = within[best] & alive
        member_ids = [ids[k] for k in np.flatnonzero(members_mask)]
        clusters.append(
            ClusterInfo(
                centroid=positions[best][1],
                density=len(member_ids),
                members=member_ids,
            )
        )
        alive &= ~members_mask
    return clusters


def allocate_drones(
    clusters: list[ClusterInfo], n_drones: int, policy: AllocationPolicy
) -> list[ClusterInfo]:
    """Distribute the fleet over clusters; the counts always sum to n_drones.

    Proportional: floor(N * density/total) per cluster, leftovers dealt one
    at a time in descending-density order. Halving: every level except the
    last gets half the drones remaining at that level, the last level takes
    the rest.
    """
    if n_drones < 1:
        raise ConfigurationError("n_drones must be >= 1")
    if not clusters:
        raise ConfigurationError("need at least one cluster")
    total = sum(c.density for c in clusters)
    if total <= 0:
        raise ConfigurationError("zero total density")

    if policy is AllocationPolicy.PROPORTIONAL:
        for c in clusters:
            c.assigned_drones = (n_drones * c.density) // total
        leftover = n_drones - sum(c.assigned_drones for c in clusters)
        order = sorted(range(len(clusters)), key=lambda i: (-clusters[i].density, i))
        i = 0
        while leftover > 0:
            clusters[order[i % len(order)]].assigned_drones += 1
            leftover -= 1
            i += 1
    else:
        remaining = n_drones
        for i, c in enumerate(clusters):
            if i == len(clusters) - 1:
                c.assigned_drones = remaining
            else:
                c.assigned_drones = remaining // 2
                remaining -= c.assigned_drones
    return clusters


def _assignments_match(fleet: list[Drone], counts: list[int]) -> bool:
    seen: dict[tuple[int, int], int] = {}
    for d in fleet:
        if d.follow_level is None or not 0 <= d.follow_level < len(counts):
            return False
        if not 0 <= d.follow_idx < counts[d.follow_level]:
            return False
        key = (d.follow_level, d.follow_idx)
        seen[key] = seen.get(key, 0) + 1
    if any(v != 1 for v in seen.values()):
        return False
    per_level = [0] * len(counts)
    for d in fleet:
        per_level[d.follow_level] += 1
    return per_level == counts


def _reassign_minimal(fleet: list[Drone], counts: list[int]) -> None:
    """Adapt slot bookkeeping to a new allocation, moving as few drones as
    possible: drones already on a level keep it while slots remain."""
    keep: list[Drone] = []
    pool: list[Drone] = []
    filled = [0] * len(counts)
    for d in fleet:
        level = d.follow_level
        if level is not None and 0 <= level < len(counts) and filled[level] < counts[level]:
            d.follow_idx = filled[level]
            filled[level] += 1
            keep.append(d)
        else:
            pool.append(d)
    for d in pool:
        for level, cap in enumerate(counts):
            if filled[level] < cap:
                d.follow_level = level
                d.follow_idx = filled[level]
                filled[level] += 1
                break


def density_step(
    fleet: list[Drone],
    state: GameState,
    detect_radius: float,
    policy: AllocationPolicy = AllocationPolicy.HALVING,
) -> list[Vec2]:
    """Targets ringing the density centres; allocation per the policy.

    Drones keep their level/slot bookkeeping whenever the allocation vector
    is unchanged, so stable clusters do not churn the formation. With no
    players present every drone holds position.
    """
    positions = [(p.id, p.position) for p in state.players]
    clusters = find_density_centers(positions, detect_radius)
    if not clusters:
        return [d.position for d in fleet]
    allocate_drones(clusters, len(fleet), policy)
    counts = [c.assigned_drones for c in clusters]

    if not _assignments_match(fleet, counts):
        _reassign_minimal(fleet, counts)

    targets: list[Vec2] = []
    for d in fleet:
        cluster = clusters[d.follow_level]
        step = 2.0 * math.pi / counts[d.follow_level]
        ang = step * d.follow_idx
        targets.append(
            Vec2(
                cluster.centroid.x + detect_radius * math.cos(ang),
                cluster.centroid.y + detect_radius * math.sin(ang),
            )
        )
    return targets


def random_step(
    fleet: list[Drone],
    bounds: FieldConfig,
    d_safe: float,
    rng: random.Random,
    dt: float,
) -> list[Drone]:
    """Roam to random waypoints with inverse-cube separation between drones.

    A drone without a live target (or within TARGET_REACHED_EPS of it) draws
    a fresh uniform in-field point at least d_safe from every other drone,
    giving up after 100 attempts. Headings get a +/-10 degree perturbation;
    see Drone.v_max for the commanded speed.
    """
    if d_safe <= 0:
        raise ConfigurationError("d_safe must be positive")
    snapshot = [d.position for d in fleet]
    for i, d in enumerate(fleet):
        if d.target is None or d.position.dist(d.target) <= TARGET_REACHED_EPS:
            for _ in range(100):
                cand = Vec2(
                    rng.uniform(0.0, bounds.width_m), rng.uniform(0.0, bounds.height_m)
                )
                if all(
                    cand.dist(p) >= d_safe for j, p in enumerate(snapshot) if j != i
                ):
                    d.target = cand
                    break
            if d.target is None:
                d.target = d.position

        dx = d.target.x - d.position.x
        dy = d.target.y - d.position.y
        dist = math.hypot(dx, dy)
        if dist > 0:
            ang = math.atan2(dy, dx) + math.radians(rng.uniform(-10.0, 10.0))
            dir_x, dir_y = math.cos(ang), math.sin(ang)
        else:
            dir_x = dir_y = 0.0

        rep_x = rep_y = 0.0
        for j, p in enumerate(snapshot):
            if j == i:
                continue
            sep = snapshot[i].dist(p)
            if _MIN_SEPARATION < sep < d_safe:
                inv3 = 1.0 / (sep * sep * sep)
                rep_x += (snapshot[i].x - p.x) * inv3
                rep_y += (snapshot[i].y - p.y) * inv3

        vx = d.v_max * dir_x + rep_x
        vy = d.v_max * dir_y + rep_y
        nx, ny = bounds.clamp_xy(d.position.x + vx * dt, d.position.y + vy * dt)
        d.position = Vec2(nx, ny)
    return fleet


def count_detected(
    events: list, fleet: list[Drone], detect_radius: float
) -> list:
    """Flag each event detected iff some drone sits within the closed ball."""
    if detect_radius <= 0:
        raise ConfigurationError("detect radius must be positive")
    r2 = detect_radius * detect_radius
    for ev in events:
        ex, ey = ev.position.x, ev.position.y
        ev.detected = any(
            (d.position.x - ex) ** 2 + (d.position.y - ey) ** 2 <= r2 for d in fleet
        )
    return events


# --------------------------------------------------------------------------
# Per-tick driver
# --------------------------------------------------------------------------


class FleetController:
    """Applies one strategy mode to a fleet, one game tick at a time."""

    def __init__(
        self,
        mode: StrategyMode,
        fleet: list[Drone],
        field: FieldConfig,
        *,
        dt: float,
        detect_radius: float,
        formation_radius: float,
        d_in: float = 3.0,
        d_out: float = 15.0,
        allocation: AllocationPolicy = AllocationPolicy.HALVING,
        d_safe: float | None = None,
        rng: random.Random | None = None,
    ):
        if dt <= 0:
            raise ConfigurationError("dt must be positive")
        self.mode = mode
        self.fleet = fleet
        self.field = field
        self.dt = dt
        self.detect_radius = detect_radius
        self.formation_radius = formation_radius
        self.d_in = d_in
        self.d_out = d_out
        self.allocation = allocation
        self.d_safe = 2.0 * detect_radius if d_safe is None else d_safe
        self.rng = rng if rng is not None else random.Random(0)

    def step(self, state: GameState) -> None:
        mode = self.mode
        if mode is StrategyMode.FIXED or not self.fleet:
            return
        if mode is StrategyMode.FOLLOW_BALL:
            targets = follow_ball_step(self.fleet, state.ball.position, self.formation_radius)
        elif mode is StrategyMode.FOLLOW_PLAYERS:
            targets = follow_players_step(
                self.fleet, state, self.formation_radius, self.d_in, self.d_out
            )
        elif mode is StrategyMode.DENSITY:
            targets = density_step(self.fleet, state, self.detect_radius, self.allocation)
        elif mode is StrategyMode.REPULSIVE:
            repulsive_step(
                self.fleet, state.ball.position, self.detect_radius, self.rng, self.dt, self.field
            )
            return
        elif mode is StrategyMode.RANDOM:
            random_step(self.fleet, self.field, self.d_safe, self.rng, self.dt)
            return
        else:  # pragma: no cover
            raise ConfigurationError(f"unknown strategy mode {mode}")
        for drone, target in zip(self.fleet, targets):
            move_toward(drone, target, self.dt, self.field)
