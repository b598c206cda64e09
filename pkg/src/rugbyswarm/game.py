"""Rugby match model: players, ball mechanics, scoring, collision logging.

The match advances one tick at a time under seeded streams (see rng.py) and
is fully deterministic for a given seed. Fifteen players per side, passes
must travel backwards, tries and unattended balls in the in-goal areas score.

Opposing players that come within the contact threshold produce a
CollisionEvent on the rising edge only, so a sustained tackle logs once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from .errors import ConfigurationError, InvariantViolation
from .geometry import FieldConfig, Vec2
from .rng import MatchStreams

TEAM_SIZE = 15
RUN_SPEED_RANGE = (5.5, 9.5)  # m/s
SHOOT_SPEED_RANGE = (14.0, 14.8)
PASS_SPEED_RANGE = (25.0, 25.8)


class Team(str, Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def attack_sign(self) -> int:
        """Red attacks towards +x, blue towards -x."""
        return 1 if self is Team.RED else -1

    def opponent(self) -> "Team":
        return Team.BLUE if self is Team.RED else Team.RED


@dataclass(frozen=True)
class BehaviorProfile:
    """Action probabilities per decision roll; the residual mass keeps running."""

    shoot_prob: float
    dribble_prob: float
    pass_prob_far: float

    def __post_init__(self) -> None:
        probs = (self.shoot_prob, self.dribble_prob, self.pass_prob_far)
        if any(not 0.0 <= p <= 1.0 for p in probs) or sum(probs) > 1.0:
            raise ConfigurationError(f"invalid behavior profile {probs}")


TEAM_PLAYER_PROFILE = BehaviorProfile(0.10, 0.40, 0.20)
SELFISH_PROFILE = BehaviorProfile(0.30, 0.40, 0.05)


@dataclass
class Player:
    id: int
    team: Team
    defensive: bool
    teamplayer: bool
    holding_ball: bool
    position: Vec2
    heading: float  # rad, direction of last movement
    run_speed: float
    shoot_speed: float
    pass_speed: float
    high_risk: bool = False
    lane_y: float = 0.0  # home lane for off-ball positioning

    @property
    def profile(self) -> BehaviorProfile:
        return TEAM_PLAYER_PROFILE if self.teamplayer else SELFISH_PROFILE


@dataclass
class Ball:
    position: Vec2
    owner: int | None = None
    flying: bool = False
    target: Vec2 | None = None
    speed: float = 0.0


@dataclass
class CollisionEvent:
    tick: int
    position: Vec2
    player_a: int
    player_b: int
    detected: bool = False


@dataclass
class PassRecord:
    """Release-time snapshot of an executed pass, kept for rule audits."""

    tick: int
    team: Team
    passer_id: int
    origin: Vec2
    target: Vec2


@dataclass(frozen=True)
class MatchParams:
    """Tunable constants of the match model (all lengths in metres)."""

    collision_threshold: float = 1.5  # opposing-contact range, rising-edge logged
    contest_range: float = 1.0  # loose-ball pickup range
    tackle_range: float = 1.6  # tacklers inside this reach can strip the carrier
    d_in: float = 3.0  # in-competition radius around the ball
    d_out: float = 15.0  # outer support radius around the ball
    action_period: float = 1.0  # seconds between holder decisions / jitter rolls
    tackle_prob: float = 0.4  # chance per decision roll that each tackler strips the carry
    knock_on_max: float = 4.0  # dropped balls scatter up to this far from the tackle
    shoot_range: float = 22.0  # kick allowed within this distance of the try line
    kick_scatter: float = 8.0  # kicks land up to this far off target
    engage_radius: float = 10.0  # any defender this close to the carrier closes in
    clearance_prob: float = 0.5  # chance a defender kicks clear from their own 22
    clearance_range: tuple[float, float] = (35.0, 50.0)  # clearance length
    touch_margin: float = 12.0  # clearances aim inside this strip at the touchline
    kickoff_range: tuple[float, float] = (25.0, 45.0)  # restart kick length
    kickoff_margin: float = 5.0  # restart kicks stay this far off the touchlines
    chase_radius: float = 10.0  # players this close to a loose ball converge on it
    support_depth_attack: float = 5.0  # attacking lane trails the ball by this much
    support_depth_defense: float = 15.0
    jitter_deg: float = 10.0  # heading jitter for carriers/lanes, resampled per period
    lane_compression: float = 0.5  # how far off-ball lanes shift towards the ball's y
    avoid_radius: float = 2.0  # off-ball players yield to opponents closing within this
    ruck_radius: float = 12.0  # no yielding this close to the ball: bodies commit
    formation_jitter: float = 3.0  # per-match lateral variation of the kickoff lanes

    def __post_init__(self) -> None:
        if not 0 < self.d_in < self.d_out:
            raise ConfigurationError("need 0 < d_in < d_out")
        if self.collision_threshold <= 0 or self.contest_range <= 0:
            raise ConfigurationError("contact ranges must be positive")
        if self.action_period <= 0:
            raise ConfigurationError("action period must be positive")


@dataclass
class GameState:
    tick: int
    players: list[Player]
    ball: Ball
    score: tuple[int, int]  # (red, blue)
    collisions: list[CollisionEvent]
    rng: MatchStreams
    field: FieldConfig
    params: MatchParams
    kicking_team: Team
    contact_pairs: set[tuple[int, int]] = dc_field(default_factory=set)
    jitter: list[float] = dc_field(default_factory=list)
    passes: list[PassRecord] = dc_field(default_factory=list)
    formation_offsets: list[float] = dc_field(default_factory=list)
    kickoff_pending: bool = True

    def holder(self) -> Player | None:
        if self.ball.owner is None:
            return None
        return self.players[self.ball.owner]


# --------------------------------------------------------------------------
# Setup
# --------------------------------------------------------------------------

# Role layout per team: 8 defensive players then 7 attackers; every third
# player (by team-local index) plays selfishly. All eight role/temperament
# combinations from the role taxonomy occur on both sides.
DEFENDERS_PER_TEAM = 8
ATTACKERS_PER_TEAM = TEAM_SIZE - DEFENDERS_PER_TEAM
_DEF_X_FRAC = 0.15  # defenders line up deep in their own half
_ATT_X_FRAC = 0.40  # attackers near halfway


def _formation(field: FieldConfig, team: Team) -> list[tuple[Vec2, bool]]:
    """Kickoff positions as (position, defensive) in team-local index order."""
    spots: list[tuple[Vec2, bool]] = []
    def_x = _DEF_X_FRAC * field.width_m
    att_x = _ATT_X_FRAC * field.width_m
    if team is Team.BLUE:
        def_x = field.width_m - def_x
        att_x = field.width_m - att_x
    for i in range(DEFENDERS_PER_TEAM):
        y = field.height_m * (i + 1) / (DEFENDERS_PER_TEAM + 1)
        spots.append((Vec2(def_x, y), True))
    for i in range(ATTACKERS_PER_TEAM):
        y = field.height_m * (i + 1) / (ATTACKERS_PER_TEAM + 1)
        spots.append((Vec2(att_x, y), False))
    return spots


def _designated_kicker(state: GameState, team: Team) -> Player:
    """The attacker taking the kickoff; rotates through the attacking line
    as the match score grows so restarts vary laterally."""
    candidates = sorted(
        (p for p in state.players if p.team is team and not p.defensive),
        key=lambda p: p.id,
    )
    return candidates[sum(state.score) % len(candidates)]


def setup_match(
    seed: int,
    field: FieldConfig | None = None,
    params: MatchParams | None = None,
) -> GameState:
    """Create a kickoff-ready match: 30 players placed, red kicks off.

    Player speeds are sampled once from the per-attribute ranges using the
    seeded player stream; two calls with equal seeds yield equal states.
    """
    field = field or FieldConfig()
    params = params or MatchParams()
    rng = MatchStreams(seed)

    # Each match lines up with its own small lateral twist on the base
    # formation, fixed for the whole match.
    offsets = [
        rng.players.uniform(-params.formation_jitter, params.formation_jitter)
        for _ in range(2 * TEAM_SIZE)
    ]

    players: list[Player] = []
    for team in (Team.RED, Team.BLUE):
        for pos, defensive in _formation(field, team):
            pid = len(players)
            local = pid % TEAM_SIZE
            pos = field.clamp(Vec2(pos.x, pos.y + offsets[pid]))
            players.append(
                Player(
                    id=pid,
                    team=team,
                    defensive=defensive,
                    teamplayer=(local % 3 != 2),
                    holding_ball=False,
                    position=pos,
                    heading=0.0,
                    run_speed=rng.players.uniform(*RUN_SPEED_RANGE),
                    shoot_speed=rng.players.uniform(*SHOOT_SPEED_RANGE),
                    pass_speed=rng.players.uniform(*PASS_SPEED_RANGE),
                    lane_y=pos.y,
                )
            )

    state = GameState(
        tick=0,
        players=players,
        ball=Ball(position=Vec2(0.0, 0.0)),
        score=(0, 0),
        collisions=[],
        rng=rng,
        field=field,
        params=params,
        kicking_team=Team.RED,
        jitter=[0.0] * len(players),
        formation_offsets=offsets,
    )
    kicker = _designated_kicker(state, state.kicking_team)
    kicker.holding_ball = True
    state.ball.owner = kicker.id
    state.ball.position = kicker.position
    return state


def _reset_to_kickoff(state: GameState) -> None:
    """Re-place everyone for a kickoff; speeds, roles and score carry over."""
    for team in (Team.RED, Team.BLUE):
        offset = 0 if team is Team.RED else TEAM_SIZE
        for local, (pos, _) in enumerate(_formation(state.field, team)):
            p = state.players[offset + local]
            p.position = state.field.clamp(
                Vec2(pos.x, pos.y + state.formation_offsets[p.id])
            )
            p.lane_y = p.position.y
            p.heading = 0.0
            p.holding_ball = False
            p.high_risk = False
    state.jitter = [0.0] * len(state.players)
    state.contact_pairs = set()
    state.kickoff_pending = True
    kicker = _designated_kicker(state, state.kicking_team)
    kicker.holding_ball = True
    state.ball = Ball(position=kicker.position, owner=kicker.id)


# --------------------------------------------------------------------------
# Per-tick phases
# --------------------------------------------------------------------------


def _check_structure(state: GameState) -> None:
    holders = [p.id for p in state.players if p.holding_ball]
    if len(holders) > 1:
        raise InvariantViolation(f"multiple ball holders: {holders}")
    if state.ball.owner is not None:
        if not holders or holders[0] != state.ball.owner:
            raise InvariantViolation("ball owner does not match holding player")
        if state.ball.flying:
            raise InvariantViolation("owned ball cannot be flying")
    if state.ball.flying and state.ball.target is None:
        raise InvariantViolation("flying ball has no target")


def _positions_array(state: GameState) -> np.ndarray:
    n = len(state.players)
    arr = np.empty((n, 2))
    for i, p in enumerate(state.players):
        arr[i, 0] = p.position.x
        arr[i, 1] = p.position.y
    return arr


_SCRAMBLE_BIN_M = 0.25  # contest distances are compared at this resolution


def _contest_pickup(state: GameState) -> None:
    """Nearest player within contest range takes a resting loose ball.

    Distances are binned at scramble resolution and ties are broken by
    shuffling the candidates with the ball stream before taking the
    minimum: a pile on the ball is a fair lottery, not a float-rounding or
    player-id contest.
    """
    ball = state.ball
    if ball.flying or ball.owner is not None:
        return
    limit = state.params.contest_range
    bx, by = ball.position.x, ball.position.y
    candidates = [
        p
        for p in state.players
        if math.hypot(p.position.x - bx, p.position.y - by) <= limit
    ]
    if not candidates:
        return
    state.rng.ball.shuffle(candidates)
    winner = min(
        candidates,
        key=lambda p: int(
            math.hypot(p.position.x - bx, p.position.y - by) / _SCRAMBLE_BIN_M
        ),
    )
    winner.holding_ball = True
    ball.owner = winner.id
    ball.position = winner.position
    ball.speed = 0.0
    ball.target = None


def _distance_to_try_line(state: GameState, p: Player) -> float:
    if p.team is Team.RED:
        return max(0.0, state.field.right_try_x - p.position.x)
    return max(0.0, p.position.x - state.field.left_try_x)


def _release_ball(state: GameState, holder: Player, target: Vec2, speed: float) -> None:
    holder.holding_ball = False
    state.ball.owner = None
    state.ball.flying = True
    state.ball.target = target
    state.ball.speed = speed


def _holder_decision(state: GameState) -> None:
    """Tackle check then one action roll for the carrier (cadence ticks only)."""
    holder = state.holder()
    if holder is None:
        return
    params = state.params
    hx, hy = holder.position.x, holder.position.y

    # Restarts are deep kicks into the receiving half.
    if state.kickoff_pending:
        state.kickoff_pending = False
        length = state.rng.ball.uniform(*params.kickoff_range)
        ty = state.rng.ball.uniform(
            params.kickoff_margin, state.field.height_m - params.kickoff_margin
        )
        target = state.field.clamp(Vec2(hx + length * holder.team.attack_sign, ty))
        _release_ball(state, holder, target, holder.shoot_speed)
        return

    # A contested carry can be knocked loose; every tackler in range adds
    # an independent chance to strip it.
    tacklers = sum(
        1
        for p in state.players
        if p.team is not holder.team
        and math.hypot(p.position.x - hx, p.position.y - hy) <= params.tackle_range
    )
    drop_prob = 1.0 - (1.0 - params.tackle_prob) ** tacklers
    if tacklers and state.rng.ball.random() < drop_prob:
        # Knock-on: the ball pops loose and scatters a short distance.
        holder.holding_ball = False
        ang = state.rng.ball.uniform(0.0, 2.0 * math.pi)
        dist = state.rng.ball.uniform(0.5, params.knock_on_max)
        state.ball.owner = None
        state.ball.position = state.field.clamp(
            Vec2(hx + dist * math.cos(ang), hy + dist * math.sin(ang))
        )
        state.ball.speed = 0.0
        state.ball.target = None
        return

    # A defender pinned inside their own 22 kicks for territory.
    own_try = (
        state.field.left_try_x if holder.team is Team.RED else state.field.right_try_x
    )
    in_own_22 = abs(holder.position.x - own_try) <= state.field.twenty_two_m_line
    if (
        holder.defensive
        and in_own_22
        and state.rng.ball.random() < params.clearance_prob
    ):
        # Kick for territory towards the nearer touchline.
        length = state.rng.ball.uniform(*params.clearance_range)
        if hy < state.field.height_m / 2.0:
            ty = state.rng.ball.uniform(0.0, params.touch_margin)
        else:
            ty = state.rng.ball.uniform(
                state.field.height_m - params.touch_margin, state.field.height_m
            )
        target = state.field.clamp(Vec2(hx + length * holder.team.attack_sign, ty))
        _release_ball(state, holder, target, holder.shoot_speed)
        return

    profile = holder.profile
    near_goal = _distance_to_try_line(state, holder) <= params.shoot_range
    u = state.rng.ball.random()
    if u < profile.shoot_prob:
        if near_goal:
            goal = state.field.goal_areas[1 if holder.team is Team.RED else 0]
            ang = state.rng.ball.uniform(0.0, 2.0 * math.pi)
            off = state.rng.ball.uniform(0.0, params.kick_scatter)
            target = state.field.clamp(
                Vec2(
                    goal.center().x + off * math.cos(ang),
                    holder.position.y + off * math.sin(ang),
                )
            )
            _release_ball(state, holder, target, holder.shoot_speed)
        return
    u -= profile.shoot_prob
    if u < profile.dribble_prob:
        return  # dribble: keep carrying
    u -= profile.dribble_prob
    if u < profile.pass_prob_far and not near_goal:
        sign = holder.team.attack_sign
        mates = [
            p
            for p in state.players
            if p.team is holder.team
            and p.id != holder.id
            and (p.position.x - holder.position.x) * sign < 0.0
        ]
        if mates:
            receiver = min(
                mates, key=lambda p: (p.position.dist(holder.position), p.id)
            )
            state.passes.append(
                PassRecord(
                    tick=state.tick,
                    team=holder.team,
                    passer_id=holder.id,
                    origin=holder.position,
                    target=receiver.position,
                )
            )
            _release_ball(state, holder, receiver.position, holder.pass_speed)


def _move_players(state: GameState, dt: float) -> None:
    ball = state.ball
    params = state.params
    holder_id = ball.owner
    holder_pos = state.players[holder_id].position if holder_id is not None else None
    holding_team = state.players[holder_id].team if holder_id is not None else None
    loose = ball.owner is None and not ball.flying
    bx, by = ball.position.x, ball.position.y

    # Nearest opposing player per player, for off-ball yielding.
    pos = _positions_array(state)
    red, blue = pos[:TEAM_SIZE], pos[TEAM_SIZE:]
    cross = np.hypot(red[:, None, 0] - blue[None, :, 0], red[:, None, 1] - blue[None, :, 1])
    nearest_opp = np.empty(len(state.players), dtype=np.intp)
    nearest_opp_d = np.empty(len(state.players))
    nearest_opp[:TEAM_SIZE] = cross.argmin(axis=1) + TEAM_SIZE
    nearest_opp_d[:TEAM_SIZE] = cross.min(axis=1)
    nearest_opp[TEAM_SIZE:] = cross.argmin(axis=0)
    nearest_opp_d[TEAM_SIZE:] = cross.min(axis=0)

    for p in state.players:
        px, py = p.position.x, p.position.y
        jitter = 0.0
        if p.id == holder_id:
            tx = state.field.right_try_x if p.team is Team.RED else state.field.left_try_x
            ty = py
            jitter = state.jitter[p.id]  # carriers weave
        elif ball.flying:
            # Everyone tracks the kick in the air; whoever is near the
            # landing point moves under it.
            assert ball.target is not None
            if math.hypot(px - ball.target.x, py - ball.target.y) <= params.chase_radius:
                tx, ty = ball.target.x, ball.target.y
            else:
                continue
        elif loose and math.hypot(px - bx, py - by) <= params.chase_radius:
            tx, ty = bx, by
        elif (
            holder_id is not None
            and p.team is not holding_team
            and (
                p.defensive
                or math.hypot(px - holder_pos.x, py - holder_pos.y) <= params.engage_radius
            )
        ):
            # Defenders converge from anywhere; anyone else confronts a
            # carrier that runs at them.
            tx, ty = holder_pos.x, holder_pos.y
        else:
            # Off-ball players track the play and yield to off-ball opponents
            # rather than obstructing them.
            if nearest_opp_d[p.id] <= params.avoid_radius and int(
                nearest_opp[p.id]
            ) != holder_id:
                opp = state.players[int(nearest_opp[p.id])].position
                away = math.atan2(py - opp.y, px - opp.x)
                step = p.run_speed * dt
                nx, ny = state.field.clamp_xy(
                    px + step * math.cos(away), py + step * math.sin(away)
                )
                p.position = Vec2(nx, ny)
                p.heading = away
                continue
            if holder_id is not None and p.team is not holding_team:
                # Defensive screen: fall back to halfway between the ball and
                # the line being defended; inside the 22 stand on the line.
                own_try = (
                    state.field.left_try_x
                    if p.team is Team.RED
                    else state.field.right_try_x
                )
                if abs(bx - own_try) <= state.field.twenty_two_m_line:
                    tx = own_try
                else:
                    tx = (bx + own_try) / 2.0
            else:
                # Support lanes trail the ball for backward passes.
                depth = (
                    params.support_depth_defense
                    if p.defensive
                    else params.support_depth_attack
                )
                tx = bx - depth * p.team.attack_sign
            ty = p.lane_y + params.lane_compression * (by - p.lane_y)
            jitter = state.jitter[p.id]

        dx, dy = tx - px, ty - py
        dist = math.hypot(dx, dy)
        if dist < 1e-12:
            continue
        ang = math.atan2(dy, dx) + jitter
        step = min(dist, p.run_speed * dt)
        nx, ny = state.field.clamp_xy(px + step * math.cos(ang), py + step * math.sin(ang))
        p.position = Vec2(nx, ny)
        p.heading = ang


def _update_ball(state: GameState, dt: float) -> None:
    ball = state.ball
    if ball.flying:
        assert ball.target is not None
        dx = ball.target.x - ball.position.x
        dy = ball.target.y - ball.position.y
        dist = math.hypot(dx, dy)
        step = ball.speed * dt
        if step >= dist:
            ball.position = ball.target
            ball.flying = False
            ball.target = None
            ball.speed = 0.0
        else:
            k = step / dist
            ball.position = Vec2(ball.position.x + dx * k, ball.position.y + dy * k)
    elif ball.owner is not None:
        ball.position = state.players[ball.owner].position


def detect_player_collisions(
    state: GameState, threshold: float | None = None
) -> list[CollisionEvent]:
    """Log one event per opposing pair entering the contact threshold.

    Rising-edge semantics: pairs already in contact on the previous tick are
    skipped, so a sustained tackle produces a single event. Same-team
    contacts are ignored. Events are appended to the state's log undetected.
    """
    if threshold is None:
        threshold = state.params.collision_threshold
    if threshold <= 0:
        raise ConfigurationError("collision threshold must be positive")

    pos = _positions_array(state)
    red, blue = pos[:TEAM_SIZE], pos[TEAM_SIZE:]
    d2 = (red[:, None, 0] - blue[None, :, 0]) ** 2 + (
        red[:, None, 1] - blue[None, :, 1]
    ) ** 2
    current: set[tuple[int, int]] = set()
    hits = np.argwhere(d2 <= threshold * threshold)
    events: list[CollisionEvent] = []
    for i, j in hits:
        pair = (int(i), int(j) + TEAM_SIZE)
        current.add(pair)
        if pair not in state.contact_pairs:
            a, b = state.players[pair[0]], state.players[pair[1]]
            mid = Vec2(
                (a.position.x + b.position.x) / 2.0,
                (a.position.y + b.position.y) / 2.0,
            )
            events.append(
                CollisionEvent(tick=state.tick, position=mid, player_a=pair[0], player_b=pair[1])
            )
    state.contact_pairs = current
    state.collisions.extend(events)
    return events


def find_high_risk(state: GameState, d_in: float, d_out: float) -> int | None:
    """Pick the in-competition player with the shortest ball+teammate reach.

    Returns None when no contest is active (both teams must have a player
    within ``d_in`` of the ball) or when no candidate has a teammate in the
    outer band (d_in, d_out].
    """
    if not 0 < d_in < d_out:
        raise ConfigurationError("need 0 < d_in < d_out")
    ball = state.ball.position
    dists = [p.position.dist(ball) for p in state.players]
    p_in = [p for p in state.players if dists[p.id] <= d_in]
    if not ({p.team for p in p_in} == {Team.RED, Team.BLUE}):
        return None
    p_out = [p for p in state.players if d_in < dists[p.id] <= d_out]

    best: tuple[float, int] | None = None
    for pi in p_in:
        mates = [q for q in p_out if q.team is pi.team]
        if not mates:
            continue
        nearest = min(pi.position.dist(q.position) for q in mates)
        cum = dists[pi.id] + nearest
        if best is None or (cum, pi.id) < best:
            best = (cum, pi.id)
    return best[1] if best is not None else None


def mark_high_risk(
    state: GameState, d_in: float | None = None, d_out: float | None = None
) -> int | None:
    """Refresh the high-risk flag; at most one player carries it per tick."""
    if d_in is None:
        d_in = state.params.d_in
    if d_out is None:
        d_out = state.params.d_out
    found = find_high_risk(state, d_in, d_out)
    for p in state.players:
        p.high_risk = False
    if found is not None:
        state.players[found].high_risk = True
    return found


def apply_scoring_and_reset(state: GameState) -> GameState:
    """Score a try or an unattended in-goal ball, then rebuild the kickoff.

    The kicking team alternates after every score. Without a scoring
    condition the state passes through unchanged.
    """
    red_area, blue_area = state.field.goal_areas
    scorer: Team | None = None
    holder = state.holder()
    if holder is not None:
        target_area = blue_area if holder.team is Team.RED else red_area
        if target_area.contains(holder.position):
            scorer = holder.team
    elif not state.ball.flying:
        if blue_area.contains(state.ball.position):
            scorer = Team.RED
        elif red_area.contains(state.ball.position):
            scorer = Team.BLUE

    if scorer is None:
        return state
    red, blue = state.score
    state.score = (red + 1, blue) if scorer is Team.RED else (red, blue + 1)
    state.kicking_team = state.kicking_team.opponent()
    _reset_to_kickoff(state)
    return state


def _ticks_per_action(params: MatchParams, dt: float) -> int:
    return max(1, round(params.action_period / dt))


def step_game(state: GameState, dt: float) -> GameState:
    """Advance the match by one tick; mutates and returns the same state.

    Phase order: loose-ball pickup, holder decision (on cadence ticks),
    player movement, ball flight, collision logging, high-risk marking,
    scoring/reset.
    """
    if dt <= 0:
        raise ConfigurationError("dt must be positive")
    _check_structure(state)
    params = state.params
    cadence = state.tick % _ticks_per_action(params, dt) == 0

    _contest_pickup(state)
    if cadence:
        _holder_decision(state)
        amp = math.radians(params.jitter_deg)
        for p in state.players:
            state.jitter[p.id] = state.rng.players.uniform(-amp, amp)
    _move_players(state, dt)
    _update_ball(state, dt)
    detect_player_collisions(state, params.collision_threshold)
    mark_high_risk(state, params.d_in, params.d_out)
    apply_scoring_and_reset(state)
    state.tick += 1
    return state
