"""Closed-form UAV power and endurance model (hover, fast, and cruise flight).

The formulas follow the usual rotorcraft budget: hover power scales with
thrust^{3/2} over rotor outflow, level flight splits into a parasitic v^3
term and an induced 1/v term. Weight enters in kilograms exactly as the
reference airframe tables state it, so the induced coefficient carries that
unit convention rather than strict dimensional bookkeeping.

Interface units: powers in W, battery in Wh, times in hours.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError


@dataclass(frozen=True)
class PowerParams:
    """Airframe constants; defaults describe a DJI Air 3 class quadcopter."""

    efficiency: float = 1.0  # overall drivetrain factor, linear in power
    weight_kg: float = 0.720
    gravity: float = 9.81  # m/s^2
    air_density: float = 1.225  # kg/m^3 at sea level
    facing_area_m2: float = 0.032
    drag_coeff: float = 1.1
    lift_coeff: float = 1.0  # no published value for this airframe; configurable
    span_m: float = 0.28
    battery_wh: float = 62.6

    def __post_init__(self) -> None:
        values = (
            self.efficiency,
            self.weight_kg,
            self.gravity,
            self.air_density,
            self.facing_area_m2,
            self.drag_coeff,
            self.lift_coeff,
            self.span_m,
            self.battery_wh,
        )
        if any(v <= 0 for v in values):
            raise ConfigurationError("all power parameters must be positive")
        if self.efficiency > 2.0:
            raise ConfigurationError("efficiency factor outside sanity range (0, 2]")

    @property
    def cubic_coeff(self) -> float:
        """Parasitic-drag coefficient of v^3 (0.02156 for the defaults)."""
        return 0.5 * self.drag_coeff * self.facing_area_m2 * self.air_density

    @property
    def induced_coeff(self) -> float:
        """Induced-power coefficient of 1/v (about 5.4 for the defaults)."""
        return self.weight_kg**2 / (self.air_density * self.span_m**2)


def hover_power(params: PowerParams) -> float:
    """Stationary-hover power draw in W."""
    thrust = params.weight_kg * params.gravity
    return params.efficiency * thrust**1.5 / (
        2.0 * params.air_density * params.facing_area_m2
    ) ** 0.5


def high_speed_power(params: PowerParams, v: float) -> float:
    """Steady fast level flight: lift-to-drag term plus induced term."""
    if v <= 0:
        raise ConfigurationError("speed must be positive")
    drag = (params.drag_coeff / params.lift_coeff) * params.weight_kg * v
    induced = params.weight_kg**2 / (params.air_density * params.span_m**2 * v)
    return params.efficiency * (drag + induced)


def moderate_power(params: PowerParams, v: float) -> float:
    """Moderate horizontal cruise: parasitic v^3 plus induced 1/v, in W."""
    if v <= 0:
        raise ConfigurationError("speed must be positive")
    return params.efficiency * (params.cubic_coeff * v**3 + params.induced_coeff / v)


def optimal_moderate_speed(params: PowerParams) -> float:
    """Speed minimising cruise power: (B / 3A)^{1/4}; independent of efficiency."""
    return (params.induced_coeff / (3.0 * params.cubic_coeff)) ** 0.25


def flight_time(params: PowerParams, v: float) -> float:
    """Battery endurance in hours when cruising steadily at v."""
    return params.battery_wh / moderate_power(params, v)


@dataclass(frozen=True)
class EnergyBudget:
    """Split of an operating window into hover and cruise, with totals."""

    t_hover_h: float
    t_fly_h: float
    hover_w: float
    fly_w: float
    total_wh: float

    @property
    def total_time_h(self) -> float:
        return self.t_hover_h + self.t_fly_h


def energy_budget(
    params: PowerParams, t_hover_h: float, t_fly_h: float, v_fly: float
) -> EnergyBudget:
    """Total energy in Wh for a hover/cruise split of the operating time."""
    if t_hover_h < 0 or t_fly_h < 0:
        raise ConfigurationError("durations must be non-negative")
    p_hover = hover_power(params)
    p_fly = moderate_power(params, v_fly)
    return EnergyBudget(
        t_hover_h=t_hover_h,
        t_fly_h=t_fly_h,
        hover_w=p_hover,
        fly_w=p_fly,
        total_wh=p_hover * t_hover_h + p_fly * t_fly_h,
    )


def energy_budget_delta(params: PowerParams, delta_t_h: float, v_fly: float) -> float:
    """Energy change (Wh) when delta_t hours shift from cruising to hovering.

    Positive whenever hovering is the more expensive state, which is the
    cost of growing a fleet: extra coordination hover time raises the bill
    even though total operating time is unchanged.
    """
    return delta_t_h * (hover_power(params) - moderate_power(params, v_fly))
