"""2D geometry primitives and the pitch layout.

All simulation happens in metres. The legacy 50x35 display grid (one patch
= 2 m) is an I/O convention only and never enters the dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError

PATCH_SIZE_M = 2.0  # one display patch spans 2 m of pitch


@dataclass(frozen=True)
class Vec2:
    """Immutable 2D point/vector in metres."""

    x: float
    y: float

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def scaled(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle, closed on all edges."""

    x0: float
    y0: float
    x1: float
    y1: float

    def contains(self, p: Vec2) -> bool:
        return self.x0 <= p.x <= self.x1 and self.y0 <= p.y <= self.y1

    def center(self) -> Vec2:
        return Vec2((self.x0 + self.x1) / 2.0, (self.y0 + self.y1) / 2.0)


@dataclass(frozen=True)
class FieldConfig:
    """Pitch dimensions and markings.

    ``try_line_offsets`` are the depths of the left and right in-goal areas.
    ``ten_m_line`` is the offset of the dashed lines from halfway,
    ``twenty_two_m_line`` the offset of the 22s from each try line.
    ``goal_areas`` is the (red, blue) pair of defended in-goal rectangles and
    is derived from the offsets when not given explicitly.
    """

    width_m: float = 100.0
    height_m: float = 70.0
    try_line_offsets: tuple[float, float] = (5.0, 5.0)
    ten_m_line: float = 10.0
    twenty_two_m_line: float = 22.0
    goal_areas: tuple[Rect, Rect] | None = None

    def __post_init__(self) -> None:
        if not (self.width_m > 0 and self.height_m > 0):
            raise ConfigurationError("field dimensions must be positive")
        left, right = self.try_line_offsets
        if not (0 < left < self.width_m / 2 and 0 < right < self.width_m / 2):
            raise ConfigurationError("try line offsets must lie inside each half")
        for x in self.marked_line_xs():
            if not 0 <= x <= self.width_m:
                raise ConfigurationError(f"marked line at x={x} outside the field")
        if self.goal_areas is None:
            red = Rect(0.0, 0.0, left, self.height_m)
            blue = Rect(self.width_m - right, 0.0, self.width_m, self.height_m)
            object.__setattr__(self, "goal_areas", (red, blue))

    @property
    def halfway_x(self) -> float:
        return self.width_m / 2.0

    @property
    def left_try_x(self) -> float:
        return self.try_line_offsets[0]

    @property
    def right_try_x(self) -> float:
        return self.width_m - self.try_line_offsets[1]

    def marked_line_xs(self) -> list[float]:
        """X coordinates of all painted lines, halfway included."""
        return [
            self.left_try_x,
            self.right_try_x,
            self.halfway_x,
            self.halfway_x - self.ten_m_line,
            self.halfway_x + self.ten_m_line,
            self.left_try_x + self.twenty_two_m_line,
            self.right_try_x - self.twenty_two_m_line,
        ]

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width_m, self.height_m)

    def center(self) -> Vec2:
        return Vec2(self.width_m / 2.0, self.height_m / 2.0)

    def contains(self, p: Vec2) -> bool:
        return 0.0 <= p.x <= self.width_m and 0.0 <= p.y <= self.height_m

    def clamp_xy(self, x: float, y: float) -> tuple[float, float]:
        if x < 0.0:
            x = 0.0
        elif x > self.width_m:
            x = self.width_m
        if y < 0.0:
            y = 0.0
        elif y > self.height_m:
            y = self.height_m
        return x, y

    def clamp(self, p: Vec2) -> Vec2:
        x, y = self.clamp_xy(p.x, p.y)
        return Vec2(x, y)
