"""Collision heat-maps and greedy coverage placement for stationary drones.

Collision coordinates quantize to the integer lattice (floor, toward -inf).
The greedy placer repeatedly picks the lattice point covering the most
still-uncovered collision points within the coverage radius; ties break to
the smallest (y, then x), scanning candidates in y-major order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .geometry import FieldConfig, Vec2

_CAND_CHUNK = 1024  # candidate rows per distance block, keeps memory flat


def quantize(point: Vec2) -> tuple[int, int]:
    """Map a point to its lattice cell via floor()."""
    if not point.is_finite():
        raise ValueError(f"cannot quantize non-finite point {point}")
    return (math.floor(point.x), math.floor(point.y))


Bounds = tuple[float, float, float, float]  # (x_min, y_min, x_max, y_max)


def _as_bounds(bounds: FieldConfig | Bounds) -> Bounds:
    if isinstance(bounds, FieldConfig):
        return (0.0, 0.0, bounds.width_m, bounds.height_m)
    return bounds


@dataclass
class HeatmapGrid:
    """Dense per-cell collision counts; cell (ix, iy) holds lattice point
    (origin.x + ix, origin.y + iy)."""

    origin: Vec2
    counts: np.ndarray  # shape (ny, nx), int64
    cell_size: float = 1.0

    @property
    def nx(self) -> int:
        return self.counts.shape[1]

    @property
    def ny(self) -> int:
        return self.counts.shape[0]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def count_at(self, xq: int, yq: int) -> int:
        ix = xq - int(self.origin.x)
        iy = yq - int(self.origin.y)
        if 0 <= ix < self.nx and 0 <= iy < self.ny:
            return int(self.counts[iy, ix])
        return 0


def build_frequency_map(
    points: Sequence[Vec2], bounds: FieldConfig | Bounds | None = None
) -> HeatmapGrid:
    """Tally quantized collision points into a grid; the total is preserved.

    Without explicit bounds the grid tightly wraps the data. With bounds
    (e.g. the pitch) points quantizing onto the upper edge are folded into
    the last cell so in-field data always lands inside the grid.
    """
    if bounds is None:
        if not points:
            return HeatmapGrid(origin=Vec2(0.0, 0.0), counts=np.zeros((1, 1), dtype=np.int64))
        cells = [quantize(p) for p in points]
        x_lo = min(c[0] for c in cells)
        y_lo = min(c[1] for c in cells)
        nx = max(c[0] for c in cells) - x_lo + 1
        ny = max(c[1] for c in cells) - y_lo + 1
    else:
        x_min, y_min, x_max, y_max = _as_bounds(bounds)
        x_lo, y_lo = math.floor(x_min), math.floor(y_min)
        nx = max(1, math.ceil(x_max) - x_lo)
        ny = max(1, math.ceil(y_max) - y_lo)
        cells = [quantize(p) for p in points]

    counts = np.zeros((ny, nx), dtype=np.int64)
    for xq, yq in cells:
        ix = min(max(xq - x_lo, 0), nx - 1)
        iy = min(max(yq - y_lo, 0), ny - 1)
        counts[iy, ix] += 1
    return HeatmapGrid(origin=Vec2(float(x_lo), float(y_lo)), counts=counts)


def coverage_score(
    grid_point: tuple[int, int], uncovered: Iterable[Vec2], radius: float
) -> int:
    """Number of uncovered points within the closed ball around a lattice point."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    gx, gy = grid_point
    r2 = radius * radius
    return sum(
        1 for p in uncovered if (p.x - gx) ** 2 + (p.y - gy) ** 2 <= r2
    )


def _candidate_lattice(
    points: Sequence[Vec2], bounds: FieldConfig | Bounds | None
) -> np.ndarray:
    """All candidate lattice points in y-major order (y asc, then x asc)."""
    if bounds is None:
        x_lo = math.floor(min(p.x for p in points))
        x_hi = math.ceil(max(p.x for p in points))
        y_lo = math.floor(min(p.y for p in points))
        y_hi = math.ceil(max(p.y for p in points))
    else:
        x_min, y_min, x_max, y_max = _as_bounds(bounds)
        x_lo, x_hi = math.ceil(x_min), math.floor(x_max)
        y_lo, y_hi = math.ceil(y_min), math.floor(y_max)
    xs = np.arange(x_lo, x_hi + 1)
    ys = np.arange(y_lo, y_hi + 1)
    gx, gy = np.meshgrid(xs, ys)  # row-major flatten = y-major scan
    return np.column_stack([gx.ravel(), gy.ravel()]).astype(float)


def fixed_positions(
    points: Sequence[Vec2],
    n_drones: int,
    radius: float,
    bounds: FieldConfig | Bounds | None = None,
) -> list[Vec2]:
    """Greedy maximum-coverage placement over historical collision points.

    Each round places one drone on the candidate lattice point whose closed
    ball of ``radius`` covers the most uncovered points, then marks those
    covered. Stops when everything is covered, no candidate covers anything,
    or ``n_drones`` are placed. Candidates span ``bounds`` when given, else
    the data's bounding box.
    """
    if n_drones < 1:
        raise ValueError("n_drones must be >= 1")
    if radius <= 0:
        raise ValueError("radius must be positive")
    if not points:
        return []

    pts = np.array([[p.x, p.y] for p in points])
    cand = _candidate_lattice(points, bounds)
    uncovered = np.ones(len(pts), dtype=bool)
    r2 = radius * radius
    placed: list[Vec2] = []

    while uncovered.any() and len(placed) < n_drones:
        live = pts[uncovered]
        scores = np.empty(len(cand), dtype=np.int64)
        for lo in range(0, len(cand), _CAND_CHUNK):
            block = cand[lo : lo + _CAND_CHUNK]
            d2 = (block[:, None, 0] - live[None, :, 0]) ** 2 + (
                block[:, None, 1] - live[None, :, 1]
            ) ** 2
            scores[lo : lo + len(block)] = (d2 <= r2).sum(axis=1)
        best = int(np.argmax(scores))  # first max = smallest (y, x)
        if scores[best] == 0:
            break
        cx, cy = cand[best]
        placed.append(Vec2(float(cx), float(cy)))
        covered = (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2 <= r2
        uncovered &= ~covered
    return placed


# --------------------------------------------------------------------------
# Exports
# --------------------------------------------------------------------------


def write_heatmap_csv(grid: HeatmapGrid, path: str | Path) -> Path:
    """CSV rows ``x_q,y_q,count`` in row-major (y outer) order."""
    path = Path(path)
    x0, y0 = int(grid.origin.x), int(grid.origin.y)
    lines = ["x_q,y_q,count"]
    for iy in range(grid.ny):
        for ix in range(grid.nx):
            lines.append(f"{x0 + ix},{y0 + iy},{int(grid.counts[iy, ix])}")
    path.write_text("\n".join(lines) + "\n")
    return path


def write_heatmap_pgm(grid: HeatmapGrid, path: str | Path) -> Path:
    """Plain-text portable graymap for quick viewing; top row = highest y."""
    path = Path(path)
    maxval = max(1, int(grid.counts.max()))
    lines = ["P2", f"{grid.nx} {grid.ny}", str(maxval)]
    for iy in range(grid.ny - 1, -1, -1):
        lines.append(" ".join(str(int(v)) for v in grid.counts[iy]))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_positions_csv(positions: Sequence[Vec2], path: str | Path) -> Path:
    """CSV ``drone_id,x,y`` for a placement result."""
    path = Path(path)
    lines = ["drone_id,x,y"]
    for i, p in enumerate(positions):
        lines.append(f"{i},{p.x:g},{p.y:g}")
    path.write_text("\n".join(lines) + "\n")
    return path
