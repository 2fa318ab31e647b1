"""Exponential potential fields over the occupancy grid.

Each obstacle emits a repulsive potential ``k_rep * exp(-D)`` inside a cutoff
distance ``d_max``, where ``D`` is the Euclidean distance (meters) between
cell centers. Per-cell values are summed over obstacles in ascending id order
so rebuilds are bitwise deterministic.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import distance_transform_edt

from .scene import Cell, OccupancyGrid

DEFAULT_D_MAX_M = 5.0

MODE_SCALE_KREP = "scale_krep"
MODE_SCALE_DMAX = "scale_dmax"
FIELD_MODES = (MODE_SCALE_KREP, MODE_SCALE_DMAX)

# Heatmap scale: 0 renders blue, HEAT_V_MAX and above render red.
HEAT_V_MAX = 5.0


class FieldError(ValueError):
    """Invalid field parameters or grid mismatch."""


@dataclass(frozen=True)
class FieldParams:
    """Per-obstacle repulsion scales plus the shared cutoff.

    ``d_max_per_obstacle`` carries per-obstacle cutoffs when danger posteriors
    scale the cutoff instead of the strength; entries fall back to ``d_max``.
    """

    k_rep_per_obstacle: dict[str, float]
    d_max: float = DEFAULT_D_MAX_M
    mode: str = MODE_SCALE_KREP
    d_max_per_obstacle: dict[str, float] | None = None

    def __post_init__(self) -> None:
        if self.mode not in FIELD_MODES:
            raise FieldError(f"unknown field mode '{self.mode}'")
        if not (self.d_max > 0 and math.isfinite(self.d_max)):
            raise FieldError("d_max must be a positive finite number")
        for obs_id, k in self.k_rep_per_obstacle.items():
            if not (math.isfinite(k) and k >= 0):
                raise FieldError(f"k_rep for obstacle '{obs_id}' must be finite and >= 0")
        if self.d_max_per_obstacle is not None:
            for obs_id, d in self.d_max_per_obstacle.items():
                if not (d > 0 and math.isfinite(d)):
                    raise FieldError(f"d_max for obstacle '{obs_id}' must be positive")

    def cutoff_for(self, obstacle_id: str) -> float:
        if self.d_max_per_obstacle is not None:
            return self.d_max_per_obstacle.get(obstacle_id, self.d_max)
        return self.d_max


@dataclass(frozen=True)
class PotentialGrid:
    """Per-cell cumulative potential; ``values[j, i]`` is cell ``(i, j)``."""

    cols: int
    rows: int
    resolution: float
    values: np.ndarray = field(repr=False)

    def value_at(self, cell: Cell) -> float:
        return float(self.values[cell[1], cell[0]])


def distance_to_obstacle(
    cell: Cell, obstacle_cells: frozenset[Cell] | set[Cell], resolution: float
) -> float | None:
    """Minimum center-to-center Euclidean distance from ``cell`` to the set.

    Returns None when the set is empty (no obstacle; contribution is zero).
    """
    if not obstacle_cells:
        return None
    if cell in obstacle_cells:
        return 0.0
    ci, cj = cell
    best = min(math.hypot((ci - i) * resolution, (cj - j) * resolution) for i, j in obstacle_cells)
    return best


def repulsive_potential(distance: float, k_rep: float, d_max: float) -> float:
    """Exponential repulsion with a hard cutoff at ``d_max``."""
    if distance < d_max:
        return k_rep * math.exp(-distance)
    return 0.0


def build_field(grid: OccupancyGrid, params: FieldParams) -> PotentialGrid:
    """Sum each obstacle's repulsive potential over every cell.

    Distances come from an exact Euclidean distance transform per obstacle, so
    the result matches the exhaustive per-cell minimum. Obstacles with no
    rasterized cells contribute nothing.
    """
    missing = [o for o in grid.per_obstacle_cells if o not in params.k_rep_per_obstacle]
    if missing:
        raise FieldError(f"missing k_rep for obstacle ids: {sorted(missing)}")

    values = np.zeros((grid.rows, grid.cols), dtype=np.float64)
    for obs_id in sorted(grid.per_obstacle_cells):
        cells = grid.per_obstacle_cells[obs_id]
        if not cells:
            continue
        k_rep = params.k_rep_per_obstacle[obs_id]
        d_max = params.cutoff_for(obs_id)
        mask = np.zeros((grid.rows, grid.cols), dtype=bool)
        for i, j in cells:
            mask[j, i] = True
        dist = distance_transform_edt(~mask, sampling=grid.resolution)
        values += np.where(dist < d_max, k_rep * np.exp(-dist), 0.0)
    return PotentialGrid(cols=grid.cols, rows=grid.rows, resolution=grid.resolution, values=values)


def min_distance_any(cell: Cell, grid: OccupancyGrid) -> float | None:
    """Distance from ``cell`` to the nearest blocked cell; None when no obstacles."""
    return distance_to_obstacle(cell, grid.blocked, grid.resolution)


def field_to_dict(potential: PotentialGrid) -> dict:
    return {
        "cols": potential.cols,
        "rows": potential.rows,
        "resolution_m": potential.resolution,
        "values": [float(v) for v in potential.values.ravel()],
    }


def field_from_dict(data: dict) -> PotentialGrid:
    cols = int(data["cols"])
    rows = int(data["rows"])
    values = np.asarray(data["values"], dtype=np.float64).reshape(rows, cols)
    return PotentialGrid(
        cols=cols, rows=rows, resolution=float(data["resolution_m"]), values=values
    )


def heat_color(value: float, v_max: float = HEAT_V_MAX) -> tuple[int, int, int]:
    """Linear blue (0) to red (>= v_max) color for heatmap rendering."""
    t = min(max(value / v_max, 0.0), 1.0)
    return (round(255 * t), 0, round(255 * (1.0 - t)))


def write_ppm(potential: PotentialGrid, path: str, v_max: float = HEAT_V_MAX) -> None:
    """Dump the field as a binary PPM (P6) heatmap, top row = highest y."""
    with open(path, "wb") as fh:
        fh.write(f"P6\n{potential.cols} {potential.rows}\n255\n".encode("ascii"))
        for j in range(potential.rows - 1, -1, -1):
            row = bytearray()
            for i in range(potential.cols):
                row += struct.pack("BBB", *heat_color(float(potential.values[j, i]), v_max))
            fh.write(bytes(row))
