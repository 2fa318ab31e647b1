"""Grid search: baseline A* on Euclidean cost and shared multi-heuristic A*.

Both planners use 8-connected moves with corner cutting forbidden (a diagonal
step requires both adjacent orthogonal cells to be free) and step costs of
``res`` / ``sqrt(2) * res`` meters. Ties break on smaller f, then smaller h,
then smaller row-major cell index, so expansion order and returned paths are
fully deterministic.

The multi-heuristic search keeps one admissible anchor queue (Euclidean
distance to goal) and one inadmissible queue that adds the potential value,
expanding from the inadmissible queue only while its best key stays within
``w2`` times the anchor's best key. The returned cost is therefore at most
``w1 * w2`` times optimal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush

import numpy as np

from .field import PotentialGrid
from .scene import Cell, OccupancyGrid

SQRT2 = math.sqrt(2.0)

MODE_HEURISTIC_ONLY = "heuristic_only"
MODE_COST_AUGMENTED = "cost_augmented"
COST_MODES = (MODE_HEURISTIC_ONLY, MODE_COST_AUGMENTED)

# Fixed neighbor order keeps successor generation deterministic.
_NEIGHBOR_OFFSETS = (
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
)


class PlanningError(ValueError):
    """Invalid planning query (bad endpoints, dimension mismatch)."""


class NoPathError(PlanningError):
    """Goal unreachable from start."""


@dataclass(frozen=True)
class PlannerParams:
    connectivity: int = 8
    w1: float = 2.0  # heuristic inflation
    w2: float = 2.0  # anchor-bound factor
    lambda_: float = 1.0  # potential weight in the inadmissible heuristic, m per unit
    cost_mode: str = MODE_HEURISTIC_ONLY
    beta: float = 1.0  # potential-to-cost weight, cost_augmented only

    def __post_init__(self) -> None:
        if self.connectivity != 8:
            raise PlanningError("only 8-connected grids are supported")
        if self.w1 < 1 or self.w2 < 1:
            raise PlanningError("w1 and w2 must be >= 1")
        if self.lambda_ < 0 or self.beta < 0:
            raise PlanningError("lambda and beta must be >= 0")
        if self.cost_mode not in COST_MODES:
            raise PlanningError(f"unknown cost mode '{self.cost_mode}'")

    def to_dict(self) -> dict:
        return {
            "connectivity": self.connectivity,
            "w1": self.w1,
            "w2": self.w2,
            "lambda": self.lambda_,
            "cost_mode": self.cost_mode,
            "beta": self.beta,
        }


@dataclass(frozen=True)
class PathResult:
    cells: tuple[Cell, ...]
    cost: float
    expansions: int
    planner: str

    @property
    def start(self) -> Cell:
        return self.cells[0]

    @property
    def goal(self) -> Cell:
        return self.cells[-1]


def euclidean_m(a: Cell, b: Cell, resolution: float) -> float:
    return math.hypot((a[0] - b[0]) * resolution, (a[1] - b[1]) * resolution)


def path_result_to_dict(
    path: PathResult, resolution: float, params: PlannerParams | None = None
) -> dict:
    from .metrics import path_length  # local import to avoid a module cycle

    return {
        "cells": [list(c) for c in path.cells],
        "cost": path.cost,
        "length_m": path_length(path, resolution),
        "planner": path.planner,
        "params": params.to_dict() if params is not None else {},
    }


def step_cost(orthogonal_steps: int, diagonal_steps: int, resolution: float) -> float:
    """Canonical path cost from step counts.

    Evaluating ``a * res + b * (sqrt(2) * res)`` in one fixed expression keeps
    costs independent of the order steps were taken, which a running float sum
    is not; equal-cost paths then report bit-identical costs across planners
    and oracles.
    """
    return orthogonal_steps * resolution + diagonal_steps * (SQRT2 * resolution)


def astar_baseline(grid: OccupancyGrid, start: Cell, goal: Cell) -> PathResult:
    """Optimal 8-connected shortest path; heuristic is Euclidean distance."""
    blocked = _blocked_mask(grid)
    _check_endpoints(grid, blocked, start, goal)
    res = grid.resolution
    cols = grid.cols

    g: dict[Cell, float] = {start: 0.0}
    counts: dict[Cell, tuple[int, int]] = {start: (0, 0)}
    parent: dict[Cell, Cell] = {}
    closed: set[Cell] = set()
    h0 = euclidean_m(start, goal, res)
    open_heap: list[tuple[float, float, int, Cell]] = [
        (h0, h0, start[1] * cols + start[0], start)
    ]
    expansions = 0

    while open_heap:
        f, h, _, cell = heappop(open_heap)
        if cell in closed:
            continue  # stale entry; the fresh one popped earlier
        if cell == goal:
            return PathResult(
                cells=_reconstruct(parent, goal),
                cost=g[goal],
                expansions=expansions,
                planner="astar_baseline",
            )
        closed.add(cell)
        expansions += 1
        a, b = counts[cell]
        for nbr, is_diag in _successors(cell, blocked, grid.cols, grid.rows):
            if nbr in closed:
                continue
            nbr_counts = (a, b + 1) if is_diag else (a + 1, b)
            cand = step_cost(nbr_counts[0], nbr_counts[1], res)
            if cand < g.get(nbr, math.inf):
                g[nbr] = cand
                counts[nbr] = nbr_counts
                parent[nbr] = cell
                hn = euclidean_m(nbr, goal, res)
                heappush(open_heap, (cand + hn, hn, nbr[1] * cols + nbr[0], nbr))
    raise NoPathError(f"no path from {start} to {goal}")


def mha_star(
    grid: OccupancyGrid,
    potential: PotentialGrid,
    start: Cell,
    goal: Cell,
    params: PlannerParams | None = None,
) -> PathResult:
    """Shared multi-heuristic A* steered by the potential field.

    heuristic_only: edges cost pure length, the field only biases expansion
    order (through the inadmissible heuristic). cost_augmented: each edge
    additionally pays ``beta`` times the mean endpoint potential per meter.
    The solution cost is bounded by ``w1 * w2`` times the optimum for the
    active edge cost.
    """
    params = params or PlannerParams()
    if (potential.cols, potential.rows) != (grid.cols, grid.rows):
        raise PlanningError(
            f"field dims {potential.cols}x{potential.rows} do not match "
            f"grid {grid.cols}x{grid.rows}"
        )
    blocked = _blocked_mask(grid)
    _check_endpoints(grid, blocked, start, goal)
    res = grid.resolution
    cols = grid.cols
    values = potential.values
    w1, w2 = params.w1, params.w2
    augmented = params.cost_mode == MODE_COST_AUGMENTED
    beta = params.beta

    def pot(cell: Cell) -> float:
        return float(values[cell[1], cell[0]])

    def h_anchor(cell: Cell) -> float:
        return euclidean_m(cell, goal, res)

    def h_field(cell: Cell) -> float:
        return h_anchor(cell) + params.lambda_ * pot(cell)

    g: dict[Cell, float] = {start: 0.0}
    # Pure-length mode accumulates step counts so equal-cost paths carry
    # bit-identical costs (see step_cost); augmented costs are cell-dependent
    # and have no such canonical form.
    counts: dict[Cell, tuple[int, int]] = {start: (0, 0)}
    parent: dict[Cell, Cell] = {}
    closed_anchor: set[Cell] = set()
    closed_inad: set[Cell] = set()
    expansions = 0

    anchor: list[tuple[float, float, int, Cell, float]] = []
    inad: list[tuple[float, float, int, Cell, float]] = []

    def push(cell: Cell) -> None:
        # Matches the shared-queue insertion rule: anchor-closed states are
        # done for good; inadmissible entries are gated by the w2 bound.
        if cell in closed_anchor:
            return
        rm = cell[1] * cols + cell[0]
        gc = g[cell]
        h0 = h_anchor(cell)
        key0 = gc + w1 * h0
        heappush(anchor, (key0, h0, rm, cell, gc))
        if cell not in closed_inad:
            h1 = h_field(cell)
            key1 = gc + w1 * h1
            if key1 <= w2 * key0:
                heappush(inad, (key1, h1, rm, cell, gc))

    def peek(heap: list, *closed_sets: set[Cell]) -> float:
        while heap:
            key, _, _, cell, g_at_push = heap[0]
            if g_at_push > g[cell] or any(cell in closed for closed in closed_sets):
                heappop(heap)
                continue
            return key
        return math.inf

    def expand(cell: Cell) -> None:
        nonlocal expansions
        expansions += 1
        a, b = counts[cell] if not augmented else (0, 0)
        for nbr, is_diag in _successors(cell, blocked, grid.cols, grid.rows):
            if augmented:
                step = (SQRT2 if is_diag else 1.0) * res
                cand = g[cell] + step * (1.0 + beta * 0.5 * (pot(cell) + pot(nbr)))
                nbr_counts = None
            else:
                nbr_counts = (a, b + 1) if is_diag else (a + 1, b)
                cand = step_cost(nbr_counts[0], nbr_counts[1], res)
            if cand < g.get(nbr, math.inf):
                g[nbr] = cand
                if nbr_counts is not None:
                    counts[nbr] = nbr_counts
                parent[nbr] = cell
                push(nbr)

    push(start)
    while True:
        key_anchor = peek(anchor, closed_anchor)
        key_inad = peek(inad, closed_inad, closed_anchor)
        if key_anchor == math.inf and key_inad == math.inf:
            break
        g_goal = g.get(goal, math.inf)
        if key_inad <= w2 * key_anchor:
            if g_goal <= key_inad:
                break
            cell = heappop(inad)[3]
            closed_inad.add(cell)
            expand(cell)
        else:
            if g_goal <= key_anchor:
                break
            cell = heappop(anchor)[3]
            closed_anchor.add(cell)
            expand(cell)

    if goal not in g:
        raise NoPathError(f"no path from {start} to {goal}")
    return PathResult(
        cells=_reconstruct(parent, goal),
        cost=g[goal],
        expansions=expansions,
        planner="mha_star",
    )


def _blocked_mask(grid: OccupancyGrid) -> np.ndarray:
    mask = np.zeros((grid.rows, grid.cols), dtype=bool)
    for i, j in grid.blocked:
        mask[j, i] = True
    return mask


def _check_endpoints(
    grid: OccupancyGrid, blocked: np.ndarray, start: Cell, goal: Cell
) -> None:
    for tag, cell in (("start", start), ("goal", goal)):
        if not grid.in_range(cell):
            raise PlanningError(f"{tag} cell {cell} is out of range")
        if blocked[cell[1], cell[0]]:
            raise PlanningError(f"{tag} cell {cell} is blocked")


def _successors(cell: Cell, blocked: np.ndarray, cols: int, rows: int):
    """Yield (neighbor, is_diagonal) pairs under the no-corner-cutting rule."""
    i, j = cell
    for di, dj in _NEIGHBOR_OFFSETS:
        ni, nj = i + di, j + dj
        if not (0 <= ni < cols and 0 <= nj < rows) or blocked[nj, ni]:
            continue
        if di and dj:
            # No corner cutting: both orthogonal cells must be free.
            if blocked[j, ni] or blocked[nj, i]:
                continue
            yield (ni, nj), True
        else:
            yield (ni, nj), False


def _reconstruct(parent: dict[Cell, Cell], goal: Cell) -> tuple[Cell, ...]:
    cells = [goal]
    while cells[-1] in parent:
        cells.append(parent[cells[-1]])
    return tuple(reversed(cells))
