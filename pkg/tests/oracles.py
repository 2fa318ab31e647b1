"""Independent reference implementations used to check the package.

Everything here is deliberately written from scratch against the same rules
(8-connected moves, no corner cutting, center-to-center distances) without
importing planner or field internals, so tests compare two separate routes to
the same answer.
"""

from __future__ import annotations

import heapq
import math

SQRT2 = math.sqrt(2.0)


def dijkstra_cost(
    blocked: set[tuple[int, int]],
    cols: int,
    rows: int,
    resolution: float,
    start: tuple[int, int],
    goal: tuple[int, int],
    cell_weight=None,
) -> float | None:
    """Cheapest-path cost on the 8-connected grid, or None when unreachable.

    Pure-length costs are evaluated canonically from step counts
    (``a * res + b * (sqrt(2) * res)``) so equal-cost paths yield identical
    floats. ``cell_weight`` optionally maps a cell to a multiplier applied to
    each edge as ``step * (1 + (w(u) + w(v)) / 2)`` to mirror cost-augmented
    edges; that variant accumulates a plain running sum.
    """
    if start in blocked or goal in blocked:
        return None
    dist = {start: 0.0}
    counts = {start: (0, 0)}
    heap = [(0.0, start)]
    done = set()
    while heap:
        d, cell = heapq.heappop(heap)
        if cell in done:
            continue
        done.add(cell)
        if cell == goal:
            return d
        i, j = cell
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                ni, nj = i + di, j + dj
                if not (0 <= ni < cols and 0 <= nj < rows) or (ni, nj) in blocked:
                    continue
                if di and dj and ((ni, j) in blocked or (i, nj) in blocked):
                    continue
                diagonal = bool(di and dj)
                if cell_weight is None:
                    a, b = counts[cell]
                    nc = (a, b + 1) if diagonal else (a + 1, b)
                    nd = nc[0] * resolution + nc[1] * (SQRT2 * resolution)
                else:
                    step = (SQRT2 if diagonal else 1.0) * resolution
                    step *= 1.0 + 0.5 * (cell_weight(cell) + cell_weight((ni, nj)))
                    nd = d + step
                    nc = None
                if nd < dist.get((ni, nj), math.inf):
                    dist[(ni, nj)] = nd
                    if nc is not None:
                        counts[(ni, nj)] = nc
                    heapq.heappush(heap, (nd, (ni, nj)))
    return None


def brute_force_field(
    per_obstacle_cells: dict[str, frozenset[tuple[int, int]]],
    cols: int,
    rows: int,
    resolution: float,
    k_rep: dict[str, float],
    d_max: float,
) -> list[list[float]]:
    """Double loop over cells x obstacle cells, summing k * exp(-min distance)."""
    values = [[0.0 for _ in range(cols)] for _ in range(rows)]
    for obs_id in sorted(per_obstacle_cells):
        cells = per_obstacle_cells[obs_id]
        if not cells:
            continue
        k = k_rep[obs_id]
        for j in range(rows):
            for i in range(cols):
                best = math.inf
                for oi, oj in cells:
                    d = math.hypot((i - oi) * resolution, (j - oj) * resolution)
                    if d < best:
                        best = d
                if best < d_max:
                    values[j][i] += k * math.exp(-best)
    return values


def closed_form_posterior(prior: float, likelihoods: list[float]) -> float:
    """Direct product-form posterior with the complement evidence model."""
    num = prior
    den = 1.0 - prior
    for like in likelihoods:
        num *= like
        den *= 1.0 - like
    return num / (num + den)
