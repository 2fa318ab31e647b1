"""Expansion-count benchmark: baseline A* vs multi-heuristic search on random grids.

Usage:
    python3 scripts/planner_benchmark.py [--grids 50] [--dim 50] [--density 0.2] [--seed 7]
"""

from __future__ import annotations

import argparse
import pathlib
import random
import statistics
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).parent.parent / "src"))

from promptnav.field import FieldParams, build_field
from promptnav.planner import NoPathError, PlannerParams, astar_baseline, mha_star
from promptnav.scene import OccupancyGrid


def random_grid(rng: random.Random, dim: int, density: float):
    blocked = frozenset(
        (i, j) for i in range(dim) for j in range(dim) if rng.random() < density
    )
    free = [(i, j) for i in range(dim) for j in range(dim) if (i, j) not in blocked]
    grid = OccupancyGrid(
        cols=dim,
        rows=dim,
        resolution=1.0,
        per_obstacle_cells={"obs": blocked},
        blocked=blocked,
        families={"obs": "Clutter"},
    )
    return grid, rng.choice(free), rng.choice(free)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grids", type=int, default=50)
    parser.add_argument("--dim", type=int, default=50)
    parser.add_argument("--density", type=float, default=0.2)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    rows = []
    started = time.perf_counter()
    for _ in range(args.grids):
        grid, start, goal = random_grid(rng, args.dim, args.density)
        potential = build_field(grid, FieldParams({"obs": 3.0}))
        try:
            base = astar_baseline(grid, start, goal)
            guided = mha_star(grid, potential, start, goal, PlannerParams())
        except NoPathError:
            continue
        rows.append((base.expansions, guided.expansions, guided.cost / base.cost))
    elapsed = time.perf_counter() - started

    if not rows:
        print("no solvable instances")
        return 1
    base_exp, mha_exp, ratios = zip(*rows)
    print(f"instances: {len(rows)}  ({elapsed:.2f}s)")
    print(f"baseline expansions: mean {statistics.fmean(base_exp):.0f}")
    print(f"guided   expansions: mean {statistics.fmean(mha_exp):.0f}")
    print(f"cost ratio guided/optimal: mean {statistics.fmean(ratios):.3f} "
          f"max {max(ratios):.3f} (bound {2.0 * 2.0:.1f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
