"""Path metrics and the three-scenario comparison experiment.

The comparison pits a shortest-path baseline against field-steered planning
after a safety-toned and a danger-toned prompt, reporting path length and the
minimum distance to obstacles (MDO) per strategy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import bayes, field, planner, sentiment
from .planner import PathResult, PlannerParams
from .scene import OccupancyGrid, SceneSpec, rasterize

STRATEGY_BASELINE = "Baseline"
STRATEGY_SAFE = "Safe"
STRATEGY_DANGEROUS = "Dangerous"


class ScenarioError(RuntimeError):
    """A comparison row failed; the message carries the row tag."""


@dataclass(frozen=True)
class ScenarioRow:
    name: str
    prompt: str | None
    path_length_m: float
    mdo_m: float | None
    expansions: int
    planner: str
    posteriors: Mapping[str, float]


@dataclass(frozen=True)
class ScenarioReport:
    rows: tuple[ScenarioRow, ...]
    cost_mode: str

    def row(self, name: str) -> ScenarioRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)


def path_length(path: PathResult, resolution: float) -> float:
    """Metric length of the path: res per orthogonal step, sqrt(2)*res per diagonal."""
    total = 0.0
    for (i1, j1), (i2, j2) in zip(path.cells, path.cells[1:]):
        total += planner.SQRT2 * resolution if (i1 != i2 and j1 != j2) else resolution
    return total


def min_dist_to_obstacles(path: PathResult, grid: OccupancyGrid) -> float | None:
    """Minimum distance from any path cell to the nearest blocked cell.

    None when the grid has no obstacles at all.
    """
    if not grid.blocked:
        return None
    return min(field.min_distance_any(cell, grid) for cell in path.cells)


def compare_scenarios(
    spec: SceneSpec,
    prompts: Mapping[str, str],
    cfg: sentiment.ProviderConfig,
    params: PlannerParams | None = None,
    priors: Mapping[str, float] | None = None,
    k_global: float = bayes.DEFAULT_K_GLOBAL,
    d_max: float = field.DEFAULT_D_MAX_M,
) -> ScenarioReport:
    """Run Baseline / Safe / Dangerous on one scene from identical priors.

    ``prompts`` needs "safe" and "dangerous" entries. Each prompted scenario
    starts from a fresh store, consolidates its single prompt, rebuilds the
    field, and plans with the multi-heuristic search; the baseline ignores the
    field entirely. Planner params default to cost-augmented mode so the field
    shapes the traversal cost, not just the expansion order.
    """
    for key in ("safe", "dangerous"):
        if key not in prompts:
            raise ScenarioError(f"missing '{key}' prompt")
    params = params or PlannerParams(cost_mode=planner.MODE_COST_AUGMENTED)

    grid = rasterize(spec)
    families = spec.families()
    store0 = _initial_store(spec, families, cfg, priors)
    start = spec.point_to_cell(spec.start)
    goal = spec.point_to_cell(spec.goal)

    rows = [
        _baseline_row(grid, start, goal, store0),
        _prompted_row(
            STRATEGY_SAFE, prompts["safe"], spec, grid, start, goal, store0, cfg,
            params, k_global, d_max,
        ),
        _prompted_row(
            STRATEGY_DANGEROUS, prompts["dangerous"], spec, grid, start, goal, store0,
            cfg, params, k_global, d_max,
        ),
    ]
    return ScenarioReport(rows=tuple(rows), cost_mode=params.cost_mode)


def report_to_dict(report: ScenarioReport) -> dict:
    return {
        "cost_mode": report.cost_mode,
        "rows": [
            {
                "strategy": row.name,
                "prompt": row.prompt,
                "path_length_m": row.path_length_m,
                "mdo_m": row.mdo_m,
                "expansions": row.expansions,
                "planner": row.planner,
                "posteriors": dict(row.posteriors),
            }
            for row in report.rows
        ],
    }


def report_to_text(report: ScenarioReport) -> str:
    """Aligned three-column table: strategy, path length, MDO."""
    headers = ("Strategy", "Path Length(m)", "MDO(m)")
    cells = [
        (
            row.name,
            f"{row.path_length_m:.3f}",
            "-" if row.mdo_m is None else f"{row.mdo_m:.2f}",
        )
        for row in report.rows
    ]
    widths = [
        max(len(headers[k]), *(len(c[k]) for c in cells)) for k in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[k]) for k, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for row_cells in cells:
        lines.append("  ".join(c.ljust(widths[k]) for k, c in enumerate(row_cells)))
    return "\n".join(lines)


def _initial_store(
    spec: SceneSpec,
    families: list[str],
    cfg: sentiment.ProviderConfig,
    priors: Mapping[str, float] | None,
) -> bayes.CoefficientStore:
    if priors is None:
        priors = spec.priors
    if priors is None:
        priors = sentiment.initial_priors(families, cfg)
    return bayes.init_priors(families, priors)


def _baseline_row(
    grid: OccupancyGrid,
    start: tuple[int, int],
    goal: tuple[int, int],
    store: bayes.CoefficientStore,
) -> ScenarioRow:
    try:
        path = planner.astar_baseline(grid, start, goal)
    except planner.PlanningError as exc:
        raise ScenarioError(f"{STRATEGY_BASELINE}: {exc}") from exc
    return ScenarioRow(
        name=STRATEGY_BASELINE,
        prompt=None,
        path_length_m=path_length(path, grid.resolution),
        mdo_m=min_dist_to_obstacles(path, grid),
        expansions=path.expansions,
        planner=path.planner,
        posteriors=dict(store.posteriors),
    )


def _prompted_row(
    name: str,
    prompt: str,
    spec: SceneSpec,
    grid: OccupancyGrid,
    start: tuple[int, int],
    goal: tuple[int, int],
    store0: bayes.CoefficientStore,
    cfg: sentiment.ProviderConfig,
    params: PlannerParams,
    k_global: float,
    d_max: float,
) -> ScenarioRow:
    try:
        assignment = sentiment.analyze(prompt, list(store0.families), store0, cfg)
        store = bayes.update(
            store0, assignment.likelihoods, prompt_text=prompt, provider=assignment.provider
        )
        field_params = bayes.to_field_params(store, grid, k_global=k_global, d_max=d_max)
        potential = field.build_field(grid, field_params)
        path = planner.mha_star(grid, potential, start, goal, params)
    except (sentiment.ProviderError, planner.PlanningError, bayes.StoreError) as exc:
        raise ScenarioError(f"{name}: {exc}") from exc
    return ScenarioRow(
        name=name,
        prompt=prompt,
        path_length_m=path_length(path, grid.resolution),
        mdo_m=min_dist_to_obstacles(path, grid),
        expansions=path.expansions,
        planner=path.planner,
        posteriors=dict(store.posteriors),
    )
