"""Scene documents: parsing, validation, and rasterization onto the planning grid.

A scene is a JSON document describing a metric workspace, obstacle footprints
tagged with BIM family names, and the start/goal of the planning query. Grid
cells are indexed ``(i, j)`` with ``i`` the column (x) and ``j`` the row (y);
the center of cell ``(i, j)`` sits at ``origin + ((i + 0.5) * res, (j + 0.5) * res)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

Cell = tuple[int, int]
Point = tuple[float, float]

DEFAULT_RESOLUTION_M = 0.1

# Slack for on-boundary tests, in meters. Scenes are desk-scale (tens of
# meters), so an absolute epsilon is safe.
_EDGE_EPS = 1e-9


class SceneError(ValueError):
    """Invalid scene document or geometry."""


@dataclass(frozen=True)
class Obstacle:
    """A named footprint: closed polygon in meters, tagged with a BIM family."""

    id: str
    family: str
    footprint: tuple[Point, ...]


@dataclass(frozen=True)
class SceneSpec:
    grid_width: float
    grid_height: float
    resolution: float
    origin: Point
    obstacles: tuple[Obstacle, ...]
    start: Point
    goal: Point
    # Optional per-family danger priors carried by the document.
    priors: dict[str, float] | None = None

    @property
    def cols(self) -> int:
        return _cell_count(self.grid_width, self.resolution)

    @property
    def rows(self) -> int:
        return _cell_count(self.grid_height, self.resolution)

    def families(self) -> list[str]:
        """Distinct family names, in first-appearance order."""
        seen: dict[str, None] = {}
        for obs in self.obstacles:
            seen.setdefault(obs.family, None)
        return list(seen)

    def point_to_cell(self, point: Point) -> Cell:
        """Cell containing a world point; points on the far edge map to the last cell."""
        ox, oy = self.origin
        i = min(int(math.floor((point[0] - ox) / self.resolution)), self.cols - 1)
        j = min(int(math.floor((point[1] - oy) / self.resolution)), self.rows - 1)
        return (max(i, 0), max(j, 0))


@dataclass(frozen=True)
class OccupancyGrid:
    """Rasterized scene: per-obstacle collision cell sets and their union."""

    cols: int
    rows: int
    resolution: float
    per_obstacle_cells: dict[str, frozenset[Cell]]
    blocked: frozenset[Cell]
    # Obstacle id -> family name, needed to look up danger coefficients.
    families: dict[str, str] = field(default_factory=dict)

    def in_range(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.cols and 0 <= cell[1] < self.rows

    def cell_center(self, cell: Cell, origin: Point = (0.0, 0.0)) -> Point:
        return (
            origin[0] + (cell[0] + 0.5) * self.resolution,
            origin[1] + (cell[1] + 0.5) * self.resolution,
        )


def _cell_count(extent: float, resolution: float) -> int:
    return max(1, int(math.ceil(extent / resolution - 1e-9)))


def parse_scene(document: str) -> SceneSpec:
    """Parse and validate a scene JSON document.

    Raises SceneError on malformed JSON, missing keys, out-of-bounds start/goal
    or vertices, degenerate or self-intersecting polygons, and duplicate ids.
    """
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SceneError(f"malformed scene document: {exc}") from exc
    if not isinstance(data, dict):
        raise SceneError("scene document must be a JSON object")
    return scene_from_dict(data)


def scene_from_dict(data: dict) -> SceneSpec:
    grid = data.get("grid")
    if not isinstance(grid, dict):
        raise SceneError("missing or invalid 'grid' section")
    width = _require_number(grid, "width_m", "grid.width_m")
    height = _require_number(grid, "height_m", "grid.height_m")
    resolution = float(grid.get("resolution_m", DEFAULT_RESOLUTION_M))
    origin = _point(grid.get("origin", [0.0, 0.0]), "grid.origin")
    if width <= 0 or height <= 0:
        raise SceneError("grid dimensions must be positive")
    if not (resolution > 0 and math.isfinite(resolution)):
        raise SceneError("grid.resolution_m must be a positive number")

    start = _point(data.get("start"), "start")
    goal = _point(data.get("goal"), "goal")
    for tag, point in (("start", start), ("goal", goal)):
        if not _inside_bounds(point, origin, width, height):
            raise SceneError(f"{tag} {point} lies outside the grid bounds")

    obstacles: list[Obstacle] = []
    seen_ids: set[str] = set()
    for idx, entry in enumerate(data.get("obstacles", [])):
        if not isinstance(entry, dict):
            raise SceneError(f"obstacles[{idx}] must be an object")
        obs_id = entry.get("id")
        family = entry.get("family")
        if not isinstance(obs_id, str) or not obs_id:
            raise SceneError(f"obstacles[{idx}] needs a non-empty string id")
        if not isinstance(family, str) or not family:
            raise SceneError(f"obstacle '{obs_id}' needs a non-empty family name")
        if obs_id in seen_ids:
            raise SceneError(f"duplicate obstacle id '{obs_id}'")
        seen_ids.add(obs_id)
        footprint = _footprint(entry.get("footprint"), obs_id)
        for vertex in footprint:
            if not _inside_bounds(vertex, origin, width, height):
                raise SceneError(
                    f"obstacle '{obs_id}' vertex {vertex} lies outside the grid bounds"
                )
        if _self_intersecting(footprint):
            raise SceneError(f"obstacle '{obs_id}' footprint is self-intersecting")
        obstacles.append(Obstacle(id=obs_id, family=family, footprint=footprint))

    priors = None
    if "priors" in data:
        raw = data["priors"]
        if not isinstance(raw, dict):
            raise SceneError("'priors' must map family names to numbers")
        priors = {}
        for name, value in raw.items():
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise SceneError(f"prior for family '{name}' must be a number")
            priors[str(name)] = float(value)

    return SceneSpec(
        grid_width=width,
        grid_height=height,
        resolution=resolution,
        origin=origin,
        obstacles=tuple(obstacles),
        start=start,
        goal=goal,
        priors=priors,
    )


def scene_to_dict(spec: SceneSpec) -> dict:
    doc: dict = {
        "grid": {
            "width_m": spec.grid_width,
            "height_m": spec.grid_height,
            "resolution_m": spec.resolution,
            "origin": list(spec.origin),
        },
        "start": list(spec.start),
        "goal": list(spec.goal),
        "obstacles": [
            {"id": o.id, "family": o.family, "footprint": [list(v) for v in o.footprint]}
            for o in spec.obstacles
        ],
    }
    if spec.priors is not None:
        doc["priors"] = dict(spec.priors)
    return doc


def rasterize(spec: SceneSpec) -> OccupancyGrid:
    """Rasterize obstacle footprints: a cell is occupied by an obstacle iff its
    center lies inside or on the boundary of the footprint (even-odd rule)."""
    cols, rows = spec.cols, spec.rows
    res = spec.resolution
    ox, oy = spec.origin

    per_obstacle: dict[str, frozenset[Cell]] = {}
    blocked: set[Cell] = set()
    for obs in spec.obstacles:
        xs = [v[0] for v in obs.footprint]
        ys = [v[1] for v in obs.footprint]
        i_lo = max(0, int(math.floor((min(xs) - ox) / res - 0.5)))
        i_hi = min(cols - 1, int(math.ceil((max(xs) - ox) / res)))
        j_lo = max(0, int(math.floor((min(ys) - oy) / res - 0.5)))
        j_hi = min(rows - 1, int(math.ceil((max(ys) - oy) / res)))
        cells = set()
        for i in range(i_lo, i_hi + 1):
            for j in range(j_lo, j_hi + 1):
                center = (ox + (i + 0.5) * res, oy + (j + 0.5) * res)
                if point_in_polygon(center, obs.footprint):
                    cells.add((i, j))
        per_obstacle[obs.id] = frozenset(cells)
        blocked |= cells

    return OccupancyGrid(
        cols=cols,
        rows=rows,
        resolution=res,
        per_obstacle_cells=per_obstacle,
        blocked=frozenset(blocked),
        families={o.id: o.family for o in spec.obstacles},
    )


def point_in_polygon(point: Point, polygon: tuple[Point, ...]) -> bool:
    """Even-odd point-in-polygon test; points on an edge count as inside."""
    x, y = point
    n = len(polygon)
    for k in range(n):
        if _on_segment(point, polygon[k], polygon[(k + 1) % n]):
            return True
    inside = False
    for k in range(n):
        x1, y1 = polygon[k]
        x2, y2 = polygon[(k + 1) % n]
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_cross:
                inside = not inside
    return inside


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    if abs(cross) > _EDGE_EPS * max(1.0, abs(b[0] - a[0]) + abs(b[1] - a[1])):
        return False
    return (
        min(a[0], b[0]) - _EDGE_EPS <= p[0] <= max(a[0], b[0]) + _EDGE_EPS
        and min(a[1], b[1]) - _EDGE_EPS <= p[1] <= max(a[1], b[1]) + _EDGE_EPS
    )


def _self_intersecting(polygon: tuple[Point, ...]) -> bool:
    """True when any two non-adjacent edges touch or cross."""
    n = len(polygon)
    edges = [(polygon[k], polygon[(k + 1) % n]) for k in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if b == a + 1 or (a == 0 and b == n - 1):
                continue  # adjacent edges share a vertex by construction
            if _segments_intersect(*edges[a], *edges[b]):
                return True
    return False


def _segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and 0 not in (d1, d2, d3, d4):
        return True  # proper crossing
    # Collinear overlaps and endpoint touches.
    for d, point, a, b in (
        (d1, p1, q1, q2),
        (d2, p2, q1, q2),
        (d3, q1, p1, p2),
        (d4, q2, p1, p2),
    ):
        if d == 0 and _bbox_touch(point, a, b):
            return True
    return False


def _orient(a: Point, b: Point, c: Point) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _bbox_touch(p: Point, a: Point, b: Point) -> bool:
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _inside_bounds(point: Point, origin: Point, width: float, height: float) -> bool:
    return (
        origin[0] <= point[0] <= origin[0] + width
        and origin[1] <= point[1] <= origin[1] + height
    )


def _require_number(section: dict, key: str, label: str) -> float:
    value = section.get(key)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise SceneError(f"missing or non-numeric '{label}'")
    return float(value)


def _point(value: object, label: str) -> Point:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)
    ):
        raise SceneError(f"'{label}' must be an [x, y] pair of numbers")
    return (float(value[0]), float(value[1]))


def _footprint(value: object, obs_id: str) -> tuple[Point, ...]:
    if not isinstance(value, list):
        raise SceneError(f"obstacle '{obs_id}' footprint must be a list of [x, y] pairs")
    points = [_point(v, f"obstacle '{obs_id}' footprint vertex") for v in value]
    # Tolerate an explicitly closed ring.
    if len(points) > 1 and points[0] == points[-1]:
        points = points[:-1]
    if len(points) < 3:
        raise SceneError(f"obstacle '{obs_id}' footprint needs at least 3 vertices")
    return tuple(points)
