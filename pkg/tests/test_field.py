from __future__ import annotations

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from promptnav.field import (
    FieldError,
    FieldParams,
    build_field,
    distance_to_obstacle,
    field_from_dict,
    field_to_dict,
    heat_color,
    min_distance_any,
    repulsive_potential,
    write_ppm,
)
from promptnav.scene import OccupancyGrid

from oracles import brute_force_field


def make_grid(cols, rows, resolution, per_obstacle):
    blocked = frozenset().union(*per_obstacle.values()) if per_obstacle else frozenset()
    return OccupancyGrid(
        cols=cols,
        rows=rows,
        resolution=resolution,
        per_obstacle_cells={k: frozenset(v) for k, v in per_obstacle.items()},
        blocked=blocked,
        families={k: "X" for k in per_obstacle},
    )


def random_grid(rng, cols, rows, n_obstacles, density=0.05):
    per_obstacle = {}
    for k in range(n_obstacles):
        cells = {
            (rng.randrange(cols), rng.randrange(rows))
            for _ in range(max(1, int(cols * rows * density)))
        }
        per_obstacle[f"obs{k}"] = frozenset(cells)
    return make_grid(cols, rows, 0.25, per_obstacle)


class TestDistanceToObstacle:
    def test_inside_set_is_zero(self):
        assert distance_to_obstacle((2, 2), {(2, 2), (3, 3)}, 1.0) == 0.0

    def test_axis_aligned_three_cells(self):
        cells = {(5, 2), (6, 2)}
        # Exhaustive oracle over the set.
        expected = min(math.hypot(2 - i, 2 - j) for i, j in cells)
        assert distance_to_obstacle((2, 2), cells, 1.0) == pytest.approx(expected)
        assert distance_to_obstacle((2, 2), cells, 1.0) == pytest.approx(3.0)

    def test_empty_set_signals_no_obstacle(self):
        assert distance_to_obstacle((0, 0), set(), 1.0) is None


class TestRepulsivePotential:
    def test_zero_distance_returns_k_rep(self):
        assert repulsive_potential(0.0, 5.0, 5.0) == 5.0

    def test_unit_distance(self):
        assert repulsive_potential(1.0, 1.0, 5.0) == pytest.approx(0.367879, abs=1e-6)

    def test_cutoff_branch(self):
        assert repulsive_potential(6.0, 1.0, 5.0) == 0.0

    @given(
        d=st.floats(0.0, 4.99),
        k=st.floats(0.0, 10.0),
    )
    @settings(max_examples=80)
    def test_bounded_by_k_rep(self, d, k):
        value = repulsive_potential(d, k, 5.0)
        assert 0.0 <= value <= k

    @given(d1=st.floats(0.0, 4.0), delta=st.floats(1e-6, 0.9))
    @settings(max_examples=80)
    def test_strictly_decreasing_inside_cutoff(self, d1, delta):
        assert repulsive_potential(d1, 1.0, 5.0) > repulsive_potential(d1 + delta, 1.0, 5.0)


class TestBuildField:
    def test_all_zero_coefficients(self):
        grid = make_grid(4, 4, 1.0, {"a": {(0, 0)}, "b": {(3, 3)}})
        out = build_field(grid, FieldParams({"a": 0.0, "b": 0.0}))
        assert np.all(out.values == 0.0)

    def test_two_obstacles_one_meter_away(self):
        # Cell (2,0) is 1 m from both single-cell obstacles at (1,0) and (3,0).
        grid = make_grid(5, 1, 1.0, {"a": {(1, 0)}, "b": {(3, 0)}})
        out = build_field(grid, FieldParams({"a": 1.0, "b": 1.0}))
        assert out.value_at((2, 0)) == pytest.approx(0.735759, abs=1e-6)

    def test_single_obstacle_matches_per_cell_recompute(self):
        grid = make_grid(8, 6, 0.5, {"a": {(1, 1), (2, 1), (2, 2)}})
        params = FieldParams({"a": 2.5})
        out = build_field(grid, params)
        for i in range(grid.cols):
            for j in range(grid.rows):
                d = distance_to_obstacle((i, j), grid.per_obstacle_cells["a"], 0.5)
                assert out.value_at((i, j)) == pytest.approx(
                    repulsive_potential(d, 2.5, params.d_max), abs=1e-12
                )

    def test_blocked_cells_carry_sum_of_k_rep(self):
        grid = make_grid(4, 4, 1.0, {"a": {(1, 1)}, "b": {(1, 1), (2, 2)}})
        out = build_field(grid, FieldParams({"a": 2.0, "b": 3.0}))
        assert out.value_at((1, 1)) == pytest.approx(5.0, abs=1e-12)

    def test_missing_coefficient_errors(self):
        grid = make_grid(4, 4, 1.0, {"a": {(0, 0)}})
        with pytest.raises(FieldError, match="missing k_rep"):
            build_field(grid, FieldParams({}))

    def test_matches_brute_force_oracle(self):
        rng = random.Random(7)
        for _ in range(5):
            grid = random_grid(rng, rng.randrange(8, 30), rng.randrange(8, 30), 2)
            k_rep = {k: rng.uniform(0, 5) for k in grid.per_obstacle_cells}
            params = FieldParams(k_rep, d_max=3.0)
            out = build_field(grid, params)
            expected = brute_force_field(
                grid.per_obstacle_cells, grid.cols, grid.rows, grid.resolution, k_rep, 3.0
            )
            assert np.allclose(out.values, np.array(expected), atol=1e-9, rtol=0)

    def test_additivity_over_obstacle_sets(self):
        rng = random.Random(13)
        grid = random_grid(rng, 15, 12, 3)
        k_rep = {k: rng.uniform(0.5, 4) for k in grid.per_obstacle_cells}
        whole = build_field(grid, FieldParams(k_rep))
        parts = np.zeros_like(whole.values)
        for obs_id, cells in grid.per_obstacle_cells.items():
            sub = make_grid(grid.cols, grid.rows, grid.resolution, {obs_id: cells})
            parts += build_field(sub, FieldParams({obs_id: k_rep[obs_id]})).values
        assert np.allclose(whole.values, parts, atol=1e-12, rtol=0)

    @given(c=st.floats(0.0, 8.0))
    @settings(max_examples=30, deadline=None)
    def test_scaling_k_rep_scales_field(self, c):
        grid = make_grid(10, 8, 0.5, {"a": {(2, 2)}, "b": {(7, 5), (8, 5)}})
        base = build_field(grid, FieldParams({"a": 1.0, "b": 2.0}))
        scaled = build_field(grid, FieldParams({"a": c, "b": 2.0 * c}))
        assert np.allclose(scaled.values, c * base.values, atol=1e-12, rtol=1e-12)

    def test_per_obstacle_cutoff_override(self):
        grid = make_grid(20, 1, 1.0, {"a": {(0, 0)}})
        tight = FieldParams({"a": 1.0}, d_max=5.0, d_max_per_obstacle={"a": 2.0})
        out = build_field(grid, tight)
        assert out.value_at((1, 0)) > 0.0
        assert out.value_at((3, 0)) == 0.0  # beyond the 2 m override


class TestMinDistanceAny:
    def test_adjacent_cell(self):
        grid = make_grid(10, 10, 0.2, {"a": {(5, 5)}})
        assert min_distance_any((5, 6), grid) == pytest.approx(0.2)

    def test_no_obstacles(self):
        grid = make_grid(4, 4, 1.0, {})
        assert min_distance_any((0, 0), grid) is None

    def test_blocked_cell_is_zero(self):
        grid = make_grid(10, 10, 0.2, {"a": {(5, 5)}})
        assert min_distance_any((5, 5), grid) == 0.0


class TestExports:
    def test_json_roundtrip(self):
        grid = make_grid(6, 4, 0.5, {"a": {(1, 1)}})
        out = build_field(grid, FieldParams({"a": 3.0}))
        data = field_to_dict(out)
        assert data["cols"] == 6 and data["rows"] == 4
        assert len(data["values"]) == 24
        again = field_from_dict(data)
        assert np.array_equal(again.values, out.values)

    def test_heat_color_endpoints(self):
        assert heat_color(0.0) == (0, 0, 255)
        assert heat_color(5.0) == (255, 0, 0)
        assert heat_color(99.0) == (255, 0, 0)
        mid = heat_color(2.5)
        assert mid[0] == mid[2]

    def test_ppm_header_and_size(self, tmp_path):
        grid = make_grid(6, 4, 0.5, {"a": {(1, 1)}})
        out = build_field(grid, FieldParams({"a": 3.0}))
        path = tmp_path / "field.ppm"
        write_ppm(out, str(path))
        blob = path.read_bytes()
        assert blob.startswith(b"P6\n6 4\n255\n")
        assert len(blob) == len(b"P6\n6 4\n255\n") + 6 * 4 * 3
