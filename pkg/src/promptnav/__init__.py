"""Prompt-steered grid navigation.

Natural-language prompts are scored for danger sentiment, consolidated into
per-family danger coefficients by sequential Bayesian updates, injected into
an exponential potential field, and handed to a multi-heuristic grid planner
that trades path length against obstacle clearance.
"""

from .bayes import CoefficientStore, EvidenceRecord, StoreError, init_priors, update, update_sequence
from .field import FieldParams, PotentialGrid, build_field, min_distance_any, repulsive_potential
from .metrics import ScenarioReport, compare_scenarios, min_dist_to_obstacles, path_length
from .planner import NoPathError, PathResult, PlannerParams, astar_baseline, mha_star
from .scene import Obstacle, OccupancyGrid, SceneError, SceneSpec, parse_scene, rasterize
from .sentiment import (
    LikelihoodAssignment,
    ProviderConfig,
    ProviderError,
    StabilityReport,
    analyze,
    lexicon_score,
    parse_remote_reply,
    stability_report,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientStore",
    "EvidenceRecord",
    "FieldParams",
    "LikelihoodAssignment",
    "NoPathError",
    "Obstacle",
    "OccupancyGrid",
    "PathResult",
    "PlannerParams",
    "PotentialGrid",
    "ProviderConfig",
    "ProviderError",
    "ScenarioReport",
    "SceneError",
    "SceneSpec",
    "StabilityReport",
    "StoreError",
    "analyze",
    "astar_baseline",
    "build_field",
    "compare_scenarios",
    "init_priors",
    "lexicon_score",
    "mha_star",
    "min_dist_to_obstacles",
    "min_distance_any",
    "parse_remote_reply",
    "parse_scene",
    "path_length",
    "rasterize",
    "repulsive_potential",
    "stability_report",
    "update",
    "update_sequence",
    "__version__",
]
