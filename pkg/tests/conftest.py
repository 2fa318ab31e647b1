from __future__ import annotations

import json
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from promptnav.scene import SceneSpec, parse_scene

REPO_ROOT = pathlib.Path(__file__).parent.parent
ACCEPTANCE_SCENE = REPO_ROOT / "scenes" / "acceptance_scene.json"


@pytest.fixture(scope="session")
def acceptance_scene() -> SceneSpec:
    return parse_scene(ACCEPTANCE_SCENE.read_text())


@pytest.fixture(scope="session")
def acceptance_scene_doc() -> dict:
    return json.loads(ACCEPTANCE_SCENE.read_text())


def make_scene_doc(
    width=4.0,
    height=4.0,
    resolution=0.5,
    start=(0.25, 0.25),
    goal=(3.75, 3.75),
    obstacles=(),
    priors=None,
) -> str:
    doc = {
        "grid": {
            "width_m": width,
            "height_m": height,
            "resolution_m": resolution,
            "origin": [0.0, 0.0],
        },
        "start": list(start),
        "goal": list(goal),
        "obstacles": [
            {"id": o[0], "family": o[1], "footprint": [list(v) for v in o[2]]}
            for o in obstacles
        ],
    }
    if priors is not None:
        doc["priors"] = priors
    return json.dumps(doc)
