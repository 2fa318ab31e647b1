"""In-memory planning sessions shared by the HTTP service.

A session bundles one scene with its occupancy grid, coefficient store, and
the current potential field. Mutations follow a compute-then-commit pattern:
everything is derived from the request first and swapped in only on success,
so a failing provider or planner leaves the session untouched.
"""

from __future__ import annotations

import hashlib
import json
import pathlib
import threading
import uuid
from dataclasses import dataclass, field as dataclass_field

from . import bayes, field
from .bayes import CoefficientStore
from .field import PotentialGrid
from .scene import OccupancyGrid, SceneSpec, rasterize, scene_from_dict, scene_to_dict
from .sentiment import ProviderConfig, initial_priors


class SessionError(ValueError):
    """Session-level validation failure (endpoints on blocked cells, etc.)."""


@dataclass
class Session:
    id: str
    spec: SceneSpec
    grid: OccupancyGrid
    store: CoefficientStore
    potential: PotentialGrid
    field_version: int = 1
    history: list[dict] = dataclass_field(default_factory=list)
    lock: threading.Lock = dataclass_field(default_factory=threading.Lock, repr=False)

    def state_hash(self) -> str:
        payload = {
            "scene": scene_to_dict(self.spec),
            "store": bayes.store_to_dict(self.store),
            "field_version": self.field_version,
        }
        blob = json.dumps(payload, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    def commit(self, store: CoefficientStore, potential: PotentialGrid) -> None:
        self.store = store
        self.potential = potential
        self.field_version += 1


def build_session(
    spec: SceneSpec,
    provider_cfg: ProviderConfig | None = None,
    priors: dict[str, float] | None = None,
    session_id: str | None = None,
) -> Session:
    """Rasterize, seed priors (document first, then provider), build the field.

    Raises SessionError when the start or goal cell is blocked; inconsistent
    input fails loudly instead of being nudged onto a free cell.
    """
    grid = rasterize(spec)
    for tag, point in (("start", spec.start), ("goal", spec.goal)):
        cell = spec.point_to_cell(point)
        if cell in grid.blocked:
            raise SessionError(f"{tag} {point} falls on a blocked cell {cell}")
    families = spec.families()
    if priors is None:
        priors = dict(spec.priors) if spec.priors is not None else None
    if priors is None:
        priors = initial_priors(families, provider_cfg or ProviderConfig())
    store = bayes.init_priors(families, priors)
    potential = rebuild_field(grid, store)
    return Session(
        id=session_id or uuid.uuid4().hex,
        spec=spec,
        grid=grid,
        store=store,
        potential=potential,
    )


def rebuild_field(grid: OccupancyGrid, store: CoefficientStore) -> PotentialGrid:
    return field.build_field(grid, bayes.to_field_params(store, grid))


class SessionRegistry:
    """Thread-safe id -> Session map with optional JSON snapshots on disk."""

    def __init__(self, persist_dir: str | None = None):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._persist_dir = pathlib.Path(persist_dir) if persist_dir else None
        if self._persist_dir is not None:
            self._persist_dir.mkdir(parents=True, exist_ok=True)
            self._load_snapshots()

    def add(self, session: Session) -> None:
        with self._lock:
            self._sessions[session.id] = session
        self.snapshot(session)

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            return self._sessions.get(session_id)

    def ids(self) -> list[str]:
        with self._lock:
            return sorted(self._sessions)

    def snapshot(self, session: Session) -> None:
        if self._persist_dir is None:
            return
        payload = {
            "id": session.id,
            "scene": scene_to_dict(session.spec),
            "store": bayes.store_to_dict(session.store),
            "field_version": session.field_version,
        }
        path = self._persist_dir / f"{session.id}.json"
        path.write_text(json.dumps(payload, indent=2))

    def _load_snapshots(self) -> None:
        assert self._persist_dir is not None
        for path in sorted(self._persist_dir.glob("*.json")):
            payload = json.loads(path.read_text())
            spec = scene_from_dict(payload["scene"])
            store = bayes.store_from_dict(payload["store"])
            grid = rasterize(spec)
            session = Session(
                id=payload["id"],
                spec=spec,
                grid=grid,
                store=store,
                potential=rebuild_field(grid, store),
                field_version=int(payload.get("field_version", 1)),
            )
            self._sessions[session.id] = session
