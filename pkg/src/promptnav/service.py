"""HTTP session service: the scene/prompt/plan loop over JSON.

Endpoints live under /v1. Mutating handlers hold the session lock for the
whole request, so concurrent requests to one session serialize while separate
sessions proceed independently. Error mapping: 400 invalid input, 404 unknown
session, 409 planner no-path, 502 provider failure (raw reply attached).
"""

from __future__ import annotations

from fastapi import Body, FastAPI, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import bayes, metrics, planner, sentiment
from .field import field_to_dict
from .planner import NoPathError, PlannerParams, PlanningError, path_result_to_dict
from .scene import SceneError, scene_from_dict, scene_to_dict
from .sentiment import ProviderConfig, ProviderError
from .sessions import Session, SessionError, SessionRegistry, build_session, rebuild_field

DEFAULT_ADDR = "127.0.0.1:8787"


class ApiError(Exception):
    def __init__(self, status: int, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.payload = {"error": message, **extra}


def create_app(
    persist_dir: str | None = None,
    remote_cfg: ProviderConfig | None = None,
) -> FastAPI:
    app = FastAPI(title="promptnav", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    registry = SessionRegistry(persist_dir)
    app.state.sessions = registry
    app.state.remote_cfg = remote_cfg

    @app.exception_handler(ApiError)
    async def _api_error(request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.payload)

    def session_or_404(session_id: str) -> Session:
        session = registry.get(session_id)
        if session is None:
            raise ApiError(404, f"unknown session '{session_id}'")
        return session

    def provider_cfg(name: str | None) -> ProviderConfig:
        if name in (None, "", sentiment.KIND_LEXICON):
            return ProviderConfig()
        if name == sentiment.KIND_REMOTE:
            cfg = app.state.remote_cfg
            if cfg is None:
                try:
                    cfg = ProviderConfig.from_env()
                except ProviderError as exc:
                    raise ApiError(400, str(exc))
            return cfg
        raise ApiError(400, f"unknown provider '{name}'")

    def posterior_map(session: Session) -> dict[str, float]:
        return dict(session.store.posteriors)

    @app.get("/healthz")
    @app.get("/v1/healthz")
    def healthz():
        return {"status": "ok", "sessions": len(registry.ids())}

    @app.post("/v1/scenes", status_code=201)
    def create_scene(
        body: dict = Body(...), provider: str | None = Query(default=None)
    ):
        try:
            spec = scene_from_dict(body)
            session = build_session(spec, provider_cfg(provider))
        except (SceneError, SessionError, bayes.StoreError) as exc:
            raise ApiError(400, str(exc))
        except ProviderError as exc:
            raise ApiError(502, str(exc), raw_reply=exc.raw_reply)
        registry.add(session)
        return {
            "session": session.id,
            "posteriors": posterior_map(session),
            "field_version": session.field_version,
        }

    @app.get("/v1/scenes/{session_id}")
    def get_scene(session_id: str):
        session = session_or_404(session_id)
        with session.lock:
            return {
                "session": session.id,
                "scene": scene_to_dict(session.spec),
                "cols": session.grid.cols,
                "rows": session.grid.rows,
                "resolution_m": session.grid.resolution,
                "start_cell": list(session.spec.point_to_cell(session.spec.start)),
                "goal_cell": list(session.spec.point_to_cell(session.spec.goal)),
                "blocked": sorted(list(c) for c in session.grid.blocked),
                "posteriors": posterior_map(session),
                "field_version": session.field_version,
                "history_len": len(session.history),
                "state_hash": session.state_hash(),
            }

    @app.post("/v1/scenes/{session_id}/prompts")
    def apply_prompt(session_id: str, body: dict = Body(...)):
        session = session_or_404(session_id)
        text = body.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ApiError(400, "body needs a non-empty 'text'")
        cfg = provider_cfg(body.get("provider"))
        with session.lock:
            before = posterior_map(session)
            try:
                assignment = sentiment.analyze(
                    text, list(session.store.families), session.store, cfg
                )
                store = bayes.update(
                    session.store,
                    assignment.likelihoods,
                    prompt_text=text,
                    provider=assignment.provider,
                )
                potential = rebuild_field(session.grid, store)
            except ProviderError as exc:
                raise ApiError(502, str(exc), raw_reply=exc.raw_reply)
            except bayes.StoreError as exc:
                raise ApiError(400, str(exc))
            session.commit(store, potential)
            registry.snapshot(session)
            return {
                "posteriors": posterior_map(session),
                "before": before,
                "likelihoods": dict(assignment.likelihoods),
                "field_version": session.field_version,
            }

    @app.get("/v1/scenes/{session_id}/field")
    def get_field(session_id: str):
        session = session_or_404(session_id)
        with session.lock:
            data = field_to_dict(session.potential)
            data["version"] = session.field_version
            return data

    @app.post("/v1/scenes/{session_id}/plan")
    def plan(session_id: str, body: dict | None = Body(default=None)):
        session = session_or_404(session_id)
        body = body or {}
        strategy = body.get("strategy", "mha")
        if strategy not in ("baseline", "mha"):
            raise ApiError(400, f"unknown strategy '{strategy}'")
        try:
            params = _params_from(body.get("params") or {})
        except PlanningError as exc:
            raise ApiError(400, str(exc))
        with session.lock:
            start = session.spec.point_to_cell(session.spec.start)
            goal = session.spec.point_to_cell(session.spec.goal)
            try:
                if strategy == "baseline":
                    path = planner.astar_baseline(session.grid, start, goal)
                else:
                    path = planner.mha_star(
                        session.grid, session.potential, start, goal, params
                    )
            except NoPathError as exc:
                raise ApiError(409, str(exc))
            except PlanningError as exc:
                raise ApiError(400, str(exc))
            result = path_result_to_dict(path, session.grid.resolution, params)
            mdo = metrics.min_dist_to_obstacles(path, session.grid)
            result["mdo_m"] = mdo
            result["expansions"] = path.expansions
            result["strategy"] = strategy
            result["field_version"] = session.field_version
            session.history.append(result)
            return result

    @app.get("/v1/scenes/{session_id}/coefficients")
    def get_coefficients(session_id: str):
        session = session_or_404(session_id)
        with session.lock:
            return bayes.store_to_dict(session.store)

    @app.post("/v1/scenes/{session_id}/reset")
    def reset(session_id: str):
        session = session_or_404(session_id)
        with session.lock:
            store = bayes.init_priors(session.store.families, session.store.priors)
            potential = rebuild_field(session.grid, store)
            session.commit(store, potential)
            session.history.clear()
            registry.snapshot(session)
            return {
                "posteriors": posterior_map(session),
                "field_version": session.field_version,
            }

    return app


def _params_from(raw: dict) -> PlannerParams:
    kwargs = {}
    for key, attr in (
        ("w1", "w1"),
        ("w2", "w2"),
        ("lambda", "lambda_"),
        ("beta", "beta"),
        ("cost_mode", "cost_mode"),
        ("connectivity", "connectivity"),
    ):
        if key in raw:
            kwargs[attr] = raw[key]
    try:
        return PlannerParams(**kwargs)
    except TypeError as exc:
        raise PlanningError(str(exc)) from exc


def serve(
    addr: str = DEFAULT_ADDR,
    persist_dir: str | None = None,
    remote_cfg: ProviderConfig | None = None,
) -> None:
    """Run the service with uvicorn until interrupted."""
    import uvicorn

    host, _, port = addr.partition(":")
    app = create_app(persist_dir=persist_dir, remote_cfg=remote_cfg)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8787), log_level="warning")
