"""Command-line entry points.

Exit codes: 0 success, 1 runtime failure (bad scene, unreachable provider,
no path), 2 usage errors (argparse).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bayes, field, metrics, planner, sentiment
from .planner import PlannerParams, PlanningError
from .scene import SceneError, parse_scene
from .sentiment import ProviderConfig, ProviderError
from .sessions import SessionError, build_session

RUNTIME_ERRORS = (
    SceneError,
    SessionError,
    bayes.StoreError,
    field.FieldError,
    PlanningError,
    ProviderError,
    metrics.ScenarioError,
    OSError,
    json.JSONDecodeError,
)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage/help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except RUNTIME_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="promptnav",
        description="Prompt-steered potential-field path planning on grid scenes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="plan a path on a scene, optionally steered by a prompt")
    plan.add_argument("--scene", required=True, help="scene JSON file")
    plan.add_argument("--prompt", help="natural-language prompt to consolidate first")
    plan.add_argument("--store", help="coefficient store JSON to start from")
    plan.add_argument(
        "--strategy",
        choices=["auto", "baseline", "mha"],
        default="auto",
        help="auto = mha when a prompt or store is given, baseline otherwise",
    )
    plan.add_argument("--out", help="write the path JSON here instead of stdout")
    plan.add_argument("--ppm", help="write a PPM heatmap of the planning field")
    plan.add_argument("--save-store", help="write the updated store JSON here")
    _provider_flags(plan)
    _planner_flags(plan)
    plan.set_defaults(func=cmd_plan)

    fld = sub.add_parser("field", help="export the potential field for a scene")
    fld.add_argument("--scene", required=True)
    fld.add_argument("--store", help="coefficient store JSON (defaults to scene priors)")
    fld.add_argument("--out", help="write the field JSON here instead of stdout")
    fld.add_argument("--ppm", help="write a PPM heatmap")
    _provider_flags(fld)
    fld.set_defaults(func=cmd_field)

    prompt = sub.add_parser("prompt", help="apply a prompt to a stored coefficient store")
    prompt.add_argument("--store", required=True, help="coefficient store JSON file")
    prompt.add_argument("--text", required=True, help="prompt text")
    prompt.add_argument("--out", help="output store path (defaults to --store)")
    _provider_flags(prompt)
    prompt.set_defaults(func=cmd_prompt)

    compare = sub.add_parser("compare", help="baseline/safe/dangerous comparison on one scene")
    compare.add_argument("--scene", required=True)
    compare.add_argument("--safe", required=True, help="safety-toned prompt")
    compare.add_argument("--dangerous", required=True, help="danger-toned prompt")
    compare.add_argument("--json", dest="json_out", help="also write the report as JSON")
    _provider_flags(compare)
    _planner_flags(compare)
    compare.set_defaults(func=cmd_compare)

    stability = sub.add_parser("stability", help="provider stability over repeated trials")
    stability.add_argument("--scene", required=True, help="scene JSON (families and priors)")
    stability.add_argument("--prompt", default="", help="prompt text; empty = baseline run")
    stability.add_argument("-n", "--trials", type=int, default=100)
    _provider_flags(stability)
    stability.set_defaults(func=cmd_stability)

    serve = sub.add_parser("serve", help="run the HTTP session service")
    serve.add_argument("--addr", default="127.0.0.1:8787", help="host:port to bind")
    serve.add_argument("--persist", help="directory for session snapshots")
    _provider_flags(serve)
    serve.set_defaults(func=cmd_serve)

    return parser


def _provider_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--provider",
        choices=[sentiment.KIND_LEXICON, sentiment.KIND_REMOTE],
        default=sentiment.KIND_LEXICON,
        help="sentiment provider (remote reads PROMPTNAV_LLM_* env vars)",
    )


def _planner_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--w1", type=float, default=2.0, help="heuristic inflation >= 1")
    parser.add_argument("--w2", type=float, default=2.0, help="anchor bound factor >= 1")
    parser.add_argument("--lambda", dest="lambda_", type=float, default=1.0,
                        help="field weight in the guidance heuristic")
    parser.add_argument("--beta", type=float, default=1.0,
                        help="field-to-cost weight (cost_augmented mode)")
    parser.add_argument("--mode", choices=list(planner.COST_MODES), default=None,
                        help="edge cost mode (default: heuristic_only for plan, "
                        "cost_augmented for compare)")
    parser.add_argument("--k-global", type=float, default=bayes.DEFAULT_K_GLOBAL,
                        help="repulsion scale at posterior 1.0")
    parser.add_argument("--d-max", type=float, default=field.DEFAULT_D_MAX_M,
                        help="field cutoff distance in meters")


def _provider_cfg(args) -> ProviderConfig:
    if args.provider == sentiment.KIND_REMOTE:
        return ProviderConfig.from_env()
    return ProviderConfig()


def _planner_params(args, default_mode: str) -> PlannerParams:
    return PlannerParams(
        w1=args.w1,
        w2=args.w2,
        lambda_=args.lambda_,
        beta=args.beta,
        cost_mode=args.mode or default_mode,
    )


def _load_store(path: str) -> bayes.CoefficientStore:
    with open(path) as fh:
        return bayes.store_from_dict(json.load(fh))


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_plan(args) -> int:
    with open(args.scene) as fh:
        spec = parse_scene(fh.read())
    cfg = _provider_cfg(args)
    store = _load_store(args.store) if args.store else None
    session = build_session(spec, cfg, priors=dict(store.priors) if store else None)
    if store is None:
        store = session.store

    if args.prompt:
        assignment = sentiment.analyze(args.prompt, list(store.families), store, cfg)
        store = bayes.update(
            store, assignment.likelihoods, prompt_text=args.prompt, provider=assignment.provider
        )

    strategy = args.strategy
    if strategy == "auto":
        strategy = "mha" if (args.prompt or args.store) else "baseline"

    start = spec.point_to_cell(spec.start)
    goal = spec.point_to_cell(spec.goal)
    params = _planner_params(args, planner.MODE_HEURISTIC_ONLY)
    if strategy == "baseline":
        path = planner.astar_baseline(session.grid, start, goal)
        potential = session.potential
    else:
        field_params = bayes.to_field_params(
            store, session.grid, k_global=args.k_global, d_max=args.d_max
        )
        potential = field.build_field(session.grid, field_params)
        path = planner.mha_star(session.grid, potential, start, goal, params)

    result = planner.path_result_to_dict(path, session.grid.resolution, params)
    result["strategy"] = strategy
    result["mdo_m"] = metrics.min_dist_to_obstacles(path, session.grid)
    _emit(result, args.out)
    if args.ppm:
        field.write_ppm(potential, args.ppm)
    if args.save_store:
        _emit(bayes.store_to_dict(store), args.save_store)
    if args.out:
        mdo = result["mdo_m"]
        print(
            f"{strategy}: length={result['length_m']:.3f} m, "
            f"mdo={'n/a' if mdo is None else f'{mdo:.2f} m'}, "
            f"expansions={path.expansions}",
            file=sys.stderr,
        )
    return 0


def cmd_field(args) -> int:
    with open(args.scene) as fh:
        spec = parse_scene(fh.read())
    cfg = _provider_cfg(args)
    store = _load_store(args.store) if args.store else None
    session = build_session(spec, cfg, priors=dict(store.priors) if store else None)
    if store is None:
        store = session.store
    potential = field.build_field(
        session.grid, bayes.to_field_params(store, session.grid)
    )
    data = field.field_to_dict(potential)
    _emit(data, args.out)
    if args.ppm:
        field.write_ppm(potential, args.ppm)
    return 0


def cmd_prompt(args) -> int:
    store = _load_store(args.store)
    cfg = _provider_cfg(args)
    assignment = sentiment.analyze(args.text, list(store.families), store, cfg)
    updated = bayes.update(
        store, assignment.likelihoods, prompt_text=args.text, provider=assignment.provider
    )
    _emit(bayes.store_to_dict(updated), args.out or args.store)
    for family in updated.families:
        print(
            f"{family}: {store.posteriors[family]:.4f} -> {updated.posteriors[family]:.4f}",
            file=sys.stderr,
        )
    return 0


def cmd_compare(args) -> int:
    with open(args.scene) as fh:
        spec = parse_scene(fh.read())
    report = metrics.compare_scenarios(
        spec,
        {"safe": args.safe, "dangerous": args.dangerous},
        _provider_cfg(args),
        params=_planner_params(args, planner.MODE_COST_AUGMENTED),
        k_global=args.k_global,
        d_max=args.d_max,
    )
    print(metrics.report_to_text(report))
    if args.json_out:
        _emit(metrics.report_to_dict(report), args.json_out)
    return 0


def cmd_stability(args) -> int:
    with open(args.scene) as fh:
        spec = parse_scene(fh.read())
    cfg = _provider_cfg(args)
    session = build_session(spec, cfg)
    report = sentiment.stability_report(
        cfg, args.prompt, list(session.store.families), session.store, args.trials
    )
    print(report.format_table())
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    remote_cfg = None
    if args.provider == sentiment.KIND_REMOTE:
        remote_cfg = ProviderConfig.from_env()
    serve(addr=args.addr, persist_dir=args.persist, remote_cfg=remote_cfg)
    return 0


if __name__ == "__main__":
    sys.exit(main())
