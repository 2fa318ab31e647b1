"""Export blue-to-red potential heatmaps for no-prompt, safe, and dangerous states.

Writes field_initial.ppm / field_safe.ppm / field_dangerous.ppm next to --outdir.

Usage:
    python3 scripts/render_heatmaps.py [--scene scenes/acceptance_scene.json] [--outdir out]
"""

from __future__ import annotations

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent.parent / "src"))

from promptnav import bayes, field, sentiment
from promptnav.scene import parse_scene, rasterize

DEFAULT_SCENE = pathlib.Path(__file__).parent.parent / "scenes" / "acceptance_scene.json"

PROMPTS = {
    "initial": None,
    "safe": "The environment is incredibly safe",
    "dangerous": "The environment is incredibly dangerous",
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scene", default=str(DEFAULT_SCENE))
    parser.add_argument("--outdir", default="out")
    args = parser.parse_args()

    spec = parse_scene(pathlib.Path(args.scene).read_text())
    grid = rasterize(spec)
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cfg = sentiment.ProviderConfig()
    base_store = bayes.init_priors(spec.families(), spec.priors)

    for tag, prompt in PROMPTS.items():
        store = base_store
        if prompt is not None:
            assignment = sentiment.analyze(prompt, spec.families(), store, cfg)
            store = bayes.update(store, assignment.likelihoods, prompt_text=prompt)
        potential = field.build_field(grid, bayes.to_field_params(store, grid))
        path = outdir / f"field_{tag}.ppm"
        field.write_ppm(potential, str(path))
        peak = float(potential.values.max())
        print(f"{path}  peak={peak:.2f}  posteriors={ {f: round(p, 3) for f, p in store.posteriors.items()} }")
    return 0


if __name__ == "__main__":
    sys.exit(main())
