"""Run the baseline / safe / dangerous comparison on a scene and print the table.

Usage:
    python3 scripts/run_scenarios.py [--scene scenes/acceptance_scene.json] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent.parent / "src"))

from promptnav.metrics import compare_scenarios, report_to_dict, report_to_text
from promptnav.scene import parse_scene
from promptnav.sentiment import ProviderConfig

DEFAULT_SCENE = pathlib.Path(__file__).parent.parent / "scenes" / "acceptance_scene.json"
SAFE_PROMPT = "The environment is incredibly safe"
DANGEROUS_PROMPT = "The environment is incredibly dangerous"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scene", default=str(DEFAULT_SCENE))
    parser.add_argument("--safe", default=SAFE_PROMPT)
    parser.add_argument("--dangerous", default=DANGEROUS_PROMPT)
    parser.add_argument("--json", dest="json_out")
    args = parser.parse_args()

    spec = parse_scene(pathlib.Path(args.scene).read_text())
    report = compare_scenarios(
        spec, {"safe": args.safe, "dangerous": args.dangerous}, ProviderConfig()
    )
    print(report_to_text(report))
    base = report.row("Baseline")
    dangerous = report.row("Dangerous")
    print(
        f"\nMDO gain (dangerous vs baseline): {dangerous.mdo_m / base.mdo_m:.2f}x "
        f"at {dangerous.path_length_m / base.path_length_m - 1:+.1%} length"
    )
    if args.json_out:
        pathlib.Path(args.json_out).write_text(json.dumps(report_to_dict(report), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
