from __future__ import annotations

import json

import pytest

from promptnav.cli import main
from promptnav.bayes import init_priors, store_to_dict

from conftest import ACCEPTANCE_SCENE

DANGEROUS_PROMPT = "The environment is incredibly dangerous"


def write_zero_store(path, families):
    store = init_priors(families, {f: 0.0 for f in families})
    path.write_text(json.dumps(store_to_dict(store)))


class TestPlanCommand:
    def test_plan_with_prompt_writes_path(self, tmp_path, capsys):
        out = tmp_path / "path.json"
        code = main(
            [
                "plan",
                "--scene", str(ACCEPTANCE_SCENE),
                "--prompt", DANGEROUS_PROMPT,
                "--provider", "lexicon",
                "--out", str(out),
            ]
        )
        assert code == 0
        data = json.loads(out.read_text())
        assert data["strategy"] == "mha"
        assert data["planner"] == "mha_star"
        assert data["cells"][0] == [5, 20]
        summary = capsys.readouterr().err
        assert "length=" in summary

    def test_plan_without_prompt_is_baseline(self, tmp_path):
        out = tmp_path / "path.json"
        assert main(["plan", "--scene", str(ACCEPTANCE_SCENE), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["strategy"] == "baseline"

    def test_unknown_flag_is_usage_error(self, capsys):
        assert main(["plan", "--bogus"]) == 2
        assert "usage" in capsys.readouterr().err

    def test_missing_subcommand_is_usage_error(self):
        assert main([]) == 2

    def test_missing_scene_file_is_runtime_error(self, capsys):
        assert main(["plan", "--scene", "/does/not/exist.json"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_no_prompt_equals_zero_store_baseline_byte_identical(self, tmp_path):
        scene = str(ACCEPTANCE_SCENE)
        families = ["Wall", "Grinder", "Chainsaw", "Robot", "Chair"]
        zero_store = tmp_path / "zero.json"
        write_zero_store(zero_store, families)

        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        assert main(["plan", "--scene", scene, "--out", str(out_a)]) == 0
        assert (
            main(
                [
                    "plan",
                    "--scene", scene,
                    "--store", str(zero_store),
                    "--strategy", "baseline",
                    "--out", str(out_b),
                ]
            )
            == 0
        )
        assert out_a.read_bytes() == out_b.read_bytes()

    def test_ppm_and_store_outputs(self, tmp_path):
        ppm = tmp_path / "field.ppm"
        store_out = tmp_path / "store.json"
        code = main(
            [
                "plan",
                "--scene", str(ACCEPTANCE_SCENE),
                "--prompt", DANGEROUS_PROMPT,
                "--ppm", str(ppm),
                "--save-store", str(store_out),
                "--out", str(tmp_path / "p.json"),
            ]
        )
        assert code == 0
        assert ppm.read_bytes().startswith(b"P6\n60 40\n255\n")
        saved = json.loads(store_out.read_text())
        assert saved["families"]["Chainsaw"]["posterior"] > 0.95

    def test_help_exits_zero(self):
        assert main(["--help"]) == 0


class TestFieldCommand:
    def test_field_export(self, tmp_path):
        out = tmp_path / "field.json"
        assert main(["field", "--scene", str(ACCEPTANCE_SCENE), "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["cols"] == 60 and data["rows"] == 40
        assert len(data["values"]) == 2400


class TestPromptCommand:
    def test_prompt_updates_store_file(self, tmp_path, capsys):
        store_path = tmp_path / "store.json"
        store = init_priors(["Wall", "Chainsaw"], {"Wall": 0.2, "Chainsaw": 0.95})
        store_path.write_text(json.dumps(store_to_dict(store)))
        code = main(
            ["prompt", "--store", str(store_path), "--text", "the chainsaw is dangerous"]
        )
        assert code == 0
        data = json.loads(store_path.read_text())
        assert data["families"]["Chainsaw"]["posterior"] > 0.95
        assert data["families"]["Wall"]["posterior"] == pytest.approx(0.2)
        assert "->" in capsys.readouterr().err


class TestCompareCommand:
    def test_three_row_report(self, tmp_path, capsys):
        json_out = tmp_path / "report.json"
        code = main(
            [
                "compare",
                "--scene", str(ACCEPTANCE_SCENE),
                "--safe", "The environment is incredibly safe",
                "--dangerous", DANGEROUS_PROMPT,
                "--provider", "lexicon",
                "--json", str(json_out),
            ]
        )
        assert code == 0
        table = capsys.readouterr().out
        for label in ("Strategy", "Baseline", "Safe", "Dangerous", "Path Length(m)", "MDO(m)"):
            assert label in table
        report = json.loads(json_out.read_text())
        assert [r["strategy"] for r in report["rows"]] == ["Baseline", "Safe", "Dangerous"]


class TestStabilityCommand:
    def test_lexicon_stability_table(self, capsys):
        code = main(
            [
                "stability",
                "--scene", str(ACCEPTANCE_SCENE),
                "--prompt", DANGEROUS_PROMPT,
                "-n", "5",
            ]
        )
        assert code == 0
        table = capsys.readouterr().out
        assert "± 0.00" in table
        assert "n=5" in table
