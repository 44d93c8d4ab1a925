"""
Tests for the command-line entry point
"""
import json

import pytest

from app.core.errors import ConfigError
from main import build_parser, main, merge_config, parse_params


class TestArguments:
    def test_params(self):
        assert parse_params(["m=2", " a = 0.5 "]) == {"m": "2", "a": "0.5"}
        with pytest.raises(ConfigError):
            parse_params(["m"])

    def test_suites_default_to_all(self):
        config = merge_config(build_parser().parse_args(["--metric", "schwarzschild", "--param", "m=2"]))
        assert len(config.suites) == 9
        assert config.metric.params == {"m": 2.0}

    def test_flags_override_config_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("metric.name = schwarzschild\nmetric.chart = isotropic\nseed = 3\nsuites = geometry\n")
        config = merge_config(build_parser().parse_args(["--config", str(path), "--seed", "4",
                                                         "--suite", "algebra"]))
        assert config.metric.name == "schwarzschild" and config.metric.chart == "isotropic"
        assert config.seed == 4
        assert config.suites == ["algebra"]


class TestExitCodes:
    def test_unknown_suite(self, capsys):
        assert main(["--suite", "nope"]) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_bad_param(self):
        assert main(["--metric", "schwarzschild", "--param", "m"]) == 2

    def test_unknown_metric(self):
        assert main(["--metric", "kerr", "--suite", "algebra"]) == 2

    def test_empty_suite_list(self, tmp_path, capsys):
        path = tmp_path / "empty.cfg"
        path.write_text("suites =\n")
        assert main(["--config", str(path)]) == 0
        assert json.loads(capsys.readouterr().out)["records"] == []

    def test_report_file_is_deterministic(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        args = ["--suite", "algebra", "--seed", "11", "--samples", "2"]
        assert main(args + ["--out", str(first)]) == 0
        assert main(args + ["--out", str(second)]) == 0
        assert first.read_text() == second.read_text()
        assert json.loads(first.read_text())["summary"]["failed"] == 0

    def test_markdown(self, capsys):
        assert main(["--suite", "algebra", "--samples", "1", "--format", "markdown"]) == 0
        assert "## algebra" in capsys.readouterr().out


class TestAcceptanceRuns:
    def test_acceptance_flag_samples_like_the_acceptance_runs(self):
        config = merge_config(build_parser().parse_args(["--acceptance"]))
        assert config.samples == 100

    def test_explicit_samples_win(self):
        config = merge_config(build_parser().parse_args(["--acceptance", "--samples", "3"]))
        assert config.samples == 3
        assert merge_config(build_parser().parse_args([])).samples == 6

    @pytest.mark.parametrize("metric,chart", [
        ("schwarzschild", "static"),
        ("schwarzschild", "infalling"),
        ("einstein_de_sitter", None),
    ])
    def test_full_run_on_curved_metrics(self, metric, chart, capsys):
        args = ["--metric", metric, "--samples", "2"] + (["--chart", chart] if chart else [])
        assert main(args) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["summary"]["failed"] == 0
        forms = [r for r in report["records"] if r["suite"] == "forms"]
        assert forms and not any(r["skipped"] for r in forms)
        refutations = [r for r in report["records"] if r["expect"] == "fails" and not r["skipped"]]
        assert refutations and all(r["passed"] for r in refutations)
