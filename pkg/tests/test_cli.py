import json

import pytest
from click.testing import CliRunner

from eval_advisor.cli import main

from conftest import CORPUS_PATH, CURATED_PATH, VOCAB_PATH


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def data_dir(tmp_path, runner):
    target = tmp_path / "data"
    result = runner.invoke(
        main,
        [
            "--data-dir", str(target),
            "import",
            "--corpus", str(CORPUS_PATH),
            "--vocab", str(VOCAB_PATH),
            "--curated", str(CURATED_PATH),
        ],
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output) == {"imported": 14, "warnings": []}
    mined = runner.invoke(main, ["--data-dir", str(target), "mine"])
    assert mined.exit_code == 0, mined.output
    return target


def invoke(runner, data_dir, *args):
    return runner.invoke(main, ["--data-dir", str(data_dir), *args])


class TestCommands:
    def test_mine_reports_count_and_fingerprint(self, runner, data_dir):
        result = invoke(runner, data_dir, "mine")
        payload = json.loads(result.output)
        assert payload["rules"] == 35
        assert len(payload["kb-fingerprint"]) == 16

    def test_mine_unreachable_threshold_keeps_bridges_and_curated(
        self, runner, data_dir
    ):
        result = invoke(runner, data_dir, "mine", "--min-coverage", "999")
        assert result.exit_code == 0
        assert json.loads(result.output)["rules"] == 9

    def test_ask_elasticity(self, runner, data_dir):
        result = invoke(runner, data_dir, "ask", "--feature", "Elasticity")
        report = json.loads(result.output)
        metrics = [e["item"]["value"] for e in report["suggestions"]["Metric"]]
        assert "VM Boosting Latency" in metrics

    def test_ask_attr_filter(self, runner, data_dir):
        result = invoke(
            runner, data_dir,
            "ask", "--feature", "Vertical Scalability", "--attr", "Metric",
        )
        report = json.loads(result.output)
        assert set(report["suggestions"]) == {"Metric"}

    def test_retrieve_heuristic(self, runner, data_dir):
        result = invoke(
            runner, data_dir,
            "retrieve",
            "--item", "ServiceFeature:Horizontal Scalability",
            "--mode", "heuristic",
        )
        body = json.loads(result.output)
        assert body["results"][0]["record"]["id"] == "cb-deelman"

    def test_retrieve_exact_flag(self, runner, data_dir):
        result = invoke(
            runner, data_dir,
            "retrieve",
            "--item", "ServiceFeature:Scalability",
            "--mode", "precise",
            "--exact",
        )
        assert json.loads(result.output)["results"] == []

    def test_export_rules_vocab_cases(self, runner, data_dir):
        rules = json.loads(invoke(runner, data_dir, "export", "--what", "rules").output)
        vocab = json.loads(invoke(runner, data_dir, "export", "--what", "vocab").output)
        cases = json.loads(invoke(runner, data_dir, "export", "--what", "cases").output)
        assert len(rules) == 35
        assert len(cases) == 14
        assert any(entry["label"] == "Scalability" for entry in vocab)

    def test_pretty_flag_is_same_payload(self, runner, data_dir):
        compact = invoke(runner, data_dir, "export", "--what", "rules")
        pretty = runner.invoke(
            main,
            ["--data-dir", str(data_dir), "--pretty", "export", "--what", "rules"],
        )
        assert json.loads(compact.output) == json.loads(pretty.output)
        assert pretty.output.count("\n") > compact.output.count("\n")


class TestExitCodes:
    def test_unknown_term_exits_2(self, runner, data_dir):
        result = invoke(
            runner, data_dir,
            "retrieve", "--item", "Metric:Frobnication Index",
        )
        assert result.exit_code == 2
        error = json.loads(result.stderr)
        assert error["code"] == "not-found"

    def test_malformed_item_exits_1(self, runner, data_dir):
        result = invoke(runner, data_dir, "retrieve", "--item", "no-colon-here")
        assert result.exit_code == 1
        assert json.loads(result.stderr)["code"] == "invalid-input"

    def test_fuzzy_singleton_exits_1(self, runner, data_dir):
        result = invoke(
            runner, data_dir,
            "retrieve", "--item", "ServiceFeature:Cost", "--mode", "fuzzy",
        )
        assert result.exit_code == 1

    def test_missing_corpus_file_exits_1(self, runner, tmp_path):
        result = runner.invoke(
            main,
            [
                "--data-dir", str(tmp_path / "d"),
                "import",
                "--corpus", str(tmp_path / "missing.json"),
                "--vocab", str(VOCAB_PATH),
            ],
        )
        assert result.exit_code == 1

    def test_unmined_directory_still_answers_precise(self, runner, tmp_path):
        target = tmp_path / "data"
        runner.invoke(
            main,
            [
                "--data-dir", str(target),
                "import",
                "--corpus", str(CORPUS_PATH),
                "--vocab", str(VOCAB_PATH),
            ],
        )
        result = invoke(
            runner, target,
            "retrieve", "--item", "ServiceFeature:Elasticity", "--mode", "precise",
        )
        assert result.exit_code == 0
        assert len(json.loads(result.output)["results"]) == 2
