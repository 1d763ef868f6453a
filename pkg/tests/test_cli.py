"""Tests for the command-line interface."""

import json

import pytest
from typer.testing import CliRunner

from rankfraud.cli import app, main
from rankfraud.storage.filesystem import read_frame
from rankfraud.storage.schema import parse_header

runner = CliRunner()


def _ok(args: list[str]) -> str:
    result = runner.invoke(app, args)
    assert result.exit_code == 0, result.output
    return result.output


def _exit_code(argv: list[str]) -> int:
    with pytest.raises(SystemExit) as info:
        main(argv)
    return int(info.value.code)


class TestFixtureCommands:
    def test_ingest(self, market_manifest, tmp_path):
        _ok(["ingest", str(market_manifest), "--out", str(tmp_path)])
        report = json.loads((tmp_path / "ingest_report.json").read_text())
        assert report["store"]["reviews"] == 6
        provenance = json.loads((tmp_path / "provenance.json").read_text())
        assert provenance["command"] == "ingest"

    def test_graph(self, market_manifest, tmp_path):
        _ok(["graph", str(market_manifest), "--app", "app-a", "--exclude-self-app", "--out", str(tmp_path)])
        lines = (tmp_path / "graph.txt").read_text().splitlines()
        assert parse_header(lines[0])[1] == "coreview-graph"
        assert lines[1] == "app app-a"
        assert "u1 u2 2" in lines

    def test_pcf(self, market_manifest, tmp_path):
        _ok(["pcf", str(market_manifest), "--theta", "1", "--out", str(tmp_path)])
        lines = (tmp_path / "cliques.jsonl").read_text().splitlines()
        records = [json.loads(line) for line in lines[1:]]
        assert [r["members"] for r in records] == [["u1", "u2", "u3"]]
        provenance = json.loads((tmp_path / "provenance.json").read_text())
        assert provenance["config"]["pcf"]["theta"] == 1.0

    def test_chisq(self, market_manifest, tmp_path):
        _ok(["chisq", str(market_manifest), "--out", str(tmp_path)])
        result = json.loads((tmp_path / "chisq.json").read_text())
        assert result["dof"] == 1
        assert result["statistic"] == pytest.approx(2.0)
        assert len(read_frame(tmp_path / "mosaic_cells.tsv")) == 4

    def test_coercive_scan_without_hits(self, market_manifest, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"learn": {"review_learner": "dt"}}), encoding="utf-8")
        out = tmp_path / "scan"
        _ok(["coercive-scan", str(market_manifest), "--config", str(config), "--out", str(out)])
        assert json.loads((out / "review_filter.json").read_text())["model"]["learner"] == "dt"
        assert len((out / "coercive_hits.jsonl").read_text().splitlines()) == 1
        assert read_frame(out / "coercive_apps.tsv").empty

    def test_coercive_scan_reuses_a_trained_filter(self, market_manifest, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"learn": {"review_learner": "dt"}}), encoding="utf-8")
        _ok(["train-review-filter", str(market_manifest), "--config", str(config), "--out", str(tmp_path / "filter")])
        trained = tmp_path / "filter" / "review_filter.json"
        out = tmp_path / "scan"
        _ok(["coercive-scan", str(market_manifest), "--review-filter", str(trained), "--out", str(out)])
        assert not (out / "review_filter.json").exists()
        assert read_frame(out / "coercive_apps.tsv").empty

    def test_label_gba(self, market_manifest, tmp_path):
        _ok(["label-gba", str(market_manifest), "--min-seed-apps", "1", "--out", str(tmp_path)])
        result = json.loads((tmp_path / "gba.json").read_text())
        assert result["associated_accounts"] == ["u1", "u2", "u3"]
        assert result["fraudulent_review_ids"] == ["r1", "r2", "r3"]

    def test_sentiment_crossval(self, tmp_path):
        _ok(["crossval", "--task", "sentiment", "--k", "3", "--out", str(tmp_path)])
        report = json.loads((tmp_path / "eval_report.json").read_text())
        assert report["task"] == "sentiment"
        assert len(report["folds"]) == 3
        assert parse_header((tmp_path / "eval_table.txt").read_text().splitlines()[0])[1] == "eval-table"

    def test_version(self):
        assert "rankfraud v" in _ok(["version"])


class TestExitCodes:
    def test_success(self):
        assert _exit_code(["version"]) == 0

    def test_unknown_command(self):
        assert _exit_code(["bogus"]) == 1

    def test_bad_choice(self, market_manifest, tmp_path):
        argv = ["train-app", str(market_manifest), "--features", str(tmp_path / "f.tsv"), "--task", "spam"]
        assert _exit_code(argv) == 1

    def test_missing_manifest(self, tmp_path):
        assert _exit_code(["ingest", str(tmp_path / "missing.json"), "--out", str(tmp_path / "out")]) == 1

    def test_crossval_needs_manifest(self, tmp_path):
        assert _exit_code(["crossval", "--task", "fraud", "--out", str(tmp_path)]) == 1

    def test_internal_error(self, market_manifest, tmp_path, mocker):
        mocker.patch("rankfraud.irr.chisq.contingency_from_store", side_effect=RuntimeError("boom"))
        assert _exit_code(["chisq", str(market_manifest), "--out", str(tmp_path)]) == 2


class TestGeneratedMarketFlow:
    def test_generate_features_train_predict_report(self, tmp_path):
        gen = tmp_path / "gen.json"
        gen.write_text(
            json.dumps(
                {
                    "fraud_apps": 20,
                    "malware_apps": 20,
                    "benign_apps": 20,
                    "honest_reviewers": 300,
                    "fraud_workers": 30,
                    "apps_per_campaign": 10,
                    "external_apps": 2000,
                    "market_days": 60,
                    "coercive_apps": 2,
                }
            ),
            encoding="utf-8",
        )
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"jobs": 1, "learn": {"review_learner": "dt", "rf": {"n_trees": 20}}}), encoding="utf-8")
        market = tmp_path / "market"
        _ok(["generate", "--gen-config", str(gen), "--seed", "5", "--out", str(market)])
        manifest = market / "manifest.json"
        assert json.loads((market / "truth.json").read_text())["seed"] == 5

        common = ["--config", str(config)]
        _ok(["features", str(manifest), *common, "--out", str(tmp_path / "features")])
        features = tmp_path / "features" / "features.tsv"
        assert len(read_frame(features)) == 60

        _ok(["crossval", str(manifest), "--task", "fraud", "--features", str(features), "--k", "5", *common, "--out", str(tmp_path / "cv")])
        report = json.loads((tmp_path / "cv" / "eval_report.json").read_text())
        assert report["n"] == 40
        assert report["confusion"]["tp"] + report["confusion"]["fn"] == 20

        _ok(["train-app", str(manifest), "--features", str(features), *common, "--out", str(tmp_path / "model")])
        model = tmp_path / "model" / "app_model.json"
        _ok(["predict", "--features", str(features), "--model", str(model), *common, "--out", str(tmp_path / "pred")])
        predictions = tmp_path / "pred" / "predictions.tsv"
        assert list(read_frame(predictions).columns) == ["app_id", "label", "score"]

        _ok(["report", str(manifest), "--predictions", str(predictions), "--features", str(features), *common, "--out", str(tmp_path / "report")])
        density = read_frame(tmp_path / "report" / "category_density.tsv")
        assert density["apps"].sum() == 60
        summary = json.loads((tmp_path / "report" / "clique_summary.json").read_text())
        assert summary["apps"] == 60
        assert summary["with_clique"] >= 0.4
