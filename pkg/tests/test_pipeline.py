"""Tests for the stage pipeline and the run engine."""

import json

import pytest

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.context import RunContext, create_run_context
from rankfraud.core.engine import RankFraudEngine
from rankfraud.core.errors import ModelError, PipelineError, ValidationError
from rankfraud.core.pipeline import Pipeline, PipelineStage


class Recorder(PipelineStage):
    def __init__(self, name: str, log: list[str], fail: Exception | None = None) -> None:
        self.name = name
        self.description = name
        self.log = log
        self.fail = fail

    def execute(self, ctx: RunContext) -> RunContext:
        self.log.append(self.name)
        if self.fail is not None:
            raise self.fail
        return ctx


@pytest.fixture
def ctx(market_manifest) -> RunContext:
    return create_run_context(RankFraudConfig(), market_manifest)


class TestPipeline:
    def test_runs_in_order_with_hooks(self, ctx):
        log: list[str] = []
        pipeline = Pipeline().add_stage(Recorder("a", log)).add_stage(Recorder("b", log))

        def hook(c: RunContext) -> RunContext:
            log.append("hook")
            return c

        pipeline.add_hook("a", hook)
        result = pipeline.run(ctx)
        assert log == ["a", "hook", "b"]
        assert result.status == "completed"

    def test_stop_after(self, ctx):
        log: list[str] = []
        pipeline = Pipeline().add_stage(Recorder("a", log)).add_stage(Recorder("b", log))
        assert pipeline.run(ctx, stop_after="a").status == "completed"
        assert log == ["a"]

    def test_unknown_stop_stage(self, ctx):
        pipeline = Pipeline().add_stage(Recorder("a", []))
        with pytest.raises(PipelineError, match="unknown stage"):
            pipeline.run(ctx, stop_after="nope")

    def test_domain_errors_pass_through(self, ctx):
        pipeline = Pipeline().add_stage(Recorder("a", [], ValidationError("bad input")))
        with pytest.raises(ValidationError):
            pipeline.run(ctx)
        assert ctx.status == "failed"
        assert ctx.errors == ["[a] bad input"]

    def test_other_errors_are_wrapped(self, ctx):
        pipeline = Pipeline().add_stage(Recorder("a", [], RuntimeError("boom")))
        with pytest.raises(PipelineError) as info:
            pipeline.run(ctx)
        assert info.value.stage == "a"

    def test_run_id_follows_config(self, market_manifest):
        a = create_run_context(RankFraudConfig(seed=1), market_manifest)
        b = create_run_context(RankFraudConfig(seed=1, jobs=4), market_manifest)
        c = create_run_context(RankFraudConfig(seed=2), market_manifest)
        assert a.run_id == b.run_id != c.run_id


class TestEngine:
    def test_stop_after_ingest(self, market_manifest, tmp_path):
        engine = RankFraudEngine(RankFraudConfig(), market_manifest, out_dir=tmp_path, stop_after="ingest")
        result = engine.run()
        assert result.store is not None
        report = json.loads((tmp_path / "ingest_report.json").read_text())
        assert len(report["rejected"]) == 2
        provenance = json.loads((tmp_path / "provenance.json").read_text())
        assert provenance["status"] == "completed"
        assert provenance["command"] == "run"
        assert provenance["run_id"] == result.run_id

    def test_review_filter_is_saved(self, market_manifest, tmp_path):
        config = RankFraudConfig(learn={"review_learner": "dt"})
        RankFraudEngine(config, market_manifest, out_dir=tmp_path, stop_after="review-filter").run()
        assert (tmp_path / "review_filter.json").exists()

    def test_full_run_on_fixture_market(self, market_manifest, tmp_path):
        config = RankFraudConfig(jobs=1, learn={"review_learner": "dt", "rf": {"n_trees": 10}})
        result = RankFraudEngine(config, market_manifest, out_dir=tmp_path).run()
        assert result.status == "completed"
        assert result.prediction is not None
        assert result.prediction.ids == ["app-a", "app-b", "app-c"]
        for name in ("review_filter.json", "features.tsv", "app_model.json", "predictions.tsv", "category_density.tsv", "clique_summary.json"):
            assert (tmp_path / name).exists(), name
        # too few labeled apps to cross-validate
        assert not (tmp_path / "eval_reports.json").exists()

    def test_failure_is_recorded(self, market_manifest, tmp_path):
        engine = RankFraudEngine(RankFraudConfig(jobs=1), market_manifest, out_dir=tmp_path / "run", review_filter_path=tmp_path / "missing.json")
        with pytest.raises(ModelError):
            engine.run()
        provenance = json.loads((tmp_path / "run" / "provenance.json").read_text())
        assert provenance["status"] == "failed"
        assert provenance["errors"]

    def test_default_output_location(self, market_manifest, tmp_path):
        engine = RankFraudEngine(RankFraudConfig(output_dir=str(tmp_path)), market_manifest)
        assert engine.storage.base_dir == tmp_path / engine.ctx.run_id
