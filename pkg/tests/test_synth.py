"""Tests for the synthetic market generator."""

import json

import pytest

from rankfraud.core.errors import ConfigError, ValidationError
from rankfraud.graph.coreview import build_graph
from rankfraud.storage.ingest import ingest
from rankfraud.synth.generator import GenConfig, MarketGenerator, check_feasible, generate, load_gen_config, write_market


class TestGenConfig:
    def test_defaults_are_feasible(self):
        check_feasible(GenConfig())

    @pytest.mark.parametrize(
        "overrides",
        [
            {"workers_per_campaign": 2},
            {"workers_per_campaign": 31},
            {"apps_per_campaign": 41},
            {"campaigns": 1},
            {"window_days": 61},
            {"coercive_apps": 21},
            {"honest_reviewers": 10},
        ],
    )
    def test_infeasible_shapes(self, small_gen_config, overrides):
        with pytest.raises(ValidationError, match="Infeasible"):
            check_feasible(small_gen_config(**overrides))

    def test_generator_checks_feasibility(self, small_gen_config):
        with pytest.raises(ValidationError):
            MarketGenerator(small_gen_config(workers_per_campaign=2))

    def test_field_validation(self):
        with pytest.raises(ValueError):
            GenConfig(ramp_probability=1.5)
        with pytest.raises(ValueError):
            GenConfig(fraud_apps=0, malware_apps=0, benign_apps=0)
        with pytest.raises(ValueError):
            GenConfig(honest_history=(5, 2))

    def test_campaign_count(self, small_gen_config):
        assert small_gen_config().campaign_count() == 4
        assert small_gen_config(campaigns=6).campaign_count() == 6
        assert small_gen_config(fraud_apps=0, malware_apps=0).campaign_count() == 0

    def test_load_gen_config(self, tmp_path):
        path = tmp_path / "gen.json"
        path.write_text(json.dumps({"seed": 5, "fraud_apps": 3}), encoding="utf-8")
        assert load_gen_config(path).seed == 5
        with pytest.raises(ConfigError):
            load_gen_config(tmp_path / "missing.json")
        path.write_text(json.dumps({"unknown_knob": 1}), encoding="utf-8")
        with pytest.raises(ConfigError):
            load_gen_config(path)


class TestGeneratedMarket:
    def test_class_counts(self, small_market):
        labels = small_market.labels
        assert len(labels.apps_with("fraudulent")) == 20
        assert len(labels.apps_with("malware")) == 20
        assert len(labels.apps_with("benign")) == 20

    def test_every_review_is_labeled(self, small_market):
        store = small_market.store
        assert set(store.labels.reviews) == set(store.reviews)
        for review_id in store.labels.reviews_with("fraudulent"):
            assert store.reviews[review_id].reviewer_id.startswith("worker-")

    def test_planted_members(self, small_market):
        labels = small_market.labels
        truth = small_market.truth
        assert set(truth.planted_members) == set(labels.apps_with("fraudulent", "malware"))
        assert all(len(m) >= 3 for m in truth.planted_members.values())

    def test_coercive_apps_are_fraudulent(self, small_market):
        coercive = small_market.truth.coercive_apps
        assert len(coercive) == 2
        assert set(coercive) <= set(small_market.labels.apps_with("fraudulent"))

    def test_campaign_workers_are_strongly_tied(self, small_market):
        campaign = small_market.truth.campaigns[0]
        graph = build_graph(small_market.store, campaign.apps[0])
        u, v = campaign.workers[:2]
        assert graph.weight(u, v) >= len(campaign.apps)

    def test_campaign_reviews_share_a_window(self, small_market):
        store = small_market.store
        campaign = small_market.truth.campaigns[0]
        app_id = campaign.apps[0]
        days = sorted({r.date for r in store.reviews_of(app_id) if r.reviewer_id in campaign.workers})
        assert (days[-1] - days[0]).days < 2


class TestDeterminism:
    def test_same_seed_same_market(self, small_gen_config):
        a, _ = generate(small_gen_config())
        b, _ = generate(small_gen_config())
        assert a.canonical_dump() == b.canonical_dump()

    def test_seed_changes_market(self, small_gen_config):
        a, _ = generate(small_gen_config(seed=1))
        b, _ = generate(small_gen_config(seed=2))
        assert a.canonical_dump() != b.canonical_dump()

    def test_written_files_are_byte_identical(self, small_gen_config, tmp_path):
        first = write_market(MarketGenerator(small_gen_config()).run(), tmp_path / "one")
        second = write_market(MarketGenerator(small_gen_config()).run(), tmp_path / "two")
        for path in sorted(first.parent.iterdir()):
            assert path.read_bytes() == (second.parent / path.name).read_bytes()

    def test_written_market_ingests(self, small_market, tmp_path):
        manifest = write_market(small_market, tmp_path / "market")
        assert ingest(manifest).canonical_dump() == small_market.store.canonical_dump()
        truth = json.loads((tmp_path / "market" / "truth.json").read_text())
        assert truth["seed"] == 3
