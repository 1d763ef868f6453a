"""Tests for per-app feature assembly and the feature matrix file."""

import datetime as dt

import numpy as np
import pytest

from rankfraud.config.schema import RankFraudConfig
from rankfraud.core.errors import NotFoundError, SchemaMismatchError
from rankfraud.learn.models import ModelClassifier, train
from rankfraud.permissions.catalog import load_catalog
from rankfraud.review.filter import ReviewFilter, review_training_set
from rankfraud.review.lexicons import load_lexicons
from rankfraud.review.sentiment import NEGATIVE, POSITIVE, train_sentiment
from rankfraud.stages.extraction.assemble import EXTRACTOR_MAP, assemble, assemble_all, feature_frame, load_feature_matrix
from rankfraud.stages.extraction.extractors.base import AppInputs, ExtractorResult, FeatureModels
from rankfraud.stages.extraction.extractors.coreg import clique_stats
from rankfraud.stages.extraction.extractors.irr import InterReviewExtractor
from rankfraud.stages.extraction.stage import save_features
from rankfraud.storage.filesystem import FileSystemStorage
from rankfraud.types.features import APP_FEATURE_NAMES, AppFeatures
from rankfraud.types.graph import PseudoClique

DAY = dt.date(2015, 3, 1)


@pytest.fixture
def models(store) -> FeatureModels:
    sentiment = train_sentiment([("love it", POSITIVE), ("great", POSITIVE), ("awful", NEGATIVE), ("crash", NEGATIVE)])
    x, y, _ = review_training_set(store, sentiment)
    # Two training rows make a single tied leaf, so every review passes as genuine.
    classifier = ModelClassifier(train(x, y, "dt"))
    return FeatureModels(
        review_filter=ReviewFilter(classifier, sentiment),
        lexicons=load_lexicons(),
        catalog=load_catalog(),
    )


def _clique(members: list[str], density: float) -> PseudoClique:
    return PseudoClique(app_id="a", members=members, density=density, total_weight=0, seed_day=DAY, day_span=(DAY, DAY))


class TestCliqueStats:
    def test_summary_statistics(self):
        stats = clique_stats([_clique(["a", "b", "c"], 4.0), _clique(["c", "d", "e", "f", "g"], 6.0)], 10)
        assert stats["nCliques"] == 2.0
        assert stats["maxRho"] == 6.0
        assert stats["medRho"] == 5.0
        assert stats["sdRho"] == pytest.approx(1.0)
        assert stats["maxCliqueSizeN"] == pytest.approx(0.5)
        assert stats["medCliqueSizeN"] == pytest.approx(0.4)
        assert stats["sdCliqueSizeN"] == pytest.approx(0.1)
        assert stats["inCliqueSize"] == pytest.approx(0.7)

    def test_no_cliques(self):
        stats = clique_stats([], 12)
        assert len(stats) == 8
        assert set(stats.values()) == {0.0}


class TestInterReviewExtractor:
    def _inputs(self, store, review_count: int, genuine: int) -> AppInputs:
        reviews = store.reviews_of("app-a")
        latest = store.snapshots_of("app-a")[-1].model_copy(update={"review_count": review_count})
        return AppInputs(
            store=store,
            app_id="app-a",
            reviews=reviews,
            snapshots=(latest,),
            genuine=list(reviews[:genuine]),
            fraudulent=list(reviews[genuine:]),
        )

    def test_review_bucket_uses_genuine_count(self, store, models):
        # 120 published reviews sit in (100,500]; the 3 genuine ones sit in (1,5].
        result = InterReviewExtractor().extract(self._inputs(store, 120, 3), models, RankFraudConfig())
        assert result.values["i1rv1"] == 500.0
        assert result.values["i2rv2"] == 200.0
        assert result.values["i1rt1"] == 50.0

    def test_filtered_reviews_move_the_bucket(self, store, models):
        result = InterReviewExtractor().extract(self._inputs(store, 3, 0), models, RankFraudConfig())
        assert result.values["i1rv1"] == 500.0
        assert result.values["i2rv2"] == 1000.0


class TestAssemble:
    def test_fixture_app(self, store, models):
        row = assemble(store, "app-a", models, RankFraudConfig())
        f = row.features
        assert f.n_cliques == 0.0
        assert f.mal_w == pytest.approx(100 / 3)
        assert f.fraud_w == pytest.approx(100 / 3)
        assert f.good_w == pytest.approx(200 / 3)
        assert f.fri == 0.0
        assert (f.i1rt1, f.i2rt2, f.i1rv1, f.i2rv2) == (50.0, 20.0, 500.0, 200.0)
        assert (f.perm_ct, f.danger_ct, f.ramp_ct, f.danger_ramp) == (3.0, 3.0, 1.0, 2.0)
        assert (f.avg_rating, f.review_ct, f.rating_ct, f.install_lower) == (4.0, 3.0, 40.0, 500.0)
        assert row.flags == ["coreg:no_cliques", "irr:spikes_insufficient_data"]

    def test_low_theta_finds_the_clique(self, store, models):
        config = RankFraudConfig(pcf={"theta": 1.0})
        f = assemble(store, "app-a", models, config).features
        assert f.n_cliques == 1.0
        assert f.max_rho == pytest.approx(5 / 3)
        assert f.max_clique_size_n == 1.0
        assert f.in_clique_size == 1.0

    def test_app_without_snapshots(self, store, models):
        row = assemble(store, "app-b", models, RankFraudConfig())
        assert {"general:no_snapshot", "irr:no_snapshot", "jh:no_snapshot"} <= set(row.flags)
        assert row.features.avg_rating == 4.5
        assert row.features.install_lower == 0.0

    def test_unknown_app(self, store, models):
        with pytest.raises(NotFoundError):
            assemble(store, "app-z", models, RankFraudConfig())

    def test_nonfinite_values_become_zero(self, store, models, mocker):
        class Broken:
            name = "general"

            def extract(self, inputs, models, config):
                return ExtractorResult(values={"avgRating": float("inf"), "reviewCt": float("nan")})

        mocker.patch.dict(EXTRACTOR_MAP, {"general": Broken})
        row = assemble(store, "app-c", models, RankFraudConfig())
        assert row.features.avg_rating == 0.0
        assert row.features.review_ct == 0.0
        assert {"nonfinite:avgRating", "nonfinite:reviewCt"} <= set(row.flags)

    def test_vector_follows_canonical_order(self, store, models):
        f = assemble(store, "app-a", models, RankFraudConfig()).features
        assert len(f.vector()) == 26
        assert f.vector()[APP_FEATURE_NAMES.index("permCt")] == 3.0
        assert AppFeatures.model_validate(f.model_dump(by_alias=True)) == f


class TestAssembleAll:
    def test_rows_are_sorted(self, store, models):
        rows = assemble_all(store, ["app-c", "app-a", "app-b", "app-a"], models, RankFraudConfig(), jobs=1)
        assert [r.app_id for r in rows] == ["app-a", "app-b", "app-c"]

    def test_parallel_matches_serial(self, store, models):
        config = RankFraudConfig()
        serial = assemble_all(store, list(store.apps), models, config, jobs=1)
        parallel = assemble_all(store, list(store.apps), models, config, jobs=2)
        assert [r.model_dump() for r in parallel] == [r.model_dump() for r in serial]


class TestFeatureMatrix:
    def test_save_and_load(self, store, models, tmp_path):
        rows = assemble_all(store, list(store.apps), models, RankFraudConfig(), jobs=1)
        storage = FileSystemStorage(tmp_path)
        save_features(storage, rows)
        ids, x = load_feature_matrix(tmp_path / "features.tsv")
        assert ids == ["app-a", "app-b", "app-c"]
        np.testing.assert_allclose(x, np.asarray([r.features.vector() for r in rows]))
        flagged = (tmp_path / "feature_flags.jsonl").read_text().splitlines()
        assert flagged[0].startswith("# rankfraud-format:")
        assert len(flagged) == 1 + sum(1 for r in rows if r.flags)

    def test_column_contract(self, store, models, tmp_path):
        rows = assemble_all(store, ["app-a"], models, RankFraudConfig(), jobs=1)
        frame = feature_frame(rows).drop(columns=["FRI"])
        FileSystemStorage(tmp_path).save_frame("features.tsv", "app-features", frame)
        with pytest.raises(SchemaMismatchError):
            load_feature_matrix(tmp_path / "features.tsv")
