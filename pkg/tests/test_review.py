"""Tests for review-level analysis: lexicons, sentiment, features, filter, feedback, campaigns."""

import numpy as np
import pytest

from rankfraud.config.defaults import LEXICON_TARGET_SIZES
from rankfraud.core.errors import SchemaMismatchError, ValidationError
from rankfraud.learn.models import train
from rankfraud.review.coercive import coercive_scan, rank_coercive_apps
from rankfraud.review.features import review_features, review_matrix
from rankfraud.review.feedback import feedback_features, fraud_review_impact
from rankfraud.review.filter import (
    ReviewFilterDocument,
    filter_fraud_reviews,
    load_review_filter,
    review_training_set,
    save_review_filter,
)
from rankfraud.review.labeling import guilt_by_association
from rankfraud.review.lexicons import IndicatorLexicons, load_keywords, load_lexicons, validate_lexicons
from rankfraud.review.sentiment import (
    NEGATIVE,
    POSITIVE,
    evaluate_sentiment,
    load_sentiment_corpus,
    train_sentiment,
)
from rankfraud.storage.dataset import DatasetStore
from rankfraud.types.features import REVIEW_FEATURE_NAMES, REVIEW_SCHEMA
from rankfraud.types.market import AppRecord

TINY_CORPUS = [
    ("I love it", POSITIVE),
    ("great game", POSITIVE),
    ("love the graphics", POSITIVE),
    ("great fun", POSITIVE),
    ("terrible crash", NEGATIVE),
    ("awful ads", NEGATIVE),
    ("crash every time", NEGATIVE),
    ("terrible and awful", NEGATIVE),
]


@pytest.fixture(scope="module")
def sentiment():
    return train_sentiment(TINY_CORPUS)


@pytest.fixture
def lexicons() -> IndicatorLexicons:
    return IndicatorLexicons(
        malware=frozenset({"virus"}),
        fraud=frozenset({"download"}),
        benign=frozenset({"love", "fun"}),
    )


class TestLexicons:
    def test_bundled_sizes(self):
        assert load_lexicons().sizes() == LEXICON_TARGET_SIZES

    def test_overlap_is_rejected(self):
        shared = IndicatorLexicons(malware=frozenset({"spy"}), fraud=frozenset({"spy"}), benign=frozenset())
        with pytest.raises(ValidationError, match="spy"):
            validate_lexicons(shared)

    def test_keywords_are_phrases(self):
        keywords = load_keywords()
        assert ("rate", "five", "stars") in keywords
        assert all(isinstance(k, tuple) and k for k in keywords)


class TestSentiment:
    def test_classifies_obvious_sentences(self, sentiment):
        assert sentiment.classify("love this great app") == POSITIVE
        assert sentiment.classify("awful crash") == NEGATIVE

    def test_tie_is_negative(self, sentiment):
        # balanced priors and no known tokens
        assert sentiment.classify("xyzzy") == NEGATIVE

    def test_sentence_shares(self, sentiment):
        assert sentiment.sentence_shares("I love it. Terrible crash!") == (50.0, 50.0)
        assert sentiment.sentence_shares("") == (0.0, 0.0)

    def test_needs_both_classes(self):
        with pytest.raises(ValidationError):
            train_sentiment([("good", POSITIVE), ("fine", POSITIVE)])

    def test_bundled_corpus(self):
        corpus = load_sentiment_corpus()
        assert {label for _, label in corpus} == {POSITIVE, NEGATIVE}

    def test_bad_corpus_line(self, tmp_path):
        path = tmp_path / "corpus.tsv"
        path.write_text("pos\tfine\nmaybe\tunsure\n", encoding="utf-8")
        with pytest.raises(ValidationError, match=":2:"):
            load_sentiment_corpus(path)

    def test_evaluation_covers_every_sentence(self):
        corpus = TINY_CORPUS * 3
        report = evaluate_sentiment(corpus, k=3, seed=1)
        assert report.n == len(corpus)
        assert sum(f.test_size for f in report.folds) == len(corpus)
        assert report.confusion.total == len(corpus)


class TestReviewFeatures:
    def test_profile_backed_review(self, store, sentiment):
        f = review_features(store, store.reviews["r1"], sentiment)
        assert f.expertise == 1
        assert f.bias == 1
        assert f.money_paid == pytest.approx(1.99)
        assert (f.liked_count, f.follower_count) == (3, 2)
        assert f.rating == 5
        assert f.rating_percentile == 50.0
        assert not f.imputed_profile

    def test_imputed_profile(self, store, sentiment):
        f = review_features(store, store.reviews["r3"], sentiment)
        assert f.imputed_profile
        assert f.money_paid == 0.0
        assert f.rating_percentile == 0.0

    def test_matrix_shape(self, store, sentiment):
        reviews = list(store.reviews_of("app-a"))
        assert review_matrix(store, reviews, sentiment).shape == (3, len(REVIEW_FEATURE_NAMES))
        assert review_matrix(store, [], sentiment).shape == (0, len(REVIEW_FEATURE_NAMES))


class TestReviewFilter:
    def test_training_set_from_labels(self, store, sentiment):
        x, y, ids = review_training_set(store, sentiment)
        assert ids == ["r1", "r2"]
        assert y.tolist() == [0, 1]
        assert x.shape == (2, len(REVIEW_FEATURE_NAMES))

    def test_per_account_cap(self, make_review, sentiment):
        from rankfraud.types.market import LabelSet

        app = AppRecord(app_id="a", developer_id="d")
        reviews = [make_review("a", "bot", day) for day in range(4)] + [make_review("a", "human", 0)]
        labels = LabelSet(reviews={**{r.review_id: "fraudulent" for r in reviews[:4]}, reviews[4].review_id: "genuine"})
        store = DatasetStore.build([app], reviews=reviews, labels=labels)
        _, y, ids = review_training_set(store, sentiment, max_fraud_per_account=2)
        assert int(y.sum()) == 2
        assert ids[:2] == [reviews[0].review_id, reviews[1].review_id]

    def test_round_trip_and_partition(self, store, sentiment, tmp_path):
        x, y, _ = review_training_set(store, sentiment)
        model = train(x, y, "dt", feature_names=REVIEW_FEATURE_NAMES, schema_version=REVIEW_SCHEMA)
        path = save_review_filter(ReviewFilterDocument(model=model, sentiment=sentiment), tmp_path / "filter.json")
        review_filter = load_review_filter(path).to_filter()
        partition = filter_fraud_reviews(store, "app-a", review_filter)
        assert len(partition.genuine) + len(partition.fraudulent) == 3

    def test_schema_mismatch(self, store, sentiment, tmp_path):
        x, y, _ = review_training_set(store, sentiment)
        model = train(x, y, "dt", schema_version="app-v1")
        path = save_review_filter(ReviewFilterDocument(model=model, sentiment=sentiment), tmp_path / "filter.json")
        with pytest.raises(SchemaMismatchError):
            load_review_filter(path)


class TestFeedback:
    def test_indicator_shares_and_impact(self, store, lexicons):
        all_reviews = list(store.reviews_of("app-a"))
        genuine = [store.reviews["r1"], store.reviews["r3"]]
        f = feedback_features(genuine, all_reviews, lexicons)
        assert f.mal_w == 50.0
        assert f.fraud_w == 0.0
        assert f.good_w == 50.0
        assert f.fri == pytest.approx(2 / 3)
        assert not f.degenerate

    def test_no_genuine_reviews(self, store, lexicons):
        f = feedback_features([], list(store.reviews_of("app-a")), lexicons)
        assert f.degenerate
        assert (f.mal_w, f.fraud_w, f.good_w) == (0.0, 0.0, 0.0)

    def test_impact_is_zero_when_nothing_filtered(self, store):
        reviews = list(store.reviews_of("app-a"))
        assert fraud_review_impact(reviews, reviews) == 0.0
        assert fraud_review_impact([], []) == 0.0


class _FlagNone:
    def flags(self, store, reviews):
        return np.zeros(len(reviews), dtype=int)


class _FlagFirst:
    """Marks the first review of every batch fraudulent."""

    def flags(self, store, reviews):
        return np.asarray([1] + [0] * (len(reviews) - 1), dtype=int)


class TestCoercive:
    @pytest.fixture
    def campaign_store(self, make_review):
        apps = [AppRecord(app_id=a, developer_id="d") for a in ("x", "y", "z")]
        reviews = [
            make_review("x", "u1", 0, 1, "They make you rate five stars to get coins"),
            make_review("x", "u2", 1, 2, "had to RATE five stars!!"),
            make_review("x", "u3", 2, 5, "nice"),
            make_review("y", "u1", 0, 3, "rate five stars or no bonus"),
            make_review("z", "u1", 0, 3, "five stars rate"),
        ]
        return DatasetStore.build(apps, reviews=reviews)

    def test_scan_and_rank(self, campaign_store):
        hits = coercive_scan(campaign_store, ["rate five stars"], _FlagNone())
        assert [h.app_id for h in hits] == ["x", "x", "y"]
        assert hits[0].keywords == ["rate five stars"]
        assert [a.app_id for a in rank_coercive_apps(hits, min_reviews=2)] == ["x"]
        assert len(rank_coercive_apps(hits, min_reviews=1)) == 2

    def test_filtered_reviews_do_not_count(self, campaign_store):
        hits = coercive_scan(campaign_store, [("rate", "five", "stars")], review_filter=_FlagFirst())
        assert [h.app_id for h in hits] == ["x"]

    def test_needs_keywords(self, campaign_store):
        with pytest.raises(ValidationError):
            coercive_scan(campaign_store, ["", ()], _FlagNone())


class TestGuiltByAssociation:
    def test_accounts_over_threshold(self, store):
        result = guilt_by_association(store, ["app-a", "app-b"], min_seed_apps=2)
        assert result.associated_accounts == ["u1", "u2"]
        assert result.fraudulent_review_ids == ["r1", "r2", "r4", "r5"]

    def test_seed_accounts_are_kept_apart(self, store):
        result = guilt_by_association(store, ["app-a", "app-b"], ["u3"], min_seed_apps=2)
        assert result.seed_accounts == ["u3"]
        assert result.associated_accounts == ["u1", "u2"]
        assert result.fraudulent_review_ids == ["r1", "r2", "r3", "r4", "r5"]

    def test_unknown_seed_app(self, store):
        from rankfraud.core.errors import NotFoundError

        with pytest.raises(NotFoundError):
            guilt_by_association(store, ["nope"])
