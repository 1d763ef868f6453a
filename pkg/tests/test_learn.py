"""Tests for the learners, metrics, cross-validation and the transfer experiment."""

import numpy as np
import pytest
from scipy.stats import ttest_rel

from rankfraud.config.schema import ForestParams, LearnConfig, MlpParams, TreeParams
from rankfraud.core.errors import ModelError, SchemaMismatchError, ValidationError
from rankfraud.learn.experiments import task_rows, transfer_rate
from rankfraud.learn.forest import fit_forest, forest_votes, tree_seeds
from rankfraud.learn.metrics import confusion
from rankfraud.learn.mlp import Network, default_hidden_units
from rankfraud.learn.models import ModelClassifier, create_learner, dump_model, load_model, predict, save_model, train
from rankfraud.learn.tree import extra_errors, fit_tree, tree_proba
from rankfraud.learn.validation import cross_validate, fold_seeds
from rankfraud.types.evaluation import ConfusionMatrix
from rankfraud.types.market import LabelSet
from rankfraud.types.model import TreeArrays

# Small data needs per-row updates for the perceptron to converge in a few hundred epochs.
FAST = LearnConfig(rf=ForestParams(n_trees=15), mlp=MlpParams(epochs=300, batch_size=1))


def _blobs(n: int = 40, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Two well separated clusters in the unit square."""
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 2
    x = np.where(y[:, None] == 1, rng.uniform(0.7, 1.0, size=(n, 2)), rng.uniform(0.0, 0.3, size=(n, 2)))
    return x, y


def _noisy(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Two informative and two irrelevant features with label noise."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 4))
    y = (x[:, 0] + x[:, 1] + rng.normal(scale=0.8, size=n) > 0).astype(int)
    return x, y


def _structure(tree: TreeArrays) -> list[tuple[int, float, int | None]]:
    """Preorder (feature, threshold, leaf class) per node; class is None for internal nodes."""
    return [
        (f, t, None if f >= 0 else int(np.argmax(c)))
        for f, t, c in zip(tree.feature, tree.threshold, tree.counts, strict=True)
    ]


class TestMetrics:
    def test_rates(self):
        cm = ConfusionMatrix(tp=8, fn=2, tn=27, fp=3)
        assert cm.fnr == pytest.approx(20.0)
        assert cm.fpr == pytest.approx(10.0)
        assert cm.accuracy == pytest.approx(87.5)

    def test_empty_matrix(self):
        cm = ConfusionMatrix()
        assert (cm.fpr, cm.fnr, cm.accuracy) == (0.0, 0.0, 0.0)

    def test_confusion_counts(self):
        cm = confusion([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
        assert (cm.tp, cm.fn, cm.tn, cm.fp) == (2, 1, 1, 1)
        assert confusion([], []).total == 0

    def test_addition(self):
        total = ConfusionMatrix(tp=1, tn=2) + ConfusionMatrix(fp=3, fn=4)
        assert total.model_dump(include={"tp", "fp", "tn", "fn"}) == {"tp": 1, "fp": 3, "tn": 2, "fn": 4}


class TestTree:
    def test_pessimistic_error_bound(self):
        # 20 rows with 10 misclassified at 25% confidence
        assert 10 + extra_errors(20, 10, 0.25) == pytest.approx(11.98, abs=0.01)

    def test_error_bound_without_errors(self):
        assert extra_errors(4, 0, 0.25) == pytest.approx(4 * (1 - 0.25 ** (1 / 4)))
        assert extra_errors(0, 0, 0.25) == 0.0

    def test_pure_data_is_a_leaf(self):
        x = np.arange(10, dtype=float)[:, None]
        tree = fit_tree(x, np.zeros(10, dtype=int))
        assert tree.node_count == 1

    def test_threshold_split(self):
        x = np.arange(20, dtype=float)[:, None]
        y = (x[:, 0] >= 10).astype(int)
        tree = fit_tree(x, y, min_leaf=1)
        assert tree.feature[0] == 0
        assert tree.threshold[0] == pytest.approx(9.5)
        assert tree_proba(tree, np.asarray([[3.0], [15.0]])).tolist() == [[1.0, 0.0], [0.0, 1.0]]

    def test_duplicating_rows_keeps_the_default_tree(self):
        x = np.arange(12, dtype=float)[:, None]
        y = np.asarray([0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0])
        single = fit_tree(x, y)
        double = fit_tree(np.vstack([x, x]), np.concatenate([y, y]))
        assert _structure(single) == [(0, 3.5, None), (-1, 0.0, 0), (0, 7.5, None), (-1, 0.0, 1), (-1, 0.0, 0)]
        assert _structure(double) == _structure(single)
        np.testing.assert_array_equal(double.counts, 2 * np.asarray(single.counts))

    def test_duplicating_rows_keeps_the_grown_tree(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(60, 3))
        y = (x[:, 0] + 0.5 * x[:, 1] + rng.normal(scale=0.4, size=60) > 0).astype(int)
        single = fit_tree(x, y, min_leaf=1, prune_confidence=None)
        double = fit_tree(np.vstack([x, x]), np.concatenate([y, y]), min_leaf=1, prune_confidence=None)
        assert single.node_count > 3
        assert _structure(double) == _structure(single)

    def test_pruning_depends_on_row_counts(self):
        # The error bound is absolute: a weak split pruned on 10 rows survives on the same rows twice.
        x = np.arange(10, dtype=float)[:, None]
        y = np.asarray([0, 1, 0, 0, 1, 1, 0, 1, 1, 1])
        assert fit_tree(x, y, max_depth=1, prune_confidence=None).threshold[0] == 6.5
        assert fit_tree(x, y, max_depth=1).node_count == 1
        double = fit_tree(np.vstack([x, x]), np.concatenate([y, y]), max_depth=1)
        assert _structure(double) == [(0, 6.5, None), (-1, 0.0, 0), (-1, 0.0, 1)]


class TestMlp:
    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(2)
        net = Network.init(4, 3, 2, rng)
        for p in net.params():
            p += rng.normal(scale=0.5, size=p.shape)
        x = rng.uniform(size=(7, 4))
        targets = np.eye(2)[rng.integers(0, 2, size=7)]
        _, grads = net.loss_and_gradients(x, targets)
        eps = 1e-6
        for param, grad in zip(net.params(), grads, strict=True):
            numeric = np.zeros_like(param)
            for idx in np.ndindex(param.shape):
                old = param[idx]
                param[idx] = old + eps
                up, _ = net.loss_and_gradients(x, targets)
                param[idx] = old - eps
                down, _ = net.loss_and_gradients(x, targets)
                param[idx] = old
                numeric[idx] = (up - down) / (2 * eps)
            np.testing.assert_allclose(grad, numeric, rtol=1e-5, atol=1e-9)

    def test_default_hidden_units(self):
        assert default_hidden_units(21) == 12
        assert default_hidden_units(10) == 6


class TestLearners:
    @pytest.mark.parametrize("kind", ["dt", "rf", "mlp"])
    def test_separable_data(self, kind):
        x, y = _blobs()
        model = train(x, y, kind, seed=1, config=FAST)
        result = predict(model, x)
        assert result.labels == y.tolist()
        assert np.allclose(np.asarray(result.scores).sum(axis=1), 1.0)

    @pytest.mark.parametrize("kind", ["rf", "mlp"])
    def test_same_seed_same_model(self, kind):
        x, y = _blobs(seed=3)
        assert dump_model(train(x, y, kind, seed=7, config=FAST)) == dump_model(train(x, y, kind, seed=7, config=FAST))

    def test_rf_records_feature_subset_size(self):
        x, y = _blobs()
        model = train(x, y, "rf", config=FAST)
        assert model.hyperparameters["max_features"] == 2
        assert len(model.trees) == 15

    def test_unpruned_tree_option(self):
        x, y = _blobs()
        model = train(x, y, "dt", config=LearnConfig(dt=TreeParams(prune=False)))
        assert model.hyperparameters["prune"] is False

    def test_unknown_learner(self):
        with pytest.raises(ValidationError):
            create_learner("svm")

    def test_single_class(self):
        with pytest.raises(ValidationError):
            train(np.ones((4, 2)), np.zeros(4, dtype=int), "dt")

    def test_nonfinite_values(self):
        x, y = _blobs()
        x[0, 0] = np.nan
        with pytest.raises(ValidationError):
            train(x, y, "dt")


class TestForest:
    def test_single_tree_forest_matches_its_tree(self):
        x, y = _noisy(120, seed=5)
        config = LearnConfig(rf=ForestParams(n_trees=1, max_features=4))
        model = train(x, y, "rf", seed=9, config=config)

        rng = np.random.default_rng(tree_seeds(9, 1)[0])
        sample = rng.integers(0, len(y), size=len(y))
        tree = fit_tree(x[sample], y[sample], min_leaf=1, prune_confidence=None)
        assert model.trees == [tree]

        as_tree = model.model_copy(update={"learner": "dt"})
        assert predict(model, x).labels == predict(as_tree, x).labels

    def test_unanimous_trees_give_full_score(self):
        leaf = TreeArrays(feature=[-1], threshold=[0.0], left=[-1], right=[-1], counts=[[1.0, 4.0]])
        assert forest_votes([leaf] * 7, np.zeros((3, 2))).tolist() == [1.0, 1.0, 1.0]

        x, y = _blobs()
        model = train(x, y, "rf", seed=2, config=FAST)
        assert predict(model, np.asarray([[1.0, 1.0], [0.0, 0.0]])).scores == [[0.0, 1.0], [1.0, 0.0]]

    @pytest.mark.slow
    def test_forest_beats_single_trees_on_held_out_data(self):
        forest_acc, member_acc, tree_acc = [], [], []
        for seed in range(20):
            x, y = _noisy(400, seed=seed)
            x_train, y_train, x_test, y_test = x[:200], y[:200], x[200:], y[200:]
            trees = fit_forest(x_train, y_train, seed=seed, n_trees=25)
            forest_acc.append(np.mean((forest_votes(trees, x_test) > 0.5) == y_test))
            member_acc.append(np.mean([np.mean(np.argmax(tree_proba(t, x_test), axis=1) == y_test) for t in trees]))
            dt_model = train(x_train, y_train, "dt", seed=seed)
            tree_acc.append(np.mean(np.asarray(predict(dt_model, x_test).labels) == y_test))
        assert np.mean(forest_acc) > np.mean(member_acc)
        assert ttest_rel(forest_acc, member_acc, alternative="greater").pvalue < 0.01
        assert np.mean(forest_acc) >= np.mean(tree_acc)


class TestModelFiles:
    def test_save_and_load(self, tmp_path):
        x, y = _blobs()
        model = train(x, y, "dt", feature_names=["a", "b"], schema_version="app-v1")
        loaded = load_model(save_model(model, tmp_path / "model.json"))
        assert loaded == model
        assert predict(loaded, x, schema_version="app-v1").labels == predict(model, x).labels

    def test_schema_mismatch(self):
        x, y = _blobs()
        model = train(x, y, "dt", schema_version="app-v1")
        with pytest.raises(SchemaMismatchError):
            predict(model, x, schema_version="review-v1")

    def test_feature_count_mismatch(self):
        x, y = _blobs()
        clf = ModelClassifier(train(x, y, "dt"))
        with pytest.raises(SchemaMismatchError):
            clf.predict(np.ones((2, 3)))

    def test_missing_and_corrupt_files(self, tmp_path):
        with pytest.raises(ModelError):
            load_model(tmp_path / "none.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{}", encoding="utf-8")
        with pytest.raises(ModelError):
            load_model(bad)


class TestCrossValidation:
    def test_every_row_is_tested_once(self, mocker):
        x, y = _blobs(30)
        learner = mocker.Mock()
        learner.name = "stub"
        learner.fit.return_value.predict.side_effect = lambda rows: np.ones(len(rows), dtype=int)
        report = cross_validate(x, y, lambda: learner, k=5, seed=0, task="fraud")
        assert learner.fit.call_count == 5
        assert sum(f.test_size for f in report.folds) == 30
        # always predicting positive: every positive caught, every negative a false alarm
        assert (report.confusion.tp, report.confusion.fp) == (15, 15)
        assert report.fnr == 0.0
        assert report.fpr == 100.0
        assert report.learner == "stub"

    def test_folds_are_stratified(self, mocker):
        x, y = _blobs(40)
        learner = mocker.Mock()
        learner.name = "stub"
        learner.fit.return_value.predict.side_effect = lambda rows: np.zeros(len(rows), dtype=int)
        report = cross_validate(x, y, lambda: learner, k=4)
        assert all(f.confusion.fn == 5 and f.confusion.tn == 5 for f in report.folds)

    def test_fold_seeds_are_reproducible(self):
        assert fold_seeds(3, 10) == fold_seeds(3, 10)
        assert fold_seeds(3, 10) != fold_seeds(4, 10)

    def test_same_seed_same_report(self):
        x, y = _blobs(40)
        a = cross_validate(x, y, "dt", k=4, seed=2)
        b = cross_validate(x, y, "dt", k=4, seed=2)
        assert a == b

    @pytest.mark.parametrize("kind", ["dt", "rf"])
    def test_random_labels_score_near_the_majority_rate(self, kind):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(300, 5))
        y = rng.permutation(np.arange(300) % 2)
        report = cross_validate(x, y, kind, k=10, seed=4, config=FAST)
        majority = 100.0 * max(y.mean(), 1 - y.mean())
        assert abs(report.accuracy - majority) <= 10.0

    @pytest.mark.parametrize("k", [1, 41])
    def test_bad_k(self, k):
        x, y = _blobs(40)
        with pytest.raises(ValidationError):
            cross_validate(x, y, "dt", k=k)

    def test_k_above_minority_class(self):
        x, y = _blobs(40)
        y[:] = 0
        y[:3] = 1
        with pytest.raises(ValidationError, match="smaller class"):
            cross_validate(x, y, "dt", k=5)


class TestExperiments:
    def test_task_rows(self):
        labels = LabelSet(apps={"a": "fraudulent", "b": "benign", "c": "malware"})
        x = np.arange(8, dtype=float).reshape(4, 2)
        ids, rows, y = task_rows(["a", "b", "c", "d"], x, labels, "fraud")
        assert ids == ["a", "b"]
        assert y.tolist() == [1, 0]
        assert rows.tolist() == [[0.0, 1.0], [2.0, 3.0]]
        ids, _, y = task_rows(["a", "b", "c", "d"], x, labels, "malware")
        assert ids == ["b", "c"]
        assert y.tolist() == [0, 1]

    def test_unknown_task(self):
        with pytest.raises(ValidationError):
            task_rows([], np.zeros((0, 2)), LabelSet(), "spam")

    def test_transfer_rate(self):
        x, y = _blobs()
        score = np.full((6, 2), 0.9)
        result = transfer_rate(x, y, score, "dt")
        assert (result.scored, result.flagged) == (6, 6)
        assert result.percent_flagged == 100.0
        assert transfer_rate(x, y, np.zeros((0, 2)), "dt").percent_flagged == 0.0
