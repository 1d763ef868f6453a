"""Trained model documents: fitting, prediction and persistence."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import structlog
from pydantic import ValidationError as PydanticValidationError

from rankfraud.config.schema import ForestParams, LearnConfig, MlpParams, TreeParams
from rankfraud.core.errors import ModelError, SchemaMismatchError, ValidationError
from rankfraud.learn.forest import default_max_features, fit_forest, forest_votes
from rankfraud.learn.mlp import default_hidden_units, fit_mlp, mlp_proba
from rankfraud.learn.tree import fit_tree, tree_proba
from rankfraud.types.model import Prediction, TrainedModel

logger = structlog.get_logger()


def _check_training_data(x: np.ndarray, y: np.ndarray) -> None:
    if x.ndim != 2:
        raise ValidationError(f"Training matrix must be 2-D, got shape {x.shape}")
    if len(x) != len(y):
        raise ValidationError(f"{len(x)} rows but {len(y)} labels")
    classes = set(np.unique(y).tolist())
    if not classes <= {0, 1}:
        raise ValidationError(f"Labels must be 0/1, got {sorted(classes)}")
    if len(classes) < 2:
        raise ValidationError("Training data holds a single class")
    if not np.all(np.isfinite(x)):
        raise ValidationError("Training matrix contains NaN or infinite values")


class ModelClassifier:
    """Predicts with a :class:`TrainedModel`."""

    def __init__(self, model: TrainedModel) -> None:
        self.model = model

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim != 2 or x.shape[1] != self.model.n_features:
            got = x.shape[1] if x.ndim == 2 else x.ndim
            raise SchemaMismatchError(f"{self.model.n_features} features", f"{got} features")
        if len(x) == 0:
            return np.zeros((0, 2))
        m = self.model
        if m.learner == "dt":
            return tree_proba(m.trees[0], x)
        if m.learner == "rf":
            pos = forest_votes(m.trees, x)
            return np.column_stack([1 - pos, pos])
        if m.mlp is None:
            raise ModelError("MLP model has no weights")
        return mlp_proba(m.mlp, x)

    def predict(self, x: np.ndarray) -> np.ndarray:
        proba = self.predict_proba(x)
        # Ties go to the negative class.
        return (proba[:, 1] > proba[:, 0]).astype(int)


class _BaseLearner:
    name = ""

    def __init__(self, feature_names: list[str] | None = None, schema_version: str = "") -> None:
        self.feature_names = feature_names
        self.schema_version = schema_version

    def _model(self, x: np.ndarray, seed: int, hyperparameters: dict, **learned) -> ModelClassifier:
        names = self.feature_names or [f"f{i}" for i in range(x.shape[1])]
        model = TrainedModel(
            learner=self.name,  # type: ignore[arg-type]
            hyperparameters=hyperparameters,
            schema_version=self.schema_version,
            feature_names=names,
            seed=seed,
            **learned,
        )
        return ModelClassifier(model)


class DecisionTreeLearner(_BaseLearner):
    name = "dt"

    def __init__(self, params: TreeParams | None = None, **kwargs) -> None:
        super().__init__(**kwargs)
        self.params = params or TreeParams()

    def fit(self, x: np.ndarray, y: np.ndarray, seed: int) -> ModelClassifier:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=int)
        _check_training_data(x, y)
        p = self.params
        tree = fit_tree(
            x,
            y,
            min_leaf=p.min_leaf,
            max_depth=p.max_depth,
            prune_confidence=p.confidence if p.prune else None,
        )
        return self._model(x, seed, p.model_dump(), trees=[tree])


class RandomForestLearner(_BaseLearner):
    name = "rf"

    def __init__(self, params: ForestParams | None = None, **kwargs) -> None:
        super().__init__(**kwargs)
        self.params = params or ForestParams()

    def fit(self, x: np.ndarray, y: np.ndarray, seed: int) -> ModelClassifier:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=int)
        _check_training_data(x, y)
        p = self.params
        hyper = p.model_dump()
        hyper["max_features"] = p.max_features or default_max_features(x.shape[1])
        trees = fit_forest(
            x,
            y,
            seed=seed,
            n_trees=p.n_trees,
            max_features=hyper["max_features"],
            min_leaf=p.min_leaf,
            max_depth=p.max_depth,
        )
        return self._model(x, seed, hyper, trees=trees)


class MlpLearner(_BaseLearner):
    name = "mlp"

    def __init__(self, params: MlpParams | None = None, **kwargs) -> None:
        super().__init__(**kwargs)
        self.params = params or MlpParams()

    def fit(self, x: np.ndarray, y: np.ndarray, seed: int) -> ModelClassifier:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=int)
        _check_training_data(x, y)
        p = self.params
        hyper = p.model_dump()
        hyper["hidden_units"] = p.hidden_units or default_hidden_units(x.shape[1])
        weights = fit_mlp(
            x,
            y,
            seed=seed,
            hidden_units=hyper["hidden_units"],
            epochs=p.epochs,
            learning_rate=p.learning_rate,
            momentum=p.momentum,
            batch_size=p.batch_size,
        )
        return self._model(x, seed, hyper, mlp=weights)


LEARNER_MAP: dict[str, type[_BaseLearner]] = {
    "dt": DecisionTreeLearner,
    "rf": RandomForestLearner,
    "mlp": MlpLearner,
}


def create_learner(
    kind: str,
    config: LearnConfig | None = None,
    *,
    feature_names: list[str] | None = None,
    schema_version: str = "",
) -> DecisionTreeLearner | RandomForestLearner | MlpLearner:
    config = config or LearnConfig()
    if kind == "dt":
        return DecisionTreeLearner(config.dt, feature_names=feature_names, schema_version=schema_version)
    if kind == "rf":
        return RandomForestLearner(config.rf, feature_names=feature_names, schema_version=schema_version)
    if kind == "mlp":
        return MlpLearner(config.mlp, feature_names=feature_names, schema_version=schema_version)
    raise ValidationError(f"Unknown learner '{kind}'. Available: {', '.join(LEARNER_MAP)}")


def train(
    x: np.ndarray,
    y: np.ndarray,
    kind: str,
    *,
    seed: int = 0,
    config: LearnConfig | None = None,
    feature_names: list[str] | None = None,
    schema_version: str = "",
) -> TrainedModel:
    learner = create_learner(kind, config, feature_names=feature_names, schema_version=schema_version)
    model = learner.fit(x, y, seed).model
    logger.info("learn.trained", learner=kind, rows=len(y), positives=int(np.sum(y)), seed=seed)
    return model


def predict(model: TrainedModel, x: np.ndarray, *, schema_version: str | None = None, ids: list[str] | None = None) -> Prediction:
    if schema_version is not None and schema_version != model.schema_version:
        raise SchemaMismatchError(model.schema_version, schema_version)
    clf = ModelClassifier(model)
    proba = clf.predict_proba(x)
    labels = (proba[:, 1] > proba[:, 0]).astype(int)
    return Prediction(ids=ids or [], labels=labels.tolist(), scores=proba.tolist())


def dump_model(model: TrainedModel) -> str:
    return json.dumps(model.model_dump(mode="json"), sort_keys=True, separators=(",", ":")) + "\n"


def save_model(model: TrainedModel, path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dump_model(model), encoding="utf-8")
    return target


def load_model(path: str | Path) -> TrainedModel:
    source = Path(path)
    if not source.exists():
        raise ModelError(f"Model file not found: {source}")
    try:
        return TrainedModel(**json.loads(source.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, PydanticValidationError, TypeError) as exc:
        raise ModelError(f"Invalid model file {source}: {exc}") from exc
