"""Stratified k-fold cross-validation."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
import structlog
from sklearn.model_selection import StratifiedKFold

from rankfraud.config.schema import LearnConfig
from rankfraud.core.errors import ValidationError
from rankfraud.learn.base import Learner
from rankfraud.learn.metrics import confusion
from rankfraud.learn.models import create_learner
from rankfraud.types.evaluation import ConfusionMatrix, EvalReport, FoldResult

logger = structlog.get_logger()

LearnerFactory = Callable[[], Learner]


def fold_seeds(seed: int, k: int) -> list[int]:
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2**31 - 1, size=k)]


def cross_validate(
    x: np.ndarray,
    y: np.ndarray,
    learner: str | LearnerFactory,
    *,
    k: int = 10,
    seed: int = 0,
    config: LearnConfig | None = None,
    task: str = "",
    feature_names: list[str] | None = None,
) -> EvalReport:
    """Every row is tested exactly once; fold assignment is fixed by ``seed``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    n = len(y)
    if k < 2:
        raise ValidationError(f"k must be at least 2, got {k}")
    if k > n:
        raise ValidationError(f"k={k} exceeds the number of rows ({n})")
    counts = np.bincount(y, minlength=2)
    if counts.min() < k:
        raise ValidationError(f"k={k} exceeds the smaller class size ({int(counts.min())}); folds cannot be stratified")

    if isinstance(learner, str):
        kind = learner

        def factory() -> Learner:
            return create_learner(kind, config, feature_names=feature_names)

        name = kind
    else:
        factory = learner
        name = getattr(factory(), "name", "custom")

    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)
    folds: list[FoldResult] = []
    total = ConfusionMatrix()
    for i, ((train_idx, test_idx), fold_seed) in enumerate(zip(splitter.split(x, y), fold_seeds(seed, k), strict=True)):
        clf = factory().fit(x[train_idx], y[train_idx], fold_seed)
        pred = np.asarray(clf.predict(x[test_idx]), dtype=int)
        cm = confusion(y[test_idx], pred)
        folds.append(FoldResult(fold=i, test_size=len(test_idx), confusion=cm))
        total = total + cm
        logger.debug("learn.fold_completed", fold=i, accuracy=round(cm.accuracy, 2))

    report = EvalReport(task=task, learner=name, k=k, seed=seed, n=n, folds=folds, confusion=total)
    logger.info(
        "learn.cross_validated",
        task=task,
        learner=name,
        k=k,
        accuracy=round(report.accuracy, 2),
        fpr=round(report.fpr, 2),
        fnr=round(report.fnr, 2),
    )
    return report
