"""Labeled task sets and the cross-task transfer experiment."""

from __future__ import annotations

from collections.abc import Sequence
from typing import Literal

import numpy as np
import structlog
from pydantic import BaseModel

from rankfraud.config.schema import LearnConfig
from rankfraud.core.errors import ValidationError
from rankfraud.learn.models import create_learner
from rankfraud.types.market import LabelSet

logger = structlog.get_logger()

Task = Literal["fraud", "malware"]

# Positive app label per task; benign apps are the negatives of both.
TASK_POSITIVE: dict[str, str] = {"fraud": "fraudulent", "malware": "malware"}


def task_rows(
    app_ids: Sequence[str],
    x: np.ndarray,
    labels: LabelSet,
    task: Task,
) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Rows of ``x`` whose app is labeled for ``task``, with 0/1 targets."""
    if task not in TASK_POSITIVE:
        raise ValidationError(f"Unknown task '{task}'. Available: {', '.join(TASK_POSITIVE)}")
    positive = TASK_POSITIVE[task]
    keep = [i for i, a in enumerate(app_ids) if labels.apps.get(a) in (positive, "benign")]
    ids = [app_ids[i] for i in keep]
    y = np.asarray([1 if labels.apps[a] == positive else 0 for a in ids], dtype=int)
    return ids, np.asarray(x, dtype=float)[keep], y


class TransferResult(BaseModel):
    learner: str
    seed: int
    train_rows: int
    scored: int
    flagged: int

    @property
    def percent_flagged(self) -> float:
        return 100.0 * self.flagged / self.scored if self.scored else 0.0


def transfer_rate(
    train_x: np.ndarray,
    train_y: np.ndarray,
    score_x: np.ndarray,
    kind: str = "rf",
    *,
    seed: int = 0,
    config: LearnConfig | None = None,
) -> TransferResult:
    """Train on one labeled set and report how many rows of another are classified positive.

    Used to ask how many malware apps a fraud-vs-benign classifier flags as fraudulent.
    """
    score_x = np.asarray(score_x, dtype=float)
    clf = create_learner(kind, config).fit(train_x, train_y, seed)
    flagged = int(np.sum(clf.predict(score_x))) if len(score_x) else 0
    result = TransferResult(learner=kind, seed=seed, train_rows=len(train_y), scored=len(score_x), flagged=flagged)
    logger.info("learn.transfer", learner=kind, scored=result.scored, flagged=flagged, percent=round(result.percent_flagged, 2))
    return result
