"""Confusion matrices and k-fold evaluation reports.

Label 1 is the positive class throughout: a fraudulent review, or a
fraudulent or malware app.
"""

from __future__ import annotations

from pydantic import BaseModel, computed_field

from rankfraud.storage.schema import FORMAT_VERSION


def _pct(num: int, den: int) -> float:
    return 100.0 * num / den if den else 0.0


class ConfusionMatrix(BaseModel):
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @computed_field  # type: ignore[prop-decorator]
    @property
    def fpr(self) -> float:
        return _pct(self.fp, self.fp + self.tn)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def fnr(self) -> float:
        return _pct(self.fn, self.fn + self.tp)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def accuracy(self) -> float:
        return _pct(self.tp + self.tn, self.total)

    def __add__(self, other: ConfusionMatrix) -> ConfusionMatrix:
        return ConfusionMatrix(tp=self.tp + other.tp, fp=self.fp + other.fp, tn=self.tn + other.tn, fn=self.fn + other.fn)


class FoldResult(BaseModel):
    fold: int
    test_size: int
    confusion: ConfusionMatrix


class EvalReport(BaseModel):
    format_version: str = FORMAT_VERSION
    task: str = ""
    learner: str
    k: int
    seed: int
    n: int
    folds: list[FoldResult]
    confusion: ConfusionMatrix

    @property
    def fpr(self) -> float:
        return self.confusion.fpr

    @property
    def fnr(self) -> float:
        return self.confusion.fnr

    @property
    def accuracy(self) -> float:
        return self.confusion.accuracy
