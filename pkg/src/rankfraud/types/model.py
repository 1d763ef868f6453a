"""Serialized classifiers."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel

from rankfraud.storage.schema import FORMAT_VERSION


class TreeArrays(BaseModel):
    """A binary tree in flat arrays; node 0 is the root.

    Internal nodes test ``x[feature] <= threshold`` and go ``left`` on true.
    Leaves have ``feature == -1``. ``counts`` holds per-node class counts
    (negative, positive) of the training rows that reached the node.
    """

    feature: list[int]
    threshold: list[float]
    left: list[int]
    right: list[int]
    counts: list[list[float]]

    @property
    def node_count(self) -> int:
        return len(self.feature)

    def depth(self) -> int:
        def walk(node: int) -> int:
            if self.feature[node] < 0:
                return 0
            return 1 + max(walk(self.left[node]), walk(self.right[node]))

        return walk(0)


class MlpWeights(BaseModel):
    hidden_weights: list[list[float]]  # n_features x n_hidden
    hidden_bias: list[float]
    output_weights: list[list[float]]  # n_hidden x n_classes
    output_bias: list[float]
    input_min: list[float]
    input_range: list[float]


class TrainedModel(BaseModel):
    format_version: str = FORMAT_VERSION
    learner: Literal["dt", "rf", "mlp"]
    hyperparameters: dict[str, Any]
    schema_version: str
    feature_names: list[str]
    seed: int
    classes: list[int] = [0, 1]
    trees: list[TreeArrays] = []
    mlp: MlpWeights | None = None

    @property
    def n_features(self) -> int:
        return len(self.feature_names)


class Prediction(BaseModel):
    ids: list[str] = []
    labels: list[int]
    # Per row: (negative, positive) class scores summing to 1.
    scores: list[list[float]]
