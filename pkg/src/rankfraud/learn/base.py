"""Learner and classifier protocols."""

from __future__ import annotations

from typing import Protocol

import numpy as np


class Classifier(Protocol):
    def predict(self, x: np.ndarray) -> np.ndarray: ...


class Learner(Protocol):
    name: str

    def fit(self, x: np.ndarray, y: np.ndarray, seed: int) -> Classifier: ...
