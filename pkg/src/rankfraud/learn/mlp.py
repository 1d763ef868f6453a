"""One-hidden-layer perceptron trained by mini-batch backpropagation.

Sigmoid units in both layers, squared-error loss against one-hot targets,
gradient descent with momentum. Inputs are min-max scaled with the training
ranges, which travel with the weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import structlog
from scipy.special import expit

from rankfraud.types.model import MlpWeights

logger = structlog.get_logger()

N_CLASSES = 2


def default_hidden_units(n_features: int, n_classes: int = N_CLASSES) -> int:
    return math.ceil((n_features + n_classes) / 2)


@dataclass
class Network:
    w1: np.ndarray  # (F, H)
    b1: np.ndarray  # (H,)
    w2: np.ndarray  # (H, C)
    b2: np.ndarray  # (C,)

    @classmethod
    def init(cls, n_inputs: int, n_hidden: int, n_outputs: int, rng: np.random.Generator) -> Network:
        def u(*shape: int) -> np.ndarray:
            return rng.uniform(-0.05, 0.05, size=shape)

        return cls(u(n_inputs, n_hidden), u(n_hidden), u(n_hidden, n_outputs), u(n_outputs))

    def params(self) -> list[np.ndarray]:
        return [self.w1, self.b1, self.w2, self.b2]

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        hidden = expit(x @ self.w1 + self.b1)
        out = expit(hidden @ self.w2 + self.b2)
        return hidden, out

    def loss_and_gradients(self, x: np.ndarray, targets: np.ndarray) -> tuple[float, list[np.ndarray]]:
        """Mean over rows of half the summed squared output error, with its gradients."""
        n = len(x)
        hidden, out = self.forward(x)
        err = out - targets
        loss = 0.5 * float((err**2).sum()) / n
        delta_out = err * out * (1 - out) / n
        delta_hidden = (delta_out @ self.w2.T) * hidden * (1 - hidden)
        grads = [x.T @ delta_hidden, delta_hidden.sum(axis=0), hidden.T @ delta_out, delta_out.sum(axis=0)]
        return loss, grads


def _scaling(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    lo = x.min(axis=0) if len(x) else np.zeros(x.shape[1])
    span = (x.max(axis=0) - lo) if len(x) else np.ones(x.shape[1])
    span = np.where(span > 0, span, 1.0)
    return lo, span


def fit_mlp(
    x: np.ndarray,
    y: np.ndarray,
    *,
    seed: int,
    hidden_units: int | None = None,
    epochs: int = 500,
    learning_rate: float = 0.3,
    momentum: float = 0.2,
    batch_size: int = 32,
) -> MlpWeights:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    lo, span = _scaling(x)
    xs = (x - lo) / span
    targets = np.eye(N_CLASSES)[y]

    rng = np.random.default_rng(seed)
    net = Network.init(x.shape[1], hidden_units or default_hidden_units(x.shape[1]), N_CLASSES, rng)
    velocity = [np.zeros_like(p) for p in net.params()]

    for epoch in range(epochs):
        order = rng.permutation(len(xs))
        for start in range(0, len(order), batch_size):
            batch = order[start : start + batch_size]
            _, grads = net.loss_and_gradients(xs[batch], targets[batch])
            for p, v, g in zip(net.params(), velocity, grads, strict=True):
                v *= momentum
                v -= learning_rate * g
                p += v
        if epoch == epochs - 1:
            loss, _ = net.loss_and_gradients(xs, targets)
            logger.debug("mlp.trained", epochs=epochs, loss=round(loss, 6))

    return MlpWeights(
        hidden_weights=net.w1.tolist(),
        hidden_bias=net.b1.tolist(),
        output_weights=net.w2.tolist(),
        output_bias=net.b2.tolist(),
        input_min=lo.tolist(),
        input_range=span.tolist(),
    )


def mlp_proba(weights: MlpWeights, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    xs = (x - np.asarray(weights.input_min)) / np.asarray(weights.input_range)
    net = Network(
        np.asarray(weights.hidden_weights),
        np.asarray(weights.hidden_bias),
        np.asarray(weights.output_weights),
        np.asarray(weights.output_bias),
    )
    _, out = net.forward(xs)
    totals = out.sum(axis=1, keepdims=True)
    return out / np.where(totals > 0, totals, 1.0)
