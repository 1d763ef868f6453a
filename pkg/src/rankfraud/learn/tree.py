"""C4.5-style decision tree on continuous features.

Binary splits at midpoints between consecutive distinct values. Among the
candidate tests whose information gain is at least the average gain, the one
with the highest gain ratio wins. Optional pessimistic-error pruning replaces
a subtree with a leaf when the leaf's upper-bound error estimate is no worse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from rankfraud.types.model import TreeArrays

_EPS = 1e-12


def _entropy(p: np.ndarray) -> np.ndarray:
    """Binary entropy in bits, elementwise, with 0·log 0 = 0."""
    p = np.clip(p, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -(np.where(p > 0, p * np.log2(p), 0.0) + np.where(p < 1, (1 - p) * np.log2(1 - p), 0.0))
    return h


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    gain: float
    gain_ratio: float


def best_split(
    x: np.ndarray,
    y: np.ndarray,
    features: np.ndarray,
    min_leaf: int,
) -> SplitCandidate | None:
    n = len(y)
    total_pos = float(y.sum())
    base = float(_entropy(np.asarray(total_pos / n)))
    candidates: list[SplitCandidate] = []
    for f in features:
        col = x[:, f]
        order = np.argsort(col, kind="stable")
        xs = col[order]
        pos = np.cumsum(y[order])
        left_n = np.arange(min_leaf, n - min_leaf + 1)
        if left_n.size == 0:
            continue
        left_n = left_n[xs[left_n - 1] < xs[left_n]]
        if left_n.size == 0:
            continue
        left_pos = pos[left_n - 1]
        right_n = n - left_n
        right_pos = total_pos - left_pos
        gains = base - (left_n / n) * _entropy(left_pos / left_n) - (right_n / n) * _entropy(right_pos / right_n)
        j = int(np.argmax(gains))
        gain = float(gains[j])
        split_info = float(_entropy(np.asarray(left_n[j] / n)))
        lo, hi = float(xs[left_n[j] - 1]), float(xs[left_n[j]])
        threshold = (lo + hi) / 2.0
        if threshold >= hi:
            threshold = lo
        candidates.append(SplitCandidate(int(f), threshold, gain, gain / split_info if split_info > 0 else 0.0))

    useful = [c for c in candidates if c.gain > _EPS]
    if not useful:
        return None
    average = sum(c.gain for c in useful) / len(useful)
    best: SplitCandidate | None = None
    for c in useful:
        if c.gain < average - _EPS:
            continue
        if best is None or c.gain_ratio > best.gain_ratio + _EPS:
            best = c
    return best


@dataclass
class _Builder:
    x: np.ndarray
    y: np.ndarray
    min_leaf: int
    max_depth: int | None
    max_features: int | None = None
    rng: np.random.Generator | None = None
    feature: list[int] = field(default_factory=list)
    threshold: list[float] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    counts: list[list[float]] = field(default_factory=list)

    def _features(self) -> np.ndarray:
        n_features = self.x.shape[1]
        if self.max_features is None or self.max_features >= n_features:
            return np.arange(n_features)
        assert self.rng is not None
        return np.sort(self.rng.choice(n_features, size=self.max_features, replace=False))

    def _new_node(self, idx: np.ndarray) -> int:
        pos = float(self.y[idx].sum())
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.counts.append([float(len(idx)) - pos, pos])
        return len(self.feature) - 1

    def build(self, idx: np.ndarray, depth: int = 0) -> int:
        node = self._new_node(idx)
        neg, pos = self.counts[node]
        if neg == 0 or pos == 0 or len(idx) < 2 * self.min_leaf:
            return node
        if self.max_depth is not None and depth >= self.max_depth:
            return node
        split = best_split(self.x[idx], self.y[idx], self._features(), self.min_leaf)
        if split is None:
            return node
        mask = self.x[idx, split.feature] <= split.threshold
        self.feature[node] = split.feature
        self.threshold[node] = split.threshold
        left = self.build(idx[mask], depth + 1)
        right = self.build(idx[~mask], depth + 1)
        self.left[node] = left
        self.right[node] = right
        return node

    def arrays(self) -> TreeArrays:
        return TreeArrays(
            feature=self.feature,
            threshold=self.threshold,
            left=self.left,
            right=self.right,
            counts=self.counts,
        )


def extra_errors(n: float, e: float, confidence: float) -> float:
    """Upper confidence bound on extra errors at a node with n rows, e misclassified."""
    if n <= 0:
        return 0.0
    if e < 1e-6:
        return n * (1 - confidence ** (1 / n))
    if e < 0.9999:
        v = n * (1 - confidence ** (1 / n))
        return v + e * (extra_errors(n, 1.0, confidence) - v)
    if e + 0.5 >= n:
        return 0.67 * (n - e)
    z = float(norm.isf(confidence))
    pr = (e + 0.5 + z * z / 2 + z * math.sqrt(z * z / 4 + (e + 0.5) * (1 - (e + 0.5) / n))) / (n + z * z)
    return n * pr - e


def prune(tree: TreeArrays, confidence: float) -> TreeArrays:
    feature = list(tree.feature)
    left = list(tree.left)
    right = list(tree.right)

    def node_errors(node: int) -> float:
        n = sum(tree.counts[node])
        e = n - max(tree.counts[node])
        return e + extra_errors(n, e, confidence)

    def visit(node: int) -> float:
        if feature[node] < 0:
            return node_errors(node)
        subtree = visit(left[node]) + visit(right[node])
        as_leaf = node_errors(node)
        if as_leaf <= subtree + 0.1:
            feature[node] = -1
            left[node] = right[node] = -1
            return as_leaf
        return subtree

    visit(0)
    return _compact(tree, feature, left, right)


def _compact(tree: TreeArrays, feature: list[int], left: list[int], right: list[int]) -> TreeArrays:
    """Drop unreachable nodes, renumbering in preorder."""
    out = TreeArrays(feature=[], threshold=[], left=[], right=[], counts=[])

    def copy(node: int) -> int:
        i = len(out.feature)
        out.feature.append(feature[node])
        out.threshold.append(tree.threshold[node] if feature[node] >= 0 else 0.0)
        out.left.append(-1)
        out.right.append(-1)
        out.counts.append(list(tree.counts[node]))
        if feature[node] >= 0:
            out.left[i] = copy(left[node])
            out.right[i] = copy(right[node])
        return i

    copy(0)
    return out


def fit_tree(
    x: np.ndarray,
    y: np.ndarray,
    *,
    min_leaf: int = 2,
    max_depth: int | None = None,
    prune_confidence: float | None = 0.25,
    max_features: int | None = None,
    rng: np.random.Generator | None = None,
) -> TreeArrays:
    builder = _Builder(np.asarray(x, dtype=float), np.asarray(y, dtype=int), min_leaf, max_depth, max_features, rng)
    builder.build(np.arange(len(y)))
    tree = builder.arrays()
    if prune_confidence is not None:
        tree = prune(tree, prune_confidence)
    return tree


def leaf_counts(tree: TreeArrays, x: np.ndarray) -> np.ndarray:
    """Class counts of the leaf each row lands in, shape (n, 2)."""
    feature = np.asarray(tree.feature)
    threshold = np.asarray(tree.threshold)
    left = np.asarray(tree.left)
    right = np.asarray(tree.right)
    counts = np.asarray(tree.counts, dtype=float)
    rows = np.arange(len(x))
    node = np.zeros(len(x), dtype=int)
    active = feature[node] >= 0
    while active.any():
        r = rows[active]
        cur = node[active]
        go_left = x[r, feature[cur]] <= threshold[cur]
        node[active] = np.where(go_left, left[cur], right[cur])
        active = feature[node] >= 0
    return counts[node]


def tree_proba(tree: TreeArrays, x: np.ndarray) -> np.ndarray:
    counts = leaf_counts(tree, np.asarray(x, dtype=float))
    totals = counts.sum(axis=1, keepdims=True)
    totals[totals == 0] = 1.0
    return counts / totals
