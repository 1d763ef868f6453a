"""Random forest: bagged, unpruned trees over random feature subsets."""

from __future__ import annotations

import math

import numpy as np
import structlog

from rankfraud.learn.tree import fit_tree, tree_proba
from rankfraud.types.model import TreeArrays

logger = structlog.get_logger()


def default_max_features(n_features: int) -> int:
    return max(1, math.ceil(math.sqrt(n_features)))


def tree_seeds(seed: int, n_trees: int) -> list[int]:
    """Per-tree seeds drawn once from the master seed, independent of training order."""
    master = np.random.default_rng(seed)
    return [int(s) for s in master.integers(0, 2**32 - 1, size=n_trees)]


def fit_forest(
    x: np.ndarray,
    y: np.ndarray,
    *,
    seed: int,
    n_trees: int = 100,
    max_features: int | None = None,
    min_leaf: int = 1,
    max_depth: int | None = None,
) -> list[TreeArrays]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    m = max_features or default_max_features(x.shape[1])
    trees: list[TreeArrays] = []
    for tree_seed in tree_seeds(seed, n_trees):
        rng = np.random.default_rng(tree_seed)
        sample = rng.integers(0, len(y), size=len(y))
        trees.append(
            fit_tree(
                x[sample],
                y[sample],
                min_leaf=min_leaf,
                max_depth=max_depth,
                prune_confidence=None,
                max_features=m,
                rng=rng,
            )
        )
    logger.debug("forest.trained", trees=n_trees, max_features=m)
    return trees


def forest_votes(trees: list[TreeArrays], x: np.ndarray) -> np.ndarray:
    """Fraction of trees voting positive per row; a tied leaf votes negative."""
    x = np.asarray(x, dtype=float)
    votes = np.zeros(len(x))
    for tree in trees:
        proba = tree_proba(tree, x)
        votes += proba[:, 1] > proba[:, 0]
    return votes / len(trees)
