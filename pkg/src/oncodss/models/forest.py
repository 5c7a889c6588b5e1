"""Random forest: seeded bootstrap aggregation of CART trees.

Each tree trains on a bootstrap resample and considers a random subset of
ceil(sqrt(#features)) features at every split. Identical seeds give
identical forests.
"""

from __future__ import annotations

import math

import numpy as np

from .dataset import Dataset
from .tree import DecisionTree


class RandomForest:
    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int = 6,
        min_samples_leaf: int = 5,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.seed = seed
        self.trees: list[DecisionTree] = []

    def fit(self, dataset: Dataset, positive_label: str) -> "RandomForest":
        n = len(dataset)
        max_features = max(1, math.ceil(math.sqrt(len(dataset.feature_names))))
        master = np.random.default_rng(self.seed)
        tree_seeds = master.integers(0, 2**63 - 1, size=self.n_trees)
        self.trees = []
        for s in tree_seeds:
            rng = np.random.default_rng(int(s))
            indices = rng.integers(0, n, size=n)
            tree = DecisionTree(
                max_depth=self.max_depth,
                min_samples_leaf=self.min_samples_leaf,
                max_features=max_features,
                rng=rng,
            )
            tree.fit(dataset.subset([int(i) for i in indices]), positive_label)
            self.trees.append(tree)
        return self

    def score_row(self, row: dict) -> float:
        return float(np.mean([t.score_row(row) for t in self.trees]))
