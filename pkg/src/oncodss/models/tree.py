"""CART decision tree with Gini impurity over mixed feature columns.

Numeric candidates are midpoints of consecutive distinct sorted values;
categorical candidates are one-vs-rest level splits. The best split
minimizes weighted Gini; ties resolve to the first candidate in feature
order, then candidate order, so training is deterministic. An optional
per-split feature subsample (used by the forest) draws from a caller
supplied generator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, FeatureSpec


@dataclass
class TreeNode:
    # Split nodes carry feature + (threshold | level); leaves carry proba.
    feature: str | None = None
    threshold: float | None = None
    level: str | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    proba: float | None = None  # P(positive) at a leaf
    n_samples: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.proba is not None

    def to_dict(self) -> dict:
        if self.is_leaf:
            return {"leaf": True, "proba": self.proba, "n": self.n_samples}
        return {
            "leaf": False,
            "feature": self.feature,
            "threshold": self.threshold,
            "level": self.level,
            "n": self.n_samples,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @staticmethod
    def from_dict(payload: dict) -> "TreeNode":
        if payload["leaf"]:
            return TreeNode(proba=payload["proba"], n_samples=payload["n"])
        return TreeNode(
            feature=payload["feature"],
            threshold=payload["threshold"],
            level=payload["level"],
            n_samples=payload["n"],
            left=TreeNode.from_dict(payload["left"]),
            right=TreeNode.from_dict(payload["right"]),
        )


def _gini(n_pos: int, n: int) -> float:
    if n == 0:
        return 0.0
    p = n_pos / n
    return 2.0 * p * (1.0 - p)


@dataclass
class _Split:
    feature_index: int
    threshold: float | None
    level: str | None
    weighted_gini: float
    left_mask: np.ndarray


def best_split(
    columns: list,
    specs: list[FeatureSpec],
    y: np.ndarray,
    feature_indices: list[int],
    min_samples_leaf: int,
) -> _Split | None:
    """Minimal-weighted-Gini candidate over the given feature indices."""
    n = len(y)
    best: _Split | None = None
    for j in feature_indices:
        spec = specs[j]
        col = columns[j]
        if spec.kind == "numeric":
            order = np.argsort(col, kind="stable")
            sorted_vals = col[order]
            sorted_y = y[order]
            cum_pos = np.cumsum(sorted_y)
            total_pos = int(cum_pos[-1])
            for i in range(n - 1):
                if sorted_vals[i] == sorted_vals[i + 1]:
                    continue
                n_left = i + 1
                n_right = n - n_left
                if n_left < min_samples_leaf or n_right < min_samples_leaf:
                    continue
                pos_left = int(cum_pos[i])
                weighted = (
                    n_left * _gini(pos_left, n_left)
                    + n_right * _gini(total_pos - pos_left, n_right)
                ) / n
                if best is None or weighted < best.weighted_gini:
                    threshold = float((sorted_vals[i] + sorted_vals[i + 1]) / 2.0)
                    best = _Split(j, threshold, None, weighted, col <= threshold)
        else:
            present = [lv for lv in spec.levels if lv in set(col.tolist())]
            total_pos = int(y.sum())
            for lv in present:
                mask = col == lv
                n_left = int(mask.sum())
                n_right = n - n_left
                if n_left < min_samples_leaf or n_right < min_samples_leaf:
                    continue
                pos_left = int(y[mask].sum())
                weighted = (
                    n_left * _gini(pos_left, n_left)
                    + n_right * _gini(total_pos - pos_left, n_right)
                ) / n
                if best is None or weighted < best.weighted_gini:
                    best = _Split(j, None, lv, weighted, mask)
    return best


class DecisionTree:
    """Binary CART classifier; the positive class drives leaf probabilities."""

    def __init__(
        self,
        max_depth: int = 6,
        min_samples_leaf: int = 5,
        max_features: int | None = None,
        rng: np.random.Generator | None = None,
    ):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.rng = rng
        self.root: TreeNode | None = None
        self._specs: list[FeatureSpec] = []
        self._names: list[str] = []

    def fit(self, dataset: Dataset, positive_label: str) -> "DecisionTree":
        self._names = list(dataset.feature_names)
        self._specs = [dataset.feature_kinds[f] for f in self._names]
        columns = []
        for j, spec in enumerate(self._specs):
            raw = [row[j] for row in dataset.rows]
            if spec.kind == "numeric":
                columns.append(np.asarray(raw, dtype=float))
            else:
                columns.append(np.asarray(raw, dtype=object))
        y = np.array([lb == positive_label for lb in dataset.labels], dtype=int)
        self.root = self._grow(columns, y, depth=0)
        return self

    def _pick_features(self) -> list[int]:
        total = len(self._specs)
        if self.max_features is None or self.max_features >= total:
            return list(range(total))
        chosen = self.rng.permutation(total)[: self.max_features]
        return sorted(int(i) for i in chosen)

    def _grow(self, columns: list, y: np.ndarray, depth: int) -> TreeNode:
        n = len(y)
        n_pos = int(y.sum())
        leaf = TreeNode(proba=n_pos / n, n_samples=n)
        if depth >= self.max_depth or n < 2 * self.min_samples_leaf or n_pos in (0, n):
            return leaf
        split = best_split(columns, self._specs, y, self._pick_features(), self.min_samples_leaf)
        if split is None:
            return leaf
        parent = _gini(n_pos, n)
        if split.weighted_gini >= parent:
            return leaf
        left_mask = split.left_mask
        left_cols = [c[left_mask] for c in columns]
        right_cols = [c[~left_mask] for c in columns]
        node = TreeNode(
            feature=self._names[split.feature_index],
            threshold=split.threshold,
            level=split.level,
            n_samples=n,
        )
        node.left = self._grow(left_cols, y[left_mask], depth + 1)
        node.right = self._grow(right_cols, y[~left_mask], depth + 1)
        return node

    def score_row(self, row: dict) -> float:
        """P(positive) for one {feature: value} mapping with known levels."""
        node = self.root
        while not node.is_leaf:
            value = row[node.feature]
            if node.threshold is not None:
                node = node.left if float(value) <= node.threshold else node.right
            else:
                node = node.left if str(value) == node.level else node.right
        return node.proba
