"""Soft-margin linear SVM trained by Pegasos-style subgradient descent.

Categorical features are one-hot encoded over their declared levels and
numeric features are z-scored with training statistics. The step schedule
is eta_t = 1 / (lambda * t) over a fixed epoch budget with a seeded
per-epoch shuffle; the bias term is unregularized. Scores map the signed
margin through a logistic link so they pool as probabilities.
"""

from __future__ import annotations

import math

import numpy as np

from .dataset import Dataset, FeatureSpec


def encoded_feature_names(names: list[str], specs: dict[str, FeatureSpec]) -> list[str]:
    encoded: list[str] = []
    for name in names:
        spec = specs[name]
        if spec.kind == "numeric":
            encoded.append(name)
        else:
            encoded.extend(f"{name}={lv}" for lv in spec.levels)
    return encoded


class LinearSVM:
    def __init__(
        self,
        lam: float = 1e-3,
        epochs: int = 50,
        margin_scale: float = 1.0,
        seed: int = 0,
    ):
        self.lam = lam
        self.epochs = epochs
        self.margin_scale = margin_scale
        self.seed = seed
        self.weights: np.ndarray | None = None
        self.bias = 0.0
        self.numeric_stats: dict[str, tuple[float, float]] = {}  # mean, sd
        self._names: list[str] = []
        self._specs: dict[str, FeatureSpec] = {}

    def _encode(self, row: dict) -> np.ndarray:
        parts: list[float] = []
        for name in self._names:
            spec = self._specs[name]
            if spec.kind == "numeric":
                mean, sd = self.numeric_stats[name]
                parts.append((float(row[name]) - mean) / sd)
            else:
                value = str(row[name])
                parts.extend(1.0 if lv == value else 0.0 for lv in spec.levels)
        return np.array(parts, dtype=float)

    def fit(self, dataset: Dataset, positive_label: str) -> "LinearSVM":
        self._names = list(dataset.feature_names)
        self._specs = dict(dataset.feature_kinds)
        for j, name in enumerate(self._names):
            spec = self._specs[name]
            if spec.kind == "numeric":
                values = np.array([row[j] for row in dataset.rows], dtype=float)
                sd = float(values.std())
                self.numeric_stats[name] = (float(values.mean()), sd if sd > 0 else 1.0)

        rows = [dict(zip(self._names, row)) for row in dataset.rows]
        x = np.stack([self._encode(r) for r in rows])
        y = np.array([1.0 if lb == positive_label else -1.0 for lb in dataset.labels])

        rng = np.random.default_rng(self.seed)
        w = np.zeros(x.shape[1])
        b = 0.0
        t = 0
        for _ in range(self.epochs):
            for i in rng.permutation(len(y)):
                t += 1
                eta = 1.0 / (self.lam * t)
                margin = y[i] * (float(w @ x[i]) + b)
                w *= 1.0 - eta * self.lam
                if margin < 1.0:
                    w += eta * y[i] * x[i]
                    b += eta * y[i]
        self.weights = w
        self.bias = b
        return self

    def margin(self, row: dict) -> float:
        return float(self.weights @ self._encode(row)) + self.bias

    def score_row(self, row: dict) -> float:
        z = self.margin_scale * self.margin(row)
        # Logistic link; clamp to dodge overflow on huge margins.
        if z >= 0:
            return 1.0 / (1.0 + math.exp(-min(z, 700.0)))
        return math.exp(max(z, -700.0)) / (1.0 + math.exp(max(z, -700.0)))

    def objective(self, dataset: Dataset, positive_label: str) -> float:
        """lambda/2 ||w||^2 + mean hinge loss; descent sanity metric."""
        rows = [dict(zip(self._names, row)) for row in dataset.rows]
        y = np.array([1.0 if lb == positive_label else -1.0 for lb in dataset.labels])
        hinge = [max(0.0, 1.0 - y[i] * self.margin(r)) for i, r in enumerate(rows)]
        return 0.5 * self.lam * float(self.weights @ self.weights) + float(np.mean(hinge))
