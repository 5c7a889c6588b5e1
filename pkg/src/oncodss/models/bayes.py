"""Naive Bayes over mixed features: Gaussian numerics, Laplace categoricals.

Variances are floored so zero-spread features stay scoreable; scoring runs
in log space and the positive-class probability comes from the two-class
posterior.
"""

from __future__ import annotations

import math

import numpy as np

from .dataset import Dataset, FeatureSpec


class NaiveBayes:
    def __init__(self, laplace: float = 1.0, var_floor: float = 1e-9):
        self.laplace = laplace
        self.var_floor = var_floor
        self.classes: list[str] = []
        self.log_priors: dict[str, float] = {}
        # feature -> class -> (mean, var) for numerics, {level: prob} otherwise
        self.gaussians: dict[str, dict[str, tuple[float, float]]] = {}
        self.categoricals: dict[str, dict[str, dict[str, float]]] = {}
        self._specs: dict[str, FeatureSpec] = {}

    def fit(self, dataset: Dataset, positive_label: str) -> "NaiveBayes":
        self.positive_label = positive_label
        self.classes = dataset.classes()
        self._specs = dict(dataset.feature_kinds)
        n = len(dataset)
        by_class = {c: [i for i, lb in enumerate(dataset.labels) if lb == c] for c in self.classes}
        self.log_priors = {c: math.log(len(idx) / n) for c, idx in by_class.items()}

        for j, name in enumerate(dataset.feature_names):
            spec = dataset.feature_kinds[name]
            if spec.kind == "numeric":
                per_class: dict[str, tuple[float, float]] = {}
                for c, idx in by_class.items():
                    values = np.array([dataset.rows[i][j] for i in idx], dtype=float)
                    var = float(values.var())  # ML estimate, then floored
                    per_class[c] = (float(values.mean()), max(var, self.var_floor))
                self.gaussians[name] = per_class
            else:
                levels = spec.levels
                per_class_probs: dict[str, dict[str, float]] = {}
                for c, idx in by_class.items():
                    counts = {lv: 0 for lv in levels}
                    for i in idx:
                        counts[str(dataset.rows[i][j])] += 1
                    denom = len(idx) + self.laplace * len(levels)
                    per_class_probs[c] = {
                        lv: (counts[lv] + self.laplace) / denom for lv in levels
                    }
                self.categoricals[name] = per_class_probs
        return self

    def _log_likelihood(self, row: dict, c: str) -> float:
        total = self.log_priors[c]
        for name, spec in self._specs.items():
            value = row[name]
            if spec.kind == "numeric":
                mean, var = self.gaussians[name][c]
                x = float(value)
                total += -0.5 * math.log(2.0 * math.pi * var) - (x - mean) ** 2 / (2.0 * var)
            else:
                total += math.log(self.categoricals[name][c][str(value)])
        return total

    def score_row(self, row: dict) -> float:
        """Posterior probability of the positive class."""
        log_pos = self._log_likelihood(row, self.positive_label)
        log_rest = [
            self._log_likelihood(row, c) for c in self.classes if c != self.positive_label
        ]
        # Two-class cohorts are the norm; log-sum-exp keeps k classes safe.
        m = max([log_pos] + log_rest)
        pos = math.exp(log_pos - m)
        denom = pos + sum(math.exp(v - m) for v in log_rest)
        return pos / denom
