"""Cross-validated evaluation: confusion metrics, pooled AUC, scenario grid.

Out-of-fold (label, score) pairs are pooled across folds; the confusion
matrix thresholds pooled scores at 0.5 (ties to the positive class) and
AUC is the Mann-Whitney probability with ties counted one half.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..cohort import HIGH_RISK, Cohort
from ..seeding import seed_for
from .dataset import (
    ALGORITHMS,
    Dataset,
    ScenarioSpec,
    build_scenario_dataset,
    stratified_kfold,
)


@dataclass
class EvalReport:
    scenario: str
    algorithm: str
    tp: int
    fn: int
    tn: int
    fp: int
    sensitivity: float
    specificity: float
    accuracy: float
    auc: float
    fold_count: int
    seed: int

    def as_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "algorithm": self.algorithm,
            "confusion": {"tp": self.tp, "fn": self.fn, "tn": self.tn, "fp": self.fp},
            "sensitivity": self.sensitivity,
            "specificity": self.specificity,
            "accuracy": self.accuracy,
            "auc": self.auc,
            "fold_count": self.fold_count,
            "seed": self.seed,
        }

    @staticmethod
    def from_dict(payload: Mapping) -> "EvalReport":
        c = payload["confusion"]
        return EvalReport(
            scenario=payload["scenario"],
            algorithm=payload["algorithm"],
            tp=c["tp"],
            fn=c["fn"],
            tn=c["tn"],
            fp=c["fp"],
            sensitivity=payload["sensitivity"],
            specificity=payload["specificity"],
            accuracy=payload["accuracy"],
            auc=payload["auc"],
            fold_count=payload["fold_count"],
            seed=payload["seed"],
        )


def confusion_counts(
    is_positive: Sequence[bool], scores: Sequence[float], threshold: float = 0.5
) -> tuple[int, int, int, int]:
    """(tp, fn, tn, fp) with score >= threshold predicting positive."""
    tp = fn = tn = fp = 0
    for truth, score in zip(is_positive, scores):
        predicted = score >= threshold
        if truth and predicted:
            tp += 1
        elif truth:
            fn += 1
        elif predicted:
            fp += 1
        else:
            tn += 1
    return tp, fn, tn, fp


def auc_score(is_positive: Sequence[bool], scores: Sequence[float]) -> float:
    """Mann-Whitney AUC with midranks (ties count one half)."""
    flags = np.asarray(is_positive, dtype=bool)
    values = np.asarray(scores, dtype=float)
    n_pos = int(flags.sum())
    n_neg = len(flags) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs at least one positive and one negative")
    order = np.argsort(values, kind="stable")
    ranks = np.empty(len(values), dtype=float)
    i = 0
    while i < len(values):
        j = i
        while j + 1 < len(values) and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j + 2) / 2.0  # 1-based positions averaged
        for pos in range(i, j + 1):
            ranks[order[pos]] = midrank
        i = j + 1
    rank_sum = float(ranks[flags].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def cross_validate(
    dataset: Dataset,
    kind: str,
    k: int,
    seed: int,
    hyperparameters: Mapping | None = None,
    positive_label: str = HIGH_RISK,
) -> EvalReport:
    """Stratified k-fold evaluation pooling out-of-fold scores."""
    from . import train, predict

    assignment = stratified_kfold(dataset, k, seed)
    flags: list[bool] = []
    scores: list[float] = []
    for fold in range(k):
        train_idx = [i for i, f in enumerate(assignment) if f != fold]
        test_idx = [i for i, f in enumerate(assignment) if f == fold]
        model = train(
            kind,
            dataset.subset(train_idx),
            hyperparameters=hyperparameters,
            seed=seed_for(seed, "fold", str(fold)),
            positive_label=positive_label,
        )
        for i in test_idx:
            row = dict(zip(dataset.feature_names, dataset.rows[i]))
            result = predict(model, row)
            flags.append(dataset.labels[i] == positive_label)
            scores.append(result.score)

    tp, fn, tn, fp = confusion_counts(flags, scores)
    total = tp + fn + tn + fp
    return EvalReport(
        scenario=dataset.scenario,
        algorithm=kind,
        tp=tp,
        fn=fn,
        tn=tn,
        fp=fp,
        sensitivity=tp / (tp + fn) if tp + fn else 0.0,
        specificity=tn / (tn + fp) if tn + fp else 0.0,
        accuracy=(tp + tn) / total,
        auc=auc_score(flags, scores),
        fold_count=k,
        seed=seed,
    )


def scenario_grid(
    cohort: Cohort,
    specs: Sequence[ScenarioSpec],
    algorithms: Sequence[str] = ALGORITHMS,
    k: int = 10,
    seed: int = 0,
    hyperparameters: Mapping[str, Mapping] | None = None,
) -> list[EvalReport]:
    """One EvalReport per (scenario, algorithm), deterministic given seed."""
    if not specs:
        raise ValueError("no scenario specs given")
    reports: list[EvalReport] = []
    for spec in specs:
        dataset = build_scenario_dataset(cohort, spec)
        for kind in algorithms:
            cell_seed = seed_for(seed, "cell", spec.name, kind)
            hp = hyperparameters.get(kind) if hyperparameters else None
            reports.append(cross_validate(dataset, kind, k, cell_seed, hp))
    return reports


def fit_scenario_models(
    cohort: Cohort,
    specs: Sequence[ScenarioSpec],
    algorithms: Sequence[str] = ALGORITHMS,
    seed: int = 0,
    hyperparameters: Mapping[str, Mapping] | None = None,
) -> dict[tuple[str, str], object]:
    """Final models trained on the full cohort, keyed by (scenario, kind)."""
    from . import train

    models: dict[tuple[str, str], object] = {}
    for spec in specs:
        dataset = build_scenario_dataset(cohort, spec)
        for kind in algorithms:
            cell_seed = seed_for(seed, "cell", spec.name, kind)
            hp = hyperparameters.get(kind) if hyperparameters else None
            models[(spec.name, kind)] = train(kind, dataset, hyperparameters=hp, seed=cell_seed)
    return models
