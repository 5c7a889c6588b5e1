"""Classifier training, prediction and evaluation for the four algorithms.

train() dispatches to the from-scratch implementations (CART tree, seeded
random forest, mixed naive Bayes, Pegasos linear SVM); predict() validates
a feature mapping against the trained schema, substitutes unseen
categorical levels with the training-time mode (with a warning) and
thresholds the positive-class score at 0.5, ties to high_risk.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..cohort import HIGH_RISK, LOW_RISK
from ..errors import DegenerateDatasetError, SchemaMismatchError, ValidationError
from .bayes import NaiveBayes
from .dataset import (
    ALGORITHMS,
    SCENARIO_NAMES,
    Dataset,
    FeatureSpec,
    ScenarioSpec,
    build_scenario_dataset,
    default_scenario_specs,
    stratified_kfold,
)
from .evaluate import (
    EvalReport,
    auc_score,
    confusion_counts,
    cross_validate,
    fit_scenario_models,
    scenario_grid,
)
from .forest import RandomForest
from .persist import SCHEMA_VERSION, load_model, save_model
from .svm import LinearSVM
from .tree import DecisionTree

DEFAULT_HYPERPARAMETERS: dict[str, dict] = {
    "decision_tree": {"max_depth": 6, "min_samples_leaf": 5},
    "random_forest": {"n_trees": 100, "max_depth": 6, "min_samples_leaf": 5},
    "naive_bayes": {"laplace": 1.0, "var_floor": 1e-9},
    "linear_svm": {"lam": 1e-3, "epochs": 50, "margin_scale": 1.0},
}


@dataclass
class TrainedModel:
    kind: str
    scenario: str
    seed: int
    hyperparameters: dict
    positive_label: str
    schema: list[FeatureSpec]
    impl: object = field(repr=False, default=None)


@dataclass
class Prediction:
    label: str
    score: float
    warnings: list[str] = field(default_factory=list)


def _schema_from_dataset(dataset: Dataset) -> list[FeatureSpec]:
    return [dataset.feature_kinds[name] for name in dataset.feature_names]


def train(
    kind: str,
    dataset: Dataset,
    hyperparameters: Mapping | None = None,
    seed: int = 0,
    positive_label: str = HIGH_RISK,
) -> TrainedModel:
    """Fit one classifier kind on a complete dataset."""
    if len(set(dataset.labels)) < 2:
        raise DegenerateDatasetError("dataset contains a single class")
    if kind not in ALGORITHMS:
        raise ValidationError(f"unknown algorithm kind {kind!r}")
    hp = dict(DEFAULT_HYPERPARAMETERS[kind])
    if hyperparameters:
        hp.update(hyperparameters)

    if kind == "decision_tree":
        impl = DecisionTree(
            max_depth=hp["max_depth"], min_samples_leaf=hp["min_samples_leaf"]
        ).fit(dataset, positive_label)
    elif kind == "random_forest":
        impl = RandomForest(
            n_trees=hp["n_trees"],
            max_depth=hp["max_depth"],
            min_samples_leaf=hp["min_samples_leaf"],
            seed=seed,
        ).fit(dataset, positive_label)
    elif kind == "naive_bayes":
        impl = NaiveBayes(laplace=hp["laplace"], var_floor=hp["var_floor"]).fit(
            dataset, positive_label
        )
    else:
        impl = LinearSVM(
            lam=hp["lam"], epochs=hp["epochs"], margin_scale=hp["margin_scale"], seed=seed
        ).fit(dataset, positive_label)

    return TrainedModel(
        kind=kind,
        scenario=dataset.scenario,
        seed=seed,
        hyperparameters=hp,
        positive_label=positive_label,
        schema=_schema_from_dataset(dataset),
        impl=impl,
    )


def predict(model: TrainedModel, features: Mapping[str, object]) -> Prediction:
    """Score one sample; label is high_risk iff score >= 0.5."""
    declared = {spec.name for spec in model.schema}
    for name in features:
        if name not in declared:
            raise SchemaMismatchError(name, "not part of the model schema")

    row: dict[str, object] = {}
    warnings: list[str] = []
    for spec in model.schema:
        if spec.name not in features:
            raise SchemaMismatchError(spec.name)
        value = features[spec.name]
        if spec.kind == "numeric":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SchemaMismatchError(spec.name, f"expected a number, got {value!r}")
            row[spec.name] = float(value)
        else:
            if not isinstance(value, str):
                raise SchemaMismatchError(spec.name, f"expected a level string, got {value!r}")
            if value not in spec.levels:
                warnings.append(
                    f"{spec.name}: unseen level {value!r} replaced by {spec.mode_level!r}"
                )
                value = spec.mode_level
            row[spec.name] = value

    score = float(model.impl.score_row(row))
    label = model.positive_label if score >= 0.5 else _other_label(model.positive_label)
    return Prediction(label=label, score=score, warnings=warnings)


def _other_label(positive_label: str) -> str:
    return LOW_RISK if positive_label == HIGH_RISK else HIGH_RISK


__all__ = [
    "ALGORITHMS",
    "DEFAULT_HYPERPARAMETERS",
    "Dataset",
    "DecisionTree",
    "EvalReport",
    "FeatureSpec",
    "LinearSVM",
    "NaiveBayes",
    "Prediction",
    "RandomForest",
    "SCENARIO_NAMES",
    "SCHEMA_VERSION",
    "ScenarioSpec",
    "TrainedModel",
    "auc_score",
    "build_scenario_dataset",
    "confusion_counts",
    "cross_validate",
    "default_scenario_specs",
    "fit_scenario_models",
    "load_model",
    "predict",
    "save_model",
    "scenario_grid",
    "stratified_kfold",
    "train",
]
