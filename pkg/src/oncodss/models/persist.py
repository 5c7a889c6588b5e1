"""Versioned on-disk model documents.

Each trained model persists as a self-describing JSON file carrying the
schema version, scenario, feature schema, seed, hyperparameters and the
kind-specific parameters; loading any other schema_version is an error.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ModelSchemaError, ValidationError
from .bayes import NaiveBayes
from .dataset import FeatureSpec
from .forest import RandomForest
from .svm import LinearSVM
from .tree import DecisionTree, TreeNode

SCHEMA_VERSION = 1


def _spec_to_dict(spec: FeatureSpec) -> dict:
    return {
        "name": spec.name,
        "kind": spec.kind,
        "levels": list(spec.levels) if spec.levels else None,
        "observed_min": spec.observed_min,
        "observed_max": spec.observed_max,
        "mode_level": spec.mode_level,
    }


def _spec_from_dict(payload: dict) -> FeatureSpec:
    return FeatureSpec(
        name=payload["name"],
        kind=payload["kind"],
        levels=tuple(payload["levels"]) if payload.get("levels") else None,
        observed_min=payload.get("observed_min"),
        observed_max=payload.get("observed_max"),
        mode_level=payload.get("mode_level"),
    )


def _dump_params(model) -> dict:
    from . import TrainedModel  # local import to avoid a cycle

    assert isinstance(model, TrainedModel)
    impl = model.impl
    if model.kind == "decision_tree":
        return {"root": impl.root.to_dict()}
    if model.kind == "random_forest":
        return {"trees": [t.root.to_dict() for t in impl.trees]}
    if model.kind == "naive_bayes":
        return {
            "classes": impl.classes,
            "positive_label": impl.positive_label,
            "log_priors": impl.log_priors,
            "gaussians": {
                f: {c: list(mv) for c, mv in per.items()} for f, per in impl.gaussians.items()
            },
            "categoricals": impl.categoricals,
            "laplace": impl.laplace,
            "var_floor": impl.var_floor,
        }
    if model.kind == "linear_svm":
        return {
            "weights": [float(w) for w in impl.weights],
            "bias": impl.bias,
            "numeric_stats": {f: list(ms) for f, ms in impl.numeric_stats.items()},
            "lam": impl.lam,
            "epochs": impl.epochs,
            "margin_scale": impl.margin_scale,
        }
    raise ValidationError(f"unknown model kind {model.kind!r}")


def _load_impl(kind: str, params: dict, schema: list[FeatureSpec], positive_label: str):
    specs = {s.name: s for s in schema}
    names = [s.name for s in schema]
    if kind == "decision_tree":
        tree = DecisionTree()
        tree.root = TreeNode.from_dict(params["root"])
        return tree
    if kind == "random_forest":
        forest = RandomForest(n_trees=len(params["trees"]))
        forest.trees = []
        for payload in params["trees"]:
            tree = DecisionTree()
            tree.root = TreeNode.from_dict(payload)
            forest.trees.append(tree)
        return forest
    if kind == "naive_bayes":
        nb = NaiveBayes(laplace=params["laplace"], var_floor=params["var_floor"])
        nb.classes = list(params["classes"])
        nb.positive_label = params["positive_label"]
        nb.log_priors = dict(params["log_priors"])
        nb.gaussians = {
            f: {c: (mv[0], mv[1]) for c, mv in per.items()}
            for f, per in params["gaussians"].items()
        }
        nb.categoricals = params["categoricals"]
        nb._specs = specs
        return nb
    if kind == "linear_svm":
        svm = LinearSVM(
            lam=params["lam"], epochs=params["epochs"], margin_scale=params["margin_scale"]
        )
        svm.weights = np.array(params["weights"], dtype=float)
        svm.bias = params["bias"]
        svm.numeric_stats = {f: (ms[0], ms[1]) for f, ms in params["numeric_stats"].items()}
        svm._names = names
        svm._specs = specs
        return svm
    raise ModelSchemaError(f"unknown model kind {kind!r}")


def save_model(model, path: str | Path) -> None:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "kind": model.kind,
        "scenario": model.scenario,
        "seed": model.seed,
        "hyperparameters": model.hyperparameters,
        "positive_label": model.positive_label,
        "feature_schema": [_spec_to_dict(s) for s in model.schema],
        "parameters": _dump_params(model),
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )


def load_model(path: str | Path):
    from . import TrainedModel

    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ModelSchemaError(
            f"{path}: schema_version {version!r} is not supported (expected {SCHEMA_VERSION})"
        )
    schema = [_spec_from_dict(s) for s in payload["feature_schema"]]
    impl = _load_impl(payload["kind"], payload["parameters"], schema, payload["positive_label"])
    return TrainedModel(
        kind=payload["kind"],
        scenario=payload["scenario"],
        seed=payload["seed"],
        hyperparameters=payload["hyperparameters"],
        positive_label=payload["positive_label"],
        schema=schema,
        impl=impl,
    )
