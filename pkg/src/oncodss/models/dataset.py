"""Scenario datasets and the stratified fold assignment.

A Dataset carries mixed categorical / numeric feature columns for one of
the four feature-set scenarios; folds are stratified per class and are a
deterministic function of (dataset order, k, seed).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..cohort import Cohort
from ..errors import (
    ClassTooSmallError,
    EmptyFeatureSetError,
    UnknownScenarioError,
    ValidationError,
)

SCENARIO_NAMES = ("clinical_only", "clinical_nicotine", "clinical_kras", "all_parameters")

ALGORITHMS = ("decision_tree", "random_forest", "naive_bayes", "linear_svm")


@dataclass(frozen=True)
class FeatureSpec:
    name: str
    kind: str  # "categorical" | "numeric"
    levels: tuple[str, ...] | None = None
    observed_min: float | None = None
    observed_max: float | None = None
    mode_level: str | None = None  # substitution target for unseen levels

    def __post_init__(self) -> None:
        if self.kind not in ("categorical", "numeric"):
            raise ValidationError(f"feature {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == "categorical" and not self.levels:
            raise ValidationError(f"feature {self.name!r}: categorical without levels")


@dataclass
class Dataset:
    feature_names: list[str]
    feature_kinds: dict[str, FeatureSpec]
    rows: list[list]  # per sample, aligned with feature_names
    labels: list[str]
    scenario: str
    dropped_genes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def validate(self) -> None:
        for name in self.feature_names:
            if name not in self.feature_kinds:
                raise ValidationError(f"feature {name!r} has no kind declaration")
        if len(self.rows) != len(self.labels):
            raise ValidationError("rows and labels length mismatch")
        for row in self.rows:
            if len(row) != len(self.feature_names):
                raise ValidationError("row width does not match feature list")
            for name, value in zip(self.feature_names, row):
                spec = self.feature_kinds[name]
                if value is None:
                    raise ValidationError(f"missing cell for feature {name!r}")
                if spec.kind == "categorical" and str(value) not in spec.levels:
                    raise ValidationError(
                        f"feature {name!r}: value {value!r} outside declared levels"
                    )

    def subset(self, indices: Sequence[int]) -> "Dataset":
        return Dataset(
            feature_names=self.feature_names,
            feature_kinds=self.feature_kinds,
            rows=[self.rows[i] for i in indices],
            labels=[self.labels[i] for i in indices],
            scenario=self.scenario,
        )

    def column(self, name: str) -> list:
        j = self.feature_names.index(name)
        return [row[j] for row in self.rows]

    def classes(self) -> list[str]:
        return sorted(set(self.labels))


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    clinical_features: tuple[str, ...]
    gene_features: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.name not in SCENARIO_NAMES:
            raise UnknownScenarioError(self.name)


def default_scenario_specs(
    clinical_features: Sequence[str],
    term_genes: Mapping[str, Sequence[str]],
    *,
    nicotine_term: str = "Nicotine addiction",
    kras_term: str = "KRAS signaling",
) -> list[ScenarioSpec]:
    """The four standard scenarios from a term -> gene-symbols map."""
    clin = tuple(clinical_features)
    nicotine = tuple(term_genes.get(nicotine_term, ()))
    kras = tuple(term_genes.get(kras_term, ()))
    all_genes = nicotine + tuple(g for g in kras if g not in nicotine)
    return [
        ScenarioSpec("clinical_only", clin),
        ScenarioSpec("clinical_nicotine", clin, nicotine),
        ScenarioSpec("clinical_kras", clin, kras),
        ScenarioSpec("all_parameters", clin, all_genes),
    ]


def build_scenario_dataset(cohort: Cohort, spec: ScenarioSpec) -> Dataset:
    """Feature matrix for one scenario: dichotomized clinical levels plus
    numeric expression for the requested genes.

    Gene symbols absent from the expression matrix are dropped and listed
    in ``dataset.dropped_genes``.
    """
    samples = cohort.sample_ids
    feature_names: list[str] = []
    kinds: dict[str, FeatureSpec] = {}
    columns: list[list] = []

    for parameter in spec.clinical_features:
        values = [cohort.features[s].get(parameter) for s in samples]
        if any(v is None for v in values):
            raise ValidationError(
                f"clinical feature {parameter!r} has gaps; run imputation or drop it"
            )
        counts: dict[str, int] = {}
        for v in values:
            counts[v] = counts.get(v, 0) + 1
        levels = tuple(sorted(counts))
        mode = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
        feature_names.append(parameter)
        kinds[parameter] = FeatureSpec(
            name=parameter, kind="categorical", levels=levels, mode_level=mode
        )
        columns.append(values)

    gene_index = {g: i for i, g in enumerate(cohort.expression.genes)}
    dropped: list[str] = []
    seen: set[str] = set()
    for gene in spec.gene_features:
        if gene in seen:
            continue
        seen.add(gene)
        if gene not in gene_index:
            dropped.append(gene)
            continue
        values = cohort.expression.values[gene_index[gene]].astype(float)
        feature_names.append(gene)
        kinds[gene] = FeatureSpec(
            name=gene,
            kind="numeric",
            observed_min=float(values.min()),
            observed_max=float(values.max()),
        )
        columns.append([float(v) for v in values])

    if not feature_names:
        raise EmptyFeatureSetError(f"scenario {spec.name!r} resolved to zero features")

    rows = [[col[i] for col in columns] for i in range(len(samples))]
    dataset = Dataset(
        feature_names=feature_names,
        feature_kinds=kinds,
        rows=rows,
        labels=[cohort.label[s] for s in samples],
        scenario=spec.name,
        dropped_genes=dropped,
    )
    dataset.validate()
    return dataset


def stratified_kfold(dataset: Dataset, k: int, seed: int) -> list[int]:
    """Per-sample fold index; per-class counts across folds differ by <= 1."""
    if k < 2:
        raise ValidationError("k must be >= 2")
    by_class: dict[str, list[int]] = {}
    for i, label in enumerate(dataset.labels):
        by_class.setdefault(label, []).append(i)
    for label, indices in sorted(by_class.items()):
        if len(indices) < k:
            raise ClassTooSmallError(label, k)

    rng = np.random.default_rng(seed)
    assignment = [0] * len(dataset.labels)
    for label, indices in sorted(by_class.items()):
        order = rng.permutation(len(indices))
        for j, pos in enumerate(order):
            assignment[indices[pos]] = j % k
    return assignment
