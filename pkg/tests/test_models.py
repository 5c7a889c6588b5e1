"""Classifier, fold-assignment, metric and persistence contracts."""

import numpy as np
import pytest

from oncodss.errors import (
    ClassTooSmallError,
    DegenerateDatasetError,
    EmptyFeatureSetError,
    ModelSchemaError,
    SchemaMismatchError,
    UnknownScenarioError,
)
from oncodss.models import (
    Dataset,
    FeatureSpec,
    LinearSVM,
    ScenarioSpec,
    auc_score,
    build_scenario_dataset,
    confusion_counts,
    cross_validate,
    default_scenario_specs,
    load_model,
    predict,
    save_model,
    stratified_kfold,
    train,
)
from oncodss.models.tree import DecisionTree, best_split
from oracles import auc_oracle, gaussian_bayes_oracle, weighted_gini_oracle


def numeric_dataset(x, labels, scenario="clinical_only"):
    return Dataset(
        feature_names=["x"],
        feature_kinds={
            "x": FeatureSpec("x", "numeric", observed_min=float(min(x)), observed_max=float(max(x)))
        },
        rows=[[float(v)] for v in x],
        labels=list(labels),
        scenario=scenario,
    )


def sign_dataset(n=200, seed=42, margin=0.05):
    rng = np.random.default_rng(seed)
    half = n // 2
    x = np.concatenate([rng.uniform(-1, -margin, half), rng.uniform(margin, 1, half)])
    labels = ["low_risk"] * half + ["high_risk"] * half
    perm = rng.permutation(n)
    return numeric_dataset(x[perm], [labels[i] for i in perm])


def mixed_dataset(n=40, seed=3):
    rng = np.random.default_rng(seed)
    colors = ["red", "green", "blue"]
    rows, labels = [], []
    for i in range(n):
        hot = rng.random() < 0.5
        rows.append([float(rng.normal(2.0 if hot else -2.0, 1.0)), colors[int(rng.integers(0, 3))]])
        labels.append("high_risk" if hot else "low_risk")
    return Dataset(
        feature_names=["score", "color"],
        feature_kinds={
            "score": FeatureSpec("score", "numeric", observed_min=-6, observed_max=6),
            "color": FeatureSpec("color", "categorical", levels=tuple(colors), mode_level="red"),
        },
        rows=rows,
        labels=labels,
        scenario="clinical_only",
    )


class TestStratifiedKfold:
    def test_exact_balance(self):
        ds = numeric_dataset(range(10), ["high_risk"] * 5 + ["low_risk"] * 5)
        assignment = stratified_kfold(ds, 5, seed=1)
        for fold in range(5):
            members = [i for i, f in enumerate(assignment) if f == fold]
            assert len(members) == 2
            assert sorted(ds.labels[i] for i in members) == ["high_risk", "low_risk"]

    def test_class_too_small(self):
        ds = numeric_dataset(range(10), ["high_risk"] * 5 + ["low_risk"] * 5)
        with pytest.raises(ClassTooSmallError):
            stratified_kfold(ds, 11, seed=1)

    def test_deterministic(self):
        ds = sign_dataset(60, seed=5)
        assert stratified_kfold(ds, 10, seed=9) == stratified_kfold(ds, 10, seed=9)

    def test_partition_and_balance(self):
        ds = sign_dataset(106, seed=6)
        k = 10
        assignment = stratified_kfold(ds, k, seed=2)
        assert len(assignment) == len(ds)
        assert set(assignment) == set(range(k))
        for label in ("high_risk", "low_risk"):
            counts = [
                sum(1 for i, f in enumerate(assignment) if f == fold and ds.labels[i] == label)
                for fold in range(k)
            ]
            assert max(counts) - min(counts) <= 1


class TestDecisionTree:
    def test_single_threshold_separates(self):
        ds = sign_dataset(60, seed=7)
        model = train("decision_tree", ds, seed=0)
        hits = sum(
            predict(model, {"x": row[0]}).label == label
            for row, label in zip(ds.rows, ds.labels)
        )
        assert hits == len(ds)
        root = model.impl.root
        assert root.feature == "x"
        assert abs(root.threshold) < 0.2

    def test_degenerate_dataset(self):
        ds = numeric_dataset(range(6), ["high_risk"] * 6)
        with pytest.raises(DegenerateDatasetError):
            train("decision_tree", ds, seed=0)

    def test_root_split_matches_brute_force_gini(self):
        rng = np.random.default_rng(8)
        for trial in range(120):
            n = int(rng.integers(4, 9))
            n_features = int(rng.integers(1, 4))
            columns, kinds, specs = [], [], {}
            names = []
            for j in range(n_features):
                name = f"f{j}"
                names.append(name)
                if rng.random() < 0.5:
                    col = [float(v) for v in rng.integers(0, 5, n)]
                    kinds.append("numeric")
                    specs[name] = FeatureSpec(name, "numeric", observed_min=0, observed_max=5)
                else:
                    levels = ("a", "b", "c")
                    col = [str(levels[int(v)]) for v in rng.integers(0, 3, n)]
                    kinds.append("categorical")
                    specs[name] = FeatureSpec(name, "categorical", levels=levels, mode_level="a")
                columns.append(col)
            y = [int(v) for v in rng.integers(0, 2, n)]
            if len(set(y)) < 2:
                continue
            ds = Dataset(
                feature_names=names,
                feature_kinds=specs,
                rows=[[columns[j][i] for j in range(n_features)] for i in range(n)],
                labels=["high_risk" if v else "low_risk" for v in y],
                scenario="clinical_only",
            )
            oracle_best = weighted_gini_oracle(columns, kinds, y, min_samples_leaf=1)
            np_cols = [
                np.asarray(c, dtype=float) if k == "numeric" else np.asarray(c, dtype=object)
                for c, k in zip(columns, kinds)
            ]
            split = best_split(
                np_cols, [specs[f] for f in names], np.array(y), list(range(n_features)), 1
            )
            if oracle_best is None:
                assert split is None
            else:
                assert split.weighted_gini == pytest.approx(oracle_best, abs=1e-12)

    def test_min_samples_leaf_respected(self):
        ds = sign_dataset(30, seed=9)
        model = train("decision_tree", ds, hyperparameters={"min_samples_leaf": 10}, seed=0)

        def leaves(node):
            if node.is_leaf:
                return [node]
            return leaves(node.left) + leaves(node.right)

        assert all(leaf.n_samples >= 10 for leaf in leaves(model.impl.root))


class TestRandomForest:
    def test_seed_determinism(self):
        ds = mixed_dataset()
        a = train("random_forest", ds, hyperparameters={"n_trees": 15}, seed=11)
        b = train("random_forest", ds, hyperparameters={"n_trees": 15}, seed=11)
        assert [t.root.to_dict() for t in a.impl.trees] == [t.root.to_dict() for t in b.impl.trees]
        row = dict(zip(ds.feature_names, ds.rows[0]))
        assert predict(a, row).score == predict(b, row).score

    def test_different_seeds_differ(self):
        ds = mixed_dataset()
        a = train("random_forest", ds, hyperparameters={"n_trees": 15}, seed=11)
        b = train("random_forest", ds, hyperparameters={"n_trees": 15}, seed=12)
        assert [t.root.to_dict() for t in a.impl.trees] != [t.root.to_dict() for t in b.impl.trees]

    def test_forest_size(self):
        ds = mixed_dataset()
        model = train("random_forest", ds, hyperparameters={"n_trees": 7}, seed=1)
        assert len(model.impl.trees) == 7


class TestNaiveBayes:
    def test_separated_clusters_against_bayes_rule(self):
        rng = np.random.default_rng(10)
        x = np.concatenate([rng.normal(-5, 0.5, 50), rng.normal(5, 0.5, 50)])
        labels = ["low_risk"] * 50 + ["high_risk"] * 50
        ds = numeric_dataset(x, labels)
        model = train("naive_bayes", ds, seed=0)

        correct = 0
        priors = {"low_risk": 0.5, "high_risk": 0.5}
        params = {
            c: model.impl.gaussians["x"][c] for c in ("low_risk", "high_risk")
        }
        for value, label in zip(x, labels):
            result = predict(model, {"x": float(value)})
            correct += result.label == label
            oracle = gaussian_bayes_oracle(float(value), priors, params)
            assert result.score == pytest.approx(oracle["high_risk"], abs=1e-9)
        assert correct / len(labels) >= 0.99

    def test_laplace_smoothing_covers_unseen_in_class(self):
        ds = mixed_dataset()
        model = train("naive_bayes", ds, seed=0)
        for feature, per_class in model.impl.categoricals.items():
            for probs in per_class.values():
                assert all(p > 0 for p in probs.values())
                assert sum(probs.values()) == pytest.approx(1.0)

    def test_variance_floor(self):
        ds = numeric_dataset([1.0, 1.0, 2.0, 2.0], ["high_risk", "high_risk", "low_risk", "low_risk"])
        model = train("naive_bayes", ds, seed=0)
        for mean, var in model.impl.gaussians["x"].values():
            assert var >= 1e-9


class TestLinearSVM:
    def test_objective_not_worse_than_zero_vector(self):
        for seed in (1, 2, 3):
            ds = mixed_dataset(seed=seed)
            model = train("linear_svm", ds, seed=seed)
            svm: LinearSVM = model.impl
            # zero weights, zero bias: hinge = 1 everywhere, objective = 1
            assert svm.objective(ds, "high_risk") <= 1.0 + 1e-9

    def test_boundary_score_is_half_and_high_risk(self):
        ds = sign_dataset(40, seed=13)
        model = train("linear_svm", ds, seed=0)
        svm: LinearSVM = model.impl
        mean, sd = svm.numeric_stats["x"]
        # place the sample exactly on the hyperplane: w*z + b = 0
        z = -svm.bias / svm.weights[0]
        on_plane = z * sd + mean
        result = predict(model, {"x": float(on_plane)})
        assert result.score == pytest.approx(0.5, abs=1e-9)
        assert result.label == "high_risk"

    def test_separable_training(self):
        ds = sign_dataset(100, seed=14)
        model = train("linear_svm", ds, seed=5)
        hits = sum(
            predict(model, {"x": row[0]}).label == label
            for row, label in zip(ds.rows, ds.labels)
        )
        assert hits / len(ds) >= 0.99


class TestPredictSchema:
    def test_constant_tree_predicts_high_risk(self):
        ds = numeric_dataset([1, 2, 3, 4, 5, 6], ["high_risk"] * 5 + ["low_risk"])
        model = train("decision_tree", ds, hyperparameters={"min_samples_leaf": 6}, seed=0)
        result = predict(model, {"x": 99.0})
        assert result.label == "high_risk"
        assert result.score == pytest.approx(5 / 6)

    def test_missing_feature_raises(self):
        ds = mixed_dataset()
        model = train("naive_bayes", ds, seed=0)
        with pytest.raises(SchemaMismatchError) as err:
            predict(model, {"score": 1.0})
        assert err.value.feature == "color"

    def test_unknown_feature_raises(self):
        ds = mixed_dataset()
        model = train("naive_bayes", ds, seed=0)
        with pytest.raises(SchemaMismatchError):
            predict(model, {"score": 1.0, "color": "red", "extra": 2.0})

    def test_wrong_type_raises(self):
        ds = mixed_dataset()
        model = train("naive_bayes", ds, seed=0)
        with pytest.raises(SchemaMismatchError):
            predict(model, {"score": "high", "color": "red"})
        with pytest.raises(SchemaMismatchError):
            predict(model, {"score": 1.0, "color": 5})

    def test_unseen_level_substitutes_mode_with_warning(self):
        ds = mixed_dataset()
        model = train("naive_bayes", ds, seed=0)
        result = predict(model, {"score": 0.0, "color": "magenta"})
        assert result.warnings and "magenta" in result.warnings[0]
        substituted = predict(model, {"score": 0.0, "color": "red"})
        assert result.score == substituted.score


class TestMetrics:
    def test_confusion_worked_example(self):
        # TP=10 FN=2 TN=8 FP=4
        flags = [True] * 12 + [False] * 12
        scores = [1.0] * 10 + [0.0] * 2 + [0.0] * 8 + [1.0] * 4
        tp, fn, tn, fp = confusion_counts(flags, scores)
        assert (tp, fn, tn, fp) == (10, 2, 8, 4)
        assert tp / (tp + fn) == pytest.approx(0.8333, abs=1e-4)
        assert tn / (tn + fp) == pytest.approx(0.6667, abs=1e-4)
        assert (tp + tn) / 24 == pytest.approx(0.75)

    def test_threshold_ties_positive(self):
        tp, fn, tn, fp = confusion_counts([False], [0.5])
        assert fp == 1 and tn == 0

    def test_auc_examples(self):
        assert auc_score([True, True, False, False], [0.9, 0.8, 0.3, 0.1]) == 1.0
        assert auc_score([True, False, True, False], [0.4, 0.4, 0.4, 0.4]) == 0.5

    def test_auc_matches_pairwise_oracle_exactly(self):
        rng = np.random.default_rng(44)
        for _ in range(300):
            n = int(rng.integers(2, 51))
            flags = [bool(v) for v in rng.integers(0, 2, n)]
            if not any(flags) or all(flags):
                continue
            # quantized scores force plenty of ties
            scores = [float(v) / 8.0 for v in rng.integers(0, 9, n)]
            assert auc_score(flags, scores) == auc_oracle(flags, scores)

    def test_label_swap_symmetry(self):
        rng = np.random.default_rng(45)
        flags = [bool(v) for v in rng.integers(0, 2, 30)]
        flags[0], flags[1] = True, False
        scores = [float(v) for v in rng.uniform(0, 1, 30)]
        tp, fn, tn, fp = confusion_counts(flags, scores)
        # Swapping which class is "positive" keeps each sample's predicted
        # label; the confusion matrix transposes, which inverted flags plus
        # inverted scores reproduce (continuous scores, so no 0.5 ties).
        tp2, fn2, tn2, fp2 = confusion_counts(
            [not f for f in flags], [1.0 - s for s in scores]
        )
        sens = tp / (tp + fn)
        spec = tn / (tn + fp)
        assert tp2 / (tp2 + fn2) == pytest.approx(spec)
        assert tn2 / (tn2 + fp2) == pytest.approx(sens)
        # AUC keeps the same score column under the swapped designation.
        assert auc_score([not f for f in flags], scores) == pytest.approx(
            1.0 - auc_score(flags, scores), abs=1e-12
        )


class TestCrossValidate:
    def test_separable_all_algorithms(self):
        ds = sign_dataset(200, seed=42)
        for kind in ("decision_tree", "random_forest", "naive_bayes", "linear_svm"):
            report = cross_validate(ds, kind, 10, seed=7)
            assert report.accuracy >= 0.95, kind
            assert report.auc >= 0.95, kind
            assert report.tp + report.fn + report.tn + report.fp == len(ds)
            assert report.tp + report.fn == sum(lb == "high_risk" for lb in ds.labels)

    def test_deterministic_reports(self):
        ds = sign_dataset(60, seed=1)
        a = cross_validate(ds, "random_forest", 5, seed=3, hyperparameters={"n_trees": 10})
        b = cross_validate(ds, "random_forest", 5, seed=3, hyperparameters={"n_trees": 10})
        assert a == b


class TestScenarioDatasets:
    def test_unknown_scenario_name(self):
        with pytest.raises(UnknownScenarioError):
            ScenarioSpec("bogus", ("stage",))

    def test_default_specs_compose_union(self):
        specs = default_scenario_specs(
            ["stage"],
            {"Nicotine addiction": ["G1", "G2"], "KRAS signaling": ["G2", "G3"]},
        )
        by_name = {s.name: s for s in specs}
        assert by_name["clinical_only"].gene_features == ()
        assert by_name["clinical_nicotine"].gene_features == ("G1", "G2")
        assert by_name["clinical_kras"].gene_features == ("G2", "G3")
        assert by_name["all_parameters"].gene_features == ("G1", "G2", "G3")

    def test_build_from_fixture_cohort(self, fixture_bundle_dir, fixture_config):
        from oncodss.cohort import build_cohort, parse_clinical_table, parse_expression_matrix

        clinical = parse_clinical_table(fixture_config.clinical)
        expr = parse_expression_matrix(fixture_config.expression)
        cohort = build_cohort(clinical, expr)
        spec = ScenarioSpec(
            "clinical_nicotine",
            tuple(fixture_config.survival_parameters),
            ("CACNA1A", "GABRA2", "GRIA2", "GRIA1", "NOT_A_GENE"),
        )
        ds = build_scenario_dataset(cohort, spec)
        assert ds.dropped_genes == ["NOT_A_GENE"]
        assert ds.feature_names[-4:] == ["CACNA1A", "GABRA2", "GRIA2", "GRIA1"]
        assert len(ds) == 60
        ds.validate()
        with pytest.raises(EmptyFeatureSetError):
            build_scenario_dataset(cohort, ScenarioSpec("clinical_only", ()))


class TestPersistence:
    @pytest.mark.parametrize("kind", ["decision_tree", "random_forest", "naive_bayes", "linear_svm"])
    def test_round_trip_preserves_scores(self, kind, tmp_path):
        ds = mixed_dataset()
        hp = {"n_trees": 10} if kind == "random_forest" else None
        model = train(kind, ds, hyperparameters=hp, seed=17)
        path = tmp_path / f"{kind}.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.kind == kind
        assert loaded.scenario == model.scenario
        for row in ds.rows[:10]:
            features = dict(zip(ds.feature_names, row))
            assert predict(loaded, features).score == predict(model, features).score

    def test_schema_version_mismatch(self, tmp_path):
        ds = mixed_dataset()
        model = train("decision_tree", ds, seed=0)
        path = tmp_path / "m.json"
        save_model(model, path)
        import json

        payload = json.loads(path.read_text())
        payload["schema_version"] = 999
        path.write_text(json.dumps(payload))
        with pytest.raises(ModelSchemaError):
            load_model(path)
