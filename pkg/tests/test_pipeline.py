"""Pipeline orchestration: staging, determinism, provenance, failure paths."""

import json
import shutil

import pytest

from oncodss.errors import (
    BundleDigestError,
    OutputLockedError,
    StageError,
    ValidationError,
)
from oncodss.fixture import PLANTED_GENES, write_fixture
from oncodss.pipeline import (
    MANIFEST_NAME,
    PipelineConfig,
    load_bundle,
    run_pipeline,
    verify_bundle,
)
from oncodss.seeding import seed_for


def canonical_without_timestamps(path) -> str:
    manifest = json.loads(path.read_text())
    manifest.pop("timestamps")
    return json.dumps(manifest, sort_keys=True)


class TestConfig:
    def test_k_below_two_rejected(self, fixture_dir, tmp_path):
        with pytest.raises(ValidationError):
            PipelineConfig.from_file(fixture_dir / "config.json", out=tmp_path, k=1)

    def test_missing_keys_rejected(self, tmp_path):
        bad = tmp_path / "config.json"
        bad.write_text('{"clinical": "x.tsv"}')
        with pytest.raises(ValidationError):
            PipelineConfig.from_file(bad)

    def test_bad_locale_rejected(self, fixture_dir, tmp_path):
        raw = json.loads((fixture_dir / "config.json").read_text())
        raw["locale"] = "fancy"
        bad = tmp_path / "config.json"
        bad.write_text(json.dumps(raw))
        with pytest.raises(ValidationError):
            PipelineConfig.from_file(bad, out=tmp_path / "out")

    def test_flag_overrides(self, fixture_dir, tmp_path):
        config = PipelineConfig.from_file(
            fixture_dir / "config.json", out=tmp_path / "o", seed=99, k=4
        )
        assert config.seed == 99
        assert config.cv_k == 4

    def test_rules_as_sidecar_path(self, fixture_dir, tmp_path):
        rules = [
            {
                "parameter": "dimension",
                "kind": "threshold",
                "cutoff": 1.0,
                "left_label": "<1.0",
                "right_label": ">=1.0",
            }
        ]
        (tmp_path / "rules.json").write_text(json.dumps(rules))
        raw = json.loads((fixture_dir / "config.json").read_text())
        raw["rules"] = str(tmp_path / "rules.json")
        raw["clinical"] = str(fixture_dir / "clinical.tsv")
        raw["expression"] = str(fixture_dir / "expression.tsv")
        raw["libraries"] = {k: str(fixture_dir / f"{k}.gmt") for k in raw["libraries"]}
        cfg_path = tmp_path / "config.json"
        cfg_path.write_text(json.dumps(raw))
        config = PipelineConfig.from_file(cfg_path, out=tmp_path / "o")
        assert len(config.rules) == 1
        assert config.rules[0].cutoff == 1.0


class TestRun:
    def test_outputs_and_planted_signal(self, fixture_bundle_dir, fixture_config):
        out = fixture_bundle_dir
        for name in (
            MANIFEST_NAME,
            "ingest_summary.json",
            "survival_table.tsv",
            "survival_table.json",
            "survival_curves.json",
            "gene_stats.tsv",
            "gene_stats.json",
            "degs.json",
            "enrichment_kegg_mini.json",
            "enrichment_hallmark_mini.json",
            "metrics_grid.tsv",
            "metrics_grid.json",
        ):
            assert (out / name).exists(), name

        degs = json.loads((out / "degs.json").read_text())
        recovered = set(degs["up"]) | set(degs["down"])
        assert len(recovered & set(PLANTED_GENES)) / len(PLANTED_GENES) >= 0.8

        grid = json.loads((out / "metrics_grid.json").read_text())
        assert len(grid) == 16
        assert {(r["scenario"], r["algorithm"]) for r in grid} == {
            (s, a)
            for s in ("clinical_only", "clinical_nicotine", "clinical_kras", "all_parameters")
            for a in ("decision_tree", "random_forest", "naive_bayes", "linear_svm")
        }

        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert manifest["status"] == "complete"
        assert len(manifest["models"]) == 16
        for entry in manifest["models"]:
            assert (out / entry["path"]).exists()

    def test_rerun_identical_except_timestamps(self, fixture_dir, tmp_path):
        config = PipelineConfig.from_file(fixture_dir / "config.json", out=tmp_path / "out")
        run_pipeline(config)
        before = {
            p.relative_to(config.out): p.read_bytes()
            for p in config.out.rglob("*")
            if p.is_file()
        }
        first_manifest = canonical_without_timestamps(config.out / MANIFEST_NAME)
        run_pipeline(config)
        after = {
            p.relative_to(config.out): p.read_bytes()
            for p in config.out.rglob("*")
            if p.is_file()
        }
        assert set(before) == set(after)
        changed = [str(k) for k in before if before[k] != after[k]]
        assert changed in ([], [MANIFEST_NAME])
        assert first_manifest == canonical_without_timestamps(config.out / MANIFEST_NAME)

    def test_stage_isolation_models_regenerate(self, fixture_dir, tmp_path):
        config = PipelineConfig.from_file(fixture_dir / "config.json", out=tmp_path / "out")
        run_pipeline(config)
        models_dir = config.out / "models"
        before = {p.name: p.read_bytes() for p in models_dir.glob("*.json")}
        shutil.rmtree(models_dir)
        run_pipeline(config)
        after = {p.name: p.read_bytes() for p in models_dir.glob("*.json")}
        assert before == after

    def test_unreadable_expression_fails_at_ingest(self, fixture_dir, tmp_path):
        config = PipelineConfig.from_file(fixture_dir / "config.json", out=tmp_path / "out")
        config.expression = tmp_path / "missing.tsv"
        with pytest.raises(StageError) as err:
            run_pipeline(config)
        assert err.value.stage == "ingest"
        manifest = json.loads((config.out / MANIFEST_NAME).read_text())
        assert manifest["status"] == "failed"
        assert manifest["failed_stage"] == "ingest"
        # no later-stage outputs were written
        assert not (config.out / "survival_table.tsv").exists()

    def test_lock_excludes_concurrent_runs(self, fixture_dir, tmp_path):
        config = PipelineConfig.from_file(fixture_dir / "config.json", out=tmp_path / "out")
        config.out.mkdir(parents=True, exist_ok=True)
        (config.out / ".lock").touch()
        with pytest.raises(OutputLockedError):
            run_pipeline(config)

    def test_stage_seeds_are_stable_hashes(self, fixture_bundle_dir):
        manifest = json.loads((fixture_bundle_dir / MANIFEST_NAME).read_text())
        seed = manifest["seed"]
        for stage, value in manifest["stage_seeds"].items():
            assert value == seed_for(seed, stage)


class TestVerification:
    def test_verify_passes_on_clean_bundle(self, fixture_bundle_dir):
        manifest = verify_bundle(fixture_bundle_dir, check_inputs=True)
        assert manifest["status"] == "complete"

    def test_output_tamper_detected(self, fixture_dir, tmp_path):
        config = PipelineConfig.from_file(fixture_dir / "config.json", out=tmp_path / "out")
        run_pipeline(config)
        target = config.out / "metrics_grid.tsv"
        target.write_text(target.read_text() + "tampered\n")
        with pytest.raises(BundleDigestError):
            verify_bundle(config.out)

    def test_input_tamper_detected(self, tmp_path):
        fixture = write_fixture(tmp_path / "fixture", seed=13)
        config = PipelineConfig.from_file(fixture["config"], out=tmp_path / "out")
        run_pipeline(config)
        fixture["clinical"].write_text(fixture["clinical"].read_text() + "\n")
        with pytest.raises(BundleDigestError):
            verify_bundle(config.out, check_inputs=True)
        # outputs alone still verify
        verify_bundle(config.out, check_inputs=False)

    def test_load_bundle_exposes_models_and_reports(self, fixture_bundle_dir):
        bundle = load_bundle(fixture_bundle_dir)
        assert len(bundle.models) == 16
        assert len(bundle.reports) == 16
        assert bundle.scenarios() == [
            "all_parameters",
            "clinical_kras",
            "clinical_nicotine",
            "clinical_only",
        ]
        schema = bundle.feature_schema("clinical_nicotine")
        names = [f["name"] for f in schema]
        assert "stage" in names and "GRIA1" in names
