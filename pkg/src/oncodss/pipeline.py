"""End-to-end orchestration: ingest -> survival -> DEG -> enrichment ->
scenario grid -> model persistence, with a reproducible manifest.

Each stage's artifacts are written before the next stage starts; the
manifest is written last and records input/output digests, the config
echo and per-stage seeds. Reruns with identical inputs and seed are
byte-identical except for the manifest's timestamps field. One run per
output directory is enforced with a lock file.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import report
from .cohort import (
    Cohort,
    DichotomizationRule,
    build_cohort,
    default_rules,
    load_rules,
    parse_clinical_table,
    parse_expression_matrix,
)
from .diffexpr import DEGList, GeneStats, differential_expression, select_degs
from .enrichment import EnrichmentResult, GeneSetLibrary, enrich, load_gmt
from .errors import (
    BundleDigestError,
    OutputLockedError,
    StageError,
    ValidationError,
)
from .models import (
    ALGORITHMS,
    ScenarioSpec,
    TrainedModel,
    build_scenario_dataset,
    default_scenario_specs,
    fit_scenario_models,
    load_model,
    save_model,
    scenario_grid,
)
from .models.evaluate import EvalReport
from .models.persist import _spec_to_dict
from .seeding import seed_for
from .survival import SurvivalTable, survival_table

MANIFEST_NAME = "manifest.json"
STAGES = ("ingest", "survival", "diffexpr", "enrichment", "train")


@dataclass
class PipelineConfig:
    clinical: Path
    expression: Path
    libraries: dict[str, Path]
    out: Path
    survival_parameters: list[str]
    rules: list[DichotomizationRule] | None = None
    deg_log2_threshold: float = 1.0
    deg_alpha: float = 0.05
    enrichment_alpha: float = 0.05
    nicotine_term: str = "Nicotine addiction"
    kras_term: str = "KRAS signaling"
    cv_k: int = 10
    seed: int = 0
    locale: str = "point"

    def validate(self) -> None:
        if self.cv_k < 2:
            raise ValidationError("cv_k must be >= 2")
        if self.deg_log2_threshold <= 0:
            raise ValidationError("deg_log2_threshold must be positive")
        for name in ("deg_alpha", "enrichment_alpha"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValidationError(f"{name} must lie in (0, 1)")
        if self.locale not in ("point", "comma"):
            raise ValidationError("locale must be 'point' or 'comma'")
        if not self.survival_parameters:
            raise ValidationError("survival_parameters must not be empty")

    def echo(self) -> dict:
        return {
            "clinical": str(self.clinical),
            "expression": str(self.expression),
            "libraries": {k: str(v) for k, v in sorted(self.libraries.items())},
            "out": str(self.out),
            "survival_parameters": list(self.survival_parameters),
            "rules": "default" if self.rules is None else [vars(r) for r in self.rules],
            "deg_log2_threshold": self.deg_log2_threshold,
            "deg_alpha": self.deg_alpha,
            "enrichment_alpha": self.enrichment_alpha,
            "nicotine_term": self.nicotine_term,
            "kras_term": self.kras_term,
            "cv_k": self.cv_k,
            "seed": self.seed,
            "locale": self.locale,
        }

    @staticmethod
    def from_file(
        path: str | Path,
        out: str | Path | None = None,
        seed: int | None = None,
        k: int | None = None,
    ) -> "PipelineConfig":
        """Load a JSON config; relative paths resolve against the config dir."""
        path = Path(path)
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        base = path.parent

        def resolve(p: str) -> Path:
            candidate = Path(p)
            return candidate if candidate.is_absolute() else base / candidate

        for required in ("clinical", "expression", "libraries", "survival_parameters"):
            if required not in raw:
                raise ValidationError(f"config is missing {required!r}")

        rules = None
        if raw.get("rules"):
            if isinstance(raw["rules"], str):
                rules = load_rules(resolve(raw["rules"]))
            else:
                rules = [DichotomizationRule(**entry) for entry in raw["rules"]]

        config = PipelineConfig(
            clinical=resolve(raw["clinical"]),
            expression=resolve(raw["expression"]),
            libraries={name: resolve(p) for name, p in raw["libraries"].items()},
            out=Path(out) if out is not None else resolve(raw.get("out", "out")),
            survival_parameters=list(raw["survival_parameters"]),
            rules=rules,
            deg_log2_threshold=raw.get("deg_log2_threshold", 1.0),
            deg_alpha=raw.get("deg_alpha", 0.05),
            enrichment_alpha=raw.get("enrichment_alpha", 0.05),
            nicotine_term=raw.get("nicotine_term", "Nicotine addiction"),
            kras_term=raw.get("kras_term", "KRAS signaling"),
            cv_k=k if k is not None else raw.get("cv_k", 10),
            seed=seed if seed is not None else raw.get("seed", 0),
            locale=raw.get("locale", "point"),
        )
        config.validate()
        return config


@dataclass
class ReportBundle:
    # survival/gene_stats/degs stay None when the run stops before their stage
    cohort: Cohort
    survival: SurvivalTable | None
    gene_stats: list[GeneStats] | None
    degs: DEGList | None
    enrichment: dict[str, list[EnrichmentResult]]
    reports: list[EvalReport]
    model_paths: dict[tuple[str, str], Path]
    manifest: dict


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _curves_payload(table: SurvivalTable) -> dict:
    payload: dict[str, dict] = {}
    for row in table.rows:
        entry = payload.setdefault(
            row.parameter, {"parameter": row.parameter, "p": table.p_values.get(row.parameter), "levels": []}
        )
        lower, upper = row.curve.band()
        entry["levels"].append(
            {
                "level": row.level,
                "n": row.n,
                "events": row.events,
                "times": row.curve.event_times,
                "survival": row.curve.survival,
                "at_risk": row.curve.at_risk,
                "d": row.curve.events,
                "se": row.curve.greenwood_se,
                "lcl": lower,
                "ucl": upper,
                "median": {
                    "median": row.median.median,
                    "se": row.median.std_error,
                    "lcl": row.median.lcl_95,
                    "ucl": row.median.ucl_95,
                },
            }
        )
    return payload


def run_pipeline(config: PipelineConfig, last_stage: str = "train") -> ReportBundle:
    """Run the stages in order, stopping after ``last_stage``, and write the
    manifest last. Bundles are servable only after a full run (the manifest
    status stays "partial" otherwise)."""
    if last_stage not in STAGES:
        raise ValidationError(f"unknown stage {last_stage!r}")
    config.validate()
    out = config.out
    out.mkdir(parents=True, exist_ok=True)
    (out / "models").mkdir(exist_ok=True)

    lock = out / ".lock"
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise OutputLockedError(f"another run owns {out} (stale {lock}?)") from None
    os.close(fd)

    started = datetime.now(timezone.utc).isoformat()
    outputs: dict[str, str] = {}
    stage_seeds = {stage: seed_for(config.seed, stage) for stage in STAGES}
    manifest: dict = {
        "schema_version": 1,
        "config": config.echo(),
        "seed": config.seed,
        "stage_seeds": stage_seeds,
        "inputs": {},
        "outputs": outputs,
        "scenarios": {},
        "models": [],
        "status": "running",
        "failed_stage": None,
        "timestamps": {"started": started, "finished": None},
    }

    def persist(relpath: str, text: str) -> None:
        path = out / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        report.write_text(path, text)
        outputs[relpath] = file_digest(path)

    def finish_manifest(status: str, failed_stage: str | None) -> None:
        manifest["status"] = status
        manifest["failed_stage"] = failed_stage
        manifest["timestamps"]["finished"] = datetime.now(timezone.utc).isoformat()
        report.write_json(out / MANIFEST_NAME, manifest)

    stop_index = STAGES.index(last_stage)
    table = None
    stats = None
    degs = None
    enrichment_results: dict[str, list[EnrichmentResult]] = {}
    reports: list[EvalReport] = []
    model_paths: dict[tuple[str, str], Path] = {}

    current_stage = "ingest"
    try:
        # --- ingest --------------------------------------------------------
        manifest["inputs"] = {
            "clinical": {"path": str(config.clinical), "sha256": file_digest(config.clinical)},
            "expression": {"path": str(config.expression), "sha256": file_digest(config.expression)},
            "libraries": {
                name: {"path": str(p), "sha256": file_digest(p)}
                for name, p in sorted(config.libraries.items())
            },
        }
        clinical = parse_clinical_table(config.clinical)
        expr = parse_expression_matrix(config.expression)
        rules = config.rules if config.rules is not None else default_rules()
        cohort = build_cohort(clinical, expr, rules)
        label_counts: dict[str, int] = {}
        for value in cohort.label.values():
            label_counts[value] = label_counts.get(value, 0) + 1
        persist(
            "ingest_summary.json",
            report.canonical_json(
                {
                    "provenance": cohort.provenance.as_dict(),
                    "genes": len(cohort.expression.genes),
                    "samples": len(cohort.sample_ids),
                    "labels": label_counts,
                }
            ),
        )

        if stop_index >= STAGES.index("survival"):
            current_stage = "survival"
            table = survival_table(cohort, config.survival_parameters)
            persist("survival_table.tsv", report.survival_table_tsv(table))
            persist("survival_table.json", report.canonical_json(report.survival_table_json(table)))
            persist("survival_curves.json", report.canonical_json(_curves_payload(table)))

        if stop_index >= STAGES.index("diffexpr"):
            current_stage = "diffexpr"
            stats = differential_expression(cohort.expression, cohort.label)
            degs = select_degs(stats, config.deg_log2_threshold, config.deg_alpha)
            persist("gene_stats.tsv", report.gene_stats_tsv(stats))
            persist("gene_stats.json", report.canonical_json(report.gene_stats_json(stats)))
            persist(
                "degs.json",
                report.canonical_json(
                    {
                        "up": sorted(degs.up),
                        "down": sorted(degs.down),
                        "threshold": degs.threshold,
                        "alpha": degs.alpha,
                    }
                ),
            )

        libraries: dict[str, GeneSetLibrary] = {}
        if stop_index >= STAGES.index("enrichment"):
            current_stage = "enrichment"
            universe = set(cohort.expression.genes)
            libraries = {
                name: load_gmt(path, name=name) for name, path in sorted(config.libraries.items())
            }
            for name, library in libraries.items():
                results = enrich(degs, library, universe)
                enrichment_results[name] = results
                persist(f"enrichment_{name}.tsv", report.enrichment_tsv(results))
                persist(f"enrichment_{name}.json", report.canonical_json(report.enrichment_json(results)))

        if stop_index >= STAGES.index("train"):
            current_stage = "train"
            term_genes: dict[str, list[str]] = {}
            for library in libraries.values():
                for term in (config.nicotine_term, config.kras_term):
                    if term in library.terms:
                        term_genes[term] = sorted(library.terms[term])
            specs = default_scenario_specs(
                config.survival_parameters,
                term_genes,
                nicotine_term=config.nicotine_term,
                kras_term=config.kras_term,
            )
            train_seed = stage_seeds["train"]
            reports = scenario_grid(cohort, specs, ALGORITHMS, config.cv_k, train_seed)
            models = fit_scenario_models(cohort, specs, ALGORITHMS, train_seed)
            persist("metrics_grid.tsv", report.grid_tsv(reports, config.locale))
            persist("metrics_grid.json", report.canonical_json(report.grid_json(reports)))

            for spec in specs:
                dataset = build_scenario_dataset(cohort, spec)
                manifest["scenarios"][spec.name] = {
                    "clinical_features": list(spec.clinical_features),
                    "gene_features": list(spec.gene_features),
                    "dropped_genes": dataset.dropped_genes,
                    "schema": [
                        _spec_to_dict(dataset.feature_kinds[f]) for f in dataset.feature_names
                    ],
                }
            for (scenario, kind), model in sorted(models.items()):
                relpath = f"models/{scenario}__{kind}.json"
                save_model(model, out / relpath)
                outputs[relpath] = file_digest(out / relpath)
                manifest["models"].append({"scenario": scenario, "algorithm": kind, "path": relpath})
                model_paths[(scenario, kind)] = out / relpath

        finish_manifest("complete" if last_stage == "train" else "partial", None)
        return ReportBundle(
            cohort=cohort,
            survival=table,
            gene_stats=stats,
            degs=degs,
            enrichment=enrichment_results,
            reports=reports,
            model_paths=model_paths,
            manifest=manifest,
        )
    except Exception as exc:
        finish_manifest("failed", current_stage)
        raise StageError(current_stage, exc) from exc
    finally:
        lock.unlink(missing_ok=True)


@dataclass
class Bundle:
    """A completed run reloaded from disk, ready to serve."""

    root: Path
    manifest: dict
    digest: str
    models: dict[tuple[str, str], TrainedModel]
    reports: dict[tuple[str, str], EvalReport]
    survival_curves: dict
    enrichment: dict[str, list[dict]]
    gene_stats: list[dict] = field(default_factory=list)

    def scenarios(self) -> list[str]:
        return sorted(self.manifest["scenarios"])

    def feature_schema(self, scenario: str) -> list[dict] | None:
        entry = self.manifest["scenarios"].get(scenario)
        return entry["schema"] if entry else None


def verify_bundle(out_dir: str | Path, check_inputs: bool = False) -> dict:
    """Recompute digests against the manifest; raises BundleDigestError."""
    out = Path(out_dir)
    manifest_path = out / MANIFEST_NAME
    if not manifest_path.exists():
        raise ValidationError(f"{out}: no {MANIFEST_NAME}; not a bundle")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("status") != "complete":
        raise ValidationError(f"{out}: bundle status is {manifest.get('status')!r}")
    for relpath, digest in manifest["outputs"].items():
        path = out / relpath
        if not path.exists():
            raise BundleDigestError(f"missing output file {relpath}")
        if file_digest(path) != digest:
            raise BundleDigestError(f"digest mismatch for {relpath}")
    if check_inputs:
        inputs = manifest["inputs"]
        flat = [inputs["clinical"], inputs["expression"], *inputs["libraries"].values()]
        for entry in flat:
            if file_digest(entry["path"]) != entry["sha256"]:
                raise BundleDigestError(f"input digest mismatch for {entry['path']}")
    return manifest


def load_bundle(out_dir: str | Path, check_inputs: bool = False) -> Bundle:
    """Load and verify a completed bundle for serving."""
    out = Path(out_dir)
    manifest = verify_bundle(out, check_inputs=check_inputs)

    models: dict[tuple[str, str], TrainedModel] = {}
    for entry in manifest["models"]:
        models[(entry["scenario"], entry["algorithm"])] = load_model(out / entry["path"])

    grid = json.loads((out / "metrics_grid.json").read_text(encoding="utf-8"))
    reports = {
        (r["scenario"], r["algorithm"]): EvalReport.from_dict(r) for r in grid
    }
    curves = json.loads((out / "survival_curves.json").read_text(encoding="utf-8"))
    enrichment: dict[str, list[dict]] = {}
    for name in manifest["config"]["libraries"]:
        path = out / f"enrichment_{name}.json"
        if path.exists():
            enrichment[name] = json.loads(path.read_text(encoding="utf-8"))
    gene_stats = json.loads((out / "gene_stats.json").read_text(encoding="utf-8"))

    return Bundle(
        root=out,
        manifest=manifest,
        digest=file_digest(out / MANIFEST_NAME),
        models=models,
        reports=reports,
        survival_curves=curves,
        enrichment=enrichment,
        gene_stats=gene_stats,
    )
