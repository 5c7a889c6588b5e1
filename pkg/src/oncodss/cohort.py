"""Cohort ingestion: clinical + expression tables to a labeled cohort.

Parses TCGA-style tab-separated exports, keeps primary-tumor samples,
deduplicates per patient, dichotomizes clinical parameters, imputes
missing feature values and derives the binary prognosis label (high_risk
when a death event was observed).

Expression values are expected to be library-size normalized upstream;
any non-negative matrix is accepted.
"""

from __future__ import annotations

import csv
import json
import math
import re
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateGeneError,
    DuplicateSampleError,
    EmptyFileError,
    MissingColumnError,
    NonNumericCellError,
    NoOverlapError,
    RaggedRowError,
    UnlabeledSampleError,
    ValidationError,
)

HIGH_RISK = "high_risk"
LOW_RISK = "low_risk"

DAYS_PER_MONTH = 30.44

# Case-insensitive cell contents treated as missing.
MISSING_TOKENS = {"", "na", "null", "--"}

# ClinicalRecord field -> default column header in the clinical table.
DEFAULT_CLINICAL_SCHEMA: dict[str, str] = {
    "patient_id": "patient_id",
    "sample_id": "sample_id",
    "days_to_death": "days_to_death",
    "days_to_last_follow_up": "days_to_last_follow_up",
    "vital_status": "vital_status",
    "stage": "ajcc_pathologic_stage",
    "t_category": "ajcc_pathologic_t",
    "n_category": "ajcc_pathologic_n",
    "m_category": "ajcc_pathologic_m",
    "morphology": "morphology",
    "primary_diagnosis": "primary_diagnosis",
    "cigarettes_per_day": "cigarettes_per_day",
    "years_smoked": "years_smoked",
    "dimension": "dimension",
    "malignancy": "malignancy",
}

PRIMARY_TUMOR_TYPES = {"primary tumor", "primary solid tumor"}

# Embedded expression-matrix row carrying per-sample tissue types.
SAMPLE_TYPE_ROW = "!sample_type"

_STAGE_RE = re.compile(r"stage\s*([ivx]+)", re.IGNORECASE)
_TNM_RE = re.compile(r"^([TNM])\s*(\d+|[Xx])", re.IGNORECASE)


def is_missing(cell: str | None) -> bool:
    return cell is None or cell.strip().lower() in MISSING_TOKENS


@dataclass
class ClinicalRecord:
    patient_id: str
    sample_id: str
    survival_time: float | None = None  # months
    event: bool | None = None  # defined only when survival_time is present
    stage: str | None = None  # one of i/ii/iii/iv or None
    t_category: str | None = None
    n_category: str | None = None
    m_category: str | None = None
    dimension: float | None = None
    morphology: str | None = None
    malignancy: bool | None = None
    primary_diagnosis: str | None = None
    cigarettes_per_day: float | None = None
    years_smoked: float | None = None


@dataclass
class ExpressionMatrix:
    genes: list[str]
    samples: list[str]
    values: np.ndarray  # genes x samples, non-negative
    sample_type: dict[str, str]

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.genes), len(self.samples)):
            raise ValidationError(
                f"matrix shape {self.values.shape} does not match "
                f"{len(self.genes)} genes x {len(self.samples)} samples"
            )
        if len(set(self.genes)) != len(self.genes):
            raise ValidationError("duplicate gene symbols")
        if len(set(self.samples)) != len(self.samples):
            raise ValidationError("duplicate sample ids")

    def restrict_samples(self, keep: Sequence[str]) -> "ExpressionMatrix":
        index = {s: j for j, s in enumerate(self.samples)}
        cols = [index[s] for s in keep]
        return ExpressionMatrix(
            genes=list(self.genes),
            samples=list(keep),
            values=self.values[:, cols],
            sample_type={s: self.sample_type.get(s, "") for s in keep},
        )

    def row(self, gene: str) -> np.ndarray:
        return self.values[self.genes.index(gene)]


@dataclass(frozen=True)
class DichotomizationRule:
    """How one clinical parameter becomes a two-level (or direct) feature.

    kind is one of:
      threshold        value < cutoff -> left_label, else right_label
      category_vs_rest value == category -> label_match, else label_other
      direct           value used as the level itself
    """

    parameter: str
    kind: str
    cutoff: float | None = None
    left_label: str | None = None
    right_label: str | None = None
    category: str | None = None
    label_match: str | None = None
    label_other: str | None = None

    def __post_init__(self) -> None:
        if self.kind == "threshold":
            if self.cutoff is None or not math.isfinite(self.cutoff):
                raise ValidationError(f"{self.parameter}: threshold cutoff must be finite")
            if not self.left_label or not self.right_label or self.left_label == self.right_label:
                raise ValidationError(f"{self.parameter}: threshold labels must be distinct")
        elif self.kind == "category_vs_rest":
            if self.category is None or self.label_other is None:
                raise ValidationError(f"{self.parameter}: category and label_other required")
            if (self.label_match or self.category) == self.label_other:
                raise ValidationError(f"{self.parameter}: labels must be distinct")
        elif self.kind != "direct":
            raise ValidationError(f"{self.parameter}: unknown rule kind {self.kind!r}")

    @property
    def numeric(self) -> bool:
        return self.kind == "threshold"

    def apply(self, value: object) -> str:
        if self.kind == "threshold":
            return self.left_label if float(value) < self.cutoff else self.right_label
        if self.kind == "category_vs_rest":
            if str(value) == self.category:
                return self.label_match or self.category
            return self.label_other
        if isinstance(value, bool):
            return "Yes" if value else "No"
        return str(value)

    def level_order(self) -> list[str] | None:
        """Preferred reporting order of levels, None for direct rules."""
        if self.kind == "threshold":
            return [self.left_label, self.right_label]
        if self.kind == "category_vs_rest":
            return [self.label_match or self.category, self.label_other]
        return None


def default_rules() -> list[DichotomizationRule]:
    """Dichotomization defaults matching the standard clinical report rows."""
    return [
        DichotomizationRule("stage", "direct"),
        DichotomizationRule("t_category", "category_vs_rest", category="T1", label_other="Other"),
        DichotomizationRule("n_category", "category_vs_rest", category="N0", label_other="Other"),
        DichotomizationRule("m_category", "category_vs_rest", category="M0", label_other="M1"),
        DichotomizationRule("dimension", "threshold", cutoff=0.7, left_label="<0.7", right_label=">=0.7"),
        DichotomizationRule("morphology", "category_vs_rest", category="8140/3", label_other="Others"),
        DichotomizationRule("malignancy", "direct"),
        DichotomizationRule(
            "primary_diagnosis",
            "category_vs_rest",
            category="Adenocarcinoma, NOS",
            label_match="Adeno",
            label_other="Other",
        ),
        DichotomizationRule("cigarettes_per_day", "threshold", cutoff=2.2, left_label="<2.2", right_label=">=2.2"),
        DichotomizationRule("years_smoked", "threshold", cutoff=32.0, left_label="<32", right_label=">=32"),
    ]


def load_rules(path: str | Path) -> list[DichotomizationRule]:
    """Load dichotomization rules from a JSON config.

    Schema: a list of objects with keys parameter, kind, and the
    kind-specific fields of :class:`DichotomizationRule`. An empty file
    section falls back to the defaults.
    """
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if not raw:
        return default_rules()
    return [DichotomizationRule(**entry) for entry in raw]


@dataclass
class Provenance:
    input_samples: int = 0
    retained: int = 0
    non_primary_dropped: int = 0
    duplicate_dropped: int = 0
    unlabeled_dropped: int = 0
    imputed: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(vars(self))


@dataclass
class Cohort:
    records: list[ClinicalRecord]
    expression: ExpressionMatrix
    features: dict[str, dict[str, str]]  # sample_id -> parameter -> level
    label: dict[str, str]  # sample_id -> high_risk / low_risk
    provenance: Provenance
    rules: list[DichotomizationRule] = field(default_factory=list)
    imputed_cells: set[tuple[str, str]] = field(default_factory=set)  # (sample, parameter)

    @property
    def sample_ids(self) -> list[str]:
        return list(self.expression.samples)

    def record_for(self, sample_id: str) -> ClinicalRecord:
        return self._by_sample[sample_id]

    def __post_init__(self) -> None:
        self._by_sample = {r.sample_id: r for r in self.records}
        if set(self._by_sample) != set(self.expression.samples):
            raise ValidationError("records and expression samples do not match 1:1")

    def raw_feature(self, sample_id: str, parameter: str) -> str | None:
        """Dichotomized level, or None where the source value was imputed."""
        if (sample_id, parameter) in self.imputed_cells:
            return None
        return self.features[sample_id].get(parameter)


def _parse_float(cell: str) -> float | None:
    try:
        return float(cell)
    except ValueError:
        return None


def _parse_bool(cell: str) -> bool | None:
    v = cell.strip().lower()
    if v in {"yes", "y", "true", "1"}:
        return True
    if v in {"no", "n", "false", "0"}:
        return False
    return None


def _normalize_stage(cell: str) -> str | None:
    m = _STAGE_RE.search(cell)
    if not m:
        return None
    roman = m.group(1).lower()
    # Strip AJCC sub-letters already excluded by the regex; collapse IA -> i.
    for known in ("iv", "iii", "ii", "i"):
        if roman.startswith(known):
            return known
    return None


def _normalize_tnm(cell: str) -> str:
    m = _TNM_RE.match(cell.strip())
    if m:
        return f"{m.group(1).upper()}{m.group(2).upper()}"
    return cell.strip()


def parse_clinical_table(
    path: str | Path, schema: Mapping[str, str] | None = None
) -> list[ClinicalRecord]:
    """Parse a tab-separated clinical table into records, one per data row.

    ``schema`` maps record fields to column headers; unspecified entries use
    :data:`DEFAULT_CLINICAL_SCHEMA`. Only the patient_id column is required.
    Unparseable numerics become missing; unknown columns are ignored.
    """
    columns = dict(DEFAULT_CLINICAL_SCHEMA)
    if schema:
        columns.update(schema)

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFileError(f"{path}: empty file") from None
        index = {name: i for i, name in enumerate(header)}
        if columns["patient_id"] not in index:
            raise MissingColumnError(columns["patient_id"])

        def cell(row: list[str], field_name: str) -> str | None:
            col = columns.get(field_name)
            if col is None or col not in index or index[col] >= len(row):
                return None
            value = row[index[col]]
            return None if is_missing(value) else value.strip()

        records: list[ClinicalRecord] = []
        for row in reader:
            if not any(c.strip() for c in row):
                continue
            patient = cell(row, "patient_id")
            if not patient:
                continue
            sample = cell(row, "sample_id") or patient

            vital = cell(row, "vital_status")
            survival_time: float | None = None
            event: bool | None = None
            if vital is not None:
                dead = vital.strip().lower() == "dead"
                days_cell = cell(row, "days_to_death" if dead else "days_to_last_follow_up")
                days = _parse_float(days_cell) if days_cell is not None else None
                if days is not None and days >= 0:
                    survival_time = days / DAYS_PER_MONTH
                    event = dead

            stage_cell = cell(row, "stage")
            t_cell = cell(row, "t_category")
            n_cell = cell(row, "n_category")
            m_cell = cell(row, "m_category")
            dim_cell = cell(row, "dimension")
            cig_cell = cell(row, "cigarettes_per_day")
            yrs_cell = cell(row, "years_smoked")
            mal_cell = cell(row, "malignancy")

            records.append(
                ClinicalRecord(
                    patient_id=patient,
                    sample_id=sample,
                    survival_time=survival_time,
                    event=event,
                    stage=_normalize_stage(stage_cell) if stage_cell else None,
                    t_category=_normalize_tnm(t_cell) if t_cell else None,
                    n_category=_normalize_tnm(n_cell) if n_cell else None,
                    m_category=_normalize_tnm(m_cell) if m_cell else None,
                    dimension=_parse_float(dim_cell) if dim_cell else None,
                    morphology=cell(row, "morphology"),
                    malignancy=_parse_bool(mal_cell) if mal_cell else None,
                    primary_diagnosis=cell(row, "primary_diagnosis"),
                    cigarettes_per_day=_parse_float(cig_cell) if cig_cell else None,
                    years_smoked=_parse_float(yrs_cell) if yrs_cell else None,
                )
            )

    if not records:
        raise EmptyFileError(f"{path}: header only, no data rows")
    return records


def parse_expression_matrix(
    path: str | Path, sample_type_path: str | Path | None = None
) -> ExpressionMatrix:
    """Parse a genes-in-rows expression matrix.

    First column header must be ``gene``; remaining headers are sample ids.
    Per-sample tissue types come from an embedded ``!sample_type`` row or a
    two-column sidecar file; samples without a type default to primary tumor.
    """
    genes: list[str] = []
    rows: list[list[float]] = []
    sample_type: dict[str, str] = {}

    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyFileError(f"{path}: empty file") from None
        samples = [s.strip() for s in header[1:]]
        seen_samples: set[str] = set()
        for s in samples:
            if s in seen_samples:
                raise DuplicateSampleError(s)
            seen_samples.add(s)

        seen_genes: set[str] = set()
        for line_number, row in enumerate(reader, start=2):
            if not row or not any(c.strip() for c in row):
                continue
            name = row[0].strip()
            if len(row) - 1 != len(samples):
                raise RaggedRowError(line_number, len(samples), len(row) - 1)
            if name == SAMPLE_TYPE_ROW:
                sample_type = dict(zip(samples, (c.strip() for c in row[1:])))
                continue
            if name in seen_genes:
                raise DuplicateGeneError(name)
            seen_genes.add(name)
            values: list[float] = []
            for s, c in zip(samples, row[1:]):
                v = _parse_float(c.strip())
                if v is None:
                    raise NonNumericCellError(line_number, s, c)
                values.append(v)
            genes.append(name)
            rows.append(values)

    if not genes:
        raise EmptyFileError(f"{path}: no gene rows")

    if sample_type_path is not None:
        with open(sample_type_path, "r", encoding="utf-8", newline="") as fh:
            for row in csv.reader(fh, delimiter="\t"):
                if len(row) >= 2 and not is_missing(row[0]):
                    sample_type[row[0].strip()] = row[1].strip()

    for s in samples:
        sample_type.setdefault(s, "Primary Tumor")

    return ExpressionMatrix(
        genes=genes,
        samples=samples,
        values=np.array(rows, dtype=float),
        sample_type=sample_type,
    )


def _record_value(record: ClinicalRecord, parameter: str) -> object | None:
    return getattr(record, parameter)


def build_cohort(
    clinical: Sequence[ClinicalRecord],
    expr: ExpressionMatrix,
    rules: Sequence[DichotomizationRule] | None = None,
    imputation: str = "mode_median",
) -> Cohort:
    """Join clinical and expression data into a labeled cohort.

    Keeps primary-tumor samples only; per patient, the lexicographically
    smallest sample id wins. Samples with no usable survival information
    (including expression samples without any clinical record) are dropped
    and counted as unlabeled. Every input sample lands in exactly one of
    retained / non-primary / duplicate / unlabeled.
    """
    if imputation not in {"mode_median", "none"}:
        raise ValidationError(f"unknown imputation policy {imputation!r}")
    rules = list(rules) if rules is not None else default_rules()

    by_sample: dict[str, ClinicalRecord] = {}
    for record in clinical:
        if not record.patient_id:
            raise ValidationError("clinical record with empty patient_id")
        by_sample[record.sample_id] = record

    if not set(by_sample) & set(expr.samples):
        raise NoOverlapError("clinical and expression tables share no samples")

    prov = Provenance(input_samples=len(expr.samples))

    primary: list[str] = []
    for s in expr.samples:
        stype = expr.sample_type.get(s, "").strip().lower()
        if stype in PRIMARY_TUMOR_TYPES:
            primary.append(s)
        else:
            prov.non_primary_dropped += 1

    # Deduplicate per patient before the label check: keep-first-by-sorted-id.
    by_patient: dict[str, list[str]] = {}
    unmatched: list[str] = []
    for s in primary:
        record = by_sample.get(s)
        if record is None:
            unmatched.append(s)
        else:
            by_patient.setdefault(record.patient_id, []).append(s)

    deduped: list[str] = []
    for patient in by_patient:
        kept, *dropped = sorted(by_patient[patient])
        deduped.append(kept)
        prov.duplicate_dropped += len(dropped)

    prov.unlabeled_dropped += len(unmatched)

    retained: list[str] = []
    for s in sorted(deduped, key=expr.samples.index):
        record = by_sample[s]
        if record.survival_time is None or record.event is None:
            prov.unlabeled_dropped += 1
        else:
            retained.append(s)
    prov.retained = len(retained)

    if not retained:
        raise UnlabeledSampleError("no retained sample carries survival information")

    expression = expr.restrict_samples(retained)
    records = [by_sample[s] for s in retained]

    # Imputation on raw values, then dichotomization, so numeric medians are
    # computed on the measurement scale.
    imputed_cells: set[tuple[str, str]] = set()
    fill: dict[str, object] = {}
    if imputation == "mode_median":
        for rule in rules:
            observed = [
                _record_value(r, rule.parameter)
                for r in records
                if _record_value(r, rule.parameter) is not None
            ]
            if not observed:
                continue
            if rule.numeric:
                fill[rule.parameter] = statistics.median(observed)
            else:
                counts: dict[str, int] = {}
                for v in observed:
                    key = rule.apply(v)
                    counts[key] = counts.get(key, 0) + 1
                # Deterministic mode: highest count, then lexicographic.
                mode = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]
                fill[rule.parameter] = ("__level__", mode)

    features: dict[str, dict[str, str]] = {}
    label: dict[str, str] = {}
    for record in records:
        sample_features: dict[str, str] = {}
        for rule in rules:
            value = _record_value(record, rule.parameter)
            if value is None:
                if rule.parameter not in fill:
                    continue
                imputed_cells.add((record.sample_id, rule.parameter))
                prov.imputed += 1
                filled = fill[rule.parameter]
                if isinstance(filled, tuple):
                    sample_features[rule.parameter] = filled[1]
                else:
                    sample_features[rule.parameter] = rule.apply(filled)
            else:
                sample_features[rule.parameter] = rule.apply(value)
        features[record.sample_id] = sample_features
        label[record.sample_id] = HIGH_RISK if record.event else LOW_RISK

    return Cohort(
        records=records,
        expression=expression,
        features=features,
        label=label,
        provenance=prov,
        rules=rules,
        imputed_cells=imputed_cells,
    )
