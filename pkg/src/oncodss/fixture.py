"""Synthetic cohort fixture: 60 retained samples x 200 genes with planted
pathway signal.

Two gene sets are shifted between the prognosis groups (the nicotine- and
KRAS-term members of the bundled mini libraries), so the end-to-end run
has a known answer: those genes dominate the DEG list and both terms
enrich. The tables also plant one duplicate sample, one non-primary
sample, one record without survival information and a handful of missing
clinical cells to exercise the ingestion counters.
"""

from __future__ import annotations

import importlib.resources
import shutil
from pathlib import Path

import numpy as np

from .cohort import DAYS_PER_MONTH
from .report import write_json

NICOTINE_UP = ["GRIA2", "GRIA1"]
NICOTINE_DOWN = ["CACNA1A", "GABRA2"]
KRAS_UP = ["TENM2", "SERPINA10", "KRT13", "KCNQ2", "CDH16", "KRT5", "WNT16", "SCGB1A1"]
KRAS_DOWN = ["COL2A1", "SLC12A32", "EPHA5"]

PLANTED_GENES = NICOTINE_UP + NICOTINE_DOWN + KRAS_UP + KRAS_DOWN

SURVIVAL_PARAMETERS = [
    "stage",
    "t_category",
    "n_category",
    "m_category",
    "dimension",
    "morphology",
    "malignancy",
    "primary_diagnosis",
    "cigarettes_per_day",
    "years_smoked",
]

CLINICAL_COLUMNS = [
    "patient_id",
    "sample_id",
    "vital_status",
    "days_to_death",
    "days_to_last_follow_up",
    "ajcc_pathologic_stage",
    "ajcc_pathologic_t",
    "ajcc_pathologic_n",
    "ajcc_pathologic_m",
    "dimension",
    "morphology",
    "primary_diagnosis",
    "malignancy",
    "cigarettes_per_day",
    "years_smoked",
]

N_RETAINED = 60
N_GENES = 200
SHIFT_UP = 5.0
SHIFT_DOWN = 0.2


def bundled_library_path(name: str) -> Path:
    """Path of a bundled GMT library ("kegg_mini" or "hallmark_mini")."""
    resource = importlib.resources.files("oncodss").joinpath(f"data/{name}.gmt")
    return Path(str(resource))


def _gene_names() -> list[str]:
    background = [f"GENE{i:04d}" for i in range(1, N_GENES - len(PLANTED_GENES) + 1)]
    return PLANTED_GENES + background


def write_fixture(out_dir: str | Path, seed: int = 13) -> dict[str, Path]:
    """Write clinical.tsv, expression.tsv, the two libraries and config.json.

    Returns the path of every written file keyed by role.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    # --- sample roster -----------------------------------------------------
    # P001 contributes a duplicate primary sample; P061 a normal-tissue
    # sample; P062 a record with no usable survival information.
    patients = [f"P{i:03d}" for i in range(1, N_RETAINED + 1)]
    samples = [(p, f"S{p[1:]}-01A", "Primary Tumor") for p in patients]
    samples.insert(1, ("P001", "S001-01B", "Primary Tumor"))
    samples.append(("P061", "S061-11A", "Solid Tissue Normal"))
    samples.append(("P062", "S062-01A", "Primary Tumor"))

    # --- clinical table ----------------------------------------------------
    stages = ["Stage I", "Stage II", "Stage III", "Stage IV"]
    stage_idx = rng.choice(4, size=N_RETAINED, p=[0.4, 0.25, 0.2, 0.15])
    # Exactly half the cohort dies; deaths concentrate in higher stages so
    # the survival table shows real group separation.
    death_score = stage_idx + rng.normal(0, 0.6, N_RETAINED)
    dead = np.zeros(N_RETAINED, dtype=bool)
    dead[np.argsort(-death_score)[: N_RETAINED // 2]] = True

    per_patient: dict[str, dict[str, str]] = {}
    for j, patient in enumerate(patients):
        is_dead = bool(dead[j])
        severity = int(stage_idx[j])
        if is_dead:
            months = float(rng.uniform(2.0, 48.0) * (1.0 - 0.12 * severity))
        else:
            months = float(rng.uniform(6.0, 100.0))
        row = {
            "patient_id": patient,
            "vital_status": "Dead" if is_dead else "Alive",
            "days_to_death": f"{months * DAYS_PER_MONTH:.0f}" if is_dead else "",
            "days_to_last_follow_up": "" if is_dead else f"{months * DAYS_PER_MONTH:.0f}",
            "ajcc_pathologic_stage": stages[severity],
            "ajcc_pathologic_t": str(rng.choice(["T1", "T2", "T3"], p=[0.4, 0.4, 0.2])),
            "ajcc_pathologic_n": str(rng.choice(["N0", "N1", "N2"], p=[0.5, 0.3, 0.2])),
            "ajcc_pathologic_m": "M1" if severity == 3 and rng.random() < 0.7 else "M0",
            "dimension": f"{rng.uniform(0.2, 1.5):.2f}",
            "morphology": "8140/3" if rng.random() < 0.6 else str(rng.choice(["8250/3", "8260/3"])),
            "malignancy": str(rng.choice(["Yes", "No"], p=[0.3, 0.7])),
            "cigarettes_per_day": f"{rng.uniform(0.0, 6.0):.1f}",
            "years_smoked": f"{rng.uniform(5.0, 55.0):.0f}",
        }
        row["primary_diagnosis"] = (
            "Adenocarcinoma, NOS"
            if row["morphology"] == "8140/3"
            else str(rng.choice(["Squamous cell carcinoma", "Papillary adenocarcinoma"]))
        )
        per_patient[patient] = row

    # Missing cells (tokens the parser must treat as absent).
    missing_plan = [
        ("dimension", 5, "NA"),
        ("malignancy", 4, ""),
        ("cigarettes_per_day", 4, "--"),
        ("years_smoked", 3, "null"),
    ]
    for column, count, token in missing_plan:
        for patient in rng.choice(patients, size=count, replace=False):
            per_patient[str(patient)][column] = token

    extra_rows = {
        "P061": {
            "patient_id": "P061",
            "vital_status": "Alive",
            "days_to_death": "",
            "days_to_last_follow_up": "900",
            "ajcc_pathologic_stage": "Stage I",
            "ajcc_pathologic_t": "T1",
            "ajcc_pathologic_n": "N0",
            "ajcc_pathologic_m": "M0",
            "dimension": "0.50",
            "morphology": "8140/3",
            "primary_diagnosis": "Adenocarcinoma, NOS",
            "malignancy": "No",
            "cigarettes_per_day": "1.0",
            "years_smoked": "20",
        },
        "P062": {
            "patient_id": "P062",
            "vital_status": "NA",
            "days_to_death": "",
            "days_to_last_follow_up": "",
            "ajcc_pathologic_stage": "Stage II",
            "ajcc_pathologic_t": "T2",
            "ajcc_pathologic_n": "N1",
            "ajcc_pathologic_m": "M0",
            "dimension": "0.90",
            "morphology": "8250/3",
            "primary_diagnosis": "Squamous cell carcinoma",
            "malignancy": "Yes",
            "cigarettes_per_day": "3.0",
            "years_smoked": "30",
        },
    }

    clinical_path = out / "clinical.tsv"
    with open(clinical_path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(CLINICAL_COLUMNS) + "\n")
        for patient, sample_id, _ in samples:
            row = dict(per_patient.get(patient) or extra_rows[patient])
            row["sample_id"] = sample_id
            fh.write("\t".join(row[c] for c in CLINICAL_COLUMNS) + "\n")

    # --- expression matrix ---------------------------------------------
    genes = _gene_names()
    high_risk_patients = {patients[j] for j in range(N_RETAINED) if dead[j]}
    up = set(NICOTINE_UP) | set(KRAS_UP)
    down = set(NICOTINE_DOWN) | set(KRAS_DOWN)

    base_log = rng.uniform(2.0, 4.5, size=len(genes))
    expression_path = out / "expression.tsv"
    with open(expression_path, "w", encoding="utf-8") as fh:
        header = ["gene"] + [s for _, s, _ in samples]
        fh.write("\t".join(header) + "\n")
        fh.write("\t".join(["!sample_type"] + [stype for _, _, stype in samples]) + "\n")
        for g, gene in enumerate(genes):
            cells = [gene]
            for patient, _, stype in samples:
                value = float(np.exp(base_log[g] + rng.normal(0.0, 0.35)))
                if (
                    stype == "Primary Tumor"
                    and patient in high_risk_patients
                    and gene in up
                ):
                    value *= SHIFT_UP
                elif (
                    stype == "Primary Tumor"
                    and patient in high_risk_patients
                    and gene in down
                ):
                    value *= SHIFT_DOWN
                cells.append(f"{value:.3f}")
            fh.write("\t".join(cells) + "\n")

    # --- libraries + config ---------------------------------------------
    kegg_path = out / "kegg_mini.gmt"
    hallmark_path = out / "hallmark_mini.gmt"
    shutil.copyfile(bundled_library_path("kegg_mini"), kegg_path)
    shutil.copyfile(bundled_library_path("hallmark_mini"), hallmark_path)

    config_path = out / "config.json"
    write_json(
        config_path,
        {
            "clinical": "clinical.tsv",
            "expression": "expression.tsv",
            "libraries": {"kegg_mini": "kegg_mini.gmt", "hallmark_mini": "hallmark_mini.gmt"},
            "survival_parameters": SURVIVAL_PARAMETERS,
            "deg_log2_threshold": 1.0,
            "deg_alpha": 0.05,
            "enrichment_alpha": 0.05,
            "nicotine_term": "Nicotine addiction",
            "kras_term": "KRAS signaling",
            "cv_k": 10,
            "seed": seed,
            "locale": "point",
        },
    )

    return {
        "clinical": clinical_path,
        "expression": expression_path,
        "kegg": kegg_path,
        "hallmark": hallmark_path,
        "config": config_path,
    }
