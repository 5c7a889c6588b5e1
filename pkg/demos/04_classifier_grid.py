#!/usr/bin/env python3
"""Cross-validated classifier grid over the four feature-set scenarios,
using the synthetic fixture cohort.

Run from the repo root:  python demos/04_classifier_grid.py
"""

import tempfile
from pathlib import Path

from oncodss.cohort import build_cohort, parse_clinical_table, parse_expression_matrix
from oncodss.enrichment import load_gmt
from oncodss.fixture import SURVIVAL_PARAMETERS, write_fixture
from oncodss.models import ALGORITHMS, default_scenario_specs, scenario_grid
from oncodss.report import grid_tsv


def main():
    with tempfile.TemporaryDirectory() as tmp:
        paths = write_fixture(Path(tmp), seed=13)
        clinical = parse_clinical_table(paths["clinical"])
        expr = parse_expression_matrix(paths["expression"])
        cohort = build_cohort(clinical, expr)
        print(
            f"cohort: {len(cohort.sample_ids)} samples, "
            f"{len(cohort.expression.genes)} genes, provenance {cohort.provenance.as_dict()}"
        )

        kegg = load_gmt(paths["kegg"])
        hallmark = load_gmt(paths["hallmark"])
        term_genes = {
            "Nicotine addiction": sorted(kegg.terms["Nicotine addiction"]),
            "KRAS signaling": sorted(hallmark.terms["KRAS signaling"]),
        }
        specs = default_scenario_specs(SURVIVAL_PARAMETERS, term_genes)

        print("\nrunning 10-fold CV for 4 scenarios x 4 algorithms...")
        reports = scenario_grid(cohort, specs, ALGORITHMS, k=10, seed=13)
        print()
        print(grid_tsv(reports, locale="point"))
        best = max(reports, key=lambda r: r.accuracy)
        print(f"best accuracy: {best.scenario}/{best.algorithm} at {best.accuracy:.1%}")


if __name__ == "__main__":
    main()
