"""oncodss: decision support for cancer prognosis over TCGA-style cohorts.

Library layers: cohort ingestion, Kaplan-Meier survival analysis,
differential expression, gene-set over-representation, four cross-validated
classifiers, a reproducible pipeline and an HTTP prediction service.
"""

__version__ = "0.1.0"

from .cohort import (
    Cohort,
    ClinicalRecord,
    DichotomizationRule,
    ExpressionMatrix,
    build_cohort,
    default_rules,
    parse_clinical_table,
    parse_expression_matrix,
)
from .diffexpr import DEGList, GeneStats, bh_adjust, differential_expression, select_degs
from .enrichment import EnrichmentResult, GeneSetLibrary, enrich, load_gmt
from .survival import (
    KMCurve,
    LogRankResult,
    MedianEstimate,
    SurvivalObservation,
    SurvivalTable,
    km_estimate,
    logrank_test,
    median_survival,
    survival_table,
)

__all__ = [
    "Cohort",
    "ClinicalRecord",
    "DEGList",
    "DichotomizationRule",
    "EnrichmentResult",
    "ExpressionMatrix",
    "GeneSetLibrary",
    "GeneStats",
    "KMCurve",
    "LogRankResult",
    "MedianEstimate",
    "SurvivalObservation",
    "SurvivalTable",
    "bh_adjust",
    "build_cohort",
    "default_rules",
    "differential_expression",
    "enrich",
    "km_estimate",
    "load_gmt",
    "logrank_test",
    "median_survival",
    "parse_clinical_table",
    "parse_expression_matrix",
    "select_degs",
    "survival_table",
]
