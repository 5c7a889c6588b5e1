"""Report rendering: canonical JSON and tab-separated views.

Canonical JSON is sorted-key, two-space-indented UTF-8 with Python's
shortest round-trip float repr, so identical inputs give identical bytes.
TSV views are the human-readable mirrors; p-values below 0.001 render as
"<0.001" while stored values stay exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Sequence

from .diffexpr import GeneStats, stats_sorted
from .enrichment import EnrichmentResult
from .models.evaluate import EvalReport
from .survival import SurvivalTable, table_as_records


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: str | Path, payload) -> None:
    Path(path).write_text(canonical_json(payload), encoding="utf-8")


def write_text(path: str | Path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def format_p(p: float | None) -> str:
    if p is None:
        return ""
    if p < 0.001:
        return "<0.001"
    return f"{p:.3f}"


def format_percent(value: float, locale: str = "point") -> str:
    text = f"{value * 100:.1f}%"
    if locale == "comma":
        return text.replace(".", ",")
    return text


def _fmt(value: float | int | None, digits: int = 3) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.{digits}f}"


def survival_table_tsv(table: SurvivalTable) -> str:
    lines = ["parameter\tlevel\tn\tevents\tmedian\tse\tlcl\tucl\tp"]
    for row in table_as_records(table):
        lines.append(
            "\t".join(
                [
                    row["parameter"],
                    row["level"],
                    str(row["n"]),
                    str(row["events"]),
                    _fmt(row["median"]),
                    _fmt(row["se"]),
                    _fmt(row["lcl"]),
                    _fmt(row["ucl"]),
                    format_p(row["p"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def gene_stats_tsv(stats: Sequence[GeneStats]) -> str:
    lines = ["gene\tlog2_fc\tt\tp\tq"]
    for s in stats_sorted(stats):
        lines.append(
            f"{s.gene}\t{_fmt(s.log2_fc, 4)}\t{_fmt(s.t_statistic, 4)}"
            f"\t{s.p_value!r}\t{s.q_value!r}"
        )
    return "\n".join(lines) + "\n"


def enrichment_tsv(results: Sequence[EnrichmentResult]) -> str:
    lines = ["term\tk\tK\tn\tN\tp\tq\tup_genes\tdown_genes"]
    for r in results:
        lines.append(
            f"{r.term}\t{r.k}\t{r.K}\t{r.n}\t{r.N}\t{r.p_value!r}\t{r.q_value!r}"
            f"\t{','.join(r.overlap_up)}\t{','.join(r.overlap_down)}"
        )
    return "\n".join(lines) + "\n"


def grid_tsv(reports: Sequence[EvalReport], locale: str = "point") -> str:
    """Scenario-major metrics grid with one-decimal percent cells."""
    lines = ["scenario\talgorithm\tsensitivity\tspecificity\tauc\taccuracy"]
    last_scenario = None
    for r in reports:
        scenario_cell = r.scenario if r.scenario != last_scenario else ""
        last_scenario = r.scenario
        lines.append(
            "\t".join(
                [
                    scenario_cell,
                    r.algorithm,
                    format_percent(r.sensitivity, locale),
                    format_percent(r.specificity, locale),
                    format_percent(r.auc, locale),
                    format_percent(r.accuracy, locale),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def survival_table_json(table: SurvivalTable) -> list[dict]:
    return table_as_records(table)


def gene_stats_json(stats: Sequence[GeneStats]) -> list[dict]:
    return [
        {
            "gene": s.gene,
            "mean_a": s.mean_a,
            "mean_b": s.mean_b,
            "log2_fc": s.log2_fc,
            "t": None if s.t_statistic != s.t_statistic or abs(s.t_statistic) == float("inf") else s.t_statistic,
            "p": s.p_value,
            "q": s.q_value,
            "degenerate": s.degenerate,
        }
        for s in stats_sorted(stats)
    ]


def enrichment_json(results: Sequence[EnrichmentResult]) -> list[dict]:
    return [
        {
            "term": r.term,
            "k": r.k,
            "K": r.K,
            "n": r.n,
            "N": r.N,
            "p": r.p_value,
            "q": r.q_value,
            "up": r.overlap_up,
            "down": r.overlap_down,
        }
        for r in results
    ]


def grid_json(reports: Sequence[EvalReport]) -> list[dict]:
    return [r.as_dict() for r in reports]


def load_grid(payload: Sequence[Mapping]) -> list[EvalReport]:
    return [EvalReport.from_dict(p) for p in payload]
