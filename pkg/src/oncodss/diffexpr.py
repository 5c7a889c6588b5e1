"""Per-gene differential expression between the two prognosis groups.

Fold change on pseudocount-offset group means, pooled-variance two-sample
Student t-test, Benjamini-Hochberg step-up adjustment, and the significant
up/down gene partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .cohort import HIGH_RISK, ExpressionMatrix
from .errors import GroupTooSmallError, OutOfRangeError
from .special import t_two_sided_p


@dataclass
class GeneStats:
    gene: str
    mean_a: float
    mean_b: float
    log2_fc: float
    t_statistic: float
    p_value: float
    q_value: float
    degenerate: bool = False  # both groups zero-variance with different means


@dataclass
class DEGList:
    up: list[str]
    down: list[str]
    threshold: float  # log2 units
    alpha: float

    @property
    def genes(self) -> list[str]:
        return self.up + self.down


def bh_adjust(p_values: Sequence[float]) -> list[float]:
    """Benjamini-Hochberg step-up adjusted q-values, in input order.

    q_(i) = min over j >= i of p_(j) * m / j, capped at 1.
    """
    m = len(p_values)
    for p in p_values:
        if not (0.0 <= p <= 1.0):
            raise OutOfRangeError(p)
    if m == 0:
        return []
    order = sorted(range(m), key=lambda i: p_values[i])
    q = [0.0] * m
    running = 1.0
    for rank in range(m, 0, -1):
        idx = order[rank - 1]
        running = min(running, p_values[idx] * m / rank)
        q[idx] = running
    return q


def differential_expression(
    expr: ExpressionMatrix,
    labels: Mapping[str, str],
    *,
    positive_label: str = HIGH_RISK,
    pseudocount: float = 1.0,
) -> list[GeneStats]:
    """Group-A-vs-B statistics for every gene, A being the positive label.

    The pseudocount offsets the fold-change means only; the t-test runs on
    the raw values with pooled variance and n_a + n_b - 2 degrees of
    freedom. Genes where both groups have zero variance get p = 1 when the
    means agree and p = 0 (flagged degenerate) when they differ.
    """
    mask_a = np.array([labels[s] == positive_label for s in expr.samples], dtype=bool)
    n_a = int(mask_a.sum())
    n_b = len(expr.samples) - n_a
    if n_a < 2 or n_b < 2:
        raise GroupTooSmallError(f"need >= 2 samples per group, got {n_a} vs {n_b}")

    a = expr.values[:, mask_a]
    b = expr.values[:, ~mask_a]
    mean_a = a.mean(axis=1)
    mean_b = b.mean(axis=1)
    var_a = a.var(axis=1, ddof=1)
    var_b = b.var(axis=1, ddof=1)

    df = n_a + n_b - 2
    pooled = ((n_a - 1) * var_a + (n_b - 1) * var_b) / df
    se = np.sqrt(pooled * (1.0 / n_a + 1.0 / n_b))

    log2_fc = np.log2((mean_a + pseudocount) / (mean_b + pseudocount))

    stats: list[GeneStats] = []
    p_values: list[float] = []
    for i, gene in enumerate(expr.genes):
        degenerate = False
        if se[i] > 0:
            t = float((mean_a[i] - mean_b[i]) / se[i])
            p = t_two_sided_p(t, df)
        elif mean_a[i] == mean_b[i]:
            t, p = 0.0, 1.0
        else:
            t = math.inf if mean_a[i] > mean_b[i] else -math.inf
            p = 0.0
            degenerate = True
        p_values.append(p)
        stats.append(
            GeneStats(
                gene=gene,
                mean_a=float(mean_a[i]),
                mean_b=float(mean_b[i]),
                log2_fc=float(log2_fc[i]),
                t_statistic=t,
                p_value=p,
                q_value=0.0,
                degenerate=degenerate,
            )
        )

    for stat, q in zip(stats, bh_adjust(p_values)):
        stat.q_value = q
    return stats


def select_degs(
    stats: Sequence[GeneStats], log2_threshold: float = 1.0, alpha: float = 0.05
) -> DEGList:
    """Partition significant genes into up / down by fold change sign."""
    if log2_threshold <= 0:
        raise ValueError("log2 threshold must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    up = [s.gene for s in stats if s.log2_fc >= log2_threshold and s.q_value < alpha]
    down = [s.gene for s in stats if s.log2_fc <= -log2_threshold and s.q_value < alpha]
    return DEGList(up=up, down=down, threshold=log2_threshold, alpha=alpha)


def stats_sorted(stats: Sequence[GeneStats]) -> list[GeneStats]:
    """Reporting order: q ascending with gene symbol as the tie-break."""
    return sorted(stats, key=lambda s: (s.q_value, s.gene))
