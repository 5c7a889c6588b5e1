"""Over-representation analysis of DEG lists against gene-set libraries.

GMT parsing plus the hypergeometric upper-tail test per term, BH-adjusted
across terms, with each term's overlap split into up- and down-regulated
members. Gene symbols are opaque strings throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .diffexpr import DEGList, bh_adjust
from .errors import (
    DuplicateTermError,
    EmptyQueryError,
    EmptyUniverseError,
    MalformedLineError,
)
from .special import hypergeom_sf


@dataclass
class GeneSetLibrary:
    name: str
    terms: dict[str, set[str]]
    source_lines: dict[str, int]  # term -> 1-based line number, for diagnostics


@dataclass
class EnrichmentResult:
    term: str
    overlap_up: list[str]
    overlap_down: list[str]
    k: int  # overlap size within the universe
    K: int  # term size within the universe
    n: int  # query size within the universe
    N: int  # universe size
    p_value: float
    q_value: float


def load_gmt(path: str | Path, name: str | None = None) -> GeneSetLibrary:
    """Parse a GMT file: per line, term TAB description TAB gene [TAB gene ...].

    Duplicate genes within a term are collapsed; lines with fewer than
    three fields or repeated term names are errors.
    """
    terms: dict[str, set[str]] = {}
    source_lines: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise MalformedLineError(line_number)
            term = fields[0].strip()
            if term in terms:
                raise DuplicateTermError(term)
            genes = {g.strip() for g in fields[2:] if g.strip()}
            if not genes:
                raise MalformedLineError(line_number)
            terms[term] = genes
            source_lines[term] = line_number
    return GeneSetLibrary(
        name=name or Path(path).stem, terms=terms, source_lines=source_lines
    )


def enrich(
    degs: DEGList, library: GeneSetLibrary, universe: Iterable[str]
) -> list[EnrichmentResult]:
    """Hypergeometric over-representation of the DEG query in each term.

    The query is up + down restricted to the universe; term genes outside
    the universe are dropped before testing. Results are BH-adjusted
    across all tested terms and sorted by q, then term name.
    """
    universe = set(universe)
    if not universe:
        raise EmptyUniverseError("empty universe")
    up = set(degs.up) & universe
    down = set(degs.down) & universe
    query = up | down
    if not query:
        raise EmptyQueryError("no query genes inside the universe")

    N = len(universe)
    n = len(query)
    results: list[EnrichmentResult] = []
    for term, genes in library.terms.items():
        term_genes = genes & universe
        K = len(term_genes)
        overlap = query & term_genes
        k = len(overlap)
        p = hypergeom_sf(k, N, K, n)
        results.append(
            EnrichmentResult(
                term=term,
                overlap_up=sorted(overlap & up),
                overlap_down=sorted(overlap & down),
                k=k,
                K=K,
                n=n,
                N=N,
                p_value=p,
                q_value=0.0,
            )
        )

    for result, q in zip(results, bh_adjust([r.p_value for r in results])):
        result.q_value = q
    results.sort(key=lambda r: (r.q_value, r.term))
    return results


def significant(results: Sequence[EnrichmentResult], alpha: float = 0.05) -> list[EnrichmentResult]:
    return [r for r in results if r.q_value < alpha]
