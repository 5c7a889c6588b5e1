#!/usr/bin/env python3
"""Over-representation walkthrough against the bundled mini libraries.

Run from the repo root:  python demos/03_enrichment.py
"""

from oncodss.diffexpr import DEGList
from oncodss.enrichment import enrich, load_gmt
from oncodss.fixture import NICOTINE_DOWN, NICOTINE_UP, bundled_library_path


def main():
    kegg = load_gmt(bundled_library_path("kegg_mini"))
    print(f"library {kegg.name!r}: {len(kegg.terms)} terms")
    for term, genes in kegg.terms.items():
        print(f"  {term}: {len(genes)} genes")

    # A 200-gene universe in which the whole nicotine term moved.
    universe = set(NICOTINE_UP) | set(NICOTINE_DOWN) | {f"GENE{i:04d}" for i in range(1, 197)}
    degs = DEGList(
        up=NICOTINE_UP + ["GENE0001"],
        down=NICOTINE_DOWN + ["GENE0002"],
        threshold=1.0,
        alpha=0.05,
    )
    print(f"\nquery: {len(degs.up)} up + {len(degs.down)} down in a universe of {len(universe)}")

    results = enrich(degs, kegg, universe)
    print("\n== enrichment (sorted by q) ==")
    print(f"{'term':<28}{'k/K':>8}{'p':>12}{'q':>12}  overlap")
    for r in results:
        overlap = "+".join(r.overlap_up) + (" / -" + "-".join(r.overlap_down) if r.overlap_down else "")
        print(f"{r.term:<28}{f'{r.k}/{r.K}':>8}{r.p_value:>12.2e}{r.q_value:>12.2e}  {overlap}")


if __name__ == "__main__":
    main()
