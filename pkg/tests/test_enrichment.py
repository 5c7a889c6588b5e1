"""GMT parsing and hypergeometric over-representation contracts."""

import numpy as np
import pytest

from oncodss.diffexpr import DEGList
from oncodss.enrichment import enrich, load_gmt, significant
from oncodss.errors import (
    DuplicateTermError,
    EmptyQueryError,
    EmptyUniverseError,
    MalformedLineError,
)
from oncodss.fixture import bundled_library_path
from oracles import hypergeom_oracle


class TestLoadGmt:
    def test_term_with_genes(self, tmp_path):
        path = tmp_path / "lib.gmt"
        path.write_text("NICOTINE_ADDICTION\tdesc\tCACNA1A\tGABRA2\tGRIA1\tGRIA2\n")
        library = load_gmt(path)
        assert library.terms["NICOTINE_ADDICTION"] == {"CACNA1A", "GABRA2", "GRIA1", "GRIA2"}
        assert library.source_lines["NICOTINE_ADDICTION"] == 1

    def test_two_fields_malformed(self, tmp_path):
        path = tmp_path / "lib.gmt"
        path.write_text("TERM\tdesc only\n")
        with pytest.raises(MalformedLineError) as err:
            load_gmt(path)
        assert err.value.line_number == 1

    def test_duplicate_term(self, tmp_path):
        path = tmp_path / "lib.gmt"
        path.write_text("T1\td\tA\tB\nT1\td\tC\n")
        with pytest.raises(DuplicateTermError):
            load_gmt(path)

    def test_duplicate_genes_collapse(self, tmp_path):
        path = tmp_path / "lib.gmt"
        path.write_text("T1\td\tA\tA\tB\n")
        assert load_gmt(path).terms["T1"] == {"A", "B"}

    def test_bundled_libraries_parse(self):
        kegg = load_gmt(bundled_library_path("kegg_mini"))
        hallmark = load_gmt(bundled_library_path("hallmark_mini"))
        assert kegg.terms["Nicotine addiction"] == {"CACNA1A", "GABRA2", "GRIA2", "GRIA1"}
        assert hallmark.terms["KRAS signaling"] == {
            "COL2A1",
            "SLC12A32",
            "EPHA5",
            "TENM2",
            "SERPINA10",
            "KRT13",
            "KCNQ2",
            "CDH16",
            "KRT5",
            "WNT16",
            "SCGB1A1",
        }


def library_from(terms: dict[str, set[str]]):
    from oncodss.enrichment import GeneSetLibrary

    return GeneSetLibrary(name="test", terms=terms, source_lines={t: i for i, t in enumerate(terms, 1)})


class TestEnrich:
    def test_full_overlap_worked_example(self):
        universe = [f"u{i}" for i in range(5)] + ["a", "b", "c", "d", "e"]
        degs = DEGList(up=["a", "b", "c"], down=["d", "e"], threshold=1.0, alpha=0.05)
        library = library_from({"hit": {"a", "b", "c", "d", "e"}})
        result = enrich(degs, library, universe)[0]
        assert result.k == 5 and result.K == 5 and result.n == 5 and result.N == 10
        assert result.p_value == pytest.approx(1 / 252, abs=1e-12)
        assert result.overlap_up == ["a", "b", "c"]
        assert result.overlap_down == ["d", "e"]

    def test_partial_overlap_worked_example(self):
        universe = [f"u{i}" for i in range(15)] + ["a", "b", "c", "d", "e"]
        degs = DEGList(up=["a", "b", "u0", "u1", "u2"], down=[], threshold=1.0, alpha=0.05)
        library = library_from({"hit": {"a", "b", "c", "d", "e"}})
        result = enrich(degs, library, universe)[0]
        assert result.N == 20 and result.K == 5 and result.n == 5 and result.k == 2
        assert result.p_value == pytest.approx(5676 / 15504, abs=1e-12)

    def test_zero_overlap_gives_p_one(self):
        universe = [f"u{i}" for i in range(10)] + ["a"]
        degs = DEGList(up=["a"], down=[], threshold=1.0, alpha=0.05)
        library = library_from({"miss": {"u0", "u1"}})
        result = enrich(degs, library, universe)[0]
        assert result.k == 0
        assert result.p_value == 1.0

    def test_term_genes_outside_universe_dropped(self):
        universe = ["a", "b", "c", "d"]
        degs = DEGList(up=["a"], down=[], threshold=1.0, alpha=0.05)
        library = library_from({"t": {"a", "b", "NOT_MEASURED"}})
        result = enrich(degs, library, universe)[0]
        assert result.K == 2

    def test_empty_universe_and_query(self):
        degs = DEGList(up=["a"], down=[], threshold=1.0, alpha=0.05)
        with pytest.raises(EmptyUniverseError):
            enrich(degs, library_from({"t": {"a"}}), [])
        empty = DEGList(up=["zz"], down=[], threshold=1.0, alpha=0.05)
        with pytest.raises(EmptyQueryError):
            enrich(empty, library_from({"t": {"a"}}), ["a", "b"])

    def test_overlap_partition(self):
        rng = np.random.default_rng(41)
        universe = [f"g{i}" for i in range(40)]
        for _ in range(50):
            up = list(rng.choice(universe, size=6, replace=False))
            rest = [g for g in universe if g not in up]
            down = list(rng.choice(rest, size=5, replace=False))
            term = set(rng.choice(universe, size=12, replace=False))
            degs = DEGList(up=up, down=down, threshold=1.0, alpha=0.05)
            result = enrich(degs, library_from({"t": term}), universe)[0]
            combined = set(result.overlap_up) | set(result.overlap_down)
            assert set(result.overlap_up).isdisjoint(result.overlap_down)
            assert combined == (set(up) | set(down)) & term
            assert result.k == len(combined) <= min(result.K, result.n)

    def test_p_matches_exact_oracle_on_random_cases(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            size = int(rng.integers(5, 61))
            universe = [f"g{i}" for i in range(size)]
            n_query = int(rng.integers(1, size + 1))
            query = list(rng.choice(universe, size=n_query, replace=False))
            n_term = int(rng.integers(1, size + 1))
            term = set(rng.choice(universe, size=n_term, replace=False))
            degs = DEGList(up=query, down=[], threshold=1.0, alpha=0.05)
            result = enrich(degs, library_from({"t": term}), universe)[0]
            assert result.p_value == pytest.approx(
                hypergeom_oracle(result.k, result.N, result.K, result.n), abs=1e-12
            )

    def test_results_sorted_and_adjusted(self):
        universe = [f"g{i}" for i in range(30)]
        degs = DEGList(up=universe[:6], down=[], threshold=1.0, alpha=0.05)
        library = library_from(
            {
                "strong": set(universe[:6]),
                "weak": set(universe[10:20]),
                "alpha_first": set(universe[20:25]),
            }
        )
        results = enrich(degs, library, universe)
        assert results == sorted(results, key=lambda r: (r.q_value, r.term))
        assert all(0 <= r.q_value <= 1 for r in results)
        assert significant(results, alpha=0.05)[0].term == "strong"
