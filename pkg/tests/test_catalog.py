from __future__ import annotations

from collections import Counter

import pytest

from isoclass.catalog import (
    TABLE_GROUPS,
    Catalog,
    construct_named,
    load_catalog,
    parse_catalog_line,
    resolve_group,
)
from isoclass.errors import BadParameters, OrderMismatch, OrderNotCovered, ParseError
from isoclass.groups import is_isomorphic

# Numbers of groups of each order 1..16, by brute-force isomorphism testing
# of the bundled entries (the distinctness check runs at realisation).
SMALL_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5, 13: 1, 14: 2, 15: 1, 16: 14}


def test_bundled_catalog_covers_1_to_120(catalog):
    assert catalog.orders == frozenset(range(1, 121))
    assert len(catalog) == 1237


def test_small_order_counts_and_distinctness(catalog):
    counts = Counter(e.expected_order for e in catalog.entries if e.expected_order <= 16)
    assert dict(counts) == SMALL_COUNTS
    assert sum(counts.values()) == 42
    for n in range(1, 17):
        # realisation runs the pairwise non-isomorphism check
        assert len(catalog.groups_of_order(n)) == SMALL_COUNTS[n]


@pytest.mark.parametrize("order, count", [(48, 52), (24, 15), (40, 14), (16, 14), (1, 1)])
def test_order_counts(catalog, order, count):
    assert len(catalog.entries_of_order(order)) == count


def test_groups_have_their_stated_order(catalog):
    for g in catalog.groups_of_order(24):
        assert g.order == 24
        assert g.paper_id.startswith("G(24,")


def test_uncovered_order_raises(catalog):
    with pytest.raises(OrderNotCovered):
        catalog.groups_of_order(121)


def test_named_constructors():
    assert construct_named("Z1").order == 1
    q8 = construct_named("Q8")
    assert q8.order == 8 and q8.elem_order.count(2) == 1
    assert construct_named("GL(2,3)").order == 48
    assert construct_named("D(4,3,-1)").order == 12
    assert construct_named("D(2,8,3)").order == 16
    with pytest.raises(BadParameters):
        construct_named("Foo7")


@pytest.mark.parametrize("paper_id", sorted(TABLE_GROUPS, key=lambda s: tuple(map(int, s[2:-1].split(",")))))
def test_table_groups_match_catalog_ids(catalog, paper_id):
    built = TABLE_GROUPS[paper_id].build().group
    entry = catalog.by_paper_id(paper_id)
    assert is_isomorphic(built, entry) is not None
    assert catalog.identify(built).paper_id == paper_id


def test_resolve_group_by_id_label_or_name(catalog):
    assert resolve_group("G(8,4)", catalog).label == "Q8"
    assert resolve_group("SL(2,3)", catalog).paper_id == "G(24,3)"
    assert resolve_group("Z2xZ2").order == 4


def test_parse_line_and_serialize_round_trip():
    e = parse_catalog_line("6;S3;G(6,1);3;(0 1 2);(0 1)")
    assert e.label == "S3" and e.degree == 3 and len(e.generators) == 2
    assert parse_catalog_line(e.serialize()) == e
    assert parse_catalog_line("# comment") is None
    assert parse_catalog_line("   ") is None


@pytest.mark.parametrize("line", ["6;S3", "x;S3;;3;(0 1 2)", "6;S3;;3;(0 5)", "0;E;;1;()"])
def test_parse_line_errors(line):
    with pytest.raises(ParseError):
        parse_catalog_line(line)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="not found"):
        load_catalog(tmp_path / "missing.cat")


def test_order_mismatch_is_reported_with_line(tmp_path):
    p = tmp_path / "bad.cat"
    p.write_text("2;C2;;2;(0 1)\n4;C4;;4;(0 1)\n")
    with pytest.raises(OrderMismatch, match="line 2"):
        load_catalog(p)


def test_duplicate_isomorphism_type_is_rejected(tmp_path):
    p = tmp_path / "dup.cat"
    p.write_text("4;C4;;4;(0 1 2 3)\n4;C4b;;4;(0 3 2 1)\n")
    cat = load_catalog(p)
    with pytest.raises(OrderMismatch, match="isomorphic"):
        cat.groups_of_order(4)


def test_catalog_from_entries_is_independent():
    cat = Catalog([parse_catalog_line("2;C2;G(2,1);2;(0 1)")])
    assert cat.covers(2) and not cat.covers(3)
    assert cat.by_paper_id("G(2,1)").order == 2
