from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from isoclass.classify import ClassificationRow
from isoclass.cli import (
    CACHE_ENV,
    EXIT_BUDGET,
    EXIT_CATALOG_GAP,
    EXIT_CONFIG,
    RunConfig,
    cmd_classify,
    main,
    parse_rows,
    render_rows,
)
from isoclass.errors import ConfigError


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def isotrivial_rows():
    return cmd_classify("isotrivial", RunConfig())


# -- rendering ----------------------------------------------------------------------

@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_render_parse_round_trip(isotrivial_rows, fmt):
    assert parse_rows(render_rows(isotrivial_rows, fmt), fmt) == isotrivial_rows


def test_table_format(isotrivial_rows):
    lines = render_rows(isotrivial_rows, "table").splitlines()
    assert lines[0].split()[:3] == ["kind", "K2", "gC"]
    assert len(lines) == len(isotrivial_rows) + 2
    with pytest.raises(ValueError):
        parse_rows("\n".join(lines), "table")


def test_json_is_one_object_per_line(isotrivial_rows):
    text = render_rows(isotrivial_rows, "json")
    lines = text.strip().splitlines()
    assert lines[0] == "[" and lines[-1] == "]"
    assert len(lines) == len(isotrivial_rows) + 2
    records = json.loads(text)
    assert [ClassificationRow.from_record(r) for r in records] == isotrivial_rows
    assert records[-1]["group"] == "A4" and records[-1]["singularities"] == "2/1,2/1"


def test_run_config_validation():
    for bad in ({"jobs": 0}, {"order_cap": -1}, {"policy": "x"}, {"output_format": "xml"}):
        with pytest.raises(ConfigError):
            RunConfig(**bad)


# -- commands -------------------------------------------------------------------------

def test_classify_isotrivial_json(runner):
    res = runner.invoke(main, ["classify", "--target", "isotrivial", "--format", "json"])
    assert res.exit_code == 0
    rows = parse_rows(res.stdout, "json")
    assert [(r.K2, r.paper_id) for r in rows] == [(4, "G(2,1)"), (4, "G(8,3)"), (4, "G(8,4)"), (5, "G(6,1)"), (6, "G(12,3)")]


def test_progress_goes_to_stderr(runner):
    quiet = runner.invoke(main, ["classify", "--target", "isotrivial", "--format", "csv"])
    loud = runner.invoke(main, ["classify", "--target", "isotrivial", "--format", "csv", "-v"])
    assert quiet.exit_code == loud.exit_code == 0
    assert quiet.stdout == loud.stdout
    assert "running isotrivial" in loud.stderr and not quiet.stderr


def test_orbits_trivial_group(runner):
    res = runner.invoke(main, ["orbits", "Z1", "(2|-)"])
    assert res.exit_code == 0
    assert res.stdout.splitlines()[1:4] == ["vectors 1", "orbits 1", "sizes 1"]


@pytest.mark.parametrize(
    "group, sig, action, vectors, orbits",
    [("Z2xZ2", "(0|2^5)", "aut", 60, 1), ("Z2xZ2", "(0|2^5)", "moves", 60, 3), ("GL(2,3)", "(0|2,3,8)", "aut", 288, 1)],
)
def test_orbits_counts(runner, group, sig, action, vectors, orbits):
    res = runner.invoke(main, ["orbits", group, sig, "--action", action])
    assert res.exit_code == 0
    lines = res.stdout.splitlines()
    assert lines[1] == f"vectors {vectors}" and lines[2] == f"orbits {orbits}"


def test_orbit_cache_output_is_identical(runner, tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path))
    args = ["orbits", "D4", "(0|2,2,2,4)"]
    cold = runner.invoke(main, args)
    assert any(tmp_path.iterdir())
    warm = runner.invoke(main, args)
    assert cold.exit_code == warm.exit_code == 0
    assert warm.stdout_bytes == cold.stdout_bytes


@pytest.mark.parametrize(
    "group, sig, expect",
    [
        ("S3", "(1|3)", ["singular points: 1/3(1,1)+1/3(1,2)", "K^2=5"]),
        ("Q8", "(1|2)", ["singular points: 4x1/2(1,1)", "K^2=4"]),
    ],
)
def test_singularities_examples(runner, group, sig, expect):
    res = runner.invoke(main, ["singularities", group, sig, sig])
    assert res.exit_code == 0
    for text in expect:
        assert text in res.stdout


def test_singularities_smooth_pair(runner):
    res = runner.invoke(main, ["singularities", "Z2", "(2|-)", "(0|2^6)", "--pair", "0", "0"])
    assert res.exit_code == 0
    assert "disjoint: yes" in res.stdout and "smooth quotient, K^2=8" in res.stdout


def test_singularities_pair_out_of_range(runner):
    res = runner.invoke(main, ["singularities", "Z2", "(2|-)", "(0|2^6)", "--pair", "0", "5"])
    assert res.exit_code == EXIT_CONFIG


# -- exit codes ---------------------------------------------------------------------------

def test_missing_catalog_exits_with_config_code(runner, tmp_path):
    res = runner.invoke(main, ["classify", "--catalog", str(tmp_path / "missing.cat")])
    assert res.exit_code == EXIT_CONFIG
    assert "ParseError" in res.stderr and not res.stdout


@pytest.mark.parametrize("args", [["--jobs", "0"], ["--budget-tuples", "0"], ["--order-cap", "0"]])
def test_bad_settings_exit_with_config_code(runner, args):
    res = runner.invoke(main, ["classify", "--target", "isotrivial", *args])
    assert res.exit_code == EXIT_CONFIG


def test_bad_signature_exits_with_config_code(runner):
    assert runner.invoke(main, ["orbits", "Z2", "(0|1)"]).exit_code == EXIT_CONFIG


def test_order_cap_exits_with_budget_code(runner):
    res = runner.invoke(main, ["orbits", "GL(2,3)", "(0|2,3,8)", "--order-cap", "10"])
    assert res.exit_code == EXIT_BUDGET
    assert "OrderCapExceeded" in res.stderr


def test_tuple_budget_exits_with_budget_code(runner):
    res = runner.invoke(main, ["orbits", "GL(2,3)", "(2|-)", "--budget-tuples", "100"])
    assert res.exit_code == EXIT_BUDGET


def test_catalog_gap_exits_with_gap_code(runner, catalog, tmp_path):
    p = tmp_path / "small.cat"
    p.write_text("".join(e.serialize() + "\n" for e in catalog.entries if e.expected_order <= 16))
    res = runner.invoke(main, ["classify", "--target", "pgq2", "--catalog", str(p)])
    assert res.exit_code == EXIT_CATALOG_GAP
    assert "pipeline" in res.stderr and "order" in res.stderr


@pytest.mark.expensive
def test_classify_all_end_to_end(runner):
    res = runner.invoke(main, ["classify", "--target", "all", "--format", "json"])
    assert res.exit_code == 0
    rows = parse_rows(res.stdout, "json")
    kinds = [r.kind for r in rows]
    counts = {k: kinds.count(k) for k in dict.fromkeys(kinds)}
    assert counts == {"GH": 19, "UnMix": 3, "Mix": 1, "Isotrivial": 5, "PGQ1-unmixed": 35, "PGQ1-mixed": 3}
