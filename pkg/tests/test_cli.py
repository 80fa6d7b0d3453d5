"""The command line interface, driven through click's test runner."""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from covkh.cli import main, parse_spec

INPUTS = Path(__file__).resolve().parent.parent / "inputs"


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, stdin=None):
        return runner.invoke(main, list(args), input=stdin)

    return invoke


def test_compute_json_odd_trefoil(run):
    res = run("compute", "--input", str(INPUTS / "trefoil_pos.json"), "--spec", "odd")
    assert res.exit_code == 0, res.output
    cells = {(e["h"], e["q"]): (e["rank"], e["torsion"]) for e in json.loads(res.output)}
    assert cells == {(0, 1): (1, []), (0, 3): (1, []), (2, 5): (1, []), (2, 7): (1, []),
                     (3, 7): (1, []), (3, 9): (1, [])}


def test_compute_table_even_trefoil(run):
    res = run("compute", "--input", str(INPUTS / "trefoil_pos.json"), "--format", "table")
    assert res.exit_code == 0
    assert "Z/2" in res.output
    assert res.output.splitlines()[0].split()[0] == "q\\h"


def test_compute_stdin_and_inline_agree(run):
    text = (INPUTS / "hopf_pos.json").read_text()
    a = run("compute", "--input", "-", stdin=text)
    b = run("compute", "--input", text)
    c = run("compute", "--input", str(INPUTS / "hopf_pos.json"))
    assert a.exit_code == b.exit_code == c.exit_code == 0
    assert a.output == b.output == c.output


def test_compute_is_byte_deterministic(run):
    args = ("compute", "--input", str(INPUTS / "figure8.json"), "--spec", "odd")
    assert run(*args).output == run(*args).output


def test_braid_input(run):
    a = run("compute", "--input", str(INPUTS / "trefoil_braid.json"))
    b = run("compute", "--input", str(INPUTS / "trefoil_pos.json"))
    assert a.exit_code == 0
    assert a.output == b.output


def test_jones(run):
    res = run("jones", "--input", str(INPUTS / "trefoil_pos.json"))
    out = json.loads(res.output)
    assert out["method"] == "kauffman-bracket"
    assert out["coefficients"] == {"1": 1, "3": 1, "5": 1, "9": -1}
    res = run("jones", "--input", str(INPUTS / "trefoil_braid.json"), "--format", "table")
    assert res.output.strip() == "-q^9 + q^5 + q^3 + q"


def test_jones_rejects_tangles(run):
    res = run("jones", "--input", str(INPUTS / "trefoil_lower.json"))
    assert res.exit_code == 2
    assert "tangle" in res.output


@pytest.mark.parametrize("spec", ["even", "odd"])
def test_gluing_check(run, spec):
    res = run("check", "gluing", "--left", str(INPUTS / "trefoil_upper.json"),
              "--right", str(INPUTS / "trefoil_lower.json"), "--spec", spec, "--format", "table")
    assert res.exit_code == 0, res.output
    assert res.output.startswith("isomorphic homology: yes")


def test_gluing_boundary_mismatch(run):
    res = run("check", "gluing", "--left", str(INPUTS / "trefoil_upper.json"),
              "--right", str(INPUTS / "trefoil_pos.json"))
    assert res.exit_code == 2
    assert "cannot glue" in res.output


def test_parse_errors_exit_two(run):
    res = run("compute", "--input", '{"type": "pd", "crossings": [[1, 2, 3]]}')
    assert res.exit_code == 2
    assert "crossings[0]" in res.output
    res = run("compute", "--input", '{"type": "pd",\n "crossings": [[1, 2, 3, 4],]}')
    assert res.exit_code == 2
    assert "line 2" in res.output
    res = run("compute", "--input", "no/such/file.json")
    assert res.exit_code == 2


def test_crossing_limit(run):
    res = run("compute", "--input", str(INPUTS / "6_2.json"), "--max-crossings", "5")
    assert res.exit_code == 2
    assert "exceed the limit of 5" in res.output


def test_parse_spec():
    assert parse_spec("even") == (1, 1, 1)
    assert parse_spec("ODD") == (1, -1, 1)
    assert parse_spec("-1,1,-1") == (-1, 1, -1)
    for bad in ("1,1", "2,1,1", "weird"):
        with pytest.raises(Exception) as info:
            parse_spec(bad)
        assert info.value.exit_code == 2


def test_dump_arc_algebra(run):
    res = run("dump", "arc-algebra", "--n", "1")
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["n"] == 1
    assert len(out["basis"]) == 2
    assert run("dump", "arc-algebra", "--n", "2").output == run("dump", "arc-algebra", "--n", "2").output
    assert run("dump", "arc-algebra", "--n", "9").exit_code == 2


def test_check_structure_small(run):
    res = run("check", "structure", "--samples", "5", "--format", "table")
    assert res.exit_code == 0, res.output
    assert all(line.startswith("PASS") for line in res.output.strip().splitlines())
