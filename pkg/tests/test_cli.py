import json

import pytest

from quivcover.cli import main

from conftest import fixture_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", fixture_path("e1-algebra"))
    assert code == 0


def test_validate_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "validate", tmp_path / "nope.quiver")
    assert code == 3 and "no such file" in err


def test_validate_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.quiver"
    bad.write_text("vertex 1\nbogus\n")
    code, _, err = run(capsys, "validate", bad)
    assert code == 3 and "line 2" in err


def test_validate_rejects_non_admissible(capsys, tmp_path):
    bad = tmp_path / "loop.quiver"
    bad.write_text("vertex 0\narrow x : 0 -> 0\n")
    code, _, _ = run(capsys, "validate", bad, "--cap", "4")
    assert code == 2


@pytest.mark.parametrize("name, count", [("e1-algebra", 10), ("a2", 3), ("loop-x2", 2)])
def test_ind_counts(capsys, name, count):
    code, out, _ = run(capsys, "ind", fixture_path(name), "--format", "json")
    assert code == 0
    assert json.loads(out)["count"] == count


def test_ind_unsupported(capsys, tmp_path):
    p = tmp_path / "three.quiver"
    p.write_text("vertex 0\nvertex 1\nvertex 2\nvertex 3\narrow a : 0 -> 1\narrow b : 0 -> 2\narrow c : 0 -> 3\n")
    code, _, err = run(capsys, "ind", p)
    assert code == 4 and "unsupported" in err


def test_json_is_deterministic(capsys):
    a = run(capsys, "ar", fixture_path("e1-algebra"), "--format", "json", "--seed", "3")[1]
    b = run(capsys, "ar", fixture_path("e1-algebra"), "--format", "json", "--seed", "3")[1]
    assert a == b
    rep = json.loads(a)
    assert rep["schema"] == "quivcover-report/1" and rep["seed"] == 3
    assert rep["field"] == "p=101" and len(rep["fixture_hash"]) == 16


def test_field_override_changes_field_not_hash(capsys):
    a = json.loads(run(capsys, "ind", fixture_path("a2"), "--format", "json")[1])
    b = json.loads(run(capsys, "ind", fixture_path("a2"), "--format", "json", "--field", "7")[1])
    assert b["field"] == "p=7" and a["fixture_hash"] == b["fixture_hash"] and a["count"] == b["count"]


def test_ar_dot(capsys):
    code, out, _ = run(capsys, "ar", fixture_path("e1-algebra"), "--format", "dot")
    assert code == 0 and out.startswith("digraph AR {")


def test_dot_unavailable(capsys):
    code, _, err = run(capsys, "ind", fixture_path("a2"), "--format", "dot")
    assert code == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "ind", fixture_path("a2"), "--format", "json", "--out", target)
    assert code == 0 and not out and json.loads(target.read_text())["count"] == 3


@pytest.mark.parametrize("name", ["e1", "e2"])
def test_mesh_regenerates_fixture(capsys, name):
    code, out, _ = run(capsys, "mesh", fixture_path(f"{name}-cover"))
    assert code == 0

    def body(text):
        return [ln for ln in text.splitlines() if ln and not ln.startswith(("#", "name "))]
    assert body(out) == body(fixture_path(f"{name}-mesh-cover").read_text())


def test_cover_commands_need_cover(capsys):
    code, _, err = run(capsys, "lines", fixture_path("e1-algebra"))
    assert code == 2 and "group rank" in err


def test_lines(capsys):
    code, out, _ = run(capsys, "lines", fixture_path("e1-mesh-cover"), "--format", "json")
    assert code == 0 and len(json.loads(out)["lines"]) == 1


def test_kind_simple(capsys):
    code, out, _ = run(capsys, "kind", fixture_path("e1-cover"), "--simple", "1", "--format", "json")
    assert code == 0 and json.loads(out)["verdict"]["kind"] == "first"


def test_kind_needs_a_module(capsys):
    code, _, _ = run(capsys, "kind", fixture_path("e1-cover"))
    assert code == 2


def test_functor_kind_u_lambda(capsys):
    code, out, _ = run(capsys, "functor-kind", fixture_path("e1-cover"), "--u-lambda", "2", "--format", "json")
    assert code == 0 and json.loads(out)["verdict"]["kind"] == "second"


def test_cover_check(capsys):
    code, out, _ = run(capsys, "cover-check", fixture_path("e1-cover"), "--format", "json")
    assert code == 0


def test_reproduce_refuses_rationals(capsys):
    code, _, _ = run(capsys, "reproduce", "--field", "q")
    assert code == 4
