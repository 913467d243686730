import pytest
from hypothesis import given, settings, strategies as st

from quivcover.exactlin import Field, Matrix
from quivcover.quivercat import AdmissibilityError, PeriodicPresentation
from quivcover.repmod import Representation, hom_space
from quivcover.strings import enumerate_strings, string_module
from quivcover.textio import (ParseError, dump_functor, dump_module, dump_presentation, parse_file, parse_functor,
                              parse_modules, parse_presentation)

from conftest import FIXTURES


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.quiver")), ids=lambda p: p.stem)
def test_fixture_round_trip(path):
    text = path.read_text()
    p = parse_presentation(text)
    again = parse_presentation(dump_presentation(p))
    assert dump_presentation(again) == dump_presentation(p)


def test_field_override_and_digest():
    text = (FIXTURES / "e1-algebra.quiver").read_text()
    a = parse_file(text)
    b = parse_file(text, field_override=Field.prime(32003))
    assert a.field == Field.prime(101) and b.field == Field.prime(32003)
    assert a.digest == b.digest and len(a.digest) == 16


def test_periodic_file_gives_periodic_presentation():
    p = parse_presentation((FIXTURES / "e1-cover.quiver").read_text())
    assert isinstance(p, PeriodicPresentation)
    assert p.arrows["gamma"].shift == (1,)
    assert "simply_connected" in p.asserts


@pytest.mark.parametrize("text, line", [
    ("vertex 1\nbogus 2\n", 2),
    ("vertex 1\nvertex 2\narrow a 1 -> 2\n", 3),
    ("field p=12\n", 1),
    ("vertex 1\narrow a : 1 -> 1 shift (1)\n", 2),
])
def test_parse_errors_are_line_anchored(text, line):
    with pytest.raises(ParseError) as err:
        parse_presentation(text)
    assert err.value.line == line


def test_unknown_arrow_in_relation():
    with pytest.raises(ParseError):
        parse_presentation("vertex 1\nvertex 2\narrow a : 1 -> 2\nrelation 1*a.b\n")


def test_periodic_length_one_relation():
    with pytest.raises(AdmissibilityError, match="path length < 2"):
        parse_presentation("group rank 1\nvertex 1\narrow a : 1 -> 1 shift (1)\nrelation a\n")


def test_relation_coefficients():
    p = parse_presentation("field rationals\nvertex 1\nvertex 2\nvertex 3\nvertex 4\n"
                           "arrow a : 1 -> 2\narrow b : 1 -> 3\narrow c : 2 -> 4\narrow d : 3 -> 4\n"
                           "relation 1/2*a.c - 3*b.d\n")
    (r,) = p.relations
    assert [c for c, _ in r.terms] == [p.field(1) / 2, p.field(-3)]


def test_module_and_functor_round_trip(e1_algebra):
    mods = [string_module(e1_algebra, w) for w in enumerate_strings(e1_algebra).strings]
    text = "".join(dump_module(m, f"m{i}") for i, m in enumerate(mods))
    back = parse_modules(text, e1_algebra)
    assert [m.dims for m in back] == [m.dims for m in mods]
    assert all(a.maps == b.maps for a, b in zip(back, mods))
    m, n = next((m, n) for m in mods for n in mods if m is not n and hom_space(m, n).dim)
    f = hom_space(m, n).basis[0]
    g = parse_functor(dump_functor(f), e1_algebra)
    assert g.maps == f.maps and g.source.dims == m.dims


def test_module_field_mismatch(e1_algebra):
    with pytest.raises(ParseError):
        parse_modules("module x\nfield p=7\ndim 1 1\nend\n", e1_algebra)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(0, 100), min_size=2, max_size=2), min_size=2, max_size=2))
def test_module_matrix_round_trip(rows):
    p = parse_presentation("vertex 1\nvertex 2\narrow a : 1 -> 2\n")
    m = Representation(p, {"1": 2, "2": 2}, {"a": Matrix(p.field, rows)})
    (back,) = parse_modules(dump_module(m), p)
    assert back.maps["a"] == m.maps["a"]


def test_relation_terms_without_coefficient():
    p = parse_presentation("vertex 1\nvertex 2\nvertex 3\nvertex 4\narrow a : 1 -> 2\narrow b : 1 -> 3\n"
                           "arrow c : 2 -> 4\narrow d : 3 -> 4\nrelation a.c - b.d\n")
    (r,) = p.relations
    assert [(c, w.arrows) for c, w in r.terms] == [(p.field(1), ("a", "c")), (p.field(-1), ("b", "d"))]
