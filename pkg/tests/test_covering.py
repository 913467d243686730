import pytest
from hypothesis import given, settings, strategies as st

from quivcover.covering import (CoveringContext, WindowError, band_from_line, classify_module_kind,
                                covering_hom_check, fundamental_domain, is_interior, periodic_lines, push_down,
                                translate)
from quivcover.exactlin import Matrix
from quivcover.quivercat import cover_name
from quivcover.repmod import is_isomorphic, simple_at
from quivcover.strings import enumerate_strings, string_module


@pytest.fixture(scope="module")
def ctx():
    from conftest import fixture_path
    from quivcover.textio import load
    return CoveringContext(load(fixture_path("e1-cover")).presentation, radius=3)


@pytest.fixture(scope="module")
def inner(ctx):
    w = ctx.window(3)
    mods = [string_module(w.presentation, s) for s in enumerate_strings(w.presentation).strings]
    return [m for m in mods if is_interior(ctx, m)]


def test_context_rejects_bad_radius(ctx):
    with pytest.raises(WindowError):
        CoveringContext(ctx.periodic, radius=0)


@settings(max_examples=20, deadline=None)
@given(i=st.integers(0, 10_000), g=st.integers(-2, 2))
def test_push_down_is_translation_invariant(ctx, inner, i, g):
    m = inner[i % len(inner)]
    assert is_isomorphic(push_down(ctx, translate(ctx, m, (g,))), push_down(ctx, m))


def test_covering_hom_formula_on_sample(ctx, inner):
    for x in inner[::5]:
        for y in inner[::7]:
            assert covering_hom_check(ctx, x, y).ok


def test_simple_pushes_up_to_first_kind(ctx):
    for v in ctx.orbit.vertices:
        verdict = classify_module_kind(ctx, simple_at(ctx.orbit, v))
        assert verdict.kind == "first"
        assert is_isomorphic(push_down(ctx, verdict.witness), simple_at(ctx.orbit, v))


def test_module_cover_has_no_periodic_line(ctx):
    assert periodic_lines(ctx) == []


@pytest.mark.parametrize("lam", [1, 3])
def test_band_on_periodic_line_is_second_kind(lam):
    from conftest import fixture_path
    from quivcover.textio import load
    mesh = CoveringContext(load(fixture_path("e1-mesh-cover")).presentation, radius=3)
    (line,) = periodic_lines(mesh)
    x = band_from_line(mesh, line, Matrix(mesh.field, [[lam]]))
    verdict = classify_module_kind(mesh, x)
    assert verdict.kind == "second"
    assert verdict.companion == Matrix(mesh.field, [[lam]])
    assert is_isomorphic(band_from_line(mesh, line, verdict.companion), x)


def test_fundamental_domain_of_single_simple(ctx):
    w = ctx.window(3)
    v = ctx.periodic.vertices[0]
    s = simple_at(w.presentation, cover_name(v, (1,)))
    dom = fundamental_domain(ctx, [s])
    assert len(dom.vertices) == 1 and dom.convex


def test_fundamental_domain_ignores_translation(ctx, inner):
    some = inner[:6]
    shifted = [translate(ctx, m, (1,)) for m in some]
    a, b = fundamental_domain(ctx, some), fundamental_domain(ctx, shifted)
    assert a.vertices == b.vertices and a.convex


def test_fundamental_domain_needs_modules(ctx):
    with pytest.raises(ValueError):
        fundamental_domain(ctx, [])
