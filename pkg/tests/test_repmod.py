import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quivcover.repmod import (ModuleError, Representation, UnsupportedFieldError, cokernel, decompose, direct_sum,
                              dual, find_isomorphism, hom_dim, hom_space, identity, injective_at, is_indecomposable,
                              is_isomorphic, kernel, projective_at, random_basis_change, socle_dims,
                              top_dims)
from quivcover.quivercat import path_basis
from quivcover.strings import enumerate_strings, string_module


@pytest.fixture(scope="module")
def e1_strings(request):
    from conftest import fixture_path
    from quivcover.textio import load
    p = load(fixture_path("e1-algebra")).presentation
    return p, [string_module(p, w) for w in enumerate_strings(p).strings]


def test_projectives_and_injectives_have_path_dims(e1_algebra):
    for x in e1_algebra.vertices:
        px, ix = projective_at(e1_algebra, x), injective_at(e1_algebra, x)
        for y in e1_algebra.vertices:
            assert px.dims[y] == path_basis(e1_algebra, y, x).dim
            assert ix.dims[y] == path_basis(e1_algebra, x, y).dim
        assert top_dims(px) == {y: int(y == x) for y in e1_algebra.vertices}
        assert socle_dims(ix) == {y: int(y == x) for y in e1_algebra.vertices}


def test_yoneda_hom_dims(e1_strings):
    p, mods = e1_strings
    for x in p.vertices:
        px, ix = projective_at(p, x), injective_at(p, x)
        for m in mods:
            assert hom_dim(px, m) == m.dims[x]
            assert hom_dim(m, ix) == m.dims[x]


def test_dual_is_involutive_and_swaps_top_and_socle(e1_algebra):
    for x in e1_algebra.vertices:
        px = projective_at(e1_algebra, x)
        d = dual(px)
        assert d.dims == px.dims
        assert socle_dims(d) == top_dims(px)
        assert is_isomorphic(dual(d), px)


def test_string_modules_are_indecomposable_and_distinct(e1_strings):
    _, mods = e1_strings
    assert all(is_indecomposable(m) for m in mods)
    for m, n in itertools.combinations(mods, 2):
        assert not is_isomorphic(m, n)


@settings(max_examples=15, deadline=None)
@given(picks=st.lists(st.integers(0, 9), min_size=1, max_size=4), seed=st.integers(0, 10_000))
def test_krull_schmidt_after_basis_change(e1_strings, picks, seed):
    _, mods = e1_strings
    chosen = [mods[i % len(mods)] for i in picks]
    s, _, _ = direct_sum(chosen)
    scrambled = random_basis_change(s, np.random.default_rng(seed))
    rep = decompose(scrambled, seed=seed)
    assert rep.count == len(chosen)
    remaining = list(chosen)
    for piece in rep.modules():
        j = next(i for i, c in enumerate(remaining) if is_isomorphic(piece, c))
        remaining.pop(j)
    assert not remaining
    iso = find_isomorphism(scrambled, s)
    assert iso is not None and iso.is_natural() and iso.is_iso()


def test_hom_space_is_natural_and_closed(e1_strings):
    _, mods = e1_strings
    rng = np.random.default_rng(0)
    for m, n in itertools.product(mods[:6], repeat=2):
        h = hom_space(m, n)
        for f in h.basis:
            assert f.is_natural()
        if h.dim:
            f = h.random(rng)
            assert h.contains(f)
            assert h.combination(h.coordinates(f)).maps == f.maps


def test_kernel_cokernel_dimensions(e1_strings):
    _, mods = e1_strings
    rng = np.random.default_rng(1)
    for m, n in itertools.product(mods, repeat=2):
        h = hom_space(m, n)
        if not h.dim:
            continue
        f = h.random(rng)
        k, _ = kernel(f)
        c, _ = cokernel(f)
        assert m.dim - k.dim == n.dim - c.dim == f.rank()


def test_relation_violation_rejected():
    from quivcover.textio import parse_presentation
    p = parse_presentation("vertex 0\narrow x : 0 -> 0\nrelation x.x\n")
    with pytest.raises(ModuleError, match="does not vanish"):
        Representation(p, {"0": 2}, {"x": [[1, 0], [0, 0]]})
    Representation(p, {"0": 2}, {"x": [[0, 0], [1, 0]]})


def test_decomposition_refused_over_rationals():
    from quivcover.textio import parse_presentation
    p = parse_presentation("field rationals\nvertex 1\n")
    with pytest.raises(UnsupportedFieldError):
        decompose(Representation(p, {"1": 2}))


def test_identity_is_iso(e1_strings):
    _, mods = e1_strings
    assert all(identity(m).is_iso() for m in mods)
