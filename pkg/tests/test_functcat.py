import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quivcover.artheory import ar_quiver, mesh_presentation
from quivcover.covering import CoveringContext, periodic_lines
from quivcover.exactlin import Field
from quivcover.functcat import (FunctorError, build_mesh_cover, composition_length, composition_length_by_peeling,
                                evaluation_dim, from_ind_module, functor_cokernel, functor_hom, functor_image,
                                functor_kernel, functors_isomorphic, image_sequence, is_indecomposable_functor,
                                is_zero_functor, representable, sample_functors, simple_functor_at, to_ind_module,
                                zero_functor)
from quivcover.quivercat import (PeriodicArrow, PeriodicPresentation, PeriodicRelation, PresentationError,
                                 check_admissible)
from quivcover.repmod import hom_dim, is_isomorphic
from quivcover.reproduce import u_lambda, x_labels
from quivcover.textio import load

from conftest import fixture_path
from line_oracle import brute_lines


@pytest.fixture(scope="module")
def gamma():
    return ar_quiver(load(fixture_path("e1-algebra")).presentation)


@pytest.fixture(scope="module")
def functors(gamma):
    return sample_functors(gamma.modules, 12, seed=5)


def test_representable_evaluates_to_hom(gamma):
    for n in gamma.modules[:4]:
        t = representable(n)
        assert [evaluation_dim(t, x) for x in gamma.modules] == [hom_dim(x, n) for x in gamma.modules]


def test_zero_functor(gamma):
    assert is_zero_functor(zero_functor(gamma.presentation))
    assert not is_zero_functor(representable(gamma.modules[0]))


def test_simple_functors_have_length_one(gamma):
    for i in range(len(gamma)):
        s = simple_functor_at(gamma, i)
        assert [evaluation_dim(s, x) for x in gamma.modules] == [int(j == i) for j in range(len(gamma))]


def test_peeling_matches_evaluation_sum(gamma, functors):
    for t in functors:
        assert composition_length_by_peeling(t, gamma) == composition_length(t, gamma)


def test_ind_module_round_trip(gamma, functors):
    mesh = mesh_presentation(gamma)
    for t in functors:
        n = to_ind_module(t, gamma, mesh)
        back = from_ind_module(n, gamma)
        assert functors_isomorphic(back, t)
        assert is_isomorphic(to_ind_module(back, gamma, mesh), n)


@settings(max_examples=10, deadline=None)
@given(i=st.integers(0, 11), j=st.integers(0, 11), seed=st.integers(0, 1000))
def test_kernel_image_cokernel_are_exact(gamma, functors, i, j, seed):
    s, t = functors[i], functors[j]
    hom = functor_hom(s, t)
    if not hom.dim:
        return
    rng = np.random.default_rng(seed)
    eta = hom.basis[0]
    for b in hom.basis[1:]:
        eta = eta + b.scale(int(rng.integers(101)))
    ker, im, cok = functor_kernel(eta), functor_image(eta), functor_cokernel(eta)
    for x in gamma.modules:
        ds, dt = evaluation_dim(s, x), evaluation_dim(t, x)
        dk, di, dc = (evaluation_dim(f, x) for f in (ker, im, cok))
        assert dk + di == ds and di + dc == dt


def test_image_sequence_is_short_exact(gamma, functors):
    for t in functors:
        im, hn, tt = image_sequence(t)
        for x in gamma.modules:
            assert evaluation_dim(hn, x) == evaluation_dim(im, x) + evaluation_dim(tt, x)


def test_u_lambda(gamma):
    xl = x_labels(gamma)
    us = [u_lambda(gamma, lam) for lam in (1, 2, 3)]
    want = {xl[f"x{k}"] for k in (4, 5, 6, 7)}
    for u in us:
        assert is_indecomposable_functor(u)
        support = {lab for lab, x in zip(gamma.labels, gamma.modules) if evaluation_dim(u, x)}
        assert support == want
    assert not functors_isomorphic(us[0], us[1]) and not functors_isomorphic(us[1], us[2])
    assert functors_isomorphic(us[0], u_lambda(gamma, 1))


def test_x_labels_are_structural(gamma):
    xl = x_labels(gamma)
    assert len(set(xl.values())) == 10
    idx = {lab: i for i, lab in enumerate(gamma.labels)}
    for k in (5, 6):
        assert gamma.tau[idx[xl[f"x{k}"]]] == idx[xl[f"x{k - 3}"]]
        assert gamma.tau[idx[xl[f"x{k + 3}"]]] == idx[xl[f"x{k}"]]


@pytest.mark.parametrize("name", ["e1", "e2"])
def test_mesh_cover_fixture_matches_computation(name):
    ctx = CoveringContext(load(fixture_path(f"{name}-cover")).presentation, 3)
    mc = build_mesh_cover(ctx, ar_quiver(ctx.orbit), name=f"{name}-mesh-cover")
    stored = load(fixture_path(f"{name}-mesh-cover")).presentation
    def arrows(p):
        return sorted((a.id, a.source, a.target, a.shift) for a in p.arrows.values())
    assert arrows(mc.periodic) == arrows(stored)
    assert len(mc.periodic.relations) == len(stored.relations)


def test_mesh_cover_needs_matching_gamma(gamma):
    ctx = CoveringContext(load(fixture_path("e2-cover")).presentation, 3)
    with pytest.raises(FunctorError):
        build_mesh_cover(ctx, gamma)


@pytest.mark.parametrize("name, lines", [("e1-mesh-cover", 1), ("e2-mesh-cover", 0)])
def test_line_census_of_mesh_covers(name, lines):
    p = load(fixture_path(name)).presentation
    assert len(periodic_lines(CoveringContext(p, 3), radius=3)) == lines


def _toy(arrows, zero):
    vs = sorted({a[1] for a in arrows} | {a[2] for a in arrows})
    return PeriodicPresentation(vs, [PeriodicArrow(a, s, t, (sh,)) for a, s, t, sh in arrows], 1,
                                [PeriodicRelation(((1, z),)) for z in zero], Field.prime(101))


@pytest.mark.parametrize("arrows, zero, lines", [
    ([("a", "0", "1", 0), ("b", "0", "1", 1)], [], 1),
    ([("a", "0", "1", 0), ("b", "1", "0", 1)], [("a", "b"), ("b", "a")], 0),
    ([("a", "0", "0", 1)], [("a", "a")], 0),
    ([("a", "0", "1", 0), ("b", "1", "2", 0), ("c", "0", "2", 1)], [], 1),
])
def test_periodic_lines_on_small_quivers(arrows, zero, lines):
    p = _toy(arrows, zero)
    assert len(brute_lines(p)) == lines
    assert len(periodic_lines(CoveringContext(p, 3))) == lines


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_periodic_lines_match_brute_force(data):
    n = data.draw(st.integers(1, 3))
    m = data.draw(st.integers(1, 3))
    arrows = [(f"a{i}", str(data.draw(st.integers(0, n - 1))), str(data.draw(st.integers(0, n - 1))),
               data.draw(st.integers(-1, 1))) for i in range(m)]
    length2 = [(x[0], y[0]) for x in arrows for y in arrows if x[2] == y[1]]
    zero = [w for w in length2 if data.draw(st.booleans())]
    try:
        p = _toy(arrows, zero)
        ctx = CoveringContext(p, 3)
        check_admissible(ctx.orbit, cap=4)
    except PresentationError:
        return
    assert len(periodic_lines(ctx)) == len(brute_lines(p))


def test_e2_fundamental_domain_from_functor_witnesses():
    from quivcover.covering import fundamental_domain
    from quivcover.functcat import classify_functor_kind, mesh_setup
    s = mesh_setup(CoveringContext(load(fixture_path("e2-cover")).presentation, 3))
    ts = sample_functors(s.gamma.modules, 30, seed=41, max_length=12, indecomposable=True)
    verdicts = [classify_functor_kind(t, s) for t in ts]
    assert {v.kind for v in verdicts} == {"first"}
    dom = fundamental_domain(s.ctx, [v.witness for v in verdicts])
    assert dom.convex
    assert {s.ctx.lift(v)[0] for v in dom.vertices} == set(s.ctx.periodic.vertices)


def _functor_sum(t1, t2):
    from quivcover.functcat import FpFunctorPresentation
    from quivcover.repmod import compose, direct_sum
    _, _, ps = direct_sum([t1.source, t2.source])
    _, it, _ = direct_sum([t1.target, t2.target])
    return FpFunctorPresentation(compose(it[0], compose(t1.f, ps[0])) + compose(it[1], compose(t2.f, ps[1])))


def test_isomorphism_of_decomposable_functors(gamma, functors):
    nonzero = [t for t in functors if not is_zero_functor(t)]
    a, b = nonzero[0], nonzero[1]
    ab, ba = _functor_sum(a, b), _functor_sum(b, a)
    assert not is_indecomposable_functor(ab)
    assert functors_isomorphic(ab, ba)
    assert not functors_isomorphic(ab, a)
    assert not functors_isomorphic(_functor_sum(a, a), ab) or functors_isomorphic(a, b)
