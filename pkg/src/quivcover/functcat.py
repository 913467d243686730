"""Finitely presented functors T = Coker Hom(-, f) for f: M -> N.

A functor morphism T1 -> T2 is represented by h: N1 -> N2 with h f1 factoring
through f2; two representatives are equal when their difference factors
through f2.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import is_local
from .artheory import (TranslationQuiver, _blocks, ar_quiver, mesh_presentation, minimal_projective_presentation,
                       standard_check)
from .covering import (CoveringContext, KindVerdict, classify_module_kind, push_down,
                       push_down_morphism, relocate, translate, _shift_candidates)
from .exactlin import Matrix, column_space, cokernel_projection, kernel_basis, rank, solve
from .strings import enumerate_strings, string_module
from .quivercat import (BoundPresentation, PeriodicArrow, PeriodicPresentation, PeriodicRelation, add, cover_name,
                        orbit_vertex)
from .repmod import (Morphism, Representation, compose, direct_sum, find_isomorphism, hom_space, identity,
                     inverse, is_indecomposable, kernel, radical_bases, relabel_module, submodule, zero_module,
                     zero_morphism)


class FunctorError(ValueError):
    pass


@dataclass
class FpFunctorPresentation:
    f: Morphism
    name: str = ""

    @property
    def source(self) -> Representation:
        return self.f.source

    @property
    def target(self) -> Representation:
        return self.f.target

    @property
    def presentation(self) -> BoundPresentation:
        return self.f.target.presentation

    @property
    def field(self):
        return self.f.target.field

    def __repr__(self) -> str:
        return f"Coker(-, {self.source.dim_vector} -> {self.target.dim_vector})"


def representable(n: Representation) -> FpFunctorPresentation:
    """Hom(-, N), presented by 0 -> N."""
    z = zero_module(n.presentation)
    return FpFunctorPresentation(zero_morphism(z, n), name=f"Hom(-,{n.name})" if n.name else "")


def zero_functor(p: BoundPresentation) -> FpFunctorPresentation:
    z = zero_module(p)
    return FpFunctorPresentation(identity(z), name="0")


def _coords(hs, morphisms: Sequence[Morphism]) -> Matrix:
    f = hs.source.field
    if not morphisms:
        return Matrix.zeros(f, hs.dim, 0)
    cols = [hs.coordinates(m) for m in morphisms]
    return Matrix.from_columns(f, cols, rows=hs.dim)


@dataclass
class Evaluation:
    """T(X) = Hom(X, N) / f Hom(X, M) with a chosen complement basis."""

    space: object  # HomSpace(X, N)
    image: Matrix
    proj: Matrix
    sect: Matrix

    @property
    def dim(self) -> int:
        return self.proj.rows

    def lift(self, coords: Sequence) -> Morphism:
        """A representative in Hom(X, N) of the class with the given coordinates."""
        f = self.space.source.field
        v = self.sect @ Matrix(f, [[c] for c in coords], rows=self.dim, cols=1)
        return self.space.combination(v.a[:, 0].tolist())

    def classify(self, m: Morphism) -> Matrix:
        """Coordinates in T(X) of the class of m in Hom(X, N)."""
        f = self.space.source.field
        c = Matrix(f, [[x] for x in self.space.coordinates(m)], rows=self.space.dim, cols=1)
        return self.proj @ c


def evaluate_functor(t: FpFunctorPresentation, x: Representation) -> Evaluation:
    if not x.same_presentation(t.target):
        raise FunctorError("presentation mismatch")
    hn = hom_space(x, t.target)
    hm = hom_space(x, t.source)
    fld = t.field
    img = _coords(hn, [compose(t.f, b) for b in hm.basis])
    img = column_space(img) if img.cols else img
    if img.cols:
        proj, _ = cokernel_projection(img)
    else:
        proj = Matrix.identity(fld, hn.dim)
    sect = solve(proj, Matrix.identity(fld, proj.rows)) if proj.rows else Matrix.zeros(fld, hn.dim, 0)
    return Evaluation(hn, img, proj, sect)


def evaluation_dim(t: FpFunctorPresentation, x: Representation) -> int:
    if not (x.support & t.target.support):
        return 0
    return evaluate_functor(t, x).dim


def functor_map_at(t: FpFunctorPresentation, u: Morphism, ev_src: Evaluation | None = None,
                   ev_tgt: Evaluation | None = None) -> Matrix:
    """T(u): T(Y) -> T(X) for u: X -> Y."""
    ey = ev_src or evaluate_functor(t, u.target)
    ex = ev_tgt or evaluate_functor(t, u.source)
    fld = t.field
    cols = []
    for k in range(ey.dim):
        e = [fld(0)] * ey.dim
        e[k] = fld(1)
        a = ey.lift(e)
        cols.append(ex.classify(compose(a, u)).a[:, 0].tolist())
    return Matrix.from_columns(fld, cols, rows=ex.dim) if cols else Matrix.zeros(fld, ex.dim, 0)


# ---------------------------------------------------------------------------
# morphisms of functors


@dataclass
class FunctorMorphism:
    source: FpFunctorPresentation
    target: FpFunctorPresentation
    h: Morphism

    def __matmul__(self, other: "FunctorMorphism") -> "FunctorMorphism":
        return FunctorMorphism(other.source, self.target, compose(self.h, other.h))

    def __add__(self, other: "FunctorMorphism") -> "FunctorMorphism":
        return FunctorMorphism(self.source, self.target, self.h + other.h)

    def scale(self, c) -> "FunctorMorphism":
        return FunctorMorphism(self.source, self.target, self.h.scale(c))


class FunctorHom:
    """Hom(T1, T2) as a subquotient of Hom(N1, N2)."""

    def __init__(self, t1: FpFunctorPresentation, t2: FpFunctorPresentation):
        if not t1.target.same_presentation(t2.target):
            raise FunctorError("presentation mismatch")
        self.t1, self.t2 = t1, t2
        fld = t1.field
        self.field = fld
        self.hn = hom_space(t1.target, t2.target)
        hmn = hom_space(t1.source, t2.target)
        hmm = hom_space(t1.source, t2.source)
        hnm = hom_space(t1.target, t2.source)
        a = self.hn.dim
        # compatible h: h f1 in f2 Hom(M1, M2)
        phi = _coords(hmn, [compose(h, t1.f) for h in self.hn.basis])
        sub = _coords(hmn, [compose(t2.f, s) for s in hmm.basis])
        if a == 0:
            self.compatible = Matrix.zeros(fld, 0, 0)
        elif hmn.dim == 0:
            self.compatible = Matrix.identity(fld, a)
        else:
            big = Matrix.hstack(fld, [phi, sub.scale(-1)], rows=hmn.dim)
            ker = kernel_basis(big)
            self.compatible = column_space(ker.submatrix(rows=range(a))) if ker.cols else Matrix.zeros(fld, a, 0)
        q = _coords(self.hn, [compose(t2.f, s) for s in hnm.basis])
        self.null = column_space(q) if q.cols else Matrix.zeros(fld, a, 0)
        # quotient basis: compatible columns independent modulo null
        chosen = []
        have = self.null
        for j in range(self.compatible.cols):
            col = self.compatible.submatrix(cols=[j])
            test = Matrix.hstack(fld, [have, col], rows=a)
            if rank(test) > have.cols:
                chosen.append(col)
                have = column_space(test)
        self.quotient = Matrix.hstack(fld, chosen, rows=a) if chosen else Matrix.zeros(fld, a, 0)

    @property
    def dim(self) -> int:
        return self.quotient.cols

    def morphism(self, col: Matrix) -> FunctorMorphism:
        return FunctorMorphism(self.t1, self.t2, self.hn.combination(col.a[:, 0].tolist()))

    @cached_property
    def basis(self) -> list[FunctorMorphism]:
        return [self.morphism(self.quotient.submatrix(cols=[j])) for j in range(self.dim)]

    def coordinates(self, eta: FunctorMorphism) -> Matrix | None:
        """Coordinates in the quotient basis, or None if eta is not compatible."""
        fld = self.field
        v = Matrix(fld, [[c] for c in self.hn.coordinates(eta.h)], rows=self.hn.dim, cols=1)
        a = Matrix.hstack(fld, [self.quotient, self.null], rows=self.hn.dim)
        if a.cols == 0:
            return Matrix.zeros(fld, 0, 1) if v.is_zero() else None
        x = solve(a, v)
        if x is None:
            return None
        return x.submatrix(rows=range(self.dim))

    def is_zero(self, eta: FunctorMorphism) -> bool:
        c = self.coordinates(eta)
        return c is not None and c.is_zero()


def functor_hom(t1: FpFunctorPresentation, t2: FpFunctorPresentation) -> FunctorHom:
    return FunctorHom(t1, t2)


def functor_hom_basis(t1: FpFunctorPresentation, t2: FpFunctorPresentation) -> list[FunctorMorphism]:
    return functor_hom(t1, t2).basis


def _left_regular(end: FunctorHom) -> list[Matrix]:
    fld = end.field
    mats = []
    for x in end.basis:
        cols = [end.coordinates(x @ e).a[:, 0].tolist() for e in end.basis]
        mats.append(Matrix.from_columns(fld, cols, rows=end.dim))
    return mats


def is_zero_functor(t: FpFunctorPresentation) -> bool:
    """T = 0 iff f is a split epimorphism, i.e. id_N factors through f."""
    if t.target.dim == 0:
        return True
    return factors_through(identity(t.target), t.f) is not None


def is_indecomposable_functor(t: FpFunctorPresentation) -> bool:
    if t.field.p is None:
        raise FunctorError("indecomposability needs a prime field")
    end = functor_hom(t, t)
    if end.dim == 0:
        return False
    return is_local(_left_regular(end), end.dim, t.field) is True


def _is_unit(end: FunctorHom, x: FunctorMorphism) -> bool:
    fld = end.field
    cols = [end.coordinates(x @ e).a[:, 0].tolist() for e in end.basis]
    return Matrix.from_columns(fld, cols, rows=end.dim).is_invertible()


def find_functor_isomorphism(t1: FpFunctorPresentation, t2: FpFunctorPresentation) -> FunctorMorphism | None:
    """An isomorphism between indecomposable functors, or None."""
    h12 = functor_hom(t1, t2)
    h21 = functor_hom(t2, t1)
    if h12.dim == 0 or h21.dim == 0:
        return None
    end = functor_hom(t1, t1)
    for eta in h12.basis:
        for theta in h21.basis:
            if _is_unit(end, theta @ eta):
                return eta
    return None


def functors_isomorphic(t1: FpFunctorPresentation, t2: FpFunctorPresentation, seed: int = 0,
                        tries: int = 8) -> bool:
    """Exact for indecomposable functors.

    Otherwise random combinations eta are tried and an iso is certified by
    Ker eta = Coker eta = 0, so a True answer is always correct.
    """
    z1, z2 = is_zero_functor(t1), is_zero_functor(t2)
    if z1 or z2:
        return z1 and z2
    if t1.field.p is not None and is_indecomposable_functor(t1) and is_indecomposable_functor(t2):
        return find_functor_isomorphism(t1, t2) is not None
    h12 = functor_hom(t1, t2)
    if h12.dim == 0:
        return False
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        eta = h12.basis[0].scale(t1.field.random_element(rng))
        for b in h12.basis[1:]:
            eta = eta + b.scale(t1.field.random_element(rng))
        if is_zero_functor(functor_kernel(eta)) and is_zero_functor(functor_cokernel(eta)):
            return True
    return False


def factors_through(alpha: Morphism, f: Morphism) -> Morphism | None:
    """h with f h = alpha, if one exists."""
    if alpha.target.dims != f.target.dims:
        raise FunctorError("factors_through needs a shared target")
    hs = hom_space(alpha.source, f.source)
    tgt = hom_space(alpha.source, f.target)
    fld = alpha.field
    want = Matrix(fld, [[c] for c in tgt.coordinates(alpha)], rows=tgt.dim, cols=1)
    if hs.dim == 0:
        return zero_morphism(alpha.source, f.source) if want.is_zero() else None
    a = _coords(tgt, [compose(f, b) for b in hs.basis])
    if tgt.dim == 0:
        return zero_morphism(alpha.source, f.source)
    x = solve(a, want)
    if x is None:
        return None
    return hs.combination(x.a[:, 0].tolist())


# ---------------------------------------------------------------------------
# kernels, images, cokernels


def _pullback(a: Morphism, b: Morphism) -> tuple[Representation, Morphism, Morphism]:
    """P = ker((a, -b): A (+) B -> C) with its two projections."""
    s, incs, projs = direct_sum([a.source, b.source])
    d = compose(a, projs[0]) - compose(b, projs[1])
    k, inc = kernel(d)
    return k, compose(projs[0], inc), compose(projs[1], inc)


def functor_kernel(eta: FunctorMorphism) -> FpFunctorPresentation:
    t1, t2 = eta.source, eta.target
    k, pi, _ = _pullback(eta.h, t2.f)
    l, q, _ = _pullback(pi, t1.f)
    return FpFunctorPresentation(q, name="ker")


def functor_image(eta: FunctorMorphism) -> FpFunctorPresentation:
    k, pi, _ = _pullback(eta.h, eta.target.f)
    return FpFunctorPresentation(pi, name="im")


def functor_cokernel(eta: FunctorMorphism) -> FpFunctorPresentation:
    t2 = eta.target
    s, incs, projs = direct_sum([t2.source, eta.source.target])
    g = compose(t2.f, projs[0]) + compose(eta.h, projs[1])
    return FpFunctorPresentation(g, name="coker")


def image_sequence(t: FpFunctorPresentation) -> tuple[FpFunctorPresentation, FpFunctorPresentation,
                                                       FpFunctorPresentation]:
    """0 -> Im -> Hom(-, N) -> T -> 0 with Im = Coker Hom(-, ker f -> M)."""
    k, inc = kernel(t.f)
    return FpFunctorPresentation(inc, name="im"), representable(t.target), t


# ---------------------------------------------------------------------------
# covering: Phi, Psi, shifts


def phi_pushdown(ctx: CoveringContext, t: FpFunctorPresentation) -> FpFunctorPresentation:
    """Phi(Coker(-, f)) = Coker(-, F_lambda f)."""
    fm = push_down(ctx, t.source)
    fn = push_down(ctx, t.target)
    return FpFunctorPresentation(push_down_morphism(ctx, t.f, fm, fn), name=f"Phi({t.name})" if t.name else "")


def phi_morphism(ctx: CoveringContext, eta: FunctorMorphism, s: FpFunctorPresentation,
                 t: FpFunctorPresentation) -> FunctorMorphism:
    return FunctorMorphism(s, t, push_down_morphism(ctx, eta.h, s.target, t.target))


def psi_evaluate(ctx: CoveringContext, u: FpFunctorPresentation, m: Representation) -> int:
    """dim Psi(U)(M) = dim U(F_lambda M)."""
    return evaluation_dim(u, push_down(ctx, m))


def g_shift_functor(ctx: CoveringContext, t: FpFunctorPresentation, g) -> FpFunctorPresentation:
    """gT = Coker(-, g f)."""
    cells = [(v, tuple(a + b for a, b in zip(c, g))) for v, c in ctx.support(t.source) + ctx.support(t.target)]
    w = ctx.fitting_window(cells, interior=False)
    ms = translate(ctx, t.source, g, w)
    ns = translate(ctx, t.target, g, w)
    maps = {}
    for name, mat in t.f.maps.items():
        if mat.rows and mat.cols:
            v, c = ctx.lift(name)
            maps[cover_name(v, tuple(a + b for a, b in zip(c, g)))] = mat
    return FpFunctorPresentation(Morphism(ms, ns, maps), name=f"{t.name}+{g}" if t.name else "")


def relocate_functor(ctx: CoveringContext, t: FpFunctorPresentation, window) -> FpFunctorPresentation:
    ms = relocate(ctx, t.source, window)
    ns = relocate(ctx, t.target, window)
    maps = {v: t.f.maps[v] for v in t.f.maps if v in window.lift}
    return FpFunctorPresentation(Morphism(ms, ns, maps), name=t.name)


def functor_shift_candidates(ctx: CoveringContext, x: Representation, t: FpFunctorPresentation):
    """Translations g with gX meeting the support of N (others give T(gX) = 0)."""
    return _shift_candidates(ctx, x, t.target)


def psi_phi_sum(ctx: CoveringContext, t: FpFunctorPresentation, m: Representation) -> tuple[int, dict]:
    """Sum over g of dim T(gM), evaluated in a common window."""
    contrib = {}
    for g in functor_shift_candidates(ctx, m, t):
        cells = ([(v, tuple(a + b for a, b in zip(c, g))) for v, c in ctx.support(m)]
                 + ctx.support(t.source) + ctx.support(t.target))
        w = ctx.fitting_window(cells, interior=False)
        d = evaluation_dim(relocate_functor(ctx, t, w), translate(ctx, m, g, w))
        if d:
            contrib[g] = d
    return sum(contrib.values()), contrib


# ---------------------------------------------------------------------------
# simple functors and composition length


def sink_map(g: TranslationQuiver, i: int) -> Morphism:
    """Right minimal almost split map ending at the i-th indecomposable."""
    x = g.modules[i]
    if i in g.projective:
        sub, inc = submodule(x, radical_bases(x))
        return inc
    preds = sorted(a for (a, b) in g.arrows if b == i)
    e, incs, projs = direct_sum([g.modules[a] for a in preds])
    total = zero_morphism(e, x)
    for a, pr in zip(preds, projs):
        total = total + compose(g.irreducible[(a, i)], pr)
    return total


def simple_functor_at(g: TranslationQuiver, i: int) -> FpFunctorPresentation:
    return FpFunctorPresentation(sink_map(g, i), name=f"S[{g.labels[i]}]")


def evaluation_table(t: FpFunctorPresentation, g: TranslationQuiver) -> list[int]:
    return [evaluation_dim(t, m) for m in g.modules]


def composition_length(t: FpFunctorPresentation, g: TranslationQuiver) -> int:
    """Sum of dim T(X) over the indecomposables."""
    return sum(evaluation_table(t, g))


def composition_length_by_peeling(t: FpFunctorPresentation, g: TranslationQuiver, limit: int = 200) -> int:
    """Count simple quotients removed one at a time until the functor vanishes."""
    simples = [simple_functor_at(g, i) for i in range(len(g))]
    steps = 0
    cur = t
    while any(evaluation_dim(cur, m) for m in g.modules):
        if steps >= limit:
            raise FunctorError("peeling did not terminate")
        for i, s in enumerate(simples):
            if not evaluation_dim(cur, g.modules[i]):
                continue
            hom = functor_hom(cur, s)
            if hom.dim:
                cur = functor_kernel(hom.basis[0])
                break
        else:
            raise FunctorError("nonzero functor without a simple quotient")
        steps += 1
    return steps


# ---------------------------------------------------------------------------
# modules over the mesh category


def to_ind_module(t: FpFunctorPresentation, g: TranslationQuiver, mesh: BoundPresentation) -> Representation:
    """The mesh-category module X |-> T(X), with T applied to the irreducible maps."""
    evs = [evaluate_functor(t, m) for m in g.modules]
    dims = {g.labels[i]: evs[i].dim for i in range(len(g))}
    maps = {}
    for (i, j) in g.arrows:
        u = g.irreducible[(i, j)]
        maps[g.arrow_id(i, j)] = functor_map_at(t, u, evs[j], evs[i])
    return Representation(mesh, dims, maps, name=f"eta^-1({t.name})" if t.name else "")


def _path_morphism(g: TranslationQuiver, word: Sequence[str], x: int, y: int) -> Morphism:
    """A-map x -> y of a Gamma^op path y -> x given as arrow ids."""
    ids = {g.arrow_id(i, j): (i, j) for (i, j) in g.arrows}
    out = identity(g.modules[y])
    for aid in word:
        i, j = ids[aid]
        out = compose(out, g.irreducible[(i, j)])
    if out.source.dims != g.modules[x].dims:
        raise FunctorError("path does not end at the expected vertex")
    return out


def from_ind_module(n: Representation, g: TranslationQuiver) -> FpFunctorPresentation:
    """Functor with the given restriction to indecomposables, via a projective presentation."""
    mesh = n.presentation
    pres = minimal_projective_presentation(n)
    idx = {lab: i for i, lab in enumerate(g.labels)}
    src = [idx[v] for v in pres.tops1]
    dst = [idx[v] for v in pres.tops0]
    p = g.presentation
    if not dst:
        return zero_functor(p)
    n0, inc0, pr0 = direct_sum([g.modules[j] for j in dst])
    if src:
        n1, inc1, pr1 = direct_sum([g.modules[i] for i in src])
    else:
        n1 = zero_module(p)
        pr1 = []
    total = zero_morphism(n1, n0)
    for a, b, elem in (_blocks(pres.p1, pres.tops1, pres.tops0) if src else ()):
        x, y = src[a], dst[b]
        basis = mesh.right_paths(g.labels[y])[g.labels[x]].paths
        for c, path in zip(elem, basis):
            if c == 0:
                continue
            u = _path_morphism(g, path.arrows, x, y)
            total = total + compose(inc0[b], compose(u.scale(c), pr1[a]))
    return FpFunctorPresentation(total, name="from_ind")


# ---------------------------------------------------------------------------
# kinds of functors


@dataclass
class MeshSetup:
    """Gamma_A, the mesh category B = K(Gamma_A) and a covering context of B."""

    gamma: TranslationQuiver
    mesh: BoundPresentation
    ctx: CoveringContext
    standard: bool
    simply_connected: bool


def classify_functor_kind(u: FpFunctorPresentation, setup: MeshSetup, max_radius: int = 6,
                          seed: int = 0) -> KindVerdict:
    if not (setup.standard and setup.simply_connected):
        raise FunctorError("hypotheses not certified: need a standard algebra with a simply connected cover")
    n = to_ind_module(u, setup.gamma, setup.mesh)
    if not is_indecomposable(n, seed=seed):
        raise FunctorError("functor is not indecomposable")
    vmap = {lab: orbit_vertex(lab) for lab in setup.gamma.labels}
    n_orbit = relabel_module(n, setup.ctx.orbit, vmap)
    verdict = classify_module_kind(setup.ctx, n_orbit, max_radius=max_radius, seed=seed)
    verdict.evidence["ind_module_support"] = sorted(v for v, d in n.dims.items() if d)
    return verdict


# ---------------------------------------------------------------------------
# precovering checks


@dataclass
class PrecoveringReport:
    items: dict[str, list[bool]] = dc_field(default_factory=dict)
    details: list[dict] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(all(v) for v in self.items.values())


def functor_hom_sum(ctx: CoveringContext, t: FpFunctorPresentation, t2: FpFunctorPresentation) -> int:
    """Sum over g of dim Hom(gT, T')."""
    cands = set()
    for tt in (t2.target, t2.source):
        cands.update(_shift_candidates(ctx, t.target, tt))
        cands.update(_shift_candidates(ctx, t.source, tt))
    total = 0
    for g in sorted(cands):
        gt = g_shift_functor(ctx, t, g)
        cells = ctx.support(gt.source) + ctx.support(gt.target) + ctx.support(t2.source) + ctx.support(t2.target)
        w = ctx.fitting_window(cells, interior=False)
        total += functor_hom(relocate_functor(ctx, gt, w), relocate_functor(ctx, t2, w)).dim
    return total


def check_precovering_report(ctx: CoveringContext, samples: Sequence[FpFunctorPresentation],
                             shifts: Sequence = ((1,), (-2,))) -> PrecoveringReport:
    rep = PrecoveringReport({"shift_invariance": [], "reflects_iso": [], "indecomposable": [], "hom_sum": []})
    phis = [phi_pushdown(ctx, t) for t in samples]
    for t, ph in zip(samples, phis):
        for g in shifts:
            rep.items["shift_invariance"].append(functors_isomorphic(phi_pushdown(ctx, g_shift_functor(ctx, t, g)), ph))
        if is_indecomposable_functor(t):
            rep.items["indecomposable"].append(is_indecomposable_functor(ph))
    for i, t1 in enumerate(samples):
        for j, t2 in enumerate(samples):
            lhs = functor_hom_sum(ctx, t1, t2)
            rhs = functor_hom(phis[i], phis[j]).dim
            rep.items["hom_sum"].append(lhs == rhs)
            rep.details.append({"pair": (i, j), "sum_g": lhs, "phi": rhs})
            if j <= i:
                continue
            if functors_isomorphic(phis[i], phis[j]):
                rep.items["reflects_iso"].append(_iso_up_to_shift(ctx, t1, t2))
    return rep


def _iso_up_to_shift(ctx: CoveringContext, t1: FpFunctorPresentation, t2: FpFunctorPresentation) -> bool:
    cands = set(_shift_candidates(ctx, t2.target, t1.target))
    for g in sorted(cands):
        gt = g_shift_functor(ctx, t2, g)
        cells = ctx.support(gt.source) + ctx.support(gt.target) + ctx.support(t1.source) + ctx.support(t1.target)
        w = ctx.fitting_window(cells, interior=False)
        if functors_isomorphic(relocate_functor(ctx, t1, w), relocate_functor(ctx, gt, w)):
            return True
    return False


def faithfulness_check(ctx: CoveringContext, t1: FpFunctorPresentation, t2: FpFunctorPresentation) -> bool:
    """Phi is injective on Hom(T1, T2)."""
    hom = functor_hom(t1, t2)
    if hom.dim == 0:
        return True
    p1, p2 = phi_pushdown(ctx, t1), phi_pushdown(ctx, t2)
    target = functor_hom(p1, p2)
    cols = []
    for eta in hom.basis:
        c = target.coordinates(phi_morphism(ctx, eta, p1, p2))
        if c is None:
            return False
        cols.append(c.a[:, 0].tolist())
    if target.dim == 0:
        return False
    return Matrix.from_columns(t1.field, cols, rows=target.dim).rank() == hom.dim


# ---------------------------------------------------------------------------
# the covering of the mesh category induced by a Galois covering of A


@dataclass
class MeshCover:
    periodic: PeriodicPresentation
    degrees: dict[tuple[int, int], tuple]
    lifts: list[Representation]
    psi: list[Morphism]


def _lift_indecomposables(ctx: CoveringContext, g: TranslationQuiver, seed: int = 0):
    lifts, psis = [], []
    for i, x in enumerate(g.modules):
        v = classify_module_kind(ctx, x, hypotheses=False, seed=seed)
        if v.kind != "first":
            raise FunctorError(f"{g.labels[i]} does not lift to the cover")
        xt = translate(ctx, v.witness, tuple(-c for c in v.shift))
        psi = find_isomorphism(push_down(ctx, xt), x)
        lifts.append(xt)
        psis.append(psi)
    return lifts, psis


def _arrow_degree(ctx: CoveringContext, g: TranslationQuiver, lifts, psis, i: int, j: int):
    """The unique shift d with Hom(X~, dY~) not inside rad^2(X, Y) after push-down."""
    f = ctx.field
    r2 = g.rad2.get((i, j))
    base = 0 if r2 is None else r2.cols
    inv_i = inverse(psis[i])
    found = []
    for d in _shift_candidates(ctx, lifts[j], lifts[i]):
        cells = ctx.support(lifts[i]) + [(v, add(c, d)) for v, c in ctx.support(lifts[j])]
        w = ctx.fitting_window(cells, interior=False)
        xs, ys = relocate(ctx, lifts[i], w), translate(ctx, lifts[j], d, w)
        fx, fy = push_down(ctx, xs), push_down(ctx, ys)
        vecs = []
        for u in hom_space(xs, ys).basis:
            a = compose(psis[j], compose(push_down_morphism(ctx, u, fx, fy), inv_i))
            vecs.append(a.vector())
        if not vecs:
            continue
        test = Matrix.hstack(f, ([r2] if base else []) + vecs)
        if rank(test) > base:
            found.append(d)
    if len(found) != 1:
        raise FunctorError(f"arrow {g.arrow_id(i, j)}: expected one degree, found {found}")
    return found[0]


def build_mesh_cover(ctx: CoveringContext, g: TranslationQuiver, name: str = "mesh-cover",
                     seed: int = 0) -> MeshCover:
    """Gamma_R^op as a periodic presentation whose orbit category is the mesh category of g."""
    if ctx.orbit.vertices != g.presentation.vertices:
        raise FunctorError("the AR quiver must be computed over the orbit category of the context")
    lifts, psis = _lift_indecomposables(ctx, g, seed)
    degrees = {(i, j): _arrow_degree(ctx, g, lifts, psis, i, j) for (i, j) in sorted(g.arrows)}
    arrows = [PeriodicArrow(g.arrow_id(i, j), g.labels[j], g.labels[i], tuple(-c for c in d))
              for (i, j), d in degrees.items()]
    rels = []
    one = ctx.field(1)
    for x, z, middle in g.meshes:
        totals = {add(degrees[(z, e)], degrees[(e, x)]) for e in middle}
        if len(totals) != 1:
            raise FunctorError(f"mesh at {g.labels[x]} is not homogeneous: {sorted(totals)}")
        rels.append(PeriodicRelation(tuple((one, (g.arrow_id(e, x), g.arrow_id(z, e))) for e in middle)))
    pp = PeriodicPresentation(g.labels, arrows, ctx.rank, rels, ctx.field, name=name,
                              asserts=ctx.periodic.asserts)
    return MeshCover(pp, degrees, lifts, psis)


def mesh_setup(ctx: CoveringContext, g: TranslationQuiver | None = None, radius: int = 3,
               seed: int = 0) -> MeshSetup:
    g = g or ar_quiver(ctx.orbit)
    mesh = mesh_presentation(g)
    mc = build_mesh_cover(ctx, g, seed=seed)
    return MeshSetup(g, mesh, CoveringContext(mc.periodic, radius), standard_check(g, mesh).ok,
                     "simply_connected" in ctx.periodic.asserts)


# ---------------------------------------------------------------------------
# seeded samples


def window_indecomposables(ctx: CoveringContext, radius: int | None = None, margin: int = 0) -> list[Representation]:
    """String modules of a window whose support stays ``margin`` away from its boundary."""
    w = ctx.window(radius)
    mods = [string_module(w.presentation, s) for s in enumerate_strings(w.presentation).strings]
    lim = (radius or ctx.radius) - margin
    out = []
    for m in mods:
        if any(m.dims[v] for v in w.boundary):
            continue
        if all(max(abs(x) for x in c) <= lim for _, c in ctx.support(m)):
            out.append(m)
    return out


def sample_functors(mods: Sequence[Representation], count: int, seed: int = 0, max_length: int | None = None,
                    lengths: Sequence[Representation] | None = None, indecomposable: bool = False,
                    tries: int = 400) -> list[FpFunctorPresentation]:
    """Functors Coker(-, f) for random f: M -> N between the given modules.

    ``lengths`` lists the modules used to bound the total evaluation dimension.
    """
    rng = np.random.default_rng(seed)
    out: list[FpFunctorPresentation] = []
    for _ in range(tries):
        if len(out) >= count:
            break
        m = mods[int(rng.integers(len(mods)))]
        linked = [n for n in mods if m.support & n.support and hom_space(m, n).dim]
        pool = linked if linked and rng.random() < 0.8 else mods
        n = pool[int(rng.integers(len(pool)))]
        hs = hom_space(m, n)
        f = hs.random(rng) if hs.dim else zero_morphism(m, n)
        t = FpFunctorPresentation(f, name=f"T{len(out)}")
        if max_length is not None:
            total = sum(evaluation_dim(t, x) for x in (lengths or mods))
            if total == 0 or total > max_length:
                continue
        if indecomposable and not is_indecomposable_functor(t):
            continue
        out.append(t)
    return out
