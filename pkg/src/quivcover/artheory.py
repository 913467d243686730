"""Auslander-Reiten data for representation-finite presentations.

Irreducible maps are chosen so that every mesh relation holds with all
coefficients +1: vertices are processed in a topological order, arrows into a
projective vertex are picked freely, and arrows into a non-projective X are read
off the cokernel of the already fixed source map of tau X.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .exactlin import Matrix, column_space, complement_basis, rank
from .quivercat import Arrow, BoundPresentation, Quiver, check_admissible, make_path, make_relation, path_basis
from .repmod import (ModuleError, Morphism, Representation, _op, cokernel, compose, direct_sum, dual_morphism,
                     find_isomorphism, hom_space, injective_at, is_isomorphic, kernel,
                     projective_at, projective_at_cached, radical_bases, radical_endomorphisms, simple_at,
                     yoneda_morphism, zero_module, zero_morphism)
from .strings import enumerate_strings, string_module


class NotRepresentationFiniteError(ModuleError):
    pass


# ---------------------------------------------------------------------------
# projective presentations and tau


@dataclass
class ProjectiveCover:
    module: Representation
    vertices: list[str]
    map: Morphism


@dataclass
class ProjectivePresentation:
    p1: Morphism
    p0: Morphism
    tops1: list[str]
    tops0: list[str]


def projective_cover(m: Representation) -> ProjectiveCover:
    """P -> m lifting a basis of the top of m."""
    p = m.presentation
    f = m.field
    rad = radical_bases(m)
    verts, maps = [], []
    for x in p.vertices:
        n = m.dims[x]
        if not n:
            continue
        for i in complement_basis(rad[x], n):
            e = [f(0)] * n
            e[i] = f(1)
            verts.append(x)
            maps.append(yoneda_morphism(p, x, m, e))
    if not verts:
        z = zero_module(p)
        return ProjectiveCover(z, [], zero_morphism(z, m))
    pm, _, projs = direct_sum([projective_at_cached(p, x) for x in verts])
    total = zero_morphism(pm, m)
    for g, pr in zip(maps, projs):
        total = total + compose(g, pr)
    return ProjectiveCover(pm, verts, total)


def minimal_projective_presentation(m: Representation) -> ProjectivePresentation:
    c0 = projective_cover(m)
    k, inc = kernel(c0.map)
    c1 = projective_cover(k)
    return ProjectivePresentation(compose(inc, c1.map), c0.map, c1.vertices, c0.vertices)


def _blocks(m: Morphism, src: Sequence[str], dst: Sequence[str]):
    """Yield (i, j, element) where element in P_{dst[j]}(src[i]) is the image of e_{src[i]}."""
    p = m.source.presentation
    # P_x(x) has the trivial path first, so e_x is the first column of its block at x
    col_of = []
    for i, x in enumerate(src):
        start = sum(projective_at_cached(p, y).dims[x] for y in src[:i])
        col_of.append(start)
    for i, x in enumerate(src):
        column = m.maps[x].a[:, col_of[i]]
        row = 0
        for j, y in enumerate(dst):
            d = projective_at_cached(p, y).dims[x]
            yield i, j, column[row:row + d].tolist()
            row += d


def nakayama_map(p: BoundPresentation, x: str, y: str, element: Sequence) -> Morphism:
    """nu of the map P_x -> P_y sending e_x to ``element`` (coordinates of paths y -> x)."""
    op = _op(p)
    f = p.field
    pb = p.right_paths(y)[x]
    opb = op.right_paths(x)[y]
    coords = [f(0)] * opb.dim
    for c, path in zip(element, pb.paths):
        if c == 0:
            continue
        rev = make_path(op.quiver, tuple(reversed(path.arrows)), start=x)
        for k, v in enumerate(opb.coordinates(rev, f)):
            coords[k] = f(coords[k] + f(c) * v)
    yon = yoneda_morphism(op, y, projective_at_cached(op, x), coords)
    return dual_morphism(yon)


def ar_translate(m: Representation) -> Representation:
    """tau M = D Tr M, computed as the kernel of nu applied to a minimal presentation."""
    p = m.presentation
    pres = minimal_projective_presentation(m)
    if not pres.tops1:
        raise ModuleError("ar_translate: module is projective")
    src, dst = pres.tops1, pres.tops0
    inj1, inc1, pr1 = direct_sum([injective_at(p, x) for x in src])
    inj0, inc0, pr0 = direct_sum([injective_at(p, y) for y in dst])
    total = zero_morphism(inj1, inj0)
    for i, j, elem in _blocks(pres.p1, src, dst):
        if not any(c != 0 for c in elem):
            continue
        nu = nakayama_map(p, src[i], dst[j], elem)
        total = total + compose(inc0[j], compose(nu, pr1[i]))
    k, _ = kernel(total)
    k.name = f"tau({m.name})" if m.name else "tau"
    return k


def is_projective(m: Representation) -> bool:
    return not minimal_projective_presentation(m).tops1


# ---------------------------------------------------------------------------
# AR quiver


@dataclass
class TranslationQuiver:
    presentation: BoundPresentation
    modules: list[Representation]
    labels: list[str]
    arrows: dict[tuple[int, int], int]
    irreducible: dict[tuple[int, int], Morphism]
    tau: dict[int, int]
    meshes: list[tuple[int, int, list[int]]] = dc_field(default_factory=list)
    projective: set[int] = dc_field(default_factory=set)
    injective: set[int] = dc_field(default_factory=set)
    rad2: dict = dc_field(default_factory=dict, repr=False)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __len__(self) -> int:
        return len(self.modules)

    def find(self, m: Representation) -> int:
        for i, x in enumerate(self.modules):
            if x.dims == m.dims and is_isomorphic(x, m):
                return i
        raise ModuleError("module is not isomorphic to any vertex of the AR quiver")

    def arrow_id(self, i: int, j: int) -> str:
        return f"{self.labels[i]}>{self.labels[j]}"


def _label_modules(p: BoundPresentation, mods: list[Representation]) -> list[str]:
    labels = [""] * len(mods)
    for kind, build in (("P", projective_at), ("I", injective_at), ("S", simple_at)):
        for x in p.vertices:
            t = build(p, x)
            for i, m in enumerate(mods):
                if not labels[i] and m.dims == t.dims and is_isomorphic(m, t):
                    labels[i] = f"{kind}{x.removeprefix('orbit:')}"
    k = 0
    for i in range(len(mods)):
        if not labels[i]:
            k += 1
            labels[i] = f"M{k}"
    return labels


def _span(vectors: list[Matrix], field) -> Matrix | None:
    if not vectors:
        return None
    return column_space(Matrix.hstack(field, vectors))


def _topological(n: int, arrows) -> list[int]:
    indeg = [0] * n
    out: dict[int, list[int]] = {i: [] for i in range(n)}
    for (i, j) in arrows:
        indeg[j] += 1
        out[i].append(j)
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    order = []
    while ready:
        i = ready.pop(0)
        order.append(i)
        for j in sorted(out[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
        ready.sort()
    if len(order) != n:
        raise NotRepresentationFiniteError("mesh normalisation order has a cycle avoiding the projectives")
    return order


def indecomposables(p: BoundPresentation, cap: int | None = None) -> list[Representation]:
    rep = enumerate_strings(p, cap)
    if rep.bands:
        raise NotRepresentationFiniteError(f"bands exist, e.g. {rep.bands[0]}")
    mods = [string_module(p, w) for w in rep.strings]
    return sorted(mods, key=lambda m: m.key())


def ar_quiver(p: BoundPresentation, modules: Sequence[Representation] | None = None,
              cap: int | None = None) -> TranslationQuiver:
    mods = list(modules) if modules is not None else indecomposables(p, cap)
    n = len(mods)
    f = p.field
    for i in range(n):
        for j in range(i):
            if mods[i].dims == mods[j].dims and is_isomorphic(mods[i], mods[j]):
                raise ModuleError(f"modules {i} and {j} are isomorphic")
    labels = _label_modules(p, mods)
    spaces = {(i, j): hom_space(mods[i], mods[j]) for i in range(n) for j in range(n)}
    rad: dict[tuple[int, int], list[Morphism]] = {}
    for (i, j), hs in spaces.items():
        rad[(i, j)] = radical_endomorphisms(mods[i]) if i == j else hs.basis
    arrows: dict[tuple[int, int], int] = {}
    rad2: dict[tuple[int, int], Matrix | None] = {}
    for i in range(n):
        for j in range(n):
            if not rad[(i, j)]:
                continue
            prods = []
            for k in range(n):
                for a in rad[(i, k)]:
                    for b in rad[(k, j)]:
                        c = compose(b, a)
                        if not c.is_zero():
                            prods.append(c.vector())
            r2 = _span(prods, f)
            rad2[(i, j)] = r2
            d2 = r2.cols if r2 is not None else 0
            mult = len(rad[(i, j)]) - d2
            if mult:
                arrows[(i, j)] = mult
    projective = {i for i, m in enumerate(mods) if is_projective(m)}
    injective = {i for i, m in enumerate(mods) if is_projective(_dual_module(m))}
    tau: dict[int, int] = {}
    for i in range(n):
        if i in projective:
            continue
        t = ar_translate(mods[i])
        for j in range(n):
            if mods[j].dims == t.dims and is_isomorphic(mods[j], t):
                tau[i] = j
                break
        else:
            raise ModuleError(f"tau of {labels[i]} is not among the listed modules")
    meshes = []
    for x, z in sorted(tau.items()):
        middle = sorted({j for (i, j) in arrows if i == z} & {i for (i, j) in arrows if j == x})
        meshes.append((x, z, middle))
    gamma = TranslationQuiver(p, mods, labels, arrows, {}, tau, meshes, projective, injective, rad2)
    _choose_irreducibles(gamma, rad, rad2)
    return gamma


def _dual_module(m: Representation) -> Representation:
    from .repmod import dual
    return dual(m)


def _choose_irreducibles(g: TranslationQuiver, rad, rad2) -> None:
    f = g.presentation.field
    n = len(g.modules)
    # maps into projectives are free choices, so only arrows ending at non-projectives order the meshes
    for x in _topological(n, [(i, j) for (i, j) in g.arrows if j not in g.projective]):
        preds = sorted(i for (i, j) in g.arrows if j == x)
        if not preds:
            continue
        if any(g.arrows[(i, x)] > 1 for i in preds):
            if x in g.tau:
                raise ModuleError("mesh normalisation needs arrow multiplicities 1")
        if x not in g.tau:
            for i in preds:
                basis = rad[(i, x)]
                r2 = rad2.get((i, x))
                picked = _complement_pick(basis, r2, f)
                g.irreducible[(i, x)] = picked[0]
                for k, extra in enumerate(picked[1:], start=2):
                    g.irreducible[(i, x, k)] = extra
            continue
        z = g.tau[x]
        middle = preds
        mods = [g.modules[e] for e in middle]
        e_sum, incs, projs = direct_sum(mods)
        u = zero_morphism(g.modules[z], e_sum)
        for e, inc in zip(middle, incs):
            if (z, e) not in g.irreducible:
                raise ModuleError(f"arrow {g.labels[z]} -> {g.labels[e]} missing from the mesh at {g.labels[x]}")
            u = u + compose(inc, g.irreducible[(z, e)])
        c, pi = cokernel(u)
        psi = find_isomorphism(c, g.modules[x])
        if psi is None:
            raise ModuleError(f"cokernel of the source map of {g.labels[z]} is not {g.labels[x]}")
        for e, inc in zip(middle, incs):
            g.irreducible[(e, x)] = compose(psi, compose(pi, inc))


def _complement_pick(basis: list[Morphism], r2: Matrix | None, field) -> list[Morphism]:
    if r2 is None or r2.cols == 0:
        have = None
    else:
        have = r2
    out = []
    for b in basis:
        v = b.vector()
        test = v if have is None else Matrix.hstack(field, [have, v])
        if rank(test) > (0 if have is None else have.cols):
            out.append(b)
            have = test if have is None else Matrix.hstack(field, [have, v])
    return out


def mesh_additivity(g: TranslationQuiver) -> list[tuple[str, bool]]:
    """dim tau X + dim X against the sum of the middle terms, per mesh."""
    out = []
    for x, z, middle in g.meshes:
        lhs = tuple(a + b for a, b in zip(g.modules[x].dim_vector, g.modules[z].dim_vector))
        rhs = tuple(sum(g.modules[e].dim_vector[k] for e in middle) for k in range(len(lhs)))
        out.append((g.labels[x], lhs == rhs))
    return out


# ---------------------------------------------------------------------------
# mesh category


def mesh_presentation(g: TranslationQuiver, field=None, name: str = "mesh") -> BoundPresentation:
    """K(Gamma): paths of Gamma^op modulo one mesh relation per mesh."""
    field = field or g.presentation.field
    arrows = []
    for (i, j), mult in sorted(g.arrows.items()):
        if mult != 1:
            raise ModuleError("mesh presentation needs arrow multiplicities 1")
        arrows.append(Arrow(g.arrow_id(i, j), g.labels[j], g.labels[i]))
    q = Quiver(list(g.labels), arrows)
    rels = []
    for x, z, middle in g.meshes:
        terms = [(1, (g.arrow_id(e, x), g.arrow_id(z, e))) for e in middle]
        rels.append(make_relation(q, field, terms))
    bp = BoundPresentation(q, rels, field, name=name)
    check_admissible(bp)
    return bp


@dataclass
class StandardReport:
    pairs: dict[tuple[str, str], tuple[int, int]]

    @property
    def unequal(self) -> list[tuple[str, str]]:
        return [k for k, (a, b) in self.pairs.items() if a != b]

    @property
    def ok(self) -> bool:
        return not self.unequal


def standard_check(g: TranslationQuiver, mesh: BoundPresentation | None = None) -> StandardReport:
    mesh = mesh or mesh_presentation(g)
    pairs = {}
    for i, x in enumerate(g.labels):
        for j, y in enumerate(g.labels):
            d_mod = hom_space(g.modules[i], g.modules[j]).dim
            d_mesh = path_basis(mesh, x, y).dim
            pairs[(x, y)] = (d_mod, d_mesh)
    return StandardReport(pairs)


def to_dot(g: TranslationQuiver) -> str:
    lines = ["digraph AR {", "  rankdir=LR;"]
    for i, lab in enumerate(g.labels):
        dv = "".join(str(d) for d in g.modules[i].dim_vector)
        lines.append(f'  "{lab}" [label="{lab}\\n{dv}"];')
    for (i, j), mult in sorted(g.arrows.items()):
        extra = f' [label="{mult}"]' if mult > 1 else ""
        lines.append(f'  "{g.labels[i]}" -> "{g.labels[j]}"{extra};')
    for x, z in sorted(g.tau.items()):
        lines.append(f'  "{g.labels[x]}" -> "{g.labels[z]}" [style=dashed, constraint=false];')
    lines.append("}")
    return "\n".join(lines) + "\n"
