"""Covering calculus for a Z^k-periodic cover R of its orbit category A = R/G.

Modules over R are handled through finite convex windows.  Cover vertex and
arrow names are global (``v@c`` and ``a@c``), so a module can be moved between
windows that both contain its support.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .exactlin import Matrix
from .quivercat import (Coord, PeriodicPresentation, WindowCategory, add, build_window,
                        cover_name, make_path, neg, orbit_category, orbit_vertex)
from .repmod import (Morphism, Representation, decompose, hom_dim, is_indecomposable, is_isomorphic)
from .strings import StringWalk, band_module, walk_vertices


class WindowError(ValueError):
    """A module does not fit (or touches the boundary of) the window it needs."""


@dataclass(frozen=True)
class CoverVertex:
    vertex: str
    coord: Coord


class CoveringContext:
    """A periodic presentation, its orbit category and a cache of windows."""

    def __init__(self, periodic: PeriodicPresentation, radius: int = 3):
        if radius < 1:
            raise WindowError("radius must be >= 1")
        self.periodic = periodic
        self.radius = radius
        self.orbit, self.F = orbit_category(periodic)
        self._windows: dict[int, WindowCategory] = {}
        self._by_pres: dict[int, WindowCategory] = {}

    def __repr__(self) -> str:
        return f"CoveringContext({self.periodic.name or '?'}, radius={self.radius})"

    @property
    def field(self):
        return self.periodic.field

    @property
    def rank(self) -> int:
        return self.periodic.group_rank

    def window(self, radius: int | None = None) -> WindowCategory:
        r = self.radius if radius is None else radius
        w = self._windows.get(r)
        if w is None:
            w = build_window(self.periodic, r)
            self._windows[r] = w
            self._by_pres[id(w.presentation)] = w
        return w

    def window_of(self, m: Representation) -> WindowCategory:
        w = self._by_pres.get(id(m.presentation))
        if w is None:
            raise WindowError("module is not over a window of this context")
        return w

    def orbit_of(self, w: str) -> str:
        return w.split("@", 1)[0]

    def lift(self, name: str) -> tuple[str, Coord]:
        v, c = name.split("@", 1)
        return v, tuple(int(x) for x in c.split(","))

    def support(self, m: Representation) -> list[tuple[str, Coord]]:
        return [self.lift(w) for w in m.presentation.vertices if m.dims[w]]

    def fitting_window(self, cells: Iterable[tuple[str, Coord]], interior: bool = True) -> WindowCategory:
        """Smallest cached-radius window holding ``cells`` (off its boundary if asked)."""
        cells = list(cells)
        need = max((max((abs(x) for x in c), default=0) for _, c in cells), default=0)
        r = max(self.radius, need + 1)
        for rr in range(r, r + 8):
            w = self.window(rr)
            names = [cover_name(v, c) for v, c in cells]
            if all(n in w.lift for n in names) and not (interior and w.boundary.intersection(names)):
                return w
        raise WindowError(f"no window up to radius {r + 7} holds the support")


def is_interior(ctx: CoveringContext, m: Representation) -> bool:
    w = ctx.window_of(m)
    return not any(m.dims[v] for v in w.boundary)


def relocate(ctx: CoveringContext, m: Representation, window: WindowCategory) -> Representation:
    """The same cover module viewed over another window containing its support."""
    if m.presentation is window.presentation:
        return m
    dims = {v: n for v, n in m.dims.items() if n}
    for v in dims:
        if v not in window.lift:
            raise WindowError(f"vertex {v} is outside the target window")
    maps = {}
    for aid, mat in m.maps.items():
        a = m.presentation.arrows[aid]
        if dims.get(a.source) and dims.get(a.target):
            if aid not in window.presentation.arrows:
                raise WindowError(f"arrow {aid} is missing from the target window")
            maps[aid] = mat
    out = Representation(window.presentation, dims, maps, name=m.name)
    ctx._by_pres.setdefault(id(window.presentation), window)
    return out


def translate(ctx: CoveringContext, m: Representation, g: Coord,
              window: WindowCategory | None = None) -> Representation:
    """The translate gM, over ``window`` (default: a window that fits it)."""
    src_w = ctx.window_of(m)
    cells = [(v, add(c, g)) for v, c in ctx.support(m)]
    if window is None:
        window = src_w if all(cover_name(v, c) in src_w.lift for v, c in cells) else ctx.fitting_window(cells, False)
    dims = {}
    for (v, c), name in zip(ctx.support(m), (cover_name(v, c) for v, c in cells)):
        if name not in window.lift:
            raise WindowError(f"translate by {g} leaves the window at {name}")
        dims[name] = m.dims[cover_name(v, c)]
    maps = {}
    for aid, mat in m.maps.items():
        a = m.presentation.arrows[aid]
        if m.dims[a.source] and m.dims[a.target]:
            base, c = ctx.lift(aid)
            maps[cover_name(base, add(c, g))] = mat
    name = f"{m.name}+{g}" if m.name else ""
    return Representation(window.presentation, dims, maps, name=name)


def _slots(ctx: CoveringContext, m: Representation) -> dict[str, tuple[str, int]]:
    """For each supported window vertex: (orbit vertex, offset inside the push-down)."""
    out = {}
    used: dict[str, int] = {}
    for v, c in sorted(ctx.support(m), key=lambda vc: vc[1]):
        o = orbit_vertex(v)
        out[cover_name(v, c)] = (o, used.get(o, 0))
        used[o] = used.get(o, 0) + m.dims[cover_name(v, c)]
    return out


def push_down(ctx: CoveringContext, m: Representation, allow_boundary: bool = False) -> Representation:
    """F_lambda(M): the space at an orbit vertex is the sum over its lifts, ordered by coordinate."""
    w = ctx.window_of(m)
    if not allow_boundary and any(m.dims[v] for v in w.boundary):
        raise WindowError("support touches the window boundary; enlarge the window")
    f = ctx.field
    slots = _slots(ctx, m)
    dims = {o: 0 for o in ctx.orbit.vertices}
    for name, (o, _) in slots.items():
        dims[o] += m.dims[name]
    blocks = {aid: Matrix.zeros(f, dims[a.target], dims[a.source]).a.copy() for aid, a in ctx.orbit.arrows.items()}
    for aid, mat in m.maps.items():
        a = m.presentation.arrows[aid]
        if a.source not in slots or a.target not in slots:
            continue
        base, _ = ctx.lift(aid)
        _, so = slots[a.source]
        _, to = slots[a.target]
        blocks[base][to:to + mat.rows, so:so + mat.cols] = mat.a
    maps = {aid: Matrix(f, b) for aid, b in blocks.items()}
    return Representation(ctx.orbit, dims, maps, name=f"F({m.name})" if m.name else "")


def push_down_morphism(ctx: CoveringContext, u: Morphism, source: Representation | None = None,
                       target: Representation | None = None) -> Morphism:
    """F_lambda of u: X -> gY, landing in F_lambda(Y) = F_lambda(gY)."""
    x, y = u.source, u.target
    fx = source if source is not None else push_down(ctx, x, allow_boundary=True)
    fy = target if target is not None else push_down(ctx, y, allow_boundary=True)
    sx, sy = _slots(ctx, x), _slots(ctx, y)
    f = ctx.field
    blocks = {o: Matrix.zeros(f, fy.dims[o], fx.dims[o]).a.copy() for o in ctx.orbit.vertices}
    for name, mat in u.maps.items():
        if name in sx and name in sy and mat.rows and mat.cols:
            o, xo = sx[name]
            _, yo = sy[name]
            blocks[o][yo:yo + mat.rows, xo:xo + mat.cols] = mat.a
    return Morphism(fx, fy, {o: Matrix(f, b) for o, b in blocks.items()})


@dataclass
class PullUp:
    module: Representation
    window: WindowCategory
    boundary_touched: frozenset[str]


def pull_up_window(ctx: CoveringContext, x: Representation, radius: int | None = None) -> PullUp:
    """Restriction of F_bullet(X) to a window."""
    if not x.presentation.same_as(ctx.orbit):
        raise WindowError("module is not over the orbit category of this context")
    w = ctx.window(radius)
    dims = {name: x.dims[orbit_vertex(v)] for name, (v, _) in w.lift.items()}
    maps = {aid: x.maps[base] for aid, (base, _) in w.arrow_lift.items()}
    m = Representation(w.presentation, dims, maps, name=f"pullup({x.name})")
    touched = frozenset(v for v in w.boundary if dims[v])
    return PullUp(m, w, touched)


def _shift_candidates(ctx: CoveringContext, x: Representation, y: Representation) -> list[Coord]:
    sy: dict[str, list[Coord]] = {}
    for v, c in ctx.support(y):
        sy.setdefault(v, []).append(c)
    out = set()
    for v, c in ctx.support(x):
        for d in sy.get(v, []):
            out.add(tuple(b - a for a, b in zip(c, d)))
    return sorted(out)


@dataclass
class HomCheck:
    lhs: int
    rhs: int
    contributions: dict[Coord, int]

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def covering_hom_check(ctx: CoveringContext, x: Representation, y: Representation) -> HomCheck:
    """Compare dim Hom_A(F x, F y) with the sum over g of dim Hom_R(g x, y)."""
    for m in (x, y):
        if not is_interior(ctx, m):
            raise WindowError("covering_hom_check needs interior modules")
    lhs = hom_dim(push_down(ctx, x), push_down(ctx, y))
    contrib = {}
    for g in _shift_candidates(ctx, x, y):
        cells = [(v, add(c, g)) for v, c in ctx.support(x)] + ctx.support(y)
        w = ctx.fitting_window(cells, interior=False)
        d = hom_dim(translate(ctx, x, g, w), relocate(ctx, y, w))
        if d:
            contrib[g] = d
    return HomCheck(lhs, sum(contrib.values()), contrib)


# ---------------------------------------------------------------------------
# periodic lines


@dataclass(frozen=True)
class LineOrbit:
    """A G-periodic line given by one period of its walk and the translation closing it."""

    start: str
    letters: tuple[tuple[str, int], ...]
    translation: Coord
    period: tuple[tuple[str, Coord], ...]

    def __str__(self) -> str:
        w = " ".join(a if s > 0 else a + "^-" for a, s in self.letters)
        return f"line[{self.start}: {w} | {self.translation}]"

    def folded(self, ctx: CoveringContext) -> StringWalk:
        return StringWalk(orbit_vertex(self.start), self.letters)


def _step(ctx: CoveringContext, v: str, c: Coord, letter: tuple[str, int]) -> tuple[str, Coord] | None:
    a = ctx.periodic.arrows[letter[0]]
    if letter[1] > 0:
        return (a.target, add(c, a.shift)) if a.source == v else None
    return (a.source, add(c, neg(a.shift))) if a.target == v else None


def _nonzero_in_orbit(ctx: CoveringContext, word: Sequence[str]) -> bool:
    path = make_path(ctx.orbit.quiver, word)
    pb = ctx.orbit.right_paths(path.source)[path.target]
    return any(x != 0 for x in pb.coordinates(path, ctx.field))


def _runs_nonzero(ctx: CoveringContext, letters: Sequence[tuple[str, int]]) -> bool:
    run: list[str] = []
    sign = 0
    for a, s in list(letters) + [("", 0)]:
        if s == sign and s != 0:
            run.append(a)
            continue
        if len(run) >= 2:
            word = run if sign > 0 else list(reversed(run))
            if not _nonzero_in_orbit(ctx, word):
                return False
        run, sign = [a], s
    return True


def _line_is_valid(ctx: CoveringContext, start: str, letters: tuple, g: Coord, radius: int) -> bool:
    n = len(letters)
    three = letters * 3
    for i in range(len(three) - 1):
        if three[i][0] == three[i + 1][0] and three[i][1] == -three[i + 1][1]:
            return False
    if not _runs_nonzero(ctx, three):
        return False
    verts = [(start, ctx.periodic.zero())]
    for c in letters[:-1]:
        verts.append(_step(ctx, *verts[-1], c))
    period = {v: [] for v, _ in verts}
    for v, c in verts:
        period[v].append(c)
    k = max(abs(x) for x in g)

    def member(v: str, c: Coord) -> bool:
        for c0 in period.get(v, ()):
            d = tuple(a - b for a, b in zip(c, c0))
            # d must be an integer multiple of g
            ratios = {a // b for a, b in zip(d, g) if b} if any(g) else set()
            if len(ratios) == 1:
                t = next(iter(ratios))
                if tuple(t * b for b in g) == d:
                    return True
        return False

    walk_arrows = set()
    cur = (start, ctx.periodic.zero())
    for c in three:
        nxt = _step(ctx, *cur, c)
        a = ctx.periodic.arrows[c[0]]
        src = cur if c[1] > 0 else nxt
        walk_arrows.add((c[0], src[1]))
        cur = nxt
    # no chords: every cover arrow between line vertices of the middle period is a walk arrow
    mid = [(v, add(c, g)) for v, c in verts]
    for v, c in mid:
        for a in ctx.periodic.arrows.values():
            if a.source == v and member(a.target, add(c, a.shift)) and (a.id, c) not in walk_arrows:
                return False
    # convexity: no quiver path leaves the line and comes back (bounded search)
    bound = radius * max(k, 1) + n
    for v, c in mid:
        frontier = deque()
        for a in ctx.periodic.arrows.values():
            if a.source == v:
                t = (a.target, add(c, a.shift))
                if not member(*t):
                    frontier.append((t, 1))
        seen = set()
        while frontier:
            (u, cu), depth = frontier.popleft()
            if (u, cu) in seen or depth > bound:
                continue
            seen.add((u, cu))
            for a in ctx.periodic.arrows.values():
                if a.source == u:
                    t = (a.target, add(cu, a.shift))
                    if member(*t):
                        return False
                    frontier.append((t, depth + 1))
    return True


def _line_key(ctx: CoveringContext, line: tuple[tuple[str, Coord], ...], g: Coord) -> tuple:
    gg = g if g > neg(g) else neg(g)
    n = gg[0] if gg[0] else 1
    keys = []
    for _, c0 in line:
        shifted = sorted((v, tuple(x - y for x, y in zip(c, c0))) for v, c in line)
        norm = sorted((v, (c[0] % n,) + c[1:]) for v, c in shifted)
        keys.append(tuple(norm))
    return (gg, min(keys))


def periodic_lines(ctx: CoveringContext, radius: int | None = None, max_period: int | None = None) -> list[LineOrbit]:
    """Orbit representatives of G-periodic lines with period inside the search radius.

    A period visits pairwise distinct vertex orbits, so its length is at most the
    number of orbits.  Only rank-one groups are supported.
    """
    if ctx.rank != 1:
        raise NotImplementedError("periodic line search supports rank-one groups only")
    r = ctx.radius if radius is None else radius
    p = ctx.periodic
    cap = max_period or len(p.vertices)
    letters_all = [(a, 1) for a in p.arrows] + [(a, -1) for a in p.arrows]
    found: dict[tuple, LineOrbit] = {}
    for v0 in p.vertices:
        c0 = p.zero()
        stack = [((), [(v0, c0)])]
        while stack:
            letters, verts = stack.pop()
            v, c = verts[-1]
            if len(letters) >= cap:
                continue
            for lt in letters_all:
                if letters and letters[-1] == (lt[0], -lt[1]):
                    continue
                nxt = _step(ctx, v, c, lt)
                if nxt is None or max(abs(x) for x in nxt[1]) > r:
                    continue
                new = letters + (lt,)
                if nxt[0] == v0 and nxt[1] != c0:
                    g = nxt[1]
                    if _line_is_valid(ctx, v0, new, g, r):
                        period = tuple(verts)
                        key = _line_key(ctx, period, g)
                        if key not in found:
                            found[key] = LineOrbit(v0, new, g, period)
                    continue
                if any(u == nxt[0] for u, _ in verts):
                    continue
                if not _runs_nonzero(ctx, new):
                    continue
                stack.append((new, verts + [nxt]))
    return sorted(found.values(), key=lambda L: (len(L.letters), str(L)))


def canonical_line_module(ctx: CoveringContext, line: LineOrbit, truncation: int = 1,
                          offset: int = 0, window: WindowCategory | None = None) -> Representation:
    """Thin module with identity maps on ``truncation`` consecutive periods of the line."""
    if truncation < 1:
        raise WindowError("truncation must be positive")
    start = tuple(offset * x for x in line.translation)
    cells = [(line.start, start)]
    letters = line.letters * truncation
    for lt in letters[:-1]:
        cells.append(_step(ctx, *cells[-1], lt))
    w = window or ctx.fitting_window(cells, interior=False)
    names = [cover_name(v, c) for v, c in cells]
    for nm in names:
        if nm not in w.lift:
            raise WindowError(f"line truncation leaves the window at {nm}")
    dims = {nm: 1 for nm in names}
    maps = {}
    f = ctx.field
    for i, (aid, s) in enumerate(letters[:-1]):
        src = cells[i] if s > 0 else cells[i + 1]
        maps[cover_name(aid, src[1])] = Matrix(f, [[1]])
    return Representation(w.presentation, dims, maps, name=f"M_L[{truncation}]")


def band_from_line(ctx: CoveringContext, line: LineOrbit, companion: Matrix) -> Representation:
    """Fold one period of the line into A and close it with ``companion``."""
    return band_module(ctx.orbit, line.folded(ctx), companion)


def monodromy(ctx: CoveringContext, x: Representation, line: LineOrbit) -> Matrix | None:
    """Companion recovered from x around the folded period, or None if some letter map is singular."""
    w = line.folded(ctx)
    verts = walk_vertices(ctx.orbit, w)
    f = ctx.field
    d = x.dims[verts[0]]
    t = Matrix.identity(f, d)
    for (aid, s), v in zip(w.letters, verts[1:]):
        m = x.maps[aid]
        if m.rows != d or m.cols != d or not m.is_invertible():
            return None
        t = (m if s > 0 else m.inverse()) @ t
    return t if w.letters[-1][1] > 0 else t.inverse()


# ---------------------------------------------------------------------------
# classification


@dataclass
class KindVerdict:
    kind: str  # "first", "second" or "inconclusive"
    witness: Representation | None = None
    shift: Coord | None = None
    line: LineOrbit | None = None
    companion: Matrix | None = None
    evidence: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "evidence": self.evidence}
        if self.witness is not None:
            out["witness"] = {"support": sorted(v for v, n in self.witness.dims.items() if n),
                              "dim": self.witness.dim}
        if self.line is not None:
            out["line"] = str(self.line)
        if self.companion is not None:
            out["companion"] = [[str(v) for v in row] for row in self.companion.tolist()]
        return out


def _radii(start: int, max_radius: int) -> list[int]:
    out = []
    r = min(max(3, start), max_radius)
    while r <= max_radius:
        out.append(r)
        r *= 2
    if out[-1] != max_radius:
        out.append(max_radius)
    return out


def classify_module_kind(ctx: CoveringContext, x: Representation, max_radius: int = 6,
                         hypotheses: bool = True, seed: int = 0) -> KindVerdict:
    """First kind if some interior summand of the pulled-up module pushes down to x;
    second kind if x is a band module on a periodic line."""
    if max_radius < 1:
        raise WindowError("max_radius must be >= 1")
    if not is_indecomposable(x, seed=seed):
        raise ValueError("classify_module_kind needs an indecomposable module")
    evidence: dict = {"radii": [], "boundary_summand_dims": []}
    for r in _radii(ctx.radius, max_radius):
        pu = pull_up_window(ctx, x, r)
        rep = decompose(pu.module, seed=seed)
        evidence["radii"].append(r)
        touching = []
        for s in rep.summands:
            mod = s.module
            ctx._by_pres.setdefault(id(mod.presentation), pu.window)
            if any(mod.dims[v] for v in pu.window.boundary):
                touching.append(mod.dim)
                continue
            if mod.dim == x.dim and is_isomorphic(push_down(ctx, mod), x, seed=seed):
                sup = ctx.support(mod)
                return KindVerdict("first", witness=mod, shift=min(c for _, c in sup), evidence=evidence)
        evidence["boundary_summand_dims"].append(sorted(touching))
    if not hypotheses:
        return KindVerdict("inconclusive", evidence=evidence)
    for line in periodic_lines(ctx):
        n = len(line.letters)
        if x.dim % n:
            continue
        d = x.dim // n
        probe = band_from_line(ctx, line, Matrix.identity(ctx.field, d))
        if probe.dim_vector != x.dim_vector:
            continue
        comp = monodromy(ctx, x, line)
        if comp is None:
            continue
        if is_isomorphic(band_from_line(ctx, line, comp), x, seed=seed):
            return KindVerdict("second", line=line, companion=comp, evidence=evidence)
    return KindVerdict("inconclusive", evidence=evidence)


# ---------------------------------------------------------------------------
# fundamental domains


def _canonical_cells(ctx: CoveringContext, cells: list[tuple[str, Coord]]) -> list[tuple[str, Coord]]:
    order = {v: i for i, v in enumerate(ctx.periodic.vertices)}
    v0, c0 = min(cells, key=lambda vc: (vc[1], order[vc[0]]))
    return [(v, tuple(a - b for a, b in zip(c, c0))) for v, c in cells]


@dataclass
class FundamentalDomain:
    vertices: frozenset[str]
    convex: bool
    placements: list[Coord]


def fundamental_domain(ctx: CoveringContext, modules: Sequence[Representation], budget: int = 400) -> FundamentalDomain:
    """A finite convex vertex set holding a translate of every listed module's support."""
    if not modules:
        raise ValueError("need at least one module")
    cells: set[tuple[str, Coord]] = set()
    placements = []
    for m in modules:
        sup = ctx.support(m)
        can = _canonical_cells(ctx, sup)
        placements.append(tuple(a - b for a, b in zip(can[0][1], sup[0][1])))
        cells.update(can)
    w = ctx.fitting_window(cells, interior=True)
    q = w.presentation.quiver
    names = {cover_name(v, c) for v, c in cells}
    fwd = _reach(q, names, lambda v: [a.target for a in q.out_arrows[v]])
    bwd = _reach(q, names, lambda v: [a.source for a in q.in_arrows[v]])
    hull = (fwd & bwd) | names
    if len(hull) > budget:
        raise WindowError(f"convex hull has {len(hull)} vertices, over the budget {budget}")
    from .quivercat import find_convexity_violation
    convex = find_convexity_violation(q, hull) is None and not (hull & w.boundary)
    return FundamentalDomain(frozenset(hull), convex, placements)


def _reach(q, start: set, nbrs) -> set:
    seen = set(start)
    dq = deque(start)
    while dq:
        v = dq.popleft()
        for u in nbrs(v):
            if u not in seen:
                seen.add(u)
                dq.append(u)
    return seen
