"""Bound quiver presentations, path bases, periodic covers and their windows.

Direction convention, used everywhere in the package: a path ``c1 ... cn``
runs from ``s(c1)`` to ``t(cn)``, and the morphism space R(x, y) is spanned
by the paths from y to x.  Under this convention a right module over R is a
covariant representation of the quiver, with M(a): M(s(a)) -> M(t(a)).
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .exactlin import Field, Matrix, _rref, rank

DEFAULT_CAP = 32


class PresentationError(ValueError):
    """Invalid quiver data or relations."""


class AdmissibilityError(PresentationError):
    pass


class ConvexityError(PresentationError):
    def __init__(self, message: str, witness: "Path | None" = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


class Quiver:
    def __init__(self, vertices: Iterable[str], arrows: Iterable[Arrow | tuple]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex")
        vset = set(self.vertices)
        arr: dict[str, Arrow] = {}
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            if a.id in arr:
                raise PresentationError(f"duplicate arrow {a.id}")
            if a.source not in vset or a.target not in vset:
                raise PresentationError(f"arrow {a.id} has an undeclared endpoint")
            arr[a.id] = a
        self.arrows: dict[str, Arrow] = arr
        out: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        inc: dict[str, list[Arrow]] = {v: [] for v in self.vertices}
        for a in arr.values():
            out[a.source].append(a)
            inc[a.target].append(a)
        self.out_arrows = out
        self.in_arrows = inc

    def __eq__(self, other) -> bool:
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.vertices, tuple(self.arrows.values())))

    def __repr__(self) -> str:
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, [Arrow(a.id, a.target, a.source) for a in self.arrows.values()])


@dataclass(frozen=True)
class Path:
    """A stationary path (no arrows) or a composable arrow word."""

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.arrows)

    def __str__(self) -> str:
        return ".".join(self.arrows) if self.arrows else f"e_{self.source}"

    def then(self, arrow: Arrow) -> "Path":
        if arrow.source != self.target:
            raise PresentationError(f"{arrow.id} does not compose after {self}")
        return Path(self.source, arrow.target, self.arrows + (arrow.id,))


def make_path(quiver: Quiver, word: Sequence[str], start: str | None = None) -> Path:
    if not word:
        if start is None:
            raise PresentationError("stationary path needs a vertex")
        return Path(start, start)
    first = quiver.arrows[word[0]]
    p = Path(first.source, first.source)
    for a in word:
        if a not in quiver.arrows:
            raise PresentationError(f"unknown arrow {a}")
        p = p.then(quiver.arrows[a])
    return p


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of length at least 2."""

    terms: tuple[tuple[object, Path], ...]

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    def __str__(self) -> str:
        return " + ".join(f"{c}*{p}" for c, p in self.terms)


def make_relation(quiver: Quiver, field: Field, terms: Iterable[tuple[object, Sequence[str]]]) -> Relation:
    out = []
    for c, word in terms:
        p = make_path(quiver, word)
        if len(p) < 2:
            raise AdmissibilityError(f"admissibility: path length < 2 in relation term {p}")
        out.append((field(c), p))
    if not out or all(c == 0 for c, _ in out):
        raise PresentationError("relation with no nonzero coefficient")
    s, t = out[0][1].source, out[0][1].target
    if any(p.source != s or p.target != t for _, p in out):
        raise PresentationError("relation paths are not parallel")
    return Relation(tuple(out))


def paths_from(quiver: Quiver, start: str, max_len: int) -> list[Path]:
    """All paths starting at ``start`` of length at most ``max_len``."""
    result = [Path(start, start)]
    frontier = [result[0]]
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for a in quiver.out_arrows[p.target]:
                nxt.append(p.then(a))
        result.extend(nxt)
        frontier = nxt
        if not frontier:
            break
    return result


class PathBasis:
    """Basis of paths from ``start`` to ``end`` modulo the ideal, with coordinates."""

    def __init__(self, start: str, end: str, basis: list[Path], coords: dict[tuple[str, ...], list]):
        self.start = start
        self.end = end
        self.paths = basis
        self._coords = coords

    def __len__(self) -> int:
        return len(self.paths)

    @property
    def dim(self) -> int:
        return len(self.paths)

    def coordinates(self, path: Path, field: Field) -> list:
        if path.source != self.start or path.target != self.end:
            raise PresentationError(f"path {path} not in this space")
        c = self._coords.get(path.arrows)
        if c is None:
            return [field(0)] * self.dim
        return list(c)


class BoundPresentation:
    """A finite quiver with relations generating an admissible ideal."""

    def __init__(self, quiver: Quiver, relations: Iterable[Relation], field: Field,
                 cap: int = DEFAULT_CAP, name: str = "", asserts: Iterable[str] = ()):
        self.quiver = quiver
        self.relations: tuple[Relation, ...] = tuple(relations)
        self.field = field
        self.cap = cap
        self.name = name
        self.asserts = frozenset(asserts)
        for r in self.relations:
            for _, p in r.terms:
                if len(p) < 2:
                    raise AdmissibilityError(f"admissibility: path length < 2 in relation {r}")
        self._right_cache: dict[str, dict[str, PathBasis]] = {}

    def __repr__(self) -> str:
        return f"BoundPresentation({self.name or '?'}: {len(self.vertices)} vertices, {len(self.arrows)} arrows)"

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.quiver.vertices

    @property
    def arrows(self) -> dict[str, Arrow]:
        return self.quiver.arrows

    def same_as(self, other: "BoundPresentation") -> bool:
        return (self is other or (self.field == other.field and self.quiver == other.quiver
                                  and self.relations == other.relations))

    @cached_property
    def nilpotency_bound(self) -> int:
        return check_admissible(self, self.cap)

    def right_paths(self, a: str) -> dict[str, PathBasis]:
        """Path bases of R(b, a) for every b, i.e. residues of paths starting at ``a``."""
        if a not in self._right_cache:
            self._right_cache[a] = _compute_right(self, a)
        return self._right_cache[a]

    def opposite(self) -> "BoundPresentation":
        q = self.quiver.opposite()
        rels = []
        for r in self.relations:
            terms = tuple((c, Path(p.target, p.source, tuple(reversed(p.arrows)))) for c, p in r.terms)
            rels.append(Relation(terms))
        return BoundPresentation(q, rels, self.field, self.cap, name=f"{self.name}^op", asserts=self.asserts)

    def with_field(self, field: Field) -> "BoundPresentation":
        rels = [Relation(tuple((field(c), p) for c, p in r.terms)) for r in self.relations]
        return BoundPresentation(self.quiver, rels, field, self.cap, self.name, self.asserts)

    def relabel(self, vertex_map: Mapping[str, str], name: str = "") -> "BoundPresentation":
        q = Quiver([vertex_map[v] for v in self.vertices],
                   [Arrow(a.id, vertex_map[a.source], vertex_map[a.target]) for a in self.arrows.values()])
        rels = [Relation(tuple((c, Path(vertex_map[p.source], vertex_map[p.target], p.arrows))
                               for c, p in r.terms)) for r in self.relations]
        return BoundPresentation(q, rels, self.field, self.cap, name or self.name, self.asserts)


def _ideal_rows(p: BoundPresentation, a: str, max_len: int) -> tuple[dict[str, list[Path]], dict[str, list[dict]]]:
    """Paths from ``a`` of length <= max_len grouped by end, and ideal elements u.r.v
    (terms longer than max_len dropped) grouped by end."""
    q = p.quiver
    all_paths = paths_from(q, a, max_len)
    by_end: dict[str, list[Path]] = defaultdict(list)
    for path in all_paths:
        by_end[path.target].append(path)
    rows: dict[str, list[dict]] = defaultdict(list)
    prefixes: dict[str, list[Path]] = defaultdict(list)
    for path in all_paths:
        prefixes[path.target].append(path)
    suffix_cache: dict[str, list[Path]] = {}
    for r in p.relations:
        min_len = min(len(t) for _, t in r.terms)
        for u in prefixes.get(r.source, []):
            room = max_len - len(u) - min_len
            if room < 0:
                continue
            if r.target not in suffix_cache:
                suffix_cache[r.target] = paths_from(q, r.target, max_len)
            for v in suffix_cache[r.target]:
                if len(v) > room:
                    continue
                elem = {}
                for c, t in r.terms:
                    word = u.arrows + t.arrows + v.arrows
                    if len(word) <= max_len:
                        elem[word] = p.field(elem.get(word, 0) + c)
                if any(x != 0 for x in elem.values()):
                    rows[v.target].append(elem)
    return by_end, rows


def _compute_right(p: BoundPresentation, a: str) -> dict[str, PathBasis]:
    n = p.nilpotency_bound
    f = p.field
    by_end, rows = _ideal_rows(p, a, n - 1)
    result = {}
    for b in p.vertices:
        paths = by_end.get(b, [])
        # long paths first so they become pivots; short paths survive as basis
        cols = sorted(paths, key=lambda q: (-len(q), q.arrows))
        index = {q.arrows: i for i, q in enumerate(cols)}
        elems = rows.get(b, [])
        if elems and cols:
            m = Matrix.zeros(f, len(elems), len(cols)).a.copy()
            for i, e in enumerate(elems):
                for w, c in e.items():
                    m[i, index[w]] = c
            red, piv = _rref(f, m)
        else:
            red, piv = None, []
        pivset = set(piv)
        free = [j for j in range(len(cols)) if j not in pivset]
        basis = sorted((cols[j] for j in free), key=lambda q: (len(q), q.arrows))
        pos = {q.arrows: i for i, q in enumerate(basis)}
        coords: dict[tuple[str, ...], list] = {}
        for q in basis:
            v = [f(0)] * len(basis)
            v[pos[q.arrows]] = f(1)
            coords[q.arrows] = v
        for i, j in enumerate(piv):
            v = [f(0)] * len(basis)
            for k in free:
                x = red[i, k]
                if x != 0:
                    v[pos[cols[k].arrows]] = f(-x)
            coords[cols[j].arrows] = v
        result[b] = PathBasis(a, b, basis, coords)
    return result


def check_admissible(p: BoundPresentation, cap: int = DEFAULT_CAP) -> int:
    """Smallest N <= cap with every path of length N inside the relation ideal.

    Ideal membership is tested in the span of u.r.v truncated above length N,
    which is exact for relations homogeneous in path length.
    """
    f = p.field
    for n in range(1, cap + 1):
        ok = True
        for a in p.vertices:
            by_end, rows = _ideal_rows(p, a, n)
            for b, paths in by_end.items():
                longest = [q for q in paths if len(q) == n]
                if not longest:
                    continue
                elems = rows.get(b, [])
                if not elems:
                    ok = False
                    break
                index = {q.arrows: i for i, q in enumerate(paths)}
                m = Matrix.zeros(f, len(elems), len(paths)).a.copy()
                for i, e in enumerate(elems):
                    for w, c in e.items():
                        m[i, index[w]] = c
                base = Matrix(f, m)
                ext = Matrix.zeros(f, len(longest), len(paths)).a.copy()
                for i, q in enumerate(longest):
                    ext[i, index[q.arrows]] = f(1)
                both = Matrix.vstack(f, [base, Matrix(f, ext)])
                if rank(both) != rank(base):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return n
    raise AdmissibilityError(f"no nilpotency bound N <= {cap}; presentation may not be admissible")


def path_basis(p: BoundPresentation, x: str, y: str) -> PathBasis:
    """Basis of R(x, y), i.e. of the residues of paths from y to x."""
    if x not in p.quiver.out_arrows or y not in p.quiver.out_arrows:
        raise PresentationError(f"unknown vertex {x!r} or {y!r}")
    return p.right_paths(y)[x]


def hom_dim_table(p: BoundPresentation) -> dict[tuple[str, str], int]:
    return {(x, y): path_basis(p, x, y).dim for x in p.vertices for y in p.vertices}


def find_convexity_violation(quiver: Quiver, subset: Iterable[str]) -> Path | None:
    """A path leaving ``subset`` and re-entering it, if any."""
    s = set(subset)
    for x in quiver.vertices:
        if x not in s:
            continue
        # BFS through vertices outside s
        seen: dict[str, Path] = {}
        dq = deque()
        for a in quiver.out_arrows[x]:
            if a.target not in s and a.target not in seen:
                seen[a.target] = Path(x, x).then(a)
                dq.append(a.target)
        while dq:
            z = dq.popleft()
            for a in quiver.out_arrows[z]:
                if a.target in s:
                    return seen[z].then(a)
                if a.target not in seen:
                    seen[a.target] = seen[z].then(a)
                    dq.append(a.target)
    return None


def convex_restrict(p: BoundPresentation, subset: Iterable[str]) -> BoundPresentation:
    """Full subcategory on a path-convex vertex subset."""
    s = [v for v in p.vertices if v in set(subset)]
    witness = find_convexity_violation(p.quiver, s)
    if witness is not None:
        raise ConvexityError(f"subset is not convex: path {witness} leaves and re-enters", witness)
    sset = set(s)
    q = Quiver(s, [a for a in p.arrows.values() if a.source in sset and a.target in sset])
    rels = [r for r in p.relations if r.source in sset and r.target in sset]
    return BoundPresentation(q, rels, p.field, p.cap, name=f"{p.name}|{len(s)}", asserts=p.asserts)


# ---------------------------------------------------------------------------
# periodic covers

Coord = tuple[int, ...]


def coord_str(c: Coord) -> str:
    return ",".join(str(x) for x in c)


def cover_name(v: str, c: Coord) -> str:
    return f"{v}@{coord_str(c)}"


def add(c: Coord, d: Coord) -> Coord:
    return tuple(x + y for x, y in zip(c, d))


def neg(c: Coord) -> Coord:
    return tuple(-x for x in c)


@dataclass(frozen=True)
class PeriodicArrow:
    id: str
    source: str
    target: str
    shift: Coord


@dataclass(frozen=True)
class PeriodicRelation:
    """Representative of a relation orbit; each word starts at its source vertex in slab 0."""

    terms: tuple[tuple[object, tuple[str, ...]], ...]


class PeriodicPresentation:
    """One fundamental slab of a Z^k-periodic bound quiver.

    An arrow ``a: u -> v`` with shift ``t`` lifts to arrows ``u@c -> v@(c+t)``
    for every coordinate ``c``.
    """

    def __init__(self, vertices: Iterable[str], arrows: Iterable[PeriodicArrow], group_rank: int,
                 relations: Iterable[PeriodicRelation], field: Field, name: str = "",
                 asserts: Iterable[str] = (), cap: int = DEFAULT_CAP):
        self.vertices = tuple(vertices)
        self.arrows: dict[str, PeriodicArrow] = {}
        self.group_rank = group_rank
        self.field = field
        self.name = name
        self.asserts = frozenset(asserts)
        self.cap = cap
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise PresentationError("duplicate vertex")
        for a in arrows:
            if a.source not in vset or a.target not in vset:
                raise PresentationError(f"arrow {a.id} has an undeclared endpoint")
            if len(a.shift) != group_rank:
                raise PresentationError(f"arrow {a.id}: shift {a.shift} does not match group rank {group_rank}")
            if a.id in self.arrows:
                raise PresentationError(f"duplicate arrow {a.id}")
            self.arrows[a.id] = a
        self.relations = tuple(relations)
        for r in self.relations:
            self._relation_ends(r)

    def __repr__(self) -> str:
        return f"PeriodicPresentation({self.name or '?'}: {len(self.vertices)} orbits, rank {self.group_rank})"

    def zero(self) -> Coord:
        return (0,) * self.group_rank

    def walk(self, word: Sequence[str], start_coord: Coord | None = None) -> list[tuple[str, Coord]]:
        """Cover vertices visited by an arrow word starting at its source in the given slab."""
        c = start_coord if start_coord is not None else self.zero()
        first = self.arrows[word[0]]
        out = [(first.source, c)]
        for aid in word:
            a = self.arrows.get(aid)
            if a is None:
                raise PresentationError(f"unknown arrow {aid}")
            v, cc = out[-1]
            if a.source != v:
                raise PresentationError(f"word {'.'.join(word)} is not composable at {aid}")
            out.append((a.target, add(cc, a.shift)))
        return out

    def _relation_ends(self, r: PeriodicRelation) -> tuple[tuple[str, Coord], tuple[str, Coord]]:
        ends = set()
        for c, w in r.terms:
            if len(w) < 2:
                raise AdmissibilityError("admissibility: path length < 2")
            vs = self.walk(w)
            ends.add((vs[0], vs[-1]))
        if len(ends) != 1:
            raise PresentationError("relation terms are not parallel in the cover")
        return next(iter(ends))


@dataclass
class CoveringMap:
    """Orbit maps of a covering functor F on vertices and arrows."""

    vertex: dict[str, str]
    arrow: dict[str, str]


def orbit_vertex(v: str) -> str:
    return f"orbit:{v}"


def orbit_category(p: PeriodicPresentation) -> tuple[BoundPresentation, CoveringMap]:
    """The orbit category R/G as a bound presentation, and the covering map F."""
    vmap = {v: orbit_vertex(v) for v in p.vertices}
    q = Quiver([vmap[v] for v in p.vertices],
               [Arrow(a.id, vmap[a.source], vmap[a.target]) for a in p.arrows.values()])
    rels = [make_relation(q, p.field, r.terms) for r in p.relations]
    bp = BoundPresentation(q, rels, p.field, p.cap, name=f"{p.name}/G" if p.name else "orbit",
                           asserts=p.asserts)
    return bp, CoveringMap(vmap, {a: a for a in p.arrows})


class WindowCategory:
    """Finite full convex subcategory of a periodic cover, with lifts to (orbit, coordinate)."""

    def __init__(self, periodic: PeriodicPresentation, radius: int):
        if radius < 1:
            raise PresentationError("window radius must be >= 1")
        self.periodic = periodic
        self.radius = radius
        k = periodic.group_rank
        coords = list(itertools.product(range(-radius, radius + 1), repeat=k))
        members = {(v, c) for c in coords for v in periodic.vertices}
        members = self._hull(members) or self._trim(members)
        if not members:
            raise PresentationError("empty window")
        order = sorted(members, key=lambda vc: (vc[1], periodic.vertices.index(vc[0])))
        self.lift: dict[str, tuple[str, Coord]] = {cover_name(v, c): (v, c) for v, c in order}
        self.name_of: dict[tuple[str, Coord], str] = {vc: n for n, vc in self.lift.items()}
        arrows = []
        self.arrow_lift: dict[str, tuple[str, Coord]] = {}
        boundary = set()
        for v, c in order:
            for a in periodic.arrows.values():
                if a.source == v:
                    tgt = (a.target, add(c, a.shift))
                    if tgt in members:
                        aname = cover_name(a.id, c)
                        arrows.append(Arrow(aname, cover_name(v, c), self.name_of[tgt]))
                        self.arrow_lift[aname] = (a.id, c)
                    else:
                        boundary.add(cover_name(v, c))
                if a.target == v:
                    src = (a.source, add(c, neg(a.shift)))
                    if src not in members:
                        boundary.add(cover_name(v, c))
        quiver = Quiver([cover_name(v, c) for v, c in order], arrows)
        rels = []
        for r in periodic.relations:
            for v, c in order:
                first = periodic.arrows[r.terms[0][1][0]]
                if first.source != v:
                    continue
                terms = []
                inside = True
                for coef, w in r.terms:
                    visited = periodic.walk(w, c)
                    if any(x not in members for x in visited):
                        inside = False
                        break
                    terms.append((coef, tuple(cover_name(aid, cc) for aid, (_, cc) in zip(w, visited))))
                if inside:
                    rels.append(make_relation(quiver, periodic.field, terms))
        self.boundary = frozenset(boundary)
        self.presentation = BoundPresentation(quiver, rels, periodic.field, periodic.cap,
                                              name=f"{periodic.name}[r={radius}]", asserts=periodic.asserts)

    def _successors(self, r: int) -> tuple[set, dict, dict]:
        p = self.periodic
        big = {(v, c) for c in itertools.product(range(-r, r + 1), repeat=p.group_rank) for v in p.vertices}
        succ: dict[tuple, list] = defaultdict(list)
        pred: dict[tuple, list] = defaultdict(list)
        for v, c in big:
            for a in p.arrows.values():
                if a.source == v:
                    t = (a.target, add(c, a.shift))
                    if t in big:
                        succ[(v, c)].append(t)
                        pred[t].append((v, c))
        return big, succ, pred

    def _hull(self, members: set) -> set | None:
        """Convex hull: add every vertex lying on a path between two members.

        Returns None when the hull keeps growing towards the edge of the search region.
        """
        for margin in (2, 4, 8):
            r = self.radius + margin
            big, succ, pred = self._successors(r)
            fwd = _closure(members, succ)
            bwd = _closure(members, pred)
            hull = members | (fwd & bwd)
            if all(max(abs(x) for x in c) < r - 1 for _, c in hull):
                return hull
        return None

    def _trim(self, members: set) -> set:
        """Drop vertices re-entered by paths that leave the window (within a margin)."""
        p = self.periodic
        margin = 2 + max((max(abs(x) for x in a.shift) for a in p.arrows.values() if a.shift), default=0)
        _, succ, _ = self._successors(self.radius + margin)
        members = set(members)
        while True:
            reach_out = set()
            dq = deque(t for m in members for t in succ[m] if t not in members)
            reach_out.update(dq)
            while dq:
                z = dq.popleft()
                for t in succ[z]:
                    if t not in members and t not in reach_out:
                        reach_out.add(t)
                        dq.append(t)
            bad = {t for z in reach_out for t in succ[z] if t in members}
            if not bad:
                return members
            members -= bad

    def __repr__(self) -> str:
        return f"WindowCategory({self.presentation.name}, {len(self.lift)} vertices)"

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.presentation.vertices

    def translate_vertex(self, w: str, g: Coord) -> str | None:
        v, c = self.lift[w]
        return self.name_of.get((v, add(c, g)))

    def contains(self, other: "WindowCategory") -> bool:
        return (set(other.lift) <= set(self.lift)
                and all(self.lift[n] == other.lift[n] for n in other.lift)
                and set(other.presentation.arrows) <= set(self.presentation.arrows))


def _closure(start: set, nbrs: dict) -> set:
    seen = set(start)
    dq = deque(start)
    while dq:
        z = dq.popleft()
        for t in nbrs.get(z, ()):
            if t not in seen:
                seen.add(t)
                dq.append(t)
    return seen


def build_window(p: PeriodicPresentation, radius: int) -> WindowCategory:
    return WindowCategory(p, radius)
