"""Finite-dimensional right modules over bound quiver presentations.

A module is stored as a covariant representation: a space at each vertex and
a matrix ``M(a)`` of shape ``(dim M(t(a)), dim M(s(a)))`` for each arrow.  A
morphism is a matrix per vertex with ``f_t M(a) = N(a) f_s``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .algebra import find_split
from .exactlin import Field, Matrix, column_space, kernel_basis, kernel_with_free, solve
from .quivercat import BoundPresentation, Path


class ModuleError(ValueError):
    pass


class UnsupportedFieldError(ModuleError):
    pass


def _path_matrix(maps: Mapping[str, Matrix], dims: Mapping[str, int], field: Field, path: Path) -> Matrix:
    m = Matrix.identity(field, dims[path.source])
    for a in path.arrows:
        m = maps[a] @ m
    return m


class Representation:
    """A finite-dimensional module over a :class:`BoundPresentation`."""

    def __init__(self, presentation: BoundPresentation, dims: Mapping[str, int],
                 maps: Mapping[str, Matrix | Sequence] | None = None, name: str = "", check: bool = True):
        self.presentation = presentation
        f = presentation.field
        self.field = f
        self.name = name
        d = {v: 0 for v in presentation.vertices}
        for v, n in dims.items():
            if v not in d:
                raise ModuleError(f"unknown vertex {v!r}")
            if n < 0:
                raise ModuleError("negative dimension")
            d[v] = int(n)
        self.dims: dict[str, int] = d
        maps = dict(maps or {})
        out: dict[str, Matrix] = {}
        for aid, a in presentation.arrows.items():
            r, c = d[a.target], d[a.source]
            m = maps.pop(aid, None)
            if m is None:
                out[aid] = Matrix.zeros(f, r, c)
                continue
            if not isinstance(m, Matrix):
                m = Matrix(f, m, rows=r, cols=c) if r and c else Matrix.zeros(f, r, c)
            if m.shape != (r, c):
                raise ModuleError(f"arrow {aid}: matrix shape {m.shape}, expected {(r, c)}")
            out[aid] = m
        if maps:
            raise ModuleError(f"unknown arrows {sorted(maps)}")
        self.maps = out
        if check:
            for rel in presentation.relations:
                total = Matrix.zeros(f, d[rel.target], d[rel.source])
                if total.rows == 0 or total.cols == 0:
                    continue
                for coef, path in rel.terms:
                    total = total + self.path_map(path).scale(coef)
                if not total.is_zero():
                    raise ModuleError(f"relation {rel} does not vanish")

    def __repr__(self) -> str:
        dv = ",".join(str(self.dims[v]) for v in self.presentation.vertices)
        return f"Representation({self.name or '?'}: [{dv}])"

    def path_map(self, path: Path) -> Matrix:
        return _path_matrix(self.maps, self.dims, self.field, path)

    @property
    def dim(self) -> int:
        return sum(self.dims.values())

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.presentation.vertices)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(v for v, n in self.dims.items() if n)

    def is_zero(self) -> bool:
        return self.dim == 0

    def offsets(self) -> dict[str, int]:
        """Start index of each vertex block in the total space."""
        out, k = {}, 0
        for v in self.presentation.vertices:
            out[v] = k
            k += self.dims[v]
        return out

    def key(self) -> tuple:
        """Sortable canonical key: dimension vector, then matrix entries."""
        entries = tuple(tuple(int(x) if self.field.p else x for x in self.maps[a].a.ravel().tolist())
                        for a in self.presentation.arrows)
        return (self.dim, self.dim_vector, entries)

    def same_presentation(self, other: "Representation") -> bool:
        return self.presentation.same_as(other.presentation)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Representation) and self.same_presentation(other)
                and self.dims == other.dims and self.maps == other.maps)

    def __hash__(self):
        return hash((self.dim_vector, tuple(hash(m) for m in self.maps.values())))


@dataclass(frozen=True, eq=False)
class Morphism:
    source: Representation
    target: Representation
    maps: dict[str, Matrix]

    def __post_init__(self):
        for v in self.source.presentation.vertices:
            m = self.maps.get(v)
            shape = (self.target.dims[v], self.source.dims[v])
            if m is None:
                self.maps[v] = Matrix.zeros(self.source.field, *shape)
            elif m.shape != shape:
                raise ModuleError(f"vertex {v}: morphism block {m.shape}, expected {shape}")

    @property
    def field(self) -> Field:
        return self.source.field

    def is_natural(self) -> bool:
        for aid, a in self.source.presentation.arrows.items():
            lhs = self.maps[a.target] @ self.source.maps[aid]
            rhs = self.target.maps[aid] @ self.maps[a.source]
            if lhs != rhs:
                return False
        return True

    def __matmul__(self, other: "Morphism") -> "Morphism":
        """Composition ``self o other``."""
        return compose(self, other)

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, {v: self.maps[v] + other.maps[v] for v in self.maps})

    def __sub__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, {v: self.maps[v] - other.maps[v] for v in self.maps})

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, {v: m.scale(c) for v, m in self.maps.items()})

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.maps.values())

    def total(self) -> Matrix:
        """Block-diagonal matrix on the total spaces."""
        return Matrix.block_diag(self.field, [self.maps[v] for v in self.source.presentation.vertices])

    def vector(self) -> Matrix:
        """Row-major concatenation of the vertex blocks as a column vector."""
        parts = [self.maps[v].a.reshape(-1) for v in self.source.presentation.vertices]
        if not parts:
            return Matrix.zeros(self.field, 0, 1)
        flat = np.concatenate(parts) if parts else np.zeros(0)
        return Matrix(self.field, flat.reshape(-1, 1), cols=1)

    def is_iso(self) -> bool:
        return all(m.is_invertible() for m in self.maps.values())

    def rank(self) -> int:
        return sum(m.rank() for m in self.maps.values())


def compose(g: Morphism, f: Morphism) -> Morphism:
    if f.target.dims != g.source.dims:
        raise ModuleError("morphisms are not composable")
    return Morphism(f.source, g.target, {v: g.maps[v] @ f.maps[v] for v in f.maps})


def identity(m: Representation) -> Morphism:
    return Morphism(m, m, {v: Matrix.identity(m.field, n) for v, n in m.dims.items()})


def zero_morphism(m: Representation, n: Representation) -> Morphism:
    return Morphism(m, n, {})


def inverse(f: Morphism) -> Morphism:
    return Morphism(f.target, f.source, {v: m.inverse() for v, m in f.maps.items()})


# ---------------------------------------------------------------------------
# hom spaces


class HomSpace:
    """Hom(M, N) with a basis and a fast coordinate map."""

    def __init__(self, source: Representation, target: Representation):
        if not source.same_presentation(target):
            raise ModuleError("presentation mismatch")
        self.source = source
        self.target = target
        f = source.field
        p = source.presentation
        verts = p.vertices
        self.blocks: list[tuple[str, int, int, int]] = []  # vertex, offset, rows, cols
        off = 0
        pos = {}
        for v in verts:
            r, c = target.dims[v], source.dims[v]
            pos[v] = (off, r, c)
            self.blocks.append((v, off, r, c))
            off += r * c
        self.size = off
        eqs = []
        for aid, a in p.arrows.items():
            os_, rs, cs = pos[a.source]
            ot, rt, ct = pos[a.target]
            if rt * cs == 0:
                continue
            if (rs * cs == 0) and (rt * ct == 0):
                continue
            row = np.zeros((rt * cs, off), dtype=object if f.p is None else np.int64)
            # f_t M(a) - N(a) f_s = 0, unknowns row-major
            if rt * ct:
                row[:, ot:ot + rt * ct] = np.kron(np.eye(rt, dtype=np.int64), source.maps[aid].a.T)
            if rs * cs:
                blk = np.kron(target.maps[aid].a, np.eye(cs, dtype=np.int64))
                row[:, os_:os_ + rs * cs] = row[:, os_:os_ + rs * cs] - blk
            eqs.append(row)
        if off == 0:
            self.matrix = Matrix.zeros(f, 0, 0)
            self.free: list[int] = []
        elif eqs:
            sys_ = Matrix(f, np.concatenate(eqs, axis=0))
            self.matrix, self.free = kernel_with_free(sys_)
        else:
            self.matrix = Matrix.identity(f, off)
            self.free = list(range(off))

    @property
    def dim(self) -> int:
        return self.matrix.cols

    def __len__(self) -> int:
        return self.dim

    def morphism_from_vector(self, vec: Sequence) -> Morphism:
        maps = {}
        for v, off, r, c in self.blocks:
            maps[v] = Matrix(self.source.field, np.array(vec[off:off + r * c]).reshape(r, c), rows=r, cols=c) \
                if r * c else Matrix.zeros(self.source.field, r, c)
        return Morphism(self.source, self.target, maps)

    @cached_property
    def basis(self) -> list[Morphism]:
        cols = self.matrix.a
        return [self.morphism_from_vector(cols[:, j]) for j in range(self.dim)]

    def combination(self, coeffs: Sequence) -> Morphism:
        if self.dim == 0:
            return zero_morphism(self.source, self.target)
        c = Matrix(self.source.field, [[x] for x in coeffs], rows=self.dim, cols=1)
        v = (self.matrix @ c).a[:, 0]
        return self.morphism_from_vector(v)

    def random(self, rng: np.random.Generator) -> Morphism:
        f = self.source.field
        return self.combination([f.random_element(rng) for _ in range(self.dim)])

    def coordinates(self, f: Morphism) -> list:
        vec = f.vector().a[:, 0]
        return [vec[i] for i in self.free]

    def contains(self, f: Morphism) -> bool:
        c = self.coordinates(f)
        return (self.combination(c).vector() == f.vector()) if self.dim else f.is_zero()


def hom_space(m: Representation, n: Representation) -> HomSpace:
    return HomSpace(m, n)


def hom_basis(m: Representation, n: Representation) -> list[Morphism]:
    """Basis of Hom(M, N) by solving the naturality system."""
    return hom_space(m, n).basis


def hom_dim(m: Representation, n: Representation) -> int:
    if not (m.support & n.support):
        if not m.same_presentation(n):
            raise ModuleError("presentation mismatch")
        return 0
    return hom_space(m, n).dim


def end_basis(m: Representation) -> list[Morphism]:
    return hom_basis(m, m)


# ---------------------------------------------------------------------------
# constructions


def direct_sum(mods: Sequence[Representation], name: str = "") -> tuple[Representation, list[Morphism], list[Morphism]]:
    """Direct sum with its inclusions and projections."""
    if not mods:
        raise ModuleError("empty direct sum needs a presentation")
    p = mods[0].presentation
    f = p.field
    dims = {v: sum(m.dims[v] for m in mods) for v in p.vertices}
    maps = {aid: Matrix.block_diag(f, [m.maps[aid] for m in mods]) for aid in p.arrows}
    s = Representation(p, dims, maps, name=name, check=False)
    incs, projs = [], []
    for k, m in enumerate(mods):
        inc, proj = {}, {}
        for v in p.vertices:
            before = sum(x.dims[v] for x in mods[:k])
            e = Matrix.zeros(f, dims[v], m.dims[v]).a.copy()
            for i in range(m.dims[v]):
                e[before + i, i] = f(1)
            inc[v] = Matrix(f, e)
            proj[v] = Matrix(f, e.T.copy())
        incs.append(Morphism(m, s, inc))
        projs.append(Morphism(s, m, proj))
    return s, incs, projs


def zero_module(p: BoundPresentation) -> Representation:
    return Representation(p, {}, {})


def sum_of(mods: Sequence[Representation], p: BoundPresentation | None = None) -> Representation:
    if not mods:
        if p is None:
            raise ModuleError("need a presentation")
        return zero_module(p)
    return direct_sum(mods)[0]


def submodule(m: Representation, bases: Mapping[str, Matrix], name: str = "") -> tuple[Representation, Morphism]:
    """The submodule spanned vertexwise by independent columns, with its inclusion."""
    p = m.presentation
    f = m.field
    dims = {v: bases[v].cols if v in bases else 0 for v in p.vertices}
    full = {v: bases.get(v, Matrix.zeros(f, m.dims[v], 0)) for v in p.vertices}
    maps = {}
    for aid, a in p.arrows.items():
        src, tgt = full[a.source], full[a.target]
        if src.cols == 0 or tgt.cols == 0:
            maps[aid] = Matrix.zeros(f, tgt.cols, src.cols)
            if src.cols and not (m.maps[aid] @ src).is_zero():
                raise ModuleError("subspaces are not closed under the arrows")
            continue
        x = solve(tgt, m.maps[aid] @ src)
        if x is None:
            raise ModuleError("subspaces are not closed under the arrows")
        maps[aid] = x
    sub = Representation(p, dims, maps, name=name, check=False)
    return sub, Morphism(sub, m, full)


def quotient(m: Representation, bases: Mapping[str, Matrix], name: str = "") -> tuple[Representation, Morphism]:
    """M / (vertexwise subspaces), with the canonical projection."""
    from .exactlin import cokernel_projection

    p = m.presentation
    f = m.field
    proj, sect = {}, {}
    for v in p.vertices:
        b = bases.get(v, Matrix.zeros(f, m.dims[v], 0))
        if b.cols == 0:
            pr = Matrix.identity(f, m.dims[v])
        else:
            pr, _ = cokernel_projection(b)
        proj[v] = pr
        sect[v] = solve(pr, Matrix.identity(f, pr.rows)) if pr.rows else Matrix.zeros(f, m.dims[v], 0)
    dims = {v: proj[v].rows for v in p.vertices}
    maps = {aid: proj[a.target] @ m.maps[aid] @ sect[a.source] for aid, a in p.arrows.items()}
    q = Representation(p, dims, maps, name=name, check=False)
    return q, Morphism(m, q, proj)


def kernel(f: Morphism) -> tuple[Representation, Morphism]:
    return submodule(f.source, {v: kernel_basis(m) for v, m in f.maps.items()}, name="ker")


def image(f: Morphism) -> tuple[Representation, Morphism]:
    return submodule(f.target, {v: column_space(m) for v, m in f.maps.items()}, name="im")


def cokernel(f: Morphism) -> tuple[Representation, Morphism]:
    return quotient(f.target, {v: column_space(m) for v, m in f.maps.items()}, name="coker")


def radical_bases(m: Representation) -> dict[str, Matrix]:
    """Column bases of rad M at each vertex (sum of images of incoming arrows)."""
    f = m.field
    out = {}
    for v in m.presentation.vertices:
        ims = [m.maps[a.id] for a in m.presentation.quiver.in_arrows[v] if m.maps[a.id].cols]
        if ims and m.dims[v]:
            out[v] = column_space(Matrix.hstack(f, ims))
        else:
            out[v] = Matrix.zeros(f, m.dims[v], 0)
    return out


def top_dims(m: Representation) -> dict[str, int]:
    rad = radical_bases(m)
    return {v: m.dims[v] - rad[v].cols for v in m.presentation.vertices}


def socle_dims(m: Representation) -> dict[str, int]:
    f = m.field
    out = {}
    for v in m.presentation.vertices:
        outs = [m.maps[a.id] for a in m.presentation.quiver.out_arrows[v]]
        if outs and m.dims[v]:
            out[v] = kernel_basis(Matrix.vstack(f, outs)).cols
        else:
            out[v] = m.dims[v]
    return out


# ---------------------------------------------------------------------------
# projectives, injectives, simples, duality


def _op(p: BoundPresentation) -> BoundPresentation:
    if not hasattr(p, "_op_cache"):
        op = p.opposite()
        op._op_cache = p
        p._op_cache = op
    return p._op_cache


def simple_at(p: BoundPresentation, x: str) -> Representation:
    if x not in p.vertices:
        raise ModuleError(f"unknown vertex {x!r}")
    return Representation(p, {x: 1}, {}, name=f"S_{x}")


def projective_at(p: BoundPresentation, x: str) -> Representation:
    """P_x = R(-, x): at b, the residues of paths from x to b."""
    if x not in p.vertices:
        raise ModuleError(f"unknown vertex {x!r}")
    f = p.field
    bases = p.right_paths(x)
    dims = {b: bases[b].dim for b in p.vertices}
    maps = {}
    for aid, a in p.arrows.items():
        src, tgt = bases[a.source], bases[a.target]
        cols = [tgt.coordinates(q.then(a), f) for q in src.paths]
        maps[aid] = Matrix.from_columns(f, cols, rows=tgt.dim) if cols else Matrix.zeros(f, tgt.dim, 0)
    return Representation(p, dims, maps, name=f"P_{x}")


def dual(m: Representation) -> Representation:
    """D = Hom_K(-, K), landing over the opposite presentation."""
    op = _op(m.presentation)
    return Representation(op, dict(m.dims), {aid: mat.T for aid, mat in m.maps.items()},
                          name=f"D{m.name}" if m.name else "", check=False)


def dual_morphism(f: Morphism) -> Morphism:
    return Morphism(dual(f.target), dual(f.source), {v: m.T for v, m in f.maps.items()})


def injective_at(p: BoundPresentation, x: str) -> Representation:
    """I_x = D(R(x, -)), built as the dual of a projective over the opposite presentation."""
    m = dual(projective_at(_op(p), x))
    m.name = f"I_{x}"
    return m


def yoneda_morphism(p: BoundPresentation, x: str, m: Representation, element: Sequence) -> Morphism:
    """The map P_x -> M sending e_x to ``element`` in M(x)."""
    f = p.field
    px = projective_at_cached(p, x)
    bases = p.right_paths(x)
    vec = Matrix(f, [[c] for c in element], rows=m.dims[x], cols=1)
    maps = {}
    for b in p.vertices:
        cols = [(m.path_map(q) @ vec).a[:, 0].tolist() for q in bases[b].paths]
        maps[b] = Matrix.from_columns(f, cols, rows=m.dims[b]) if cols else Matrix.zeros(f, m.dims[b], 0)
    return Morphism(px, m, maps)


def projective_at_cached(p: BoundPresentation, x: str) -> Representation:
    cache = p.__dict__.setdefault("_proj_cache", {})
    if x not in cache:
        cache[x] = projective_at(p, x)
    return cache[x]


def injective_at_cached(p: BoundPresentation, x: str) -> Representation:
    cache = p.__dict__.setdefault("_inj_cache", {})
    if x not in cache:
        cache[x] = injective_at(p, x)
    return cache[x]


# ---------------------------------------------------------------------------
# Krull-Schmidt


@dataclass
class Summand:
    module: Representation
    multiplicity: int
    inclusions: list[Morphism]
    projections: list[Morphism]


@dataclass
class DecompositionReport:
    source: Representation
    summands: list[Summand]

    @property
    def count(self) -> int:
        return sum(s.multiplicity for s in self.summands)

    def dim_vectors(self) -> list[tuple[tuple[int, ...], int]]:
        return [(s.module.dim_vector, s.multiplicity) for s in self.summands]

    def modules(self) -> list[Representation]:
        return [s.module for s in self.summands for _ in range(s.multiplicity)]


def _require_prime(m: Representation) -> None:
    if m.field.p is None:
        raise UnsupportedFieldError("decomposition needs a prime field; refused over Q")


def _split_once(m: Representation, rng: np.random.Generator):
    """Return (K, I) vertex bases of a nontrivial Fitting splitting, or None if End(m) is local."""
    end = end_basis(m)
    n = m.dim
    mats = [e.total() for e in end]
    s = find_split(mats, n, m.field, rng)
    if s is None:
        return None
    offs = m.offsets()
    out = []
    for basis in (s.kernel, s.image):
        per = {}
        for v in m.presentation.vertices:
            rows = basis.submatrix(rows=range(offs[v], offs[v] + m.dims[v]))
            per[v] = column_space(rows) if rows.rows else Matrix.zeros(m.field, 0, 0)
        out.append(per)
    return out


def _indecomposable_pieces(m: Representation, rng) -> list[tuple[Representation, Morphism]]:
    """Indecomposable submodules (with inclusions into m) whose sum is m."""
    if m.dim == 0:
        return []
    split = _split_once(m, rng)
    if split is None:
        return [(m, identity(m))]
    out = []
    for bases in split:
        sub, inc = submodule(m, bases)
        for piece, pinc in _indecomposable_pieces(sub, rng):
            out.append((piece, compose(inc, pinc)))
    return out


def decompose(m: Representation, seed: int = 0) -> DecompositionReport:
    """Complete decomposition into indecomposables, grouped by isomorphism class."""
    _require_prime(m)
    rng = np.random.default_rng(seed)
    pieces = _indecomposable_pieces(m, rng)
    f = m.field
    # projections from the direct-sum basis
    big = {v: Matrix.hstack(f, [inc.maps[v] for _, inc in pieces], rows=m.dims[v]) for v in m.presentation.vertices}
    inv = {v: big[v].inverse() if big[v].rows else big[v] for v in big}
    projs = []
    start = {v: 0 for v in big}
    for piece, inc in pieces:
        pm = {}
        for v in big:
            k = piece.dims[v]
            pm[v] = inv[v].submatrix(rows=range(start[v], start[v] + k)) if k else Matrix.zeros(f, 0, m.dims[v])
            start[v] += k
        projs.append(Morphism(m, piece, pm))
    order = sorted(range(len(pieces)), key=lambda i: pieces[i][0].key())
    groups: list[Summand] = []
    for i in order:
        piece, inc = pieces[i]
        for g in groups:
            if _iso_indecomposables(g.module, piece) is not None:
                g.multiplicity += 1
                g.inclusions.append(inc)
                g.projections.append(projs[i])
                break
        else:
            groups.append(Summand(piece, 1, [inc], [projs[i]]))
    return DecompositionReport(m, groups)


def is_indecomposable(m: Representation, seed: int = 0) -> bool:
    _require_prime(m)
    if m.dim == 0:
        return False
    return _split_once(m, np.random.default_rng(seed)) is None


def _iso_indecomposables(m: Representation, n: Representation) -> Morphism | None:
    """An isomorphism between two indecomposables, or None (deterministic)."""
    if m.dims != n.dims:
        return None
    if m.dim == 0:
        return identity(m)
    h1 = hom_basis(m, n)
    if not h1:
        return None
    h2 = hom_basis(n, m)
    for phi in h1:
        if phi.is_iso():
            return phi
    for phi in h1:
        for psi in h2:
            if compose(psi, phi).total().is_invertible():
                return phi
    return None


def find_isomorphism(m: Representation, n: Representation, seed: int = 0) -> Morphism | None:
    """An explicit isomorphism M -> N, or None."""
    if not m.same_presentation(n):
        raise ModuleError("presentation mismatch")
    if m.dims != n.dims:
        return None
    if m.dim == 0:
        return identity(m)
    if m.field.p is not None and is_indecomposable(m, seed):
        return _iso_indecomposables(m, n)
    hs = hom_space(m, n)
    rng = np.random.default_rng(seed)
    for phi in hs.basis:
        if phi.is_iso():
            return phi
    for _ in range(12):
        phi = hs.random(rng)
        if phi.is_iso():
            return phi
    if m.field.p is None:
        return None
    dm, dn = decompose(m, seed), decompose(n, seed)
    if _match(dm, dn) is None:
        return None
    # isomorphic summands: assemble an explicit isomorphism
    pairs = _match(dm, dn)
    total = zero_morphism(m, n)
    for (sm, km), (sn, kn) in pairs:
        phi = _iso_indecomposables(dm.summands[sm].module, dn.summands[sn].module)
        total = total + compose(dn.summands[sn].inclusions[kn], compose(phi, dm.summands[sm].projections[km]))
    return total


def _match(dm: DecompositionReport, dn: DecompositionReport):
    used = set()
    pairs = []
    for i, s in enumerate(dm.summands):
        for j, t in enumerate(dn.summands):
            if j in used:
                continue
            if s.multiplicity == t.multiplicity and _iso_indecomposables(s.module, t.module) is not None:
                used.add(j)
                pairs.extend(((i, k), (j, k)) for k in range(s.multiplicity))
                break
        else:
            return None
    if len(used) != len(dn.summands):
        return None
    return pairs


def is_isomorphic(m: Representation, n: Representation, seed: int = 0) -> bool:
    return find_isomorphism(m, n, seed) is not None


def radical_endomorphisms(m: Representation) -> list[Morphism]:
    """Basis of the non-invertible endomorphisms of an indecomposable module."""
    _require_prime(m)
    from .algebra import _single_eigenvalue

    out = []
    one = identity(m)
    for e in end_basis(m):
        c = _single_eigenvalue(e.total())
        if c is None:
            raise ModuleError("module is not indecomposable")
        out.append(e - one.scale(c))
    vecs = [x.vector() for x in out]
    if not vecs:
        return []
    stacked = Matrix.hstack(m.field, vecs)
    cs = column_space(stacked)
    hs = hom_space(m, m)
    return [hs.morphism_from_vector(cs.a[:, j]) for j in range(cs.cols)]


def translate_basis_change(m: Representation, change: Mapping[str, Matrix]) -> Representation:
    """The module with basis at each vertex changed by invertible matrices."""
    inv = {v: c.inverse() for v, c in change.items()}
    maps = {aid: change[a.target] @ m.maps[aid] @ inv[a.source] for aid, a in m.presentation.arrows.items()}
    return Representation(m.presentation, m.dims, maps, name=m.name)


def random_basis_change(m: Representation, rng: np.random.Generator) -> Representation:
    f = m.field
    change = {}
    for v, n in m.dims.items():
        while True:
            c = Matrix(f, [[f.random_element(rng) for _ in range(n)] for _ in range(n)], rows=n, cols=n) \
                if n else Matrix.zeros(f, 0, 0)
            if n == 0 or c.is_invertible():
                break
        change[v] = c
    return translate_basis_change(m, change)


def relabel_module(m: Representation, target: BoundPresentation, vertex_map: Mapping[str, str]) -> Representation:
    """Transport a module along a vertex renaming (arrow ids unchanged)."""
    return Representation(target, {vertex_map[v]: n for v, n in m.dims.items()}, dict(m.maps), name=m.name)
