"""String and band combinatorics for monomial special biserial presentations.

A letter is ``(arrow_id, +1)`` for an arrow traversed forwards or
``(arrow_id, -1)`` for its formal inverse.  A walk ``c1 ... cn`` starting at
``v0`` visits ``v0, v1, ..., vn``; a forward letter ``a`` at step i has
``s(a) = v_{i-1}`` and ``t(a) = v_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .exactlin import Matrix
from .quivercat import BoundPresentation, PresentationError, make_path
from .repmod import Representation

Letter = tuple[str, int]


class UnsupportedPresentationError(PresentationError):
    """The presentation is outside the class handled by string combinatorics."""


class CapTooSmallError(RuntimeError):
    pass


@dataclass(frozen=True)
class StringWalk:
    start: str
    letters: tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return f"e_{self.start}"
        return " ".join(a if s > 0 else a + "^-" for a, s in self.letters)

    def inverse(self, p: BoundPresentation) -> "StringWalk":
        return StringWalk(walk_vertices(p, self)[-1], tuple((a, -s) for a, s in reversed(self.letters)))


@dataclass(frozen=True)
class Band:
    walk: StringWalk

    def __str__(self) -> str:
        return f"band({self.walk})"


@dataclass
class SpecialBiserialReport:
    ok: bool
    monomial: bool
    witnesses: list[str] = dc_field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class StringReport:
    strings: list[StringWalk]
    bands: list[Band]
    cap: int

    @property
    def representation_finite(self) -> bool:
        return not self.bands


def _letter_ends(p: BoundPresentation, c: Letter) -> tuple[str, str]:
    a = p.arrows[c[0]]
    return (a.source, a.target) if c[1] > 0 else (a.target, a.source)


def walk_vertices(p: BoundPresentation, w: StringWalk) -> list[str]:
    out = [w.start]
    for c in w.letters:
        s, t = _letter_ends(p, c)
        if s != out[-1]:
            raise PresentationError(f"walk {w} is not connected at letter {c}")
        out.append(t)
    return out


def _nonzero(p: BoundPresentation, word: Sequence[str]) -> bool:
    path = make_path(p.quiver, word)
    coords = p.right_paths(path.source)[path.target].coordinates(path, p.field)
    return any(x != 0 for x in coords)


def detect_special_biserial(p: BoundPresentation) -> SpecialBiserialReport:
    """At most two arrows in and out at every vertex; for every arrow at most one
    continuation on each side survives the relations."""
    q = p.quiver
    wit = []
    for v in p.vertices:
        if len(q.out_arrows[v]) > 2:
            wit.append(f"vertex {v}: {len(q.out_arrows[v])} outgoing arrows")
        if len(q.in_arrows[v]) > 2:
            wit.append(f"vertex {v}: {len(q.in_arrows[v])} incoming arrows")
    for a in q.arrows.values():
        after = [b.id for b in q.out_arrows[a.target] if _nonzero(p, (a.id, b.id))]
        before = [b.id for b in q.in_arrows[a.source] if _nonzero(p, (b.id, a.id))]
        if len(after) > 1:
            wit.append(f"arrow {a.id}: surviving successors {after}")
        if len(before) > 1:
            wit.append(f"arrow {a.id}: surviving predecessors {before}")
    monomial = all(len(r.terms) == 1 for r in p.relations)
    return SpecialBiserialReport(not wit, monomial, wit)


def _zero_paths(p: BoundPresentation) -> list[tuple[str, ...]]:
    return [r.terms[0][1].arrows for r in p.relations]


def _contains(word: tuple[str, ...], pat: tuple[str, ...]) -> bool:
    k = len(pat)
    return any(word[i:i + k] == pat for i in range(len(word) - k + 1))


def _can_append(p: BoundPresentation, zero: list, letters: tuple[Letter, ...], end: str, c: Letter) -> bool:
    s, _ = _letter_ends(p, c)
    if s != end:
        return False
    if letters and letters[-1] == (c[0], -c[1]):
        return False
    run = [c[0]]
    for a, sgn in reversed(letters):
        if sgn != c[1]:
            break
        run.append(a)
    # run holds the new letter first; as a path it reads backwards for forward runs
    path = tuple(reversed(run)) if c[1] > 0 else tuple(run)
    return not any(_contains(path, z) for z in zero)


def _is_valid(p: BoundPresentation, zero: list, w: StringWalk) -> bool:
    letters: tuple[Letter, ...] = ()
    end = w.start
    for c in w.letters:
        if not _can_append(p, zero, letters, end, c):
            return False
        letters += (c,)
        end = _letter_ends(p, c)[1]
    return True


def _key(w: StringWalk) -> tuple:
    return (len(w.letters), tuple((a, -s) for a, s in w.letters), w.start)


def canonical(p: BoundPresentation, w: StringWalk) -> StringWalk:
    """Representative of ``{w, w^-1}``."""
    if not w.letters:
        return w
    inv = w.inverse(p)
    return min(w, inv, key=_key)


def _require_string_algebra(p: BoundPresentation) -> None:
    rep = detect_special_biserial(p)
    if not rep.ok:
        raise UnsupportedPresentationError("not special biserial: " + "; ".join(rep.witnesses))
    if not rep.monomial:
        raise UnsupportedPresentationError("string enumeration needs monomial relations")


def enumerate_strings(p: BoundPresentation, cap: int | None = None) -> StringReport:
    """All strings up to inversion, and all bands up to rotation and inversion.

    Raises :class:`CapTooSmallError` if some string reaches the length cap while no
    band was found, since finiteness could not be certified then.
    """
    _require_string_algebra(p)
    q = p.quiver
    zero = _zero_paths(p)
    cap = cap if cap is not None else max(4 * len(q.arrows), 1)
    letters_all = [(a, 1) for a in q.arrows] + [(a, -1) for a in q.arrows]
    found: dict[StringWalk, None] = {}
    closed: list[StringWalk] = []
    hit_cap = False
    stack = [StringWalk(v) for v in p.vertices]
    while stack:
        w = stack.pop()
        found.setdefault(canonical(p, w), None)
        end = walk_vertices(p, w)[-1]
        if w.letters and end == w.start:
            closed.append(w)
        if len(w.letters) >= cap:
            hit_cap = True
            continue
        for c in letters_all:
            if _can_append(p, zero, w.letters, end, c):
                stack.append(StringWalk(w.start, w.letters + (c,)))
    bands = _bands_from_closed(p, zero, closed)
    if hit_cap and not bands:
        raise CapTooSmallError(f"strings reach the length cap {cap}; increase --cap")
    strings = sorted(found, key=lambda w: (len(w.letters), str(w), w.start))
    return StringReport(strings, bands, cap)


def _primitive(letters: tuple) -> bool:
    n = len(letters)
    return all(letters != letters[d:] + letters[:d] for d in range(1, n) if n % d == 0)


def _bands_from_closed(p: BoundPresentation, zero: list, closed: list[StringWalk]) -> list[Band]:
    seen = set()
    out = []
    for w in closed:
        signs = {s for _, s in w.letters}
        if signs != {1, -1} or not _primitive(w.letters):
            continue
        if not _is_valid(p, zero, StringWalk(w.start, w.letters * 2)):
            continue
        n = len(w.letters)
        verts = walk_vertices(p, w)
        variants = []
        for d in range(n):
            rot = StringWalk(verts[d], w.letters[d:] + w.letters[:d])
            variants.append(rot)
            variants.append(rot.inverse(p))
        rep = min(variants, key=_key)
        if rep not in seen:
            seen.add(rep)
            out.append(Band(rep))
    return sorted(out, key=lambda b: _key(b.walk))


def _thin(p: BoundPresentation, w: StringWalk, block: int, closing: Matrix | None, name: str) -> Representation:
    f = p.field
    verts = walk_vertices(p, w)
    positions = verts[:-1] if closing is not None else verts
    dims = {v: 0 for v in p.vertices}
    slot = []
    for v in positions:
        slot.append(dims[v])
        dims[v] += block
    mats = {aid: [[f(0)] * dims[a.source] for _ in range(dims[a.target])] for aid, a in p.arrows.items()}
    npos = len(positions)
    for i, (aid, sgn) in enumerate(w.letters):
        src, dst = i, (i + 1) % npos if closing is not None else i + 1
        if sgn < 0:
            src, dst = dst, src
        m = mats[aid]
        blk = closing if (closing is not None and i == len(w.letters) - 1) else None
        for r in range(block):
            for c in range(block):
                val = blk.a[r, c] if blk is not None else (1 if r == c else 0)
                if val:
                    row, col = slot[dst] + r, slot[src] + c
                    m[row][col] = f(m[row][col] + val)
    maps = {aid: Matrix(f, m, rows=dims[p.arrows[aid].target], cols=dims[p.arrows[aid].source])
            for aid, m in mats.items()}
    return Representation(p, dims, maps, name=name)


def string_module(p: BoundPresentation, w: StringWalk) -> Representation:
    """The thin module on the walk with identity maps along its letters."""
    return _thin(p, w, 1, None, f"M({w})")


def band_module(p: BoundPresentation, b: Band | StringWalk, companion: Matrix) -> Representation:
    """Band module: identity blocks along the walk, ``companion`` on the closing letter."""
    w = b.walk if isinstance(b, Band) else b
    if not w.letters or walk_vertices(p, w)[-1] != w.start:
        raise PresentationError("band walk must be closed")
    if companion.field != p.field:
        raise ValueError("companion matrix over the wrong field")
    if companion.rows != companion.cols or not companion.is_invertible():
        raise ValueError("companion matrix must be square and invertible")
    return _thin(p, w, companion.rows, companion, f"B({w})")
