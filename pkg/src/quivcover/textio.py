"""Line-oriented text format for presentations, modules and functor presentations.

Grammar (one statement per line, ``#`` starts a comment)::

    name <text>
    field p=<prime> | field rationals
    group rank <k>
    vertex <id>
    arrow <id> : <src> -> <dst> [shift (t1,...,tk)]
    relation <coeff>*<a1>.<a2>... [+ <coeff>*<b1>.<b2>...]
    assert <flag>

A file declaring ``group rank`` describes a periodic cover; otherwise it is a
bound presentation.  Modules use::

    module <name>
    dim <vertex> <n>
    map <arrow> <rows>x<cols> : <row> ; <row> ...
    end
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path as FsPath

from .exactlin import Field, Matrix
from .quivercat import (Arrow, BoundPresentation, PeriodicArrow, PeriodicPresentation, PeriodicRelation,
                        PresentationError, Quiver, make_relation)
from .repmod import Morphism, Representation

_KEYS = {"name", "field", "group", "vertex", "arrow", "relation", "assert"}
_ARROW = re.compile(r"^arrow\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)(?:\s+shift\s*\(([^)]*)\))?\s*$")
_TERM = re.compile(r"^([+-]?\s*[0-9/]*)\s*\*\s*([^\s*]+)$")


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_field(spec: str, line: int = 0) -> Field:
    spec = spec.strip()
    if spec in ("rationals", "q", "Q"):
        return Field.rationals()
    m = re.fullmatch(r"p\s*=\s*(\d+)|(\d+)|p", spec)
    if not m or spec == "p":
        raise ParseError(line, f"bad field {spec!r}")
    try:
        return Field.prime(int(m.group(1) or m.group(2)))
    except ValueError as exc:
        raise ParseError(line, str(exc)) from None


def _parse_terms(text: str, line: int) -> list[tuple[Fraction, tuple[str, ...]]]:
    parts = re.split(r"\s+\+\s+|\s+(?=-)", text.strip())
    out = []
    for part in parts:
        part = part.strip()
        if not part:
            continue
        m = _TERM.match(part)
        if m:
            c = m.group(1).replace(" ", "")
            coef = Fraction(c if c not in ("", "+", "-") else c + "1")
            word = m.group(2)
        else:
            sign, word = re.match(r"^([+-]?)\s*(.*)$", part).groups()
            coef = Fraction(-1 if sign == "-" else 1)
        out.append((coef, tuple(word.split("."))))
    if not out:
        raise ParseError(line, "empty relation")
    return out


@dataclass
class ParsedFile:
    presentation: BoundPresentation | PeriodicPresentation
    field: Field
    asserts: frozenset[str]
    digest: str


def parse_presentation(text: str, field_override: Field | None = None,
                       cap: int | None = None) -> BoundPresentation | PeriodicPresentation:
    return parse_file(text, field_override, cap).presentation


def parse_file(text: str, field_override: Field | None = None, cap: int | None = None) -> ParsedFile:
    name = ""
    field = None
    rank = None
    vertices: list[str] = []
    arrows: list[tuple[str, str, str, tuple[int, ...] | None, int]] = []
    relations: list[tuple[list, int]] = []
    asserts: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key = line.split()[0]
        if key not in _KEYS:
            raise ParseError(lineno, f"unknown key {key!r}")
        rest = line[len(key):].strip()
        if key == "name":
            name = rest
        elif key == "field":
            field = parse_field(rest, lineno)
        elif key == "group":
            m = re.fullmatch(r"rank\s+(\d+)", rest)
            if not m:
                raise ParseError(lineno, "expected 'group rank <k>'")
            rank = int(m.group(1))
        elif key == "vertex":
            if not rest or len(rest.split()) != 1:
                raise ParseError(lineno, "expected 'vertex <id>'")
            vertices.append(rest)
        elif key == "arrow":
            m = _ARROW.match(line)
            if not m:
                raise ParseError(lineno, "expected 'arrow <id> : <src> -> <dst> [shift (...)]'")
            shift = None
            if m.group(4) is not None:
                try:
                    shift = tuple(int(x) for x in m.group(4).split(",") if x.strip())
                except ValueError:
                    raise ParseError(lineno, "bad shift") from None
            arrows.append((m.group(1), m.group(2), m.group(3), shift, lineno))
        elif key == "relation":
            relations.append((_parse_terms(rest, lineno), lineno))
        elif key == "assert":
            asserts.add(rest)
    if field is None:
        field = Field.prime(101)
    if field_override is not None:
        field = field_override
    kwargs = {"cap": cap} if cap else {}
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
    if rank is None:
        for a in arrows:
            if a[3]:
                raise ParseError(a[4], "shift given without 'group rank'")
        try:
            q = Quiver(vertices, [Arrow(a, s, t) for a, s, t, _, _ in arrows])
        except PresentationError as exc:
            raise ParseError(0, str(exc)) from None
        rels = []
        for terms, lineno in relations:
            for _, w in terms:
                for aid in w:
                    if aid not in q.arrows:
                        raise ParseError(lineno, f"unknown arrow {aid!r}")
            rels.append(make_relation(q, field, terms))
        bp = BoundPresentation(q, rels, field, name=name, asserts=asserts, **kwargs)
        return ParsedFile(bp, field, frozenset(asserts), digest)
    parrows = []
    for aid, s, t, shift, lineno in arrows:
        shift = shift if shift is not None else (0,) * rank
        if len(shift) != rank:
            raise ParseError(lineno, f"shift has {len(shift)} entries, group rank is {rank}")
        parrows.append(PeriodicArrow(aid, s, t, shift))
    prels = []
    for terms, lineno in relations:
        for _, w in terms:
            if len(w) < 2:
                from .quivercat import AdmissibilityError
                raise AdmissibilityError("admissibility: path length < 2")
        prels.append(PeriodicRelation(tuple((field(c), w) for c, w in terms)))
    pp = PeriodicPresentation(vertices, parrows, rank, prels, field, name=name, asserts=asserts, **kwargs)
    return ParsedFile(pp, field, frozenset(asserts), digest)


def load(path: str | FsPath, field_override: Field | None = None, cap: int | None = None) -> ParsedFile:
    return parse_file(FsPath(path).read_text(encoding="utf-8"), field_override, cap)


def _fmt(x) -> str:
    return str(x)


def dump_presentation(p: BoundPresentation | PeriodicPresentation) -> str:
    lines = []
    if p.name:
        lines.append(f"name {p.name}")
    lines.append(f"field {p.field}")
    periodic = isinstance(p, PeriodicPresentation)
    if periodic:
        lines.append(f"group rank {p.group_rank}")
    for v in p.vertices:
        lines.append(f"vertex {v}")
    for a in p.arrows.values():
        s = f"arrow {a.id} : {a.source} -> {a.target}"
        if periodic and any(a.shift):
            s += " shift (" + ",".join(str(x) for x in a.shift) + ")"
        lines.append(s)
    for r in p.relations:
        if periodic:
            terms = [f"{_fmt(c)}*{'.'.join(w)}" for c, w in r.terms]
        else:
            terms = [f"{_fmt(c)}*{'.'.join(path.arrows)}" for c, path in r.terms]
        lines.append("relation " + " + ".join(terms))
    for flag in sorted(p.asserts):
        lines.append(f"assert {flag}")
    return "\n".join(lines) + "\n"


def dump_module(m: Representation, name: str | None = None) -> str:
    lines = [f"module {name or m.name or 'M'}", f"field {m.field}"]
    for v in m.presentation.vertices:
        if m.dims[v]:
            lines.append(f"dim {v} {m.dims[v]}")
    for aid, mat in m.maps.items():
        if mat.rows and mat.cols and not mat.is_zero():
            rows = " ; ".join(" ".join(_fmt(x) for x in row) for row in mat.tolist())
            lines.append(f"map {aid} {mat.rows}x{mat.cols} : {rows}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_module_block(lines: list[tuple[int, str]], p: BoundPresentation) -> Representation:
    name = lines[0][1].split(None, 1)[1] if len(lines[0][1].split()) > 1 else ""
    dims, maps = {}, {}
    for lineno, line in lines[1:]:
        key = line.split()[0]
        if key == "field":
            f = parse_field(line[5:], lineno)
            if f != p.field:
                raise ParseError(lineno, f"module field {f} does not match presentation field {p.field}")
        elif key == "dim":
            _, v, n = line.split()
            dims[v] = int(n)
        elif key == "map":
            m = re.match(r"map\s+(\S+)\s+(\d+)x(\d+)\s*:\s*(.*)$", line)
            if not m:
                raise ParseError(lineno, "expected 'map <arrow> <r>x<c> : rows'")
            r, c = int(m.group(2)), int(m.group(3))
            rows = [[Fraction(x) for x in row.split()] for row in m.group(4).split(";")]
            maps[m.group(1)] = Matrix(p.field, rows, rows=r, cols=c)
        else:
            raise ParseError(lineno, f"unknown key {key!r} in module block")
    return Representation(p, dims, maps, name=name)


def parse_modules(text: str, p: BoundPresentation) -> list[Representation]:
    out = []
    block: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("module"):
            block = [(lineno, line)]
        elif line == "end":
            out.append(_parse_module_block(block, p))
            block = []
        elif block:
            block.append((lineno, line))
        else:
            raise ParseError(lineno, "statement outside a module block")
    if block:
        raise ParseError(block[0][0], "unterminated module block")
    return out


def dump_morphism(f: Morphism) -> str:
    lines = ["morphism"]
    for v, mat in f.maps.items():
        if mat.rows and mat.cols and not mat.is_zero():
            rows = " ; ".join(" ".join(_fmt(x) for x in row) for row in mat.tolist())
            lines.append(f"block {v} {mat.rows}x{mat.cols} : {rows}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_morphism(text: str, source: Representation, target: Representation) -> Morphism:
    maps = {}
    f = source.field
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line in ("morphism", "end"):
            continue
        m = re.match(r"block\s+(\S+)\s+(\d+)x(\d+)\s*:\s*(.*)$", line)
        if not m:
            raise ParseError(lineno, "expected 'block <vertex> <r>x<c> : rows'")
        rows = [[Fraction(x) for x in row.split()] for row in m.group(4).split(";")]
        maps[m.group(1)] = Matrix(f, rows, rows=int(m.group(2)), cols=int(m.group(3)))
    return Morphism(source, target, maps)


def dump_functor(f: Morphism) -> str:
    """A functor Coker Hom(-, f) serialized as its two modules plus the morphism."""
    return dump_module(f.source, "source") + dump_module(f.target, "target") + dump_morphism(f)


def parse_functor(text: str, p: BoundPresentation) -> Morphism:
    idx = text.index("morphism")
    mods = parse_modules(text[:idx], p)
    if len(mods) != 2:
        raise ParseError(0, "functor file needs exactly two modules")
    return parse_morphism(text[idx:], mods[0], mods[1])
