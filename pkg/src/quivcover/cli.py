"""Command-line front end.

Exit codes: 0 ok, 1 acceptance failure, 2 validation failure, 3 I/O or parse
error, 4 input outside the supported class.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .artheory import NotRepresentationFiniteError, ar_quiver, mesh_presentation, standard_check, to_dot
from .covering import (CoveringContext, WindowError, classify_module_kind, covering_hom_check, is_interior,
                       periodic_lines, push_down)
from .exactlin import Field
from .functcat import (FpFunctorPresentation, FunctorError, classify_functor_kind, evaluation_table,
                       mesh_setup)
from .quivercat import (AdmissibilityError, BoundPresentation, PeriodicPresentation, PresentationError,
                        check_admissible, orbit_category)
from .repmod import ModuleError
from .strings import CapTooSmallError, UnsupportedPresentationError, enumerate_strings, string_module
from .textio import ParseError, dump_presentation, load, parse_functor, parse_modules, parse_field

EXIT_OK, EXIT_ACCEPT, EXIT_VALIDATE, EXIT_IO, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4
SCHEMA = "quivcover-report/1"


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _field(args) -> Field | None:
    if args.field is None:
        return None
    spec = args.field
    if spec.isdigit():
        spec = f"p={spec}"
    return parse_field(spec)


def _load(args, path: str | None = None):
    path = path or args.input
    try:
        return load(path, field_override=_field(args), cap=args.cap)
    except FileNotFoundError:
        raise CliError(EXIT_IO, f"no such file: {path}") from None
    except OSError as exc:
        raise CliError(EXIT_IO, str(exc)) from None
    except ParseError as exc:
        raise CliError(EXIT_IO, f"{path}: {exc}") from None
    except AdmissibilityError as exc:
        raise CliError(EXIT_VALIDATE, f"{path}: {exc}") from None
    except PresentationError as exc:
        raise CliError(EXIT_VALIDATE, f"{path}: {exc}") from None


def _algebra(args) -> tuple[BoundPresentation, object]:
    """The bound presentation of the input, or the orbit category of a periodic input."""
    pf = _load(args)
    p = pf.presentation
    if isinstance(p, PeriodicPresentation):
        p, _ = orbit_category(p)
    return p, pf


def _context(args, pf) -> CoveringContext:
    if not isinstance(pf.presentation, PeriodicPresentation):
        raise CliError(EXIT_VALIDATE, "this command needs a periodic cover (a file with 'group rank')")
    if args.radius is not None and args.radius < 1:
        raise CliError(EXIT_VALIDATE, "radius must be >= 1")
    return CoveringContext(pf.presentation, args.radius or 3)


def _report(args, pf, payload: dict) -> dict:
    base = {"schema": SCHEMA, "command": args.command, "seed": args.seed,
            "field": str(pf.field) if pf is not None else None,
            "fixture_hash": pf.digest if pf is not None else None}
    if getattr(args, "radius", None) is not None:
        base["radius"] = args.radius
    base.update(payload)
    return base


def _emit(args, report: dict, text: str, dot: str | None = None) -> None:
    if args.format == "json":
        out = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    elif args.format == "dot":
        if dot is None:
            raise CliError(EXIT_VALIDATE, f"--format dot is not available for '{args.command}'")
        out = dot
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.out:
        try:
            Path(args.out).write_text(out, encoding="utf-8")
        except OSError as exc:
            raise CliError(EXIT_IO, str(exc)) from None
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------------------
# commands


def cmd_validate(args) -> int:
    pf = _load(args)
    p = pf.presentation
    periodic = isinstance(p, PeriodicPresentation)
    target = orbit_category(p)[0] if periodic else p
    try:
        n = check_admissible(target, args.cap or target.cap)
    except AdmissibilityError as exc:
        raise CliError(EXIT_VALIDATE, str(exc)) from None
    rep = _report(args, pf, {"valid": True, "nilpotency": n, "periodic": periodic,
                             "vertices": len(target.vertices), "arrows": len(target.arrows)})
    _emit(args, rep, f"ok: {len(target.vertices)} vertices, {len(target.arrows)} arrows, N = {n}")
    return EXIT_OK


def cmd_ind(args) -> int:
    p, pf = _algebra(args)
    rep = enumerate_strings(p, args.cap)
    mods = [string_module(p, w) for w in rep.strings]
    rows = [{"string": str(w), "start": w.start, "dim_vector": list(m.dim_vector)} for w, m in zip(rep.strings, mods)]
    lines = [f"{r['dim_vector']}  {r['string']}" for r in rows]
    lines.append(f"count {len(mods)}")
    if rep.bands:
        lines.append("bands: " + ", ".join(str(b) for b in rep.bands))
    payload = {"count": len(mods), "modules": rows, "bands": [str(b) for b in rep.bands],
               "representation_finite": rep.representation_finite}
    _emit(args, _report(args, pf, payload), "\n".join(lines))
    return EXIT_OK


def cmd_ar(args) -> int:
    p, pf = _algebra(args)
    g = ar_quiver(p, cap=args.cap)
    arrows = [{"from": g.labels[i], "to": g.labels[j], "multiplicity": m} for (i, j), m in sorted(g.arrows.items())]
    tau = {g.labels[x]: g.labels[z] for x, z in sorted(g.tau.items())}
    lines = [f"{lab}  {list(m.dim_vector)}" for lab, m in zip(g.labels, g.modules)]
    lines += [f"{a['from']} -> {a['to']}" + (f" x{a['multiplicity']}" if a["multiplicity"] > 1 else "") for a in arrows]
    lines += [f"tau {x} = {z}" for x, z in tau.items()]
    payload = {"vertices": [{"label": lab, "dim_vector": list(m.dim_vector)} for lab, m in zip(g.labels, g.modules)],
               "arrows": arrows, "tau": tau, "tau_pairs": len(tau)}
    _emit(args, _report(args, pf, payload), "\n".join(lines), to_dot(g))
    return EXIT_OK


def cmd_mesh(args) -> int:
    pf = _load(args)
    if isinstance(pf.presentation, PeriodicPresentation):
        s = mesh_setup(_context(args, pf), seed=args.seed)
        s.ctx.periodic.name = f"{pf.presentation.name or 'cover'}-mesh"
        text = dump_presentation(s.ctx.periodic)
        payload = {"mesh_cover": text, "standard": s.standard}
        _emit(args, _report(args, pf, payload), text, to_dot(s.gamma))
        return EXIT_OK
    g = ar_quiver(pf.presentation, cap=args.cap)
    mesh = mesh_presentation(g)
    text = dump_presentation(mesh)
    rep = standard_check(g, mesh)
    _emit(args, _report(args, pf, {"mesh": text, "standard": rep.ok, "unequal": rep.unequal}), text, to_dot(g))
    return EXIT_OK


def cmd_cover_check(args) -> int:
    pf = _load(args)
    ctx = _context(args, pf)
    w = ctx.window(args.radius)
    mods = [string_module(w.presentation, s) for s in enumerate_strings(w.presentation, args.cap).strings]
    inner = [m for m in mods if is_interior(ctx, m)]
    fails = []
    for i, x in enumerate(inner):
        for j, y in enumerate(inner):
            h = covering_hom_check(ctx, x, y)
            if not h.ok:
                fails.append({"pair": [i, j], "lhs": h.lhs, "rhs": h.rhs})
    payload = {"modules": len(inner), "pairs": len(inner) ** 2, "failures": fails}
    _emit(args, _report(args, pf, payload),
          f"{len(inner)} interior indecomposables, {len(inner) ** 2} pairs, {len(fails)} failures")
    return EXIT_VALIDATE if fails else EXIT_OK


def _read_modules(args, p: BoundPresentation):
    try:
        text = Path(args.module).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(EXIT_IO, str(exc)) from None
    try:
        return text, parse_modules(text, p)
    except ParseError as exc:
        raise CliError(EXIT_IO, f"{args.module}: {exc}") from None


def _verdict_text(v) -> str:
    lines = [f"{v.kind} kind"]
    if v.witness is not None:
        sup = ", ".join(f"{k}:{d}" for k, d in v.witness.dims.items() if d)
        lines.append(f"witness support {sup} (shift {v.shift})")
    if v.line is not None:
        lines.append(f"line {v.line}")
    if v.companion is not None:
        lines.append(f"companion {v.companion.tolist()}")
    return "\n".join(lines)


def cmd_kind(args) -> int:
    pf = _load(args)
    ctx = _context(args, pf)
    if args.module:
        _, mods = _read_modules(args, ctx.orbit)
        if not mods:
            raise CliError(EXIT_VALIDATE, "module file is empty")
        x = mods[0]
    else:
        if args.simple is None:
            raise CliError(EXIT_VALIDATE, "give --module FILE or --simple VERTEX")
        from .repmod import simple_at
        if args.simple not in ctx.periodic.vertices:
            raise CliError(EXIT_VALIDATE, f"unknown vertex {args.simple}")
        w = ctx.window()
        x = push_down(ctx, simple_at(w.presentation, f"{args.simple}@" + ",".join("0" * ctx.rank)))
    v = classify_module_kind(ctx, x, max_radius=args.max_radius, seed=args.seed)
    _emit(args, _report(args, pf, {"verdict": v.to_json()}), _verdict_text(v))
    return EXIT_OK


def cmd_functor_kind(args) -> int:
    pf = _load(args)
    ctx = _context(args, pf)
    s = mesh_setup(ctx, seed=args.seed)
    if args.functor:
        try:
            f = parse_functor(Path(args.functor).read_text(encoding="utf-8"), ctx.orbit)
        except OSError as exc:
            raise CliError(EXIT_IO, str(exc)) from None
        except (ParseError, ValueError) as exc:
            raise CliError(EXIT_IO, f"{args.functor}: {exc}") from None
        t = FpFunctorPresentation(f)
    elif args.u_lambda is not None:
        from .reproduce import u_lambda
        try:
            t = u_lambda(s.gamma, args.u_lambda)
        except (KeyError, StopIteration):
            raise CliError(EXIT_VALIDATE, "--u-lambda needs the e1 cover") from None
    else:
        raise CliError(EXIT_VALIDATE, "give --functor FILE or --u-lambda VALUE")
    v = classify_functor_kind(t, s, max_radius=args.max_radius, seed=args.seed)
    table = dict(zip(s.gamma.labels, evaluation_table(t, s.gamma)))
    _emit(args, _report(args, pf, {"verdict": v.to_json(), "evaluation": table}), _verdict_text(v))
    return EXIT_OK


def cmd_lines(args) -> int:
    pf = _load(args)
    ctx = _context(args, pf)
    lines = periodic_lines(ctx, radius=args.radius)
    rows = [{"line": str(l), "period": len(l.letters), "translation": list(l.translation)} for l in lines]
    text = "\n".join([r["line"] for r in rows] + [f"{len(lines)} line orbit(s)"])
    _emit(args, _report(args, pf, {"count": len(lines), "lines": rows}), text)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .reproduce import PRIMES, run_all
    primes = PRIMES
    if args.field:
        f = _field(args)
        if f.p is None:
            raise CliError(EXIT_UNSUPPORTED, "the acceptance suite runs over prime fields")
        primes = tuple(dict.fromkeys((f.p,) + PRIMES))
    log = (lambda s: print(s, file=sys.stderr)) if args.format == "json" else print
    outcomes = run_all(primes, log=log)
    failed = [o for o in outcomes if not o.ok]
    if args.format == "json":
        rep = _report(args, None, {"primes": list(primes), "criteria": [
            {"number": o.number, "title": o.title, "ok": o.ok, "seconds": round(o.seconds, 3),
             "summary": o.summary, "message": o.message} for o in outcomes]})
        _emit(args, rep, "")
    else:
        print(f"{len(outcomes) - len(failed)}/{len(outcomes)} passed")
        if failed:
            print(f"first failure: {failed[0].line()}")
    return EXIT_ACCEPT if failed else EXIT_OK


COMMANDS = {
    "validate": cmd_validate, "ind": cmd_ind, "ar": cmd_ar, "mesh": cmd_mesh, "cover-check": cmd_cover_check,
    "kind": cmd_kind, "functor-kind": cmd_functor_kind, "lines": cmd_lines, "reproduce": cmd_reproduce,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="prime p or 'q' for the rationals (default: from the file)")
    common.add_argument("--radius", type=int, help="window radius for cover computations")
    common.add_argument("--cap", type=int, help="length cap for string enumeration and admissibility")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="quivcover", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"quivcover {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("validate", "ind", "ar", "mesh", "cover-check", "lines"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("input")
    sp = sub.add_parser("kind", parents=[common], help="classify a module over the orbit category")
    sp.add_argument("input")
    sp.add_argument("--module", help="module file over the orbit category (first block is used)")
    sp.add_argument("--simple", help="use the push-down of the simple at this vertex")
    sp.add_argument("--max-radius", type=int, default=6)
    sp = sub.add_parser("functor-kind", parents=[common], help="classify a finitely presented functor")
    sp.add_argument("input")
    sp.add_argument("--functor", help="functor file (source module, target module, morphism)")
    sp.add_argument("--u-lambda", type=int, help="use Coker(-, mu2 mu1 + lambda nu2 nu1) on the e1 cover")
    sp.add_argument("--max-radius", type=int, default=6)
    sub.add_parser("reproduce", parents=[common], help="run the acceptance suite")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (UnsupportedPresentationError, NotRepresentationFiniteError, CapTooSmallError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (WindowError, FunctorError, ModuleError, PresentationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATE


if __name__ == "__main__":
    sys.exit(main())
