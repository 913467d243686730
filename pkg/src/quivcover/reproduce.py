"""The acceptance suite for the bundled fixtures, runnable from the CLI and from pytest.

Each criterion returns a :class:`Outcome` whose ``summary`` holds only
field-independent counts and verdicts, so runs at two primes can be compared.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from pathlib import Path
from typing import Callable

import numpy as np

from .artheory import ar_quiver, mesh_additivity, mesh_presentation, standard_check
from .covering import (CoveringContext, classify_module_kind, covering_hom_check, is_interior, periodic_lines)
from .exactlin import Field
from .functcat import (FpFunctorPresentation, classify_functor_kind, composition_length,
                       composition_length_by_peeling, evaluation_dim, faithfulness_check, functor_hom,
                       functors_isomorphic, g_shift_functor, image_sequence, mesh_setup, phi_pushdown,
                       psi_evaluate, psi_phi_sum, representable, sample_functors, check_precovering_report,
                       to_ind_module, window_indecomposables)
from .repmod import compose, is_indecomposable, is_isomorphic
from .strings import enumerate_strings, string_module
from .textio import load

FIXTURES = Path(__file__).parent / "fixtures"
PRIMES = (101, 32003)


def fixture(name: str, field: Field | None = None):
    return load(FIXTURES / f"{name}.quiver", field_override=field)


@dataclass
class Outcome:
    number: int
    title: str
    ok: bool
    summary: dict = dc_field(default_factory=dict)
    seconds: float = 0.0
    budget: float = 0.0
    message: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" ({self.message})" if self.message else ""
        return f"[{status}] {self.number:2d}. {self.title} [{self.seconds:.2f}s / {self.budget:.0f}s]{extra}"


# ---------------------------------------------------------------------------
# shared data, cached per prime


@lru_cache(maxsize=None)
def _e1_algebra(p: int):
    return fixture("e1-algebra", Field.prime(p)).presentation


@lru_cache(maxsize=None)
def _gamma_e1(p: int):
    return ar_quiver(_e1_algebra(p))


@lru_cache(maxsize=None)
def _cover(name: str, p: int, radius: int = 3) -> CoveringContext:
    return CoveringContext(fixture(name, Field.prime(p)).presentation, radius)


@lru_cache(maxsize=None)
def _mesh(name: str, p: int):
    return mesh_setup(_cover(name, p))


@lru_cache(maxsize=None)
def _window_mods(p: int):
    return window_indecomposables(_cover("e1-cover", p), 3, margin=1)


def x_labels(g) -> dict[str, str]:
    """Names x1..x10 for the vertices of the e1 AR quiver, fixed by its shape.

    x4 = I4 and x7 = P1 are the ends of the two paths through the middle;
    x5, x6 are the middle vertices, x2, x3 their translates, x8, x9 their
    inverse translates, x1 = P4 and x10 = I1.
    """
    idx = {lab: i for i, lab in enumerate(g.labels)}
    inv_tau = {z: x for x, z in g.tau.items()}
    mid = sorted(j for (i, j) in g.arrows if i == idx["I4"] and (j, idx["P1"]) in g.arrows)
    lab = {"x1": "P4", "x4": "I4", "x7": "P1", "x10": "I1"}
    for k, m in enumerate(mid):
        lab[f"x{5 + k}"] = g.labels[m]
        lab[f"x{2 + k}"] = g.labels[g.tau[m]]
        lab[f"x{8 + k}"] = g.labels[inv_tau[m]]
    return lab


def u_lambda(g, lam) -> FpFunctorPresentation:
    """Coker(-, mu2 mu1 + lam nu2 nu1) for the two paths I4 -> P1 through the middle."""
    xl = x_labels(g)
    idx = {lab: i for i, lab in enumerate(g.labels)}
    irr = lambda a, b: g.irreducible[(idx[a], idx[b])]
    f = g.presentation.field
    mu = compose(irr(xl["x5"], "P1"), irr("I4", xl["x5"]))
    nu = compose(irr(xl["x6"], "P1"), irr("I4", xl["x6"]))
    return FpFunctorPresentation(mu + nu.scale(f(lam)), name=f"U_{lam}")


# ---------------------------------------------------------------------------
# criteria


def crit1(p: int) -> tuple[bool, dict]:
    a = _e1_algebra(p)
    rep = enumerate_strings(a)
    mods = [string_module(a, w) for w in rep.strings]
    indec = all(is_indecomposable(m) for m in mods)
    distinct = all(not (m.dims == n.dims and is_isomorphic(m, n)) for i, m in enumerate(mods) for n in mods[:i])
    return len(mods) == 10 and indec and distinct and not rep.bands, {"count": len(mods), "bands": len(rep.bands)}


def crit2(p: int) -> tuple[bool, dict]:
    g = _gamma_e1(p)
    mults = sorted(set(g.arrows.values()))
    add = mesh_additivity(g)
    ok = len(g) == 10 and mults == [1] and all(v for _, v in add)
    return ok, {"vertices": len(g), "arrows": len(g.arrows), "multiplicities": mults, "meshes": len(add)}


def crit3(p: int) -> tuple[bool, dict]:
    ctx = _cover("e1-cover", p)
    w = ctx.window(3)
    mods = [string_module(w.presentation, s) for s in enumerate_strings(w.presentation).strings]
    inner = [m for m in mods if is_interior(ctx, m)]
    bad = sum(not covering_hom_check(ctx, x, y).ok for x in inner for y in inner)
    return bad == 0 and len(inner) > 0, {"modules": len(inner), "pairs": len(inner) ** 2, "failures": bad}


def crit4(p: int) -> tuple[bool, dict]:
    s = _mesh("e1-cover", p)
    g = s.gamma
    xl = x_labels(g)
    want = sorted(xl[f"x{k}"] for k in (4, 5, 6, 7))
    us = [u_lambda(g, lam) for lam in (1, 2, 3)]
    kinds, supports = [], []
    for u in us:
        v = classify_functor_kind(u, s)
        kinds.append(v.kind)
        n = to_ind_module(u, g, s.mesh)
        supports.append(sorted(lab for lab, d in n.dims.items() if d))
    noniso = all(not functors_isomorphic(us[i], us[j]) for i in range(3) for j in range(i))
    back = {v: k for k, v in xl.items()}
    named = [sorted(back[lab] for lab in sup) for sup in supports]
    ok = kinds == ["second"] * 3 and noniso and all(sup == want for sup in supports)
    return ok, {"kinds": kinds, "pairwise_noniso": noniso, "supports": named}


def _crit5_data(p: int):
    ctx = _cover("e1-cover", p)
    mods = _window_mods(p)
    ts = sample_functors(mods, 5, seed=11, max_length=12)
    rng = np.random.default_rng(12)
    tests = [mods[int(i)] for i in rng.choice(len(mods), 10, replace=False)]
    return ctx, mods, ts, tests


def crit5(p: int) -> tuple[bool, dict]:
    ctx, _, ts, tests = _crit5_data(p)
    table = []
    ok = len(ts) == 5
    for t in ts:
        pt = phi_pushdown(ctx, t)
        row = []
        for m in tests:
            lhs = psi_evaluate(ctx, pt, m)
            rhs, _ = psi_phi_sum(ctx, t, m)
            ok &= lhs == rhs
            row.append(lhs)
        table.append(row)
    nonzero = sum(v for row in table for v in row)
    return ok and nonzero > 0, {"table": table}


def crit6(p: int) -> tuple[bool, dict]:
    ctx, mods, ts, _ = _crit5_data(p)
    g = _mesh("e1-cover", p).gamma
    exact = True
    dims = []
    for t in ts:
        im, hn, tt = image_sequence(t)
        phis = [phi_pushdown(ctx, x) for x in (im, hn, tt)]
        for x in g.modules:
            d = [evaluation_dim(f, x) for f in phis]
            exact &= d[1] == d[0] + d[2]
            dims.append(d)
    pool = ts + sample_functors(mods, 10, seed=13)
    pairs = [(s, t) for s in pool for t in pool if s is not t and functor_hom(s, t).dim][:5]
    faithful = len(pairs) == 5 and all(faithfulness_check(ctx, s, t) for s, t in pairs)
    homs = [functor_hom(s, t).dim for s, t in pairs]
    return exact and faithful, {"sequences": len(ts), "exact": exact, "pairs": len(pairs),
                                "hom_dims": homs, "faithful": faithful}


def crit7(p: int) -> tuple[bool, dict]:
    g = _gamma_e1(p)
    rows = {}
    for i, m in enumerate(g.modules):
        h = representable(m)
        rows[g.labels[i]] = (composition_length(h, g), composition_length_by_peeling(h, g))
    return all(a == b for a, b in rows.values()), {"lengths": rows}


def crit8(p: int) -> tuple[bool, dict]:
    fld = Field.prime(p)
    counts = {}
    for name in ("e1-mesh-cover", "e2-mesh-cover"):
        ctx = CoveringContext(fixture(name, fld).presentation, 3)
        counts[name] = len(periodic_lines(ctx, radius=3))
    counts["e3-mesh-cover"] = len(periodic_lines(_mesh("e3-cover", p).ctx, radius=3))
    want = {"e1-mesh-cover": 1, "e2-mesh-cover": 0, "e3-mesh-cover": 0}
    return counts == want, {"lines": counts}


def crit9(p: int) -> tuple[bool, dict]:
    ctx = _cover("e1-cover", p)
    mods = _window_mods(p)
    samples = sample_functors(mods, 4, seed=21, max_length=8, indecomposable=True)
    samples.append(g_shift_functor(ctx, samples[0], (1,)))
    rep = check_precovering_report(ctx, samples)
    counts = {k: [sum(v), len(v)] for k, v in rep.items.items()}
    nontrivial = all(n > 0 for _, n in counts.values())
    return rep.ok and nontrivial, {"checks": counts}


def crit10(p: int) -> tuple[bool, dict]:
    g = _gamma_e1(p)
    rep = standard_check(g, mesh_presentation(g))
    return rep.ok and len(rep.pairs) == 100, {"pairs": len(rep.pairs), "unequal": len(rep.unequal)}


def crit11(p: int) -> tuple[bool, dict]:
    s = _mesh("e3-cover", p)
    ctx = _cover("e3-cover", p)
    g = s.gamma
    mod_kinds = [classify_module_kind(ctx, m).kind for m in g.modules]
    ts = sample_functors(g.modules, 12, seed=31, max_length=8, indecomposable=True)
    fun_kinds = [classify_functor_kind(t, s).kind for t in ts]
    ok = all(k == "first" for k in mod_kinds + fun_kinds) and len(ts) == 12
    return ok, {"modules": len(mod_kinds), "functors": len(ts), "kinds": sorted(set(mod_kinds + fun_kinds))}


CRITERIA: list[tuple[int, str, Callable[[int], tuple[bool, dict]], float]] = [
    (1, "e1 indecomposable count is 10", crit1, 5),
    (2, "e1 AR quiver: 10 vertices, multiplicity 1, mesh additivity", crit2, 10),
    (3, "covering dimension identity on the e1 window", crit3, 30),
    (4, "U_lambda second kind, pairwise non-isomorphic, support x4..x7", crit4, 30),
    (5, "Psi(Phi T)(M) = sum_g T(gM)", crit5, 30),
    (6, "Phi exact and faithful", crit6, 30),
    (7, "composition length: formula equals peeling", crit7, 20),
    (8, "periodic line census 1 / 0 / 0", crit8, 20),
    (9, "precovering axioms on window functors", crit9, 60),
    (10, "standardness: 100 hom dimensions agree", crit10, 10),
    (11, "e3 modules and functors are first kind", crit11, 60),
]


def run_criterion(number: int, p: int) -> Outcome:
    num, title, fn, budget = CRITERIA[number - 1]
    start = time.perf_counter()
    try:
        ok, summary = fn(p)
        msg = ""
    except Exception as exc:  # a crash is a failed criterion, reported with its cause
        ok, summary, msg = False, {}, f"{type(exc).__name__}: {exc}"
    secs = time.perf_counter() - start
    if ok and secs > budget:
        ok, msg = False, f"over time budget: {secs:.1f}s"
    return Outcome(num, f"{title} [p={p}]", ok, summary, secs, budget, msg)


def run_all(primes=PRIMES, log: Callable[[str], None] | None = None) -> list[Outcome]:
    """Criteria 1-11 at every prime, then criterion 12 comparing the summaries."""
    by_prime: dict[int, list[Outcome]] = {}
    out: list[Outcome] = []
    for p in primes:
        by_prime[p] = []
        for num, *_ in CRITERIA:
            o = run_criterion(num, p)
            by_prime[p].append(o)
            out.append(o)
            if log:
                log(o.line())
    out.append(two_prime_outcome(by_prime))
    if log:
        log(out[-1].line())
    return out


def two_prime_outcome(by_prime: dict[int, list[Outcome]]) -> Outcome:
    start = time.perf_counter()
    ps = sorted(by_prime)
    diffs = []
    for k in range(len(CRITERIA)):
        rows = [by_prime[p][k] for p in ps]
        if any(r.summary != rows[0].summary or r.ok != rows[0].ok for r in rows[1:]):
            diffs.append(rows[0].number)
    ok = len(ps) >= 2 and not diffs and all(o.ok for p in ps for o in by_prime[p])
    msg = f"differs at {diffs}" if diffs else ""
    return Outcome(12, f"identical results at p in {ps}", ok, {"differences": diffs},
                   time.perf_counter() - start, 1, msg)
