"""Finite-dimensional matrix algebras over F_p: Fitting splits and locality.

An algebra is handed over as a spanning list of square matrices acting
faithfully on some space (a module's total space, or the left-regular
representation).  Everything here needs a prime field.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactlin import Field, Matrix, column_space, kernel_basis


class ResidueFieldError(ArithmeticError):
    """The algebra is local but its residue field is larger than F_p."""


class BudgetExceeded(RuntimeError):
    pass


def charpoly_mod(m: Matrix) -> list[int]:
    """det(tI - m) over F_p, coefficients lowest degree first."""
    p = m.field.p
    n = m.rows
    if n == 0:
        return [1]
    h = np.array(m.a, dtype=np.int64, copy=True) % p
    big = p > 3037000499
    for c in range(n - 2):
        nz = np.flatnonzero(h[c + 1:, c])
        if nz.size == 0:
            continue
        piv = c + 1 + int(nz[0])
        if piv != c + 1:
            h[[c + 1, piv]] = h[[piv, c + 1]]
            h[:, [c + 1, piv]] = h[:, [piv, c + 1]]
        inv = pow(int(h[c + 1, c]), p - 2, p)
        for i in range(c + 2, n):
            if h[i, c]:
                fac = (int(h[i, c]) * inv) % p
                if big:
                    h[i] = np.array([(int(x) - fac * int(y)) % p for x, y in zip(h[i], h[c + 1])], dtype=np.int64)
                    h[:, c + 1] = np.array([(int(x) + fac * int(y)) % p for x, y in zip(h[:, c + 1], h[:, i])],
                                           dtype=np.int64)
                else:
                    h[i] = (h[i] - fac * h[c + 1]) % p
                    h[:, c + 1] = (h[:, c + 1] + fac * h[:, i]) % p
    hl = h.tolist()
    polys = [[1]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [0] + prev
        d = hl[k - 1][k - 1]
        for i, c in enumerate(prev):
            cur[i] = (cur[i] - d * c) % p
        prod = 1
        for i in range(1, k):
            prod = (prod * hl[k - i][k - i - 1]) % p
            if prod == 0:
                break
            coef = (prod * hl[k - i - 1][k - 1]) % p
            if coef:
                for j, c in enumerate(polys[k - i - 1]):
                    cur[j] = (cur[j] - coef * c) % p
        polys.append(cur)
    return polys[n]


def roots_mod(poly: list[int], p: int) -> list[int]:
    """Roots in F_p of a polynomial given lowest degree first."""
    if p > 1 << 20:
        return sorted({(-f[0]) % p for f in _irreducible_factors(poly, p) if len(f) == 2})
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(poly):
        acc = (acc * xs + c) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


def _root_multiplicity(poly: list[int], r: int, p: int) -> int:
    k = 0
    cur = list(poly)
    while len(cur) > 1:
        # synthetic division by (t - r), highest degree first
        hi = list(reversed(cur))
        out = [hi[0]]
        for c in hi[1:]:
            out.append((c + out[-1] * r) % p)
        if out[-1] != 0:
            break
        k += 1
        cur = list(reversed(out[:-1]))
    return k


def _irreducible_factors(poly: list[int], p: int) -> list[list[int]]:
    from sympy.polys.domains import ZZ
    from sympy.polys.galoistools import gf_factor_sqf, gf_sqf_part

    hi = [int(c) % p for c in reversed(poly)]
    sqf = gf_sqf_part(hi, p, ZZ)
    _, factors = gf_factor_sqf(sqf, p, ZZ)
    return [list(reversed([int(c) for c in f])) for f in factors]


def _poly_eval(poly: list[int], m: Matrix) -> Matrix:
    f = m.field
    acc = Matrix.zeros(f, m.rows, m.cols)
    ident = Matrix.identity(f, m.rows)
    for c in reversed(poly):
        acc = acc @ m + ident.scale(c)
    return acc


@dataclass
class FittingSplit:
    """Complementary subspaces (as column bases) stable under the algebra."""

    kernel: Matrix
    image: Matrix


def fitting_split(phi: Matrix) -> FittingSplit | None:
    """Nontrivial Fitting decomposition of the space under one element, if any."""
    f = phi.field
    n = phi.rows
    if n <= 1:
        return None
    cp = charpoly_mod(phi)
    p = f.p
    rts = roots_mod(cp, p)
    if rts:
        r = rts[0]
        if _root_multiplicity(cp, r, p) == n:
            return None
        shifted = phi - Matrix.scalar(f, n, r)
        psi = shifted.power(n)
        return FittingSplit(kernel_basis(psi), column_space(psi))
    factors = _irreducible_factors(cp, p)
    if len(factors) < 2:
        return None
    psi = _poly_eval(factors[0], phi).power(n)
    return FittingSplit(kernel_basis(psi), column_space(psi))


def _single_eigenvalue(phi: Matrix) -> int | None:
    """The unique F_p eigenvalue of phi if its charpoly is (t - c)^n; raises if the
    charpoly is a power of one irreducible of degree > 1."""
    p = phi.field.p
    n = phi.rows
    cp = charpoly_mod(phi)
    rts = roots_mod(cp, p)
    if rts:
        if len(rts) == 1 and _root_multiplicity(cp, rts[0], p) == n:
            return rts[0]
        return None
    if len(_irreducible_factors(cp, p)) == 1:
        raise ResidueFieldError("endomorphism algebra has a residue field larger than F_p")
    return None


def is_local(basis: Sequence[Matrix], n: int, field: Field) -> bool | Matrix:
    """True when span(basis) is local with residue field F_p.

    Returns False-like splitting information as a matrix element with a
    nontrivial Fitting decomposition when one is found among the basis.
    """
    if n == 0:
        return False
    rad = []
    for b in basis:
        c = _single_eigenvalue(b)
        if c is None:
            return b
        rad.append(b - Matrix.scalar(field, n, c))
    rad = [r for r in rad if not r.is_zero()]
    layer = rad
    for _ in range(n + 1):
        if not layer:
            return True
        prods = [x @ y for x in layer for y in rad]
        prods = [x for x in prods if not x.is_zero()]
        if not prods:
            return True
        stacked = Matrix.hstack(field, [Matrix(field, x.a.reshape(-1, 1)) for x in prods])
        cs = column_space(stacked)
        layer = [Matrix(field, cs.a[:, j].reshape(n, n)) for j in range(cs.cols)]
    return False


def find_split(basis: Sequence[Matrix], n: int, field: Field, rng: np.random.Generator,
               tries: int = 6) -> FittingSplit | None:
    """Search the algebra for an element with a nontrivial Fitting decomposition.

    Returns None only when the algebra is certified local.
    """
    if not basis:
        raise ValueError("empty algebra")
    for _ in range(tries):
        phi = Matrix.zeros(field, n, n)
        for b in basis:
            c = field.random_element(rng)
            if c:
                phi = phi + b.scale(c)
        s = fitting_split(phi)
        if s is not None:
            return s
    verdict = is_local(basis, n, field)
    if verdict is True:
        return None
    if isinstance(verdict, Matrix):
        s = fitting_split(verdict)
        if s is not None:
            return s
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            for c in range(1, 4):
                s = fitting_split(basis[i] + basis[j].scale(c))
                if s is not None:
                    return s
    raise BudgetExceeded("no splitting element found for a non-local algebra")
