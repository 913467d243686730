import itertools

import pytest

from quivcover.exactlin import Field, Matrix
from quivcover.repmod import Representation, end_basis, is_indecomposable
from quivcover.strings import (CapTooSmallError, UnsupportedPresentationError, band_module, detect_special_biserial,
                               enumerate_strings, string_module)
from quivcover.textio import parse_presentation

F3 = Field.prime(3)


def _has_nontrivial_idempotent(m: Representation) -> bool:
    """Enumerate all of End(m) over the small prime field."""
    basis = [e.total() for e in end_basis(m)]
    n = m.dim
    one = Matrix.identity(m.field, n)
    zero = Matrix.zeros(m.field, n, n)
    for coeffs in itertools.product(range(m.field.p), repeat=len(basis)):
        e = zero
        for c, b in zip(coeffs, basis):
            e = e + b.scale(c)
        if e @ e == e and e != zero and e != one:
            return True
    return False


def _all_matrices(rows, cols):
    for entries in itertools.product(range(3), repeat=rows * cols):
        yield [list(entries[i * cols:(i + 1) * cols]) for i in range(rows)]


def test_a2_oracle_counts_three_indecomposables():
    p = parse_presentation("field p=3\nvertex 1\nvertex 2\narrow a : 1 -> 2\n")
    classes = set()
    for d1, d2 in itertools.product(range(3), repeat=2):
        if d1 + d2 == 0:
            continue
        for a in _all_matrices(d2, d1):
            m = Representation(p, {"1": d1, "2": d2}, {"a": a})
            if not _has_nontrivial_idempotent(m):
                # over a field, (dims, rank) determines a representation of a single arrow
                classes.add((d1, d2, m.maps["a"].rank()))
    assert len(classes) == 3
    rep = enumerate_strings(p)
    assert len(rep.strings) == 3 and rep.representation_finite


def test_loop_oracle_counts_two_indecomposables():
    p = parse_presentation("field p=3\nvertex 0\narrow x : 0 -> 0\nrelation x.x\n")
    classes = set()
    for d in range(1, 4):
        for a in _all_matrices(d, d):
            mat = Matrix(F3, a)
            if not (mat @ mat).is_zero():
                continue
            m = Representation(p, {"0": d}, {"x": mat})
            if not _has_nontrivial_idempotent(m):
                classes.add((d, mat.rank()))
    assert classes == {(1, 0), (2, 1)}
    assert len(enumerate_strings(p).strings) == 2


def test_single_vertex():
    p = parse_presentation("vertex 0\n")
    rep = enumerate_strings(p)
    assert [str(w) for w in rep.strings] == ["e_0"]


def test_e1_is_representation_finite(e1_algebra):
    rep = enumerate_strings(e1_algebra)
    assert len(rep.strings) == 10 and not rep.bands
    assert all(is_indecomposable(string_module(e1_algebra, w)) for w in rep.strings)


def test_kronecker_band_modules():
    p = parse_presentation("vertex 1\nvertex 2\narrow a : 1 -> 2\narrow b : 1 -> 2\n")
    rep = enumerate_strings(p, cap=3)
    assert len(rep.bands) == 1
    for lam in (1, 2, 5):
        assert is_indecomposable(band_module(p, rep.bands[0], Matrix(p.field, [[lam]])))
    with pytest.raises(ValueError):
        band_module(p, rep.bands[0], Matrix(p.field, [[0]]))


def test_cap_too_small_for_kronecker():
    p = parse_presentation("vertex 1\nvertex 2\narrow a : 1 -> 2\narrow b : 1 -> 2\n")
    rep = enumerate_strings(p, cap=3)
    assert rep.bands
    with pytest.raises(CapTooSmallError):
        enumerate_strings(parse_presentation("vertex 0\narrow x : 0 -> 0\nrelation x.x.x.x.x.x\n"), cap=2)


def test_non_special_biserial_refused():
    p = parse_presentation("vertex 0\nvertex 1\nvertex 2\nvertex 3\n"
                           "arrow a : 0 -> 1\narrow b : 0 -> 2\narrow c : 0 -> 3\n")
    rep = detect_special_biserial(p)
    assert not rep and "3 outgoing" in rep.witnesses[0]
    with pytest.raises(UnsupportedPresentationError):
        enumerate_strings(p)


def test_commutativity_relation_refused():
    p = parse_presentation("vertex 1\nvertex 2\nvertex 3\nvertex 4\narrow a : 1 -> 2\narrow b : 1 -> 3\n"
                           "arrow c : 2 -> 4\narrow d : 3 -> 4\nrelation a.c - b.d\n")
    with pytest.raises(UnsupportedPresentationError, match="monomial"):
        enumerate_strings(p)
