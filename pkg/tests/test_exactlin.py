from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quivcover.algebra import ResidueFieldError, charpoly_mod, is_local, roots_mod
from quivcover.exactlin import (Field, LinAlgError, Matrix, charpoly, det, kernel_basis, left_kernel_basis,
                                rank, solve)

F7 = Field.prime(7)
Q = Field.rationals()


def matrices(field, max_rows=5, max_cols=5):
    if field.p is not None:
        entry = st.integers(0, field.p - 1)
    else:
        entry = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entry, min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: Matrix(field, rows))))


def square(field, n_max=4):
    entry = st.integers(0, field.p - 1) if field.p else st.fractions(min_value=-3, max_value=3, max_denominator=3)
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n)
        .map(lambda rows: Matrix(field, rows)))


def test_field_rejects_composite():
    with pytest.raises(ValueError):
        Field.prime(12)


def test_field_arithmetic_mod_p():
    assert F7(10) == 3
    assert F7.inv(3) * 3 % 7 == 1
    with pytest.raises(ZeroDivisionError):
        F7.inv(0)


def test_rationals_keep_fractions():
    m = Matrix(Q, [[1, 2], [3, 4]])
    inv = m.inverse()
    assert inv.tolist() == [[-2, 1], [Fraction(3, 2), Fraction(-1, 2)]]


@pytest.mark.parametrize("field", [F7, Q], ids=["F7", "Q"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_rank_nullity(field, data):
    m = data.draw(matrices(field))
    k = kernel_basis(m)
    assert rank(m) + k.cols == m.cols
    assert (m @ k).is_zero()


@pytest.mark.parametrize("field", [F7, Q], ids=["F7", "Q"])
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_left_kernel_annihilates(field, data):
    m = data.draw(matrices(field))
    y = left_kernel_basis(m)
    assert (y @ m).is_zero()
    assert y.rows == m.rows - rank(m)


@settings(max_examples=40, deadline=None)
@given(m=matrices(F7), seed=st.integers(0, 10**6))
def test_solve_recovers_consistent_systems(m, seed):
    rng = np.random.default_rng(seed)
    x = Matrix(F7, rng.integers(0, 7, size=(m.cols, 2)))
    b = m @ x
    sol = solve(m, b)
    assert sol is not None and m @ sol == b


@pytest.mark.parametrize("field", [F7, Q], ids=["F7", "Q"])
@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_det_is_multiplicative(field, data):
    a = data.draw(square(field, 3))
    b = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=a.rows, max_size=a.rows),
                           min_size=a.rows, max_size=a.rows).map(lambda r: Matrix(field, r)))
    assert det(a @ b) == field(det(a) * det(b))


@settings(max_examples=30, deadline=None)
@given(a=square(F7, 4))
def test_cayley_hamilton(a):
    cp = list(reversed(charpoly(a)))  # constant term first
    total = Matrix.zeros(F7, a.rows, a.rows)
    for k, c in enumerate(cp):
        total = total + a.power(k).scale(c)
    assert total.is_zero()
    assert [int(x) for x in cp] == charpoly_mod(a)


def test_inverse_of_singular_raises():
    with pytest.raises(LinAlgError):
        Matrix(F7, [[1, 2], [2, 4]]).inverse()


def test_roots_mod():
    # (x - 2)(x - 5) = x^2 - 7x + 10 over F_11, constant term first
    assert sorted(roots_mod([10, -7 % 11, 1], 11)) == [2, 5]


def test_is_local_detects_split_and_residue_field():
    ident = Matrix.identity(F7, 2)
    nil = Matrix(F7, [[0, 1], [0, 0]])
    assert is_local([ident, nil], 2, F7) is True
    e = Matrix(F7, [[1, 0], [0, 0]])
    assert is_local([ident, e], 2, F7) is not True
    # F_49 = F_7[x]/(x^2 + 1) acting on itself: a field bigger than F_7
    j = Matrix(F7, [[0, 6], [1, 0]])
    with pytest.raises(ResidueFieldError):
        is_local([ident, j], 2, F7)
