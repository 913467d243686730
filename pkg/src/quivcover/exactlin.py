"""Exact dense linear algebra over prime fields and the rationals.

Matrices over F_p are stored as int64 numpy arrays with entries in [0, p);
matrices over Q are numpy object arrays of :class:`fractions.Fraction`.
Elimination picks the first nonzero entry in column order, so echelon forms
and kernel bases are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import numpy as np

_INT64_MAX = (1 << 63) - 1


class LinAlgError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class Field:
    """F_p for a prime ``p < 2**31``, or Q when ``p`` is None."""

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            if not (2 <= self.p < 2**31) or not _is_prime(self.p):
                raise ValueError(f"field characteristic must be a prime < 2^31, got {self.p}")

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @classmethod
    def rationals(cls) -> "Field":
        return cls(None)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def dtype(self):
        return np.int64 if self.p is not None else object

    def __call__(self, x) -> int | Fraction:
        if isinstance(x, np.generic):
            x = x.item()
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        x = self(x)
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.p is None:
            return 1 / x
        return pow(x, self.p - 2, self.p)

    def elements(self) -> Iterable[int]:
        if self.p is None:
            raise ValueError("Q is infinite")
        return range(self.p)

    def random_element(self, rng: np.random.Generator):
        if self.p is None:
            return Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
        return int(rng.integers(0, self.p))

    def __str__(self) -> str:
        return "rationals" if self.p is None else f"p={self.p}"


QQ = Field(None)


def _as_array(field: Field, data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    if isinstance(data, np.ndarray) and data.ndim == 2:
        arr = data
    else:
        data = list(data)
        if rows is None:
            rows = len(data)
        if rows == 0:
            arr = np.zeros((0, cols or 0), dtype=object)
        else:
            arr = np.array([list(r) for r in data], dtype=object)
            if arr.ndim != 2:
                arr = arr.reshape(rows, -1)
    if field.p is None:
        out = np.empty(arr.shape, dtype=object)
        flat = arr.ravel()
        out.ravel()[:] = [Fraction(x.item() if isinstance(x, np.generic) else x) for x in flat]
        return out
    if arr.dtype == object:
        return np.array([[field(x) for x in row] for row in arr], dtype=np.int64).reshape(arr.shape)
    return np.mod(arr.astype(np.int64, copy=False), field.p)


class Matrix:
    """Immutable matrix over a :class:`Field`."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, data, rows: int | None = None, cols: int | None = None):
        a = _as_array(field, data, rows, cols)
        if rows is not None and a.shape[0] != rows:
            raise LinAlgError("row count mismatch")
        if cols is not None and a.shape[1] != cols:
            if a.size == 0:
                a = a.reshape(a.shape[0], cols)
            else:
                raise LinAlgError("column count mismatch")
        a.flags.writeable = False
        self.field = field
        self.a = a

    @classmethod
    def _wrap(cls, field: Field, a: np.ndarray) -> "Matrix":
        m = object.__new__(cls)
        a.flags.writeable = False
        m.field = field
        m.a = a
        return m

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Matrix":
        if field.p is None:
            a = np.full((rows, cols), Fraction(0), dtype=object)
        else:
            a = np.zeros((rows, cols), dtype=np.int64)
        return cls._wrap(field, a)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        m = cls.zeros(field, n, n).a.copy()
        for i in range(n):
            m[i, i] = field(1)
        return cls._wrap(field, m)

    @classmethod
    def scalar(cls, field: Field, n: int, c) -> "Matrix":
        m = cls.zeros(field, n, n).a.copy()
        for i in range(n):
            m[i, i] = field(c)
        return cls._wrap(field, m)

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], rows: int) -> "Matrix":
        if not cols:
            return cls.zeros(field, rows, 0)
        return cls(field, np.array([list(c) for c in cols], dtype=object).T if field.p is None
                   else np.array([list(c) for c in cols], dtype=np.int64).T, rows=rows)

    @classmethod
    def block_diag(cls, field: Field, blocks: Sequence["Matrix"]) -> "Matrix":
        r = sum(b.rows for b in blocks)
        c = sum(b.cols for b in blocks)
        out = cls.zeros(field, r, c).a.copy()
        i = j = 0
        for b in blocks:
            out[i:i + b.rows, j:j + b.cols] = b.a
            i += b.rows
            j += b.cols
        return cls._wrap(field, out)

    @classmethod
    def hstack(cls, field: Field, mats: Sequence["Matrix"], rows: int | None = None) -> "Matrix":
        mats = list(mats)
        if not mats:
            return cls.zeros(field, rows or 0, 0)
        return cls._wrap(field, np.concatenate([m.a for m in mats], axis=1))

    @classmethod
    def vstack(cls, field: Field, mats: Sequence["Matrix"], cols: int | None = None) -> "Matrix":
        mats = list(mats)
        if not mats:
            return cls.zeros(field, 0, cols or 0)
        return cls._wrap(field, np.concatenate([m.a for m in mats], axis=0))

    # basic protocol -------------------------------------------------------
    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.tolist()})"

    def tolist(self) -> list[list]:
        return [[x for x in row] for row in self.a.tolist()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self.a == other.a))

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.a.ravel().tolist())))

    def __getitem__(self, idx):
        return self.a[idx]

    def is_zero(self) -> bool:
        return self.a.size == 0 or not np.any(self.a != 0)

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.field, self.a.T.copy())

    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise LinAlgError("field mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise LinAlgError(f"shape mismatch {self.shape} vs {other.shape}")
        s = self.a + other.a
        if self.field.p is not None:
            s %= self.field.p
        return Matrix._wrap(self.field, s)

    def __neg__(self) -> "Matrix":
        s = -self.a
        if self.field.p is not None:
            s %= self.field.p
        return Matrix._wrap(self.field, s)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        s = self.a * c
        if self.field.p is not None:
            s %= self.field.p
        return Matrix._wrap(self.field, s)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise LinAlgError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.p
        if p is None:
            if self.rows == 0 or other.cols == 0 or self.cols == 0:
                return Matrix.zeros(self.field, self.rows, other.cols)
            return Matrix._wrap(self.field, self.a.dot(other.a))
        return Matrix._wrap(self.field, _matmul_mod(self.a, other.a, p))

    def power(self, n: int) -> "Matrix":
        result = Matrix.identity(self.field, self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def submatrix(self, rows=None, cols=None) -> "Matrix":
        a = self.a
        if rows is not None:
            a = a[list(rows), :]
        if cols is not None:
            a = a[:, list(cols)]
        return Matrix._wrap(self.field, a.copy())

    def column(self, j: int) -> list:
        return self.a[:, j].tolist()

    # elimination-based operations -------------------------------------------
    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form (nonzero rows only) and pivot columns."""
        r, piv = _rref(self.field, self.a)
        return Matrix._wrap(self.field, r), piv

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise LinAlgError("inverse of non-square matrix")
        x = solve(self, Matrix.identity(self.field, self.rows))
        if x is None or self.rank() != self.rows:
            raise LinAlgError("matrix is singular")
        return x

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    k = a.shape[1]
    if k == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    chunk = max(1, _INT64_MAX // ((p - 1) ** 2 + 1))
    if chunk >= k:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(0, k, chunk):
        out = (out + (a[:, i:i + chunk] @ b[i:i + chunk, :]) % p) % p
    return out


def _rref_mod(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    big = p > 3037000499  # p*p would overflow int64 in the outer product
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p if not big else np.array(
                [(int(x) * inv) % p for x in a[r]], dtype=np.int64)
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            if big:
                for k in nzr:
                    f = int(col[k])
                    a[k] = np.array([(int(x) - f * int(y)) % p for x, y in zip(a[k], a[r])], dtype=np.int64)
            else:
                a[nzr] = (a[nzr] - np.outer(col[nzr], a[r]) % p) % p
        pivots.append(c)
        r += 1
    return a[:r].copy(), pivots


def _bareiss_echelon(a: np.ndarray) -> tuple[list[list[int]], list[int]]:
    """Fraction-free forward elimination on an integer matrix."""
    m = [list(row) for row in a.tolist()]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            mi, mr = m[i], m[r]
            m[i] = [(mr[c] * mi[j] - mi[c] * mr[j]) // prev for j in range(cols)]
        prev = m[r][c]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _rref_q(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    rows, cols = a.shape
    if rows == 0 or cols == 0:
        return np.empty((0, cols), dtype=object), []
    ints = []
    for row in a.tolist():
        den = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(v).denominator for v in row), 1)
        ints.append([int(Fraction(v) * den) for v in row])
    ech, pivots = _bareiss_echelon(np.array(ints, dtype=object))
    out = [[Fraction(v, row[c]) for v in row] for row, c in zip(ech, pivots)]
    for k in range(len(out) - 1, -1, -1):
        c = pivots[k]
        for i in range(k):
            f = out[i][c]
            if f:
                out[i] = [x - f * y for x, y in zip(out[i], out[k])]
    arr = np.empty((len(out), cols), dtype=object)
    for i, row in enumerate(out):
        arr[i, :] = row
    return arr, pivots


def _rref(field: Field, a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    if field.p is None:
        return _rref_q(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64), []
    return _rref_mod(a, field.p)


def rank(m: Matrix) -> int:
    """Rank of ``m`` as a linear map."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.p is None:
        return len(_rref_q(m.a)[1])
    return len(_rref_mod(m.a, m.field.p)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning ker(m); one column per non-pivot column of m."""
    return kernel_with_free(m)[0]


def kernel_with_free(m: Matrix) -> tuple[Matrix, list[int]]:
    """Kernel basis plus the free coordinates on which it restricts to the identity."""
    f = m.field
    n = m.cols
    r, piv = _rref(f, m.a)
    pivset = set(piv)
    free = [j for j in range(n) if j not in pivset]
    out = Matrix.zeros(f, n, len(free)).a.copy()
    one = f(1)
    for k, j in enumerate(free):
        out[j, k] = one
        for i, pc in enumerate(piv):
            v = r[i, j]
            if v != 0:
                out[pc, k] = -v % f.p if f.p is not None else -v
    return Matrix._wrap(f, out), free


def left_kernel_basis(m: Matrix) -> Matrix:
    """Rows spanning {y : y m = 0}."""
    return kernel_basis(m.T).T


def column_space(m: Matrix) -> Matrix:
    """A basis of the column space, taken from the pivot columns of m."""
    _, piv = _rref(m.field, m.a)
    return m.submatrix(cols=piv)


def solve(a: Matrix, b: Matrix) -> Matrix | None:
    """Some x with a x = b, or None when no solution exists."""
    if a.rows != b.rows:
        raise LinAlgError(f"dimension mismatch: {a.shape} vs {b.shape}")
    f = a.field
    n = a.cols
    aug = np.concatenate([a.a, b.a], axis=1)
    r, piv = _rref(f, aug)
    if any(c >= n for c in piv):
        return None
    x = Matrix.zeros(f, n, b.cols).a.copy()
    for i, c in enumerate(piv):
        x[c, :] = r[i, n:]
    return Matrix._wrap(f, x)


def cokernel_projection(m: Matrix) -> tuple[Matrix, int]:
    """A full-row-rank P with P m = 0 and ker P = im m, plus its row count."""
    p = left_kernel_basis(m)
    return p, p.rows


def complement_basis(sub: Matrix, n: int) -> list[int]:
    """Indices of standard basis vectors completing the columns of ``sub`` to a basis of F^n."""
    f = sub.field
    ident = Matrix.identity(f, n)
    stacked = Matrix.hstack(f, [sub, ident]) if sub.cols else ident
    _, piv = _rref(f, stacked.a)
    return [c - sub.cols for c in piv if c >= sub.cols]


def vec(field: Field, values: Sequence) -> Matrix:
    """Column vector."""
    return Matrix(field, [[v] for v in values], rows=len(values), cols=1)


def det(m: Matrix):
    if m.rows != m.cols:
        raise LinAlgError("determinant of non-square matrix")
    f = m.field
    n = m.rows
    if n == 0:
        return f(1)
    a = [list(row) for row in m.a.tolist()]
    sign = 1
    d = f(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return f(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        inv = f.inv(a[c][c])
        d = f(d * a[c][c])
        for i in range(c + 1, n):
            if a[i][c] != 0:
                fac = f(a[i][c] * inv)
                a[i] = [f(x - fac * y) for x, y in zip(a[i], a[c])]
    return f(d * sign)


def charpoly(m: Matrix) -> list:
    """Characteristic polynomial det(tI - m), coefficients highest degree first.

    Hessenberg reduction followed by the minor recurrence; valid in any characteristic.
    """
    f = m.field
    n = m.rows
    if n == 0:
        return [f(1)]
    h = [list(row) for row in m.a.tolist()]
    # reduce to upper Hessenberg form by similarity
    for c in range(n - 2):
        piv = next((i for i in range(c + 1, n) if h[i][c] != 0), None)
        if piv is None:
            continue
        if piv != c + 1:
            h[c + 1], h[piv] = h[piv], h[c + 1]
            for row in h:
                row[c + 1], row[piv] = row[piv], row[c + 1]
        inv = f.inv(h[c + 1][c])
        for i in range(c + 2, n):
            if h[i][c] != 0:
                fac = f(h[i][c] * inv)
                h[i] = [f(x - fac * y) for x, y in zip(h[i], h[c + 1])]
                for row in h:
                    row[c + 1] = f(row[c + 1] + fac * row[i])
    # recurrence on leading principal minors; polynomials stored lowest degree first
    polys = [[f(1)]]
    for k in range(1, n + 1):
        prev = polys[k - 1]
        cur = [f(0)] + prev
        cur = [f(c - h[k - 1][k - 1] * (prev[i] if i < len(prev) else 0)) for i, c in enumerate(cur)]
        prod = f(1)
        for i in range(1, k):
            prod = f(prod * h[k - i][k - i - 1])
            coef = f(prod * h[k - i - 1][k - 1])
            if coef != 0:
                q = polys[k - i - 1]
                for j, c in enumerate(q):
                    cur[j] = f(cur[j] - coef * c)
        polys.append(cur)
    return list(reversed(polys[n]))
