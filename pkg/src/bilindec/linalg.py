"""Exact dense linear algebra over Q.

Small immutable matrices of Fractions (the library never goes past 8x8),
polynomials over Q, Berkowitz characteristic polynomials, invariant factors
through the Smith normal form of ``XI - M`` over Q[X], and explicit
similarity conjugators.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from .config import SEED
from .exact import format_rational, to_rational


class QMatrix:
    """Immutable rows x cols matrix of Fractions."""

    __slots__ = ("rows", "cols", "_e", "_hash")

    def __init__(self, entries: Iterable[Iterable]):
        data = tuple(tuple(to_rational(x) for x in row) for row in entries)
        if not data or not data[0]:
            raise ValueError("matrix needs at least one row and one column")
        if any(len(r) != len(data[0]) for r in data):
            raise ValueError("ragged matrix rows")
        self._e = data
        self.rows = len(data)
        self.cols = len(data[0])
        self._hash = None

    @classmethod
    def _raw(cls, data: tuple) -> QMatrix:
        m = object.__new__(cls)
        m._e = data
        m.rows = len(data)
        m.cols = len(data[0])
        m._hash = None
        return m

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls.diag(*([1] * n))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> QMatrix:
        cols = rows if cols is None else cols
        return cls._raw(tuple((Fraction(0),) * cols for _ in range(rows)))

    @classmethod
    def diag(cls, *values) -> QMatrix:
        n = len(values)
        vals = [to_rational(v) for v in values]
        return cls._raw(tuple(tuple(vals[i] if i == j else Fraction(0) for j in range(n))
                              for i in range(n)))

    # -- access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._e[i][j]
        return self._e[idx]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._e]

    def column(self, j: int) -> list[Fraction]:
        return [r[j] for r in self._e]

    @property
    def T(self) -> QMatrix:
        return QMatrix._raw(tuple(zip(*self._e)))

    # -- arithmetic -----------------------------------------------------------

    def _same_shape(self, other: QMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: QMatrix) -> QMatrix:
        self._same_shape(other)
        return QMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                  for r, s in zip(self._e, other._e)))

    def __sub__(self, other: QMatrix) -> QMatrix:
        self._same_shape(other)
        return QMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                  for r, s in zip(self._e, other._e)))

    def __neg__(self) -> QMatrix:
        return QMatrix._raw(tuple(tuple(-a for a in r) for r in self._e))

    def __mul__(self, scalar) -> QMatrix:
        if isinstance(scalar, QMatrix):
            raise TypeError("use @ for matrix products")
        c = to_rational(scalar)
        return QMatrix._raw(tuple(tuple(a * c for a in r) for r in self._e))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> QMatrix:
        return self * (1 / to_rational(scalar))

    def __matmul__(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = tuple(zip(*other._e))
        return QMatrix._raw(tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0))
                                        for c in cols) for r in self._e))

    def __pow__(self, k: int) -> QMatrix:
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        out, base = QMatrix.identity(self.rows), self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self._e == other._e

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._e)
        return self._hash

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._e for x in r)

    def is_scalar(self) -> bool:
        return self.is_square and self == QMatrix.identity(self.rows) * self._e[0][0]

    def trace(self) -> Fraction:
        return sum((self._e[i][i] for i in range(min(self.shape))), Fraction(0))

    # -- convenience wrappers -------------------------------------------------

    def det(self) -> Fraction:
        return det(self)

    def inv(self) -> QMatrix:
        return inverse(self)

    def charpoly(self) -> QPoly:
        return charpoly(self)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self._e]

    @classmethod
    def from_json(cls, data: Sequence[Sequence]) -> QMatrix:
        return cls(data)

    def __repr__(self) -> str:
        return f"QMatrix({self.to_json()})"


def as_matrix(m) -> QMatrix:
    return m if isinstance(m, QMatrix) else QMatrix(m)


# -- polynomials --------------------------------------------------------------

class QPoly:
    """Polynomial over Q; coefficients stored lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [to_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def from_roots(cls, *roots) -> QPoly:
        out = cls([1])
        for r in roots:
            out = out * cls([-to_rational(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QPoly([other])
        return isinstance(other, QPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: QPoly) -> QPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly(self[k] + other[k] for k in range(n))

    def __sub__(self, other: QPoly) -> QPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        return QPoly(self[k] - other[k] for k in range(n))

    def __neg__(self) -> QPoly:
        return QPoly(-c for c in self.coeffs)

    def __mul__(self, other) -> QPoly:
        if not isinstance(other, QPoly):
            c = to_rational(other)
            return QPoly(x * c for x in self.coeffs)
        if not self or not other:
            return QPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other: QPoly) -> tuple[QPoly, QPoly]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        q = [Fraction(0)] * max(len(rem) - dq, 0)
        inv_lead = 1 / other.lead
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] * inv_lead
            if c:
                q[k - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[k - dq + j] -= c * b
        return QPoly(q), QPoly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other: QPoly) -> QPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: QPoly) -> QPoly:
        return divmod(self, other)[1]

    def monic(self) -> QPoly:
        if not self:
            return self
        return self * (1 / self.lead)

    def __call__(self, x):
        """Evaluate at a rational or (Horner) at a square matrix."""
        if isinstance(x, QMatrix):
            n = x.rows
            acc = QMatrix.zeros(n)
            ident = QMatrix.identity(n)
            for c in reversed(self.coeffs):
                acc = acc @ x + ident * c
            return acc
        x = to_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reciprocal(self) -> QPoly:
        """``X^deg * p(1/X)``."""
        return QPoly(reversed(self.coeffs))

    def is_palindromic(self) -> bool:
        """``p = p(0)^{-1} X^deg p(1/X)``, the shape forced on an asymmetry."""
        if not self or self[0] == 0:
            return False
        return self.reciprocal() * (1 / self[0]) == self

    def __repr__(self) -> str:
        return f"QPoly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    while b:
        a, b = b, a % b
    return a.monic()


# -- determinant, inverse, solving --------------------------------------------

def _require_square(M: QMatrix) -> None:
    if not M.is_square:
        raise ValueError(f"expected a square matrix, got {M.shape}")


def det(M: QMatrix) -> Fraction:
    _require_square(M)
    a = M.tolist()
    n = len(a)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for r in range(c + 1, n):
            f = a[r][c] / p
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return result * sign


def inverse(M: QMatrix) -> QMatrix:
    _require_square(M)
    n = M.rows
    a = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M.tolist())]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix has no inverse")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return QMatrix._raw(tuple(tuple(r[n:]) for r in a))


def rref(M: QMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; the pivot in each column is the first
    nonzero entry at or below the current row."""
    a = M.tolist()
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def nullspace(M: QMatrix) -> list[list[Fraction]]:
    """Basis of {v : M v = 0}, one vector per free column."""
    a, pivots = rref(M)
    cols = M.cols
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        basis.append(v)
    return basis


# -- characteristic polynomial ------------------------------------------------

def charpoly(M: QMatrix) -> QPoly:
    """``det(XI - M)`` by Berkowitz' division-free algorithm."""
    _require_square(M)
    n = M.rows
    vect = [Fraction(1)]  # high -> low coefficients of the leading k x k block
    for k in range(n):
        a_kk = M[k, k]
        row = [M[k, j] for j in range(k)]
        col = [M[i, k] for i in range(k)]
        q = [Fraction(1), -a_kk]
        x = col
        for _ in range(k):
            q.append(-sum((r * c for r, c in zip(row, x)), Fraction(0)))
            x = [sum((M[i, j] * x[j] for j in range(k)), Fraction(0)) for i in range(k)]
        vect = [sum((q[i - j] * vect[j] for j in range(min(i, k) + 1) if i - j < len(q)),
                    Fraction(0)) for i in range(k + 2)]
    return QPoly(reversed(vect))


# -- Kronecker product ----------------------------------------------------------

def kron(M: QMatrix, N: QMatrix) -> QMatrix:
    """Kronecker product; rows are ordered (i, k) -> i*N.rows + k, which in
    dimension 2x2 is the basis (e1(x)e1, e1(x)e2, e2(x)e1, e2(x)e2)."""
    return QMatrix._raw(tuple(
        tuple(M[i, j] * N[k, l] for j in range(M.cols) for l in range(N.cols))
        for i in range(M.rows) for k in range(N.rows)))


# -- Smith normal form over Q[X] ------------------------------------------------

def invariant_factors(M: QMatrix) -> list[QPoly]:
    """Nontrivial invariant factors of M: monic, each dividing the next,
    product equal to the characteristic polynomial."""
    _require_square(M)
    n = M.rows
    X = QPoly([0, 1])
    A = [[(X if i == j else QPoly()) - QPoly([M[i, j]]) for j in range(n)] for i in range(n)]
    diag: list[QPoly] = []
    for k in range(n):
        while True:
            best = None
            for i in range(k, n):
                for j in range(k, n):
                    if A[i][j] and (best is None or A[i][j].degree < A[best[0]][best[1]].degree):
                        best = (i, j)
            if best is None:  # cannot happen: det(XI - M) != 0
                raise ArithmeticError("characteristic matrix is singular")
            i, j = best
            A[k], A[i] = A[i], A[k]
            for row in A:
                row[k], row[j] = row[j], row[k]
            piv = A[k][k]
            dirty = False
            for i in range(k + 1, n):
                if A[i][k]:
                    q, r = divmod(A[i][k], piv)
                    A[i] = [a - q * b for a, b in zip(A[i], A[k])]
                    dirty = dirty or bool(r)
            for j in range(k + 1, n):
                if A[k][j]:
                    q, r = divmod(A[k][j], piv)
                    for row in A:
                        row[j] = row[j] - q * row[k]
                    dirty = dirty or bool(r)
            if dirty:
                continue
            bad = next(((i, j) for i in range(k + 1, n) for j in range(k + 1, n)
                        if A[i][j] % piv), None)
            if bad is not None:
                A[k] = [a + b for a, b in zip(A[k], A[bad[0]])]
                continue
            break
        diag.append(A[k][k].monic())
    return [d for d in diag if d.degree >= 1]


# -- similarity -----------------------------------------------------------------

def intertwiners(A: QMatrix, B: QMatrix) -> list[QMatrix]:
    """Basis of {X : B X = X A}."""
    n = A.rows
    eqs = []
    for i, j in product(range(n), repeat=2):
        row = [Fraction(0)] * (n * n)
        for k in range(n):
            row[k * n + j] += B[i, k]
            row[i * n + k] -= A[k, j]
        eqs.append(row)
    basis = nullspace(QMatrix._raw(tuple(tuple(r) for r in eqs)))
    return [QMatrix._raw(tuple(tuple(v[i * n:(i + 1) * n]) for i in range(n))) for v in basis]


def conjugator(A: QMatrix, B: QMatrix) -> QMatrix | None:
    """An invertible P with ``B = P A P^{-1}``, or None if A and B are not similar.

    Similarity is decided by invariant factors.  P is then an invertible
    element of the solution space of ``B X = X A``: basis elements first,
    then seeded pseudo-random integer combinations, so the result depends
    only on (A, B).
    """
    _require_square(A)
    _require_square(B)
    if A.shape != B.shape:
        raise ValueError("conjugator needs matrices of equal size")
    n = A.rows
    if A == B:
        return QMatrix.identity(n)
    if invariant_factors(A) != invariant_factors(B):
        return None
    basis = intertwiners(A, B)
    for X in basis:
        if det(X) != 0:
            return X
    rng = random.Random(SEED)
    spread = 2
    while True:
        for _ in range(8):
            coeffs = [rng.randint(-spread, spread) for _ in basis]
            X = QMatrix.zeros(n)
            for c, Y in zip(coeffs, basis):
                if c:
                    X = X + Y * c
            if det(X) != 0:
                return X
        spread *= 2
