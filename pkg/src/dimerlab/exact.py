"""Exact linear algebra over the rationals and over Laurent polynomials in q.

Rationals are :class:`fractions.Fraction`.  Matrices are plain sequences of
rows; numpy ``object`` arrays of Fractions are accepted everywhere a matrix is.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from ._parallel import pmap
from .errors import DegreeBoundExceeded, NonSquare, Singular


def _rows(M) -> list[list]:
    rows = [list(r) for r in M]
    for r in rows:
        if len(r) != len(rows):
            raise NonSquare(f"expected a square matrix, got {len(rows)} rows of length {len(r)}")
    return rows


def _bareiss(a: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination on an integer matrix (destroys ``a``)."""
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def det_rational(M) -> Fraction:
    """Exact determinant of a square rational matrix.

    Each row is scaled to integers by the lcm of its denominators, then the
    integer matrix goes through Bareiss elimination.
    """
    rows = _rows(M)
    if not rows:
        return Fraction(1)
    scale = 1
    ints = []
    for r in rows:
        r = [Fraction(x) for x in r]
        den = math.lcm(*(x.denominator for x in r))
        scale *= den
        ints.append([x.numerator * (den // x.denominator) for x in r])
    return Fraction(_bareiss(ints), scale)


def invert_rational(M) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan elimination."""
    rows = _rows(M)
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] != 0), None)
        if piv is None:
            raise Singular("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        pr = [x * inv for x in aug[c]]
        aug[c] = pr
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                row = aug[r]
                aug[r] = [x - f * y for x, y in zip(row, pr)]
    return [r[n:] for r in aug]


def rank_rational(M) -> int:
    rows = [[Fraction(x) for x in r] for r in M]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        p = rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][c] != 0:
                f = rows[r][c] / p[c]
                rows[r] = [x - f * y for x, y in zip(rows[r], p)]
        rank += 1
    return rank


def matmul(A, B) -> list[list]:
    Bt = list(zip(*B))
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in Bt] for row in A]


def solve_rational(A, b) -> list[Fraction]:
    """Solve ``A x = b`` exactly for square nonsingular ``A``."""
    inv = invert_rational(A)
    return [sum((x * y for x, y in zip(row, b)), Fraction(0)) for row in inv]


def solve_overdetermined(A, b) -> list[Fraction]:
    """Exact solution of a consistent system with full column rank.

    Extra equations act as a certificate: :class:`Singular` is raised when
    the columns are dependent, ``ValueError`` when the system is inconsistent.
    """
    rows = [[Fraction(x) for x in r] + [Fraction(y)] for r, y in zip(A, b)]
    ncols = len(rows[0]) - 1 if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(c, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            raise Singular("columns are linearly dependent at the sample points")
        rows[c], rows[piv] = rows[piv], rows[c]
        p = rows[c]
        inv = 1 / p[c]
        p = rows[c] = [x * inv for x in p]
        for r in range(len(rows)):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], p)]
    if any(r[-1] != 0 for r in rows[ncols:]):
        raise ValueError("overdetermined system is inconsistent")
    return [rows[c][-1] for c in range(ncols)]


def det_float(M) -> complex:
    """Double-precision determinant; for large numeric block matrices."""
    a = np.asarray(M, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare("expected a square matrix")
    return complex(np.linalg.det(a))


# ---------------------------------------------------------------------------
# Laurent polynomials in one variable


class LaurentPoly:
    """Sparse Laurent polynomial in ``q`` with rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        c = {}
        for k, v in (coeffs or {}).items():
            v = Fraction(v)
            if v:
                c[int(k)] = v
        self.coeffs = dict(sorted(c.items()))

    @classmethod
    def monomial(cls, k: int, c=1) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def coerce(cls, x) -> "LaurentPoly":
        return x if isinstance(x, LaurentPoly) else cls({0: x})

    @property
    def low(self) -> int | None:
        return next(iter(self.coeffs), None)

    @property
    def high(self) -> int | None:
        return next(reversed(self.coeffs), None) if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs.items()))

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c.get(k, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        other = LaurentPoly.coerce(other)
        c: dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                c[i + j] = c.get(i + j, 0) + a * b
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Division by a nonzero constant or a single monomial."""
        other = LaurentPoly.coerce(other)
        if len(other.coeffs) != 1:
            raise ValueError("can only divide by a monomial")
        ((k, c),) = other.coeffs.items()
        return LaurentPoly({i - k: v / c for i, v in self.coeffs.items()})

    def __rtruediv__(self, other):
        return LaurentPoly.coerce(other) / self

    def __call__(self, q):
        """Evaluate at ``q`` (Fraction, int, float or complex)."""
        if isinstance(q, (int, Fraction)):
            q = Fraction(q)
            return sum((v * q**k for k, v in self.coeffs.items()), Fraction(0))
        return sum(v * q**k for k, v in self.coeffs.items())

    def invert_variable(self) -> "LaurentPoly":
        """Substitute ``q -> 1/q``."""
        return LaurentPoly({-k: v for k, v in self.coeffs.items()})

    def is_palindromic(self) -> bool:
        return self == self.invert_variable()

    def __repr__(self):
        return f"LaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v} q^{k}" for k, v in self.coeffs.items())

    def to_json(self) -> str:
        return str(self)


def _leibniz(rows: list[list[LaurentPoly]]) -> LaurentPoly:
    n = len(rows)
    total = LaurentPoly()
    for perm in itertools.permutations(range(n)):
        term = LaurentPoly({0: 1})
        for i, j in enumerate(perm):
            x = rows[i][j]
            if not x:
                break
            term = term * x
        else:
            inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
            total = total + (term if inv % 2 == 0 else -term)
    return total


def _interpolate(xs: Sequence[Fraction], ys: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients of the interpolating polynomial (Newton form)."""
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    poly[0] = coef[n - 1]
    deg = 0
    for k in range(n - 2, -1, -1):
        # poly = poly * (x - xs[k]) + coef[k]
        new = [Fraction(0)] * n
        for i in range(deg + 1):
            new[i + 1] += poly[i]
            new[i] -= poly[i] * xs[k]
        new[0] += coef[k]
        poly = new
        deg += 1
    return poly


def det_laurent(M, degree_bound: int | None = None, method: str = "interpolate") -> LaurentPoly:
    """Exact determinant of a square matrix of Laurent polynomials.

    ``method="interpolate"`` evaluates at distinct positive integers and
    interpolates; the exponent window is bounded by the sums of the row-wise
    minimal and maximal exponents.  ``method="expand"`` uses the Leibniz
    expansion and is limited to dimension 6.
    """
    rows = [[LaurentPoly.coerce(x) for x in r] for r in _rows(M)]
    n = len(rows)
    if degree_bound is not None:
        for r in rows:
            for x in r:
                if x and max(abs(x.low), abs(x.high)) > degree_bound:
                    raise DegreeBoundExceeded(f"entry {x} exceeds degree bound {degree_bound}")
    if n == 0:
        return LaurentPoly({0: 1})
    if method == "expand":
        if n > 6:
            raise ValueError("direct expansion is limited to dimension <= 6")
        return _leibniz(rows)
    if method != "interpolate":
        raise ValueError(f"unknown method {method!r}")
    lo = hi = 0
    for r in rows:
        nz = [x for x in r if x]
        if not nz:
            return LaurentPoly()
        lo += min(x.low for x in nz)
        hi += max(x.high for x in nz)
    xs = [Fraction(i + 1) for i in range(hi - lo + 1)]

    def value(x):
        return det_rational([[e(x) for e in r] for r in rows]) * x ** (-lo)

    ys = pmap(value, xs)
    poly = _interpolate(xs, ys)
    return LaurentPoly({lo + i: c for i, c in enumerate(poly)})
