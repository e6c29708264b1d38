"""Exact rational matrices between tensor powers of a state space.

Matrices are numpy object arrays of ``fractions.Fraction`` (or, inside
``LinearMap``, of Python ints over a common denominator).  The leftmost
tensor factor is the slowest-varying index, which is exactly the convention
of ``numpy.kron``.
"""

from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .config import TQFTError

__all__ = ["LinearMap", "to_fraction", "format_rational", "fraction_matrix", "exact_inverse", "matmul"]


def to_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TQFTError(f"refusing inexact float {x!r}; write it as 'p/q'")
    return Fraction(x)


def format_rational(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fraction_matrix(rows):
    arr = np.array([[to_fraction(x) for x in row] for row in rows], dtype=object)
    return arr.reshape(len(rows), -1) if len(rows) else np.zeros((0, 0), dtype=object)


def _zeros(r, c):
    out = np.empty((r, c), dtype=object)
    out.fill(Fraction(0))
    return out


def _identity(n):
    out = _zeros(n, n)
    for i in range(n):
        out[i, i] = Fraction(1)
    return out


def _common_denominator(a):
    d = 1
    for x in a.flat:
        d = lcm(d, x.denominator)
    return d


def matmul(a, b):
    """Exact product; scales to integers first since int arithmetic is much
    cheaper than Fraction arithmetic inside numpy's object loops."""
    if a.shape[1] != b.shape[0]:
        raise TQFTError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return _zeros(a.shape[0], b.shape[1])
    da, db = _common_denominator(a), _common_denominator(b)
    ia = np.array([[int(x * da) for x in row] for row in a], dtype=object)
    ib = np.array([[int(x * db) for x in row] for row in b], dtype=object)
    prod = ia.dot(ib)
    denom = da * db
    out = np.empty(prod.shape, dtype=object)
    for idx, v in np.ndenumerate(prod):
        out[idx] = Fraction(v, denom)
    return out


def exact_inverse(m):
    """Gauss-Jordan inverse over the rationals; None if singular."""
    n = m.shape[0]
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return np.array([row[n:] for row in a], dtype=object).reshape(n, n)


def _scaled(matrix):
    """Split a rational matrix into (integer numerators, common denominator)."""
    den = _common_denominator(matrix) if matrix.size else 1
    num = np.empty(matrix.shape, dtype=object)
    for idx, x in np.ndenumerate(matrix):
        x = Fraction(x)
        num[idx] = x.numerator * (den // x.denominator)
    return num, den


class LinearMap:
    """A linear map V^{(x) n_in} -> V^{(x) n_out}, with dim V = ``dim``.

    The matrix has ``dim**n_out`` rows and ``dim**n_in`` columns.  It is kept
    as an integer numerator matrix over one positive denominator, reduced so
    that equal maps have equal representations.
    """

    __slots__ = ("num", "den", "dim", "n_in", "n_out")

    def __init__(self, matrix, dim, n_in, n_out):
        matrix = np.asarray(matrix, dtype=object)
        if matrix.shape != (dim**n_out, dim**n_in):
            raise TQFTError(
                f"matrix shape {matrix.shape} does not match dim={dim}, "
                f"arity ({n_in}, {n_out})"
            )
        num, den = _scaled(matrix)
        self._set(num, den, dim, n_in, n_out)

    def _set(self, num, den, dim, n_in, n_out):
        common = gcd(den, *num.flat) if num.size else den
        if common > 1:
            num = num // common
            den //= common
        self.num, self.den = num, den
        self.dim, self.n_in, self.n_out = dim, n_in, n_out

    @classmethod
    def _from_scaled(cls, num, den, dim, n_in, n_out):
        out = cls.__new__(cls)
        out._set(num, den, dim, n_in, n_out)
        return out

    @classmethod
    def identity(cls, dim, n=1):
        return cls(_identity(dim**n), dim, n, n)

    @classmethod
    def scalar(cls, dim, value):
        return cls(fraction_matrix([[value]]), dim, 0, 0)

    @property
    def matrix(self):
        out = np.empty(self.num.shape, dtype=object)
        for idx, v in np.ndenumerate(self.num):
            out[idx] = Fraction(v, self.den)
        return out

    @property
    def shape(self):
        return self.num.shape

    def then(self, other):
        """``self`` followed by ``other`` (matrix ``other @ self``)."""
        if self.n_out != other.n_in or self.dim != other.dim:
            raise TQFTError("cannot compose maps with mismatched boundaries")
        return LinearMap._from_scaled(other.num.dot(self.num), other.den * self.den,
                                      self.dim, self.n_in, other.n_out)

    def tensor(self, other):
        if self.dim != other.dim:
            raise TQFTError("cannot tensor maps over different state spaces")
        return LinearMap._from_scaled(np.kron(self.num, other.num), self.den * other.den, self.dim,
                                      self.n_in + other.n_in, self.n_out + other.n_out)

    def trace(self):
        if self.n_in != self.n_out:
            raise TQFTError("trace needs a square map")
        return Fraction(sum(self.num.diagonal()), self.den)

    def scalar_value(self):
        if self.shape != (1, 1):
            raise TQFTError(f"not a scalar: shape {self.shape}")
        return Fraction(self.num[0, 0], self.den)

    def entry(self, row, col):
        return Fraction(self.num[row, col], self.den)

    def rows(self):
        return [[Fraction(v, self.den) for v in row] for row in self.num]

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (
            (self.dim, self.n_in, self.n_out, self.den) == (other.dim, other.n_in, other.n_out, other.den)
            and bool(np.all(self.num == other.num))
        )

    __hash__ = None

    def __repr__(self):
        return f"LinearMap(dim={self.dim}, arity=({self.n_in}, {self.n_out}))"

    def to_tsv(self):
        return "\n".join("\t".join(format_rational(x) for x in row) for row in self.rows()) + "\n"

    def to_json(self):
        return {
            "dim": self.dim,
            "in": self.n_in,
            "out": self.n_out,
            "matrix": [[format_rational(x) for x in row] for row in self.rows()],
        }
