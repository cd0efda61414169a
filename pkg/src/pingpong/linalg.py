"""Exact linear algebra over the rationals for small square matrices.

Everything is immutable and exact: scalars are Python ints or
``fractions.Fraction`` (integral values are normalised to int, which keeps
the common integer-matrix paths fast), matrices are dense tuples of tuples,
and polynomials carry exact coefficients with the constant term first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Iterator, Sequence, Union

Scalar = Union[int, Fraction]
Vec = tuple


class SingularMatrixError(ValueError):
    """Raised when an inverse of a singular matrix is requested."""


class NotUnipotentError(ValueError):
    """Raised when a logarithm of a non-unipotent matrix is requested."""


class NotNilpotentError(ValueError):
    """Raised when an exponential of a non-nilpotent matrix is requested."""


def as_scalar(x) -> Scalar:
    """Normalise ``x`` to an int (when integral) or a reduced Fraction."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


def rat_str(x: Scalar) -> str:
    """Render a rational as ``p`` or ``p/q`` in lowest terms."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def sign(x: Scalar) -> int:
    return (x > 0) - (x < 0)


class Mat:
    """Immutable square matrix with exact rational entries."""

    __slots__ = ("rows", "dim")

    def __init__(self, rows: Iterable[Iterable[Scalar]]):
        body = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        n = len(body)
        if n == 0 or any(len(row) != n for row in body):
            raise ValueError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", body)
        object.__setattr__(self, "dim", n)

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Mat is immutable")

    @classmethod
    def identity(cls, dim: int) -> "Mat":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim)))

    @classmethod
    def zeros(cls, dim: int) -> "Mat":
        return cls(tuple((0,) * dim for _ in range(dim)))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Scalar]]) -> "Mat":
        n = len(cols)
        return cls(tuple(tuple(cols[j][i] for j in range(n)) for i in range(n)))

    def column(self, j: int) -> Vec:
        return tuple(row[j] for row in self.rows)

    def row(self, i: int) -> Vec:
        return self.rows[i]

    def entries(self) -> Iterator[Scalar]:
        for row in self.rows:
            yield from row

    def _require_same_dim(self, other: "Mat") -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __mul__(self, other):
        if isinstance(other, Mat):
            self._require_same_dim(other)
            cols = tuple(zip(*other.rows))
            return Mat(
                tuple(
                    tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                    for row in self.rows
                )
            )
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> "Mat":
        return Mat(tuple(tuple(c * x for x in row) for row in self.rows))

    def __add__(self, other: "Mat") -> "Mat":
        self._require_same_dim(other)
        return Mat(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "Mat") -> "Mat":
        self._require_same_dim(other)
        return Mat(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def __pow__(self, e: int) -> "Mat":
        if not isinstance(e, int):
            raise TypeError("matrix powers must be integers")
        if e < 0:
            return self.inverse() ** (-e)
        result = Mat.identity(self.dim)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def transpose(self) -> "Mat":
        return Mat(tuple(zip(*self.rows)))

    def apply(self, vec: Sequence[Scalar]) -> Vec:
        if len(vec) != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs vector of length {len(vec)}")
        return tuple(as_scalar(sum(a * b for a, b in zip(row, vec))) for row in self.rows)

    def _eliminated(self):
        """Row echelon form over Fraction; returns (rows, pivot count, det)."""
        n = self.dim
        work = [list(row) for row in self.rows]
        det: Scalar = 1
        pivots = 0
        col = 0
        for col in range(n):
            piv = next((r for r in range(pivots, n) if work[r][col] != 0), None)
            if piv is None:
                det = 0
                continue
            if piv != pivots:
                work[pivots], work[piv] = work[piv], work[pivots]
                det = -det
            det = det * work[pivots][col]
            inv = Fraction(1) / work[pivots][col]
            work[pivots] = [x * inv for x in work[pivots]]
            for r in range(n):
                if r != pivots and work[r][col]:
                    f = work[r][col]
                    work[r] = [a - f * b for a, b in zip(work[r], work[pivots])]
            pivots += 1
        if pivots < n:
            det = 0
        return work, pivots, as_scalar(det)

    def det(self) -> Scalar:
        return self._eliminated()[2]

    def rank(self) -> int:
        return self._eliminated()[1]

    def trace(self) -> Scalar:
        return as_scalar(sum(self.rows[i][i] for i in range(self.dim)))

    def inverse(self) -> "Mat":
        n = self.dim
        aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(self.rows)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise SingularMatrixError("matrix is singular")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = Fraction(1) / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return Mat(tuple(tuple(row[n:]) for row in aug))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries())

    def is_identity(self) -> bool:
        return self == Mat.identity(self.dim)

    def __eq__(self, other) -> bool:
        return isinstance(other, Mat) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rat_str(x) for x in row) for row in self.rows)
        return f"Mat[{body}]"


def mat_from_rows(rows) -> Mat:
    return Mat(rows)


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    if len(u) != len(v):
        raise ValueError("dimension mismatch in dot product")
    return as_scalar(sum(a * b for a, b in zip(u, v)))


class Poly:
    """Polynomial in one variable with exact coefficients, constant first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar]):
        body = [as_scalar(c) for c in coeffs]
        while body and body[-1] == 0:
            body.pop()
        object.__setattr__(self, "coeffs", tuple(body))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Poly is immutable")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(tuple(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + Poly(tuple(-c for c in other.coeffs))

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        den = other.coeffs
        qlen = len(rem) - len(den) + 1
        if qlen <= 0:
            return Poly(()), Poly(rem)
        quo = [0] * qlen
        lead = Fraction(den[-1])
        for i in range(qlen - 1, -1, -1):
            c = rem[i + len(den) - 1]
            if c:
                q = as_scalar(Fraction(c) / lead)
                quo[i] = q
                for j, d in enumerate(den):
                    rem[i + j] -= q * d
        return Poly(quo), Poly(rem)

    def exact_div(self, other: "Poly") -> "Poly":
        quo, rem = divmod(self, other)
        if not rem.is_zero():
            raise ValueError("polynomial division has a remainder")
        return quo

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def eval(self, x: Scalar) -> Scalar:
        acc: Scalar = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return as_scalar(acc)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        lead = Fraction(self.coeffs[-1])
        return Poly(tuple(as_scalar(Fraction(c) / lead) for c in self.coeffs))

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "Poly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i > 0 and c == 1:
                parts.append(mono)
            elif i > 0 and c == -1:
                parts.append(f"-{mono}")
            elif i == 0:
                parts.append(rat_str(c))
            else:
                parts.append(f"{rat_str(c)}*{mono}")
        text = " + ".join(parts).replace("+ -", "- ")
        return f"Poly({text})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm over the rationals."""
    while not b.is_zero():
        a, b = b, divmod(a, b)[1]
    return a.monic()


def is_squarefree(p: Poly) -> bool:
    return poly_gcd(p, p.derivative()).degree <= 0


_CYCLOTOMIC: dict[int, Poly] = {}


def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial, with integer coefficients."""
    if n < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if n not in _CYCLOTOMIC:
        if n == 1:
            _CYCLOTOMIC[n] = Poly((-1, 1))
        else:
            num = Poly((-1,) + (0,) * (n - 1) + (1,))
            for d in range(1, n):
                if n % d == 0:
                    num = num.exact_div(cyclotomic(d))
            _CYCLOTOMIC[n] = num
    return _CYCLOTOMIC[n]


def charpoly(a: Mat) -> Poly:
    """Characteristic polynomial det(xI - a) by the Faddeev-LeVerrier scheme."""
    n = a.dim
    ident = Mat.identity(n)
    m = Mat.zeros(n)
    coeffs: list[Scalar] = [1]
    c: Scalar = 1
    for k in range(1, n + 1):
        m = a * (m + ident.scale(c))
        c = as_scalar(Fraction(-m.trace(), k))
        coeffs.append(c)
    return Poly(tuple(reversed(coeffs)))


def nilpotent_log(a: Mat) -> Mat:
    """Logarithm of a unipotent matrix; the series terminates exactly."""
    n = a.dim
    x = a - Mat.identity(n)
    if not (x ** n).is_zero():
        raise NotUnipotentError("matrix is not unipotent")
    total = Mat.zeros(n)
    power = Mat.identity(n)
    for m in range(1, n):
        power = power * x
        if power.is_zero():
            break
        total = total + power.scale(Fraction((-1) ** (m + 1), m))
    return total

def nilpotent_exp(z: Mat) -> Mat:
    """Exponential of a nilpotent matrix; the series terminates exactly."""
    n = z.dim
    if not (z ** n).is_zero():
        raise NotNilpotentError("matrix is not nilpotent")
    total = Mat.identity(n)
    power = Mat.identity(n)
    fact = 1
    for m in range(1, n):
        power = power * z
        fact *= m
        if power.is_zero():
            break
        total = total + power.scale(Fraction(1, fact))
    return total


@dataclass(frozen=True)
class MatPoly:
    """Matrix-valued polynomial sum(C_m * n^m), coefficients constant-first."""

    coeffs: tuple

    def __post_init__(self):
        body = tuple(self.coeffs)
        if not body:
            raise ValueError("matrix polynomial needs at least one coefficient")
        while len(body) > 1 and body[-1].is_zero():
            body = body[:-1]
        object.__setattr__(self, "coeffs", body)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def dim(self) -> int:
        return self.coeffs[0].dim

    def eval(self, n: int) -> Mat:
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc.scale(n) + c
        return acc

    def entry_poly(self, i: int, j: int) -> Poly:
        return Poly(tuple(c.rows[i][j] for c in self.coeffs))


def ceil_div_frac(num: Scalar, den: Scalar) -> int:
    """Exact ceiling of num/den for positive den."""
    return ceil(Fraction(num) / Fraction(den))
