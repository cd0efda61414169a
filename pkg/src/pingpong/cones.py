"""Cone frames and exact sign analysis.

The ping-pong sets are simplicial cones C+ = M * (open positive orthant)
and C- = N * (open positive orthant).  M collects the Krylov columns
v, Pv, P^2 v, P^3 v of the nilpotent generator log U applied to a special
isotropy vector v, and N = B M is its mirror under the involution B.

Configurations are certified through sign patterns: a matrix with all
entries >= 0 maps the closed positive orthant into itself, and since all
maps involved are invertible, open cones land inside open cones.  A matrix
with an all-nonpositive row certifies that the image of the open orthant
misses the open orthant (that coordinate cannot be positive), so one
nonnegative row plus one nonpositive row certifies disjointness from both
the positive orthant and its negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .linalg import (
    Mat,
    MatPoly,
    Vec,
    as_scalar,
    ceil_div_frac,
    dot,
    nilpotent_log,
    sign,
)
from .catalog import GroupGens

BRANCHES = ("n>=0", "n>=1", "n<=0", "n<=-1")


class DegenerateQuadraticError(ValueError):
    """The isotropy quadratic does not have the expected linear shape."""


def compute_special_vector(p: Mat, j: Mat) -> Vec:
    """Solve <w, P w>_J = 0 for w = e2 + s * e3 and return w.

    The pairing is quadratic in s with coefficients a, b, c below; the
    construction needs c = 0 and b != 0 so that s = -a/b is the unique
    finite root.
    """
    e2 = (0, 1, 0, 0)
    e3 = (0, 0, 1, 0)
    jp = j * p
    a = dot(e2, jp.apply(e2))
    b = dot(e2, jp.apply(e3)) + dot(e3, jp.apply(e2))
    c = dot(e3, jp.apply(e3))
    if c != 0 or b == 0:
        raise DegenerateQuadraticError(f"quadratic has a={a} b={b} c={c}")
    s = as_scalar(-Fraction(a) / Fraction(b))
    return (0, 1, s, 0)


@dataclass(frozen=True)
class ConePair:
    """Frames for the two ping-pong cones and their inverses."""

    v: Vec
    P: Mat
    Q: Mat
    M: Mat
    N: Mat
    m_inv: Mat
    n_inv: Mat


def build_cones(gens: GroupGens) -> ConePair:
    """Build the cone frames from the generator set.

    dim 4: v comes from the isotropy quadratic and M has the four Krylov
    columns of P = log U.  dim 2: v = e1 and M = [v, Pv].
    """
    p = nilpotent_log(gens.U)
    n = gens.dim
    if n == 4:
        v = compute_special_vector(p, gens.J)
    else:
        v = (1, 0)
    cols = [v]
    for _ in range(n - 1):
        cols.append(p.apply(cols[-1]))
    m = Mat.from_columns(cols)
    q = gens.B * p * gens.B
    nn = gens.B * m

    if m.det() == 0:
        raise DegenerateQuadraticError("Krylov frame is singular")
    if gens.B.apply(v) != v:
        raise AssertionError("B does not fix the special vector")
    if n == 4:
        top = p.apply(p.apply(v))
        if q.apply(q.apply(v)) != top or top != (0, 0, gens.d, 0):
            raise AssertionError("P^2 v and Q^2 v disagree with (0,0,d,0)")
    return ConePair(v, p, q, m, nn, m.inverse(), nn.inverse())


@dataclass(frozen=True)
class SignPattern:
    """Entrywise signs of a matrix plus row-level classification.

    Zero rows are counted as both nonnegative and nonpositive; verdict
    precedence is all-nonneg > all-nonpos > row-split > indefinite.
    """

    signs: tuple

    @classmethod
    def from_matrix(cls, mat: Mat) -> "SignPattern":
        return cls(tuple(tuple(sign(x) for x in row) for row in mat.rows))

    @property
    def nonneg_rows(self) -> tuple:
        return tuple(
            i for i, row in enumerate(self.signs) if all(s >= 0 for s in row)
        )

    @property
    def nonpos_rows(self) -> tuple:
        return tuple(
            i for i, row in enumerate(self.signs) if all(s <= 0 for s in row)
        )

    @property
    def zero_rows(self) -> tuple:
        return tuple(
            i for i, row in enumerate(self.signs) if all(s == 0 for s in row)
        )

    @property
    def is_all_nonneg(self) -> bool:
        return all(s >= 0 for row in self.signs for s in row)

    @property
    def is_all_nonpos(self) -> bool:
        return all(s <= 0 for row in self.signs for s in row)

    @property
    def is_uniform_sign(self) -> bool:
        return self.is_all_nonneg or self.is_all_nonpos

    @property
    def is_disjoint_certificate(self) -> bool:
        return bool(self.nonneg_rows) and bool(self.nonpos_rows)

    @property
    def verdict(self) -> str:
        if self.is_all_nonneg:
            return "all-nonneg"
        if self.is_all_nonpos:
            return "all-nonpos"
        if self.is_disjoint_certificate:
            return "row-split"
        return "indefinite"

    def render(self) -> str:
        glyph = {1: "+", 0: "0", -1: "-"}
        return "/".join("".join(glyph[s] for s in row) for row in self.signs)


def classify_sign(mat: Mat) -> SignPattern:
    return SignPattern.from_matrix(mat)


def _entry_threshold(coeffs: tuple) -> int:
    """Least n0 >= 0 such that the leading term dominates for |n| >= n0."""
    lead = coeffs[-1]
    if len(coeffs) == 1:
        return 0
    tail = sum(abs(Fraction(c)) for c in coeffs[:-1])
    return 1 + ceil_div_frac(tail, abs(Fraction(lead)))


def _branch_points(branch: str, threshold: int) -> tuple:
    """Branch members with |n| < threshold, in increasing order."""
    if branch == "n>=0":
        return tuple(range(0, threshold))
    if branch == "n>=1":
        return tuple(range(1, threshold))
    if branch == "n<=0":
        return tuple(range(-threshold + 1, 1))
    if branch == "n<=-1":
        return tuple(range(-threshold + 1, 0))
    raise ValueError(f"unknown branch {branch!r}")


@dataclass(frozen=True)
class BranchSignReport:
    """Sign behaviour of a matrix polynomial f(n) along one integer branch.

    eventual is the sign pattern valid for every branch member with
    |n| >= threshold; checked holds the exact patterns at the finitely
    many remaining branch members.
    """

    branch: str
    eventual: SignPattern
    threshold: int
    checked: tuple  # ((n, SignPattern), ...)

    def holds(self, predicate: Callable[[SignPattern], bool]) -> bool:
        if not predicate(self.eventual):
            return False
        return all(predicate(pat) for _, pat in self.checked)

    @property
    def verdict(self) -> str:
        v = self.eventual.verdict
        if all(pat.verdict == v for _, pat in self.checked):
            return v
        return f"mixed({v})"


def matpoly_sign_over_branch(f: MatPoly, branch: str) -> BranchSignReport:
    """Determine entrywise signs of f(n) for all integers n in the branch.

    The eventual sign of an entry with leading coefficient c and degree L
    is sign(c) as n -> +infinity and sign(c) * (-1)^L as n -> -infinity.
    The per-entry dominance threshold is 1 + ceil(sum|tail| / |lead|);
    branch members below the overall threshold are evaluated exactly.
    """
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch {branch!r}")
    direction = 1 if branch.startswith("n>=") else -1
    dim = f.coeffs[0].dim
    eventual_rows = []
    threshold = 0
    for i in range(dim):
        row = []
        for j in range(dim):
            coeffs = f.entry_poly(i, j).coeffs or (0,)
            degree = len(coeffs) - 1
            s = sign(coeffs[-1]) * (direction ** degree)
            row.append(s)
            threshold = max(threshold, _entry_threshold(coeffs))
        eventual_rows.append(tuple(row))
    eventual = SignPattern(tuple(eventual_rows))
    checked = tuple(
        (n, SignPattern.from_matrix(f.eval(n))) for n in _branch_points(branch, threshold)
    )
    return BranchSignReport(branch, eventual, threshold, checked)
