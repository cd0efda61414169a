"""Brute-force integer point oracle for certified sign conditions.

Every passed sign check claims something about the image of the open
positive orthant under an explicit rational matrix.  This module retests
those claims on concrete integer points, recomputing everything from
scratch in integer arithmetic: frame inverses enter through cofactor
adjugates (not the Gauss elimination used elsewhere), group powers are
iterated integer products, and each test point stays integral end to end.

For a claim about K = F^-1 W G (frame F, group element W, frame G) and a
point lam > 0, the oracle computes z = s * adj(cF) * W * (cG) * lam with
integer scalings c and s = sign(det(cF)), a positive multiple of K lam,
and applies the condition predicate to the signs of z.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, lcm
from typing import List, Optional

from .catalog import GroupGens, PowerStructure
from .certify import PingPongCertificate
from .cones import ConePair
from .words import DetRng


def integer_rows(mat) -> tuple:
    """(c * mat as integer row tuples, c) for the lcm c of denominators."""
    denoms = [Fraction(x).denominator for row in mat.rows for x in row]
    c = lcm(*denoms)
    rows = tuple(tuple(int(Fraction(x) * c) for x in row) for row in mat.rows)
    return rows, c


def integer_det(rows) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for col in range(n):
        if rows[0][col] == 0:
            continue
        minor = tuple(tuple(r[c] for c in range(n) if c != col) for r in rows[1:])
        term = rows[0][col] * integer_det(minor)
        total += term if col % 2 == 0 else -term
    return total


def integer_adjugate(rows) -> tuple:
    n = len(rows)
    cof = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(rows[r][c] for c in range(n) if c != j)
                for r in range(n)
                if r != i
            )
            s = 1 if (i + j) % 2 == 0 else -1
            cof[i][j] = s * integer_det(minor)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def int_matmul(a, b) -> tuple:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def _int_inverse_unimodular(rows) -> tuple:
    det = integer_det(rows)
    if det == 1:
        return integer_adjugate(rows)
    if det == -1:
        return tuple(tuple(-x for x in row) for row in integer_adjugate(rows))
    raise ValueError(f"matrix is not unimodular (det {det})")


class _PowerCache:
    """Integer powers of R grown on demand in both directions."""

    def __init__(self, r_rows):
        self.r = r_rows
        self.r_inv = _int_inverse_unimodular(r_rows)
        n = len(r_rows)
        ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        self._pos = [ident]
        self._neg = [ident]

    def power(self, m: int) -> tuple:
        store, step = (self._pos, self.r) if m >= 0 else (self._neg, self.r_inv)
        k = abs(m)
        while len(store) <= k:
            store.append(int_matmul(store[-1], step))
        return store[k]


def _condition_ok(condition: str, z: tuple) -> bool:
    pos = all(x > 0 for x in z)
    neg = all(x < 0 for x in z)
    if condition == "i":
        return not pos and not neg
    if condition in ("iv", "v"):
        return pos
    if condition in ("vi", "vii"):
        return pos or neg
    raise ValueError(f"no point predicate for condition {condition!r}")


@dataclass(frozen=True)
class PointViolation:
    condition: str
    target: str
    n: Optional[int]
    lam: tuple
    z: tuple


@dataclass(frozen=True)
class PointCheckReport:
    case_id: str
    targets: int
    points: int
    n_bound: int
    violations: tuple

    @property
    def clean(self) -> bool:
        return not self.violations


def brute_force_check(
    certificate: PingPongCertificate,
    gens: GroupGens,
    ps: PowerStructure,
    cones: ConePair,
    count: int = 1000,
    n_bound: int = 25,
    lam_max: int = 999,
    seed: int = 0x5EED,
) -> PointCheckReport:
    """Retest every passed sign check of the certificate on integer points.

    count points are used per check; family checks spread them over the
    branch steps n with |n| <= n_bound.  Components of lam are drawn from
    1..lam_max.  Returns a report whose violations tuple is expected to
    be empty; up to 20 violations are recorded, all are counted.
    """
    dim = gens.dim
    m_rows, _ = integer_rows(cones.M)
    n_rows, _ = integer_rows(cones.N)
    lefts = {}
    for name, rows in (("M", m_rows), ("N", n_rows)):
        adj = integer_adjugate(rows)
        if integer_det(rows) < 0:
            adj = tuple(tuple(-x for x in row) for row in adj)
        lefts[name] = adj
    rights = {"M": m_rows, "N": n_rows}

    t_rows = tuple(tuple(int(x) for x in row) for row in gens.T.rows)
    prefixes = {
        "i": None,
        "iv": _int_inverse_unimodular(t_rows),
        "v": t_rows,
        "vi": _int_inverse_unimodular(t_rows),
        "vii": t_rows,
    }
    r_rows = tuple(tuple(int(x) for x in row) for row in gens.R.rows)
    powers = _PowerCache(r_rows)

    rng = DetRng(seed)
    violations: List[PointViolation] = []
    total_points = 0
    targets = 0
    recorded = 0

    for check in certificate.checks:
        if check.kind == "structural" or not check.passed:
            continue
        targets += 1
        cond = check.condition
        left = lefts["N" if cond in ("v", "vii") else "M"]
        right = rights[check.target.rstrip()[-1]]
        prefix = prefixes[cond]

        if check.kind == "matrix":
            steps = (None,)
            per_step = count
        else:
            if check.branch == "n>=0":
                steps = tuple(range(0, n_bound + 1))
            else:
                steps = tuple(range(-n_bound, 1))
            per_step = ceil(count / len(steps))

        for n in steps:
            if cond in ("iv", "v"):
                w = prefix
            else:
                exponent = check.j if n is None else ps.period * n + check.j
                w = powers.power(exponent)
                if prefix is not None:
                    w = int_matmul(prefix, w)
            k = int_matmul(int_matmul(left, w), right)
            for _ in range(per_step):
                lam = tuple(1 + rng.below(lam_max) for _ in range(dim))
                z = tuple(sum(a * b for a, b in zip(row, lam)) for row in k)
                total_points += 1
                if not _condition_ok(cond, z):
                    if recorded < 20:
                        violations.append(
                            PointViolation(cond, check.target, n, lam, z)
                        )
                    recorded += 1

    return PointCheckReport(
        case_id=certificate.case_id,
        targets=targets,
        points=total_points,
        n_bound=n_bound,
        violations=tuple(violations),
    )
