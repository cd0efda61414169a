"""Ping-pong certification.

The certificate shows that every alternating word in nontrivial T powers
and nontrivial R powers (nontrivial modulo H, the central subgroup shared
by both factors) moves some seed cone off the union of the four cones
+-C+ and +-C-.  Conditions, all checked as entrywise sign claims in exact
arithmetic:

  (i)   R^m (C+ u C-) misses +-C+ and +-C- for every nontrivial power m;
  (ii)  the cones are nonempty open simplicial cones with C- = B C+;
  (iv)  T^-1 C+ is contained in C+;
  (v)   T C- is contained in C-;
  (vi)  T^-1 R^m (C+ u C-) lands inside +-C+;
  (vii) T R^m (C+ u C-) lands inside +-C-;
  (H)   conditions are stable under the central involution when H = {+-I}.

(iv) extends (vi) to all negative T powers by induction, (v) does the same
for (vii) and positive powers.  When R has infinite order the nontrivial
powers m = p*n + j are grouped into residue families whose entries are
polynomials in n (exp(n*Z) is a matrix polynomial since Z is nilpotent),
with the sign (+-1)^n recorded separately; the predicates used on families
are invariant under a global sign flip.  Frame-level invertibility makes
every nonnegative sign pattern strict on the open orthant: a zero
coordinate would force a zero row and hence a vanishing determinant.

Checks come in mirror pairs under B (N = B M, B T B = T^-1, B Z B = -Z).
Both members of each pair are computed independently and compared, either
as exact matrix equalities or, for families, through the coefficient
twist C_m -> (-1)^m C_m at the negated residue.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .catalog import (
    CaseSpec,
    GroupGens,
    PowerStructure,
    SplittingDescriptor,
    build_generators,
    detect_power_structure,
)
from .cones import build_cones, classify_sign, matpoly_sign_over_branch
from .linalg import Mat, MatPoly
from .words import verify_relation

INTERSECTION_ASSUMPTION = "G1 and G2 intersect exactly in H (not machine-checked)"

_PREDICATES = {
    "i": lambda pat: pat.is_disjoint_certificate,
    "iv": lambda pat: pat.is_all_nonneg,
    "v": lambda pat: pat.is_all_nonneg,
    "vi": lambda pat: pat.is_uniform_sign,
    "vii": lambda pat: pat.is_uniform_sign,
}


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of one sign check (or structural fact) in the certificate.

    kind "matrix" checks a single exact matrix, "family" a residue family
    over an integer branch, "structural" a non-sign fact.  For families,
    sigma records the sign stripped from the actual matrix at step n
    (actual = sigma^n * family(n)); the predicates used are sign-flip
    invariant.  checked lists the exactly evaluated low members of the
    branch as (n, rendered sign pattern) pairs.
    """

    condition: str
    target: str
    j: Optional[int]
    branch: Optional[str]
    kind: str
    sigma: int
    verdict: str
    threshold: int
    checked: tuple
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class PingPongCertificate:
    case_id: str
    h_kind: str  # "trivial" | "pm"
    g1: str
    g2: str
    residues: tuple  # ((j, branch-or-None), ...)
    checks: tuple
    conclusion: SplittingDescriptor
    assumptions: tuple = (INTERSECTION_ASSUMPTION,)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> Optional[ConditionCheck]:
        for check in self.checks:
            if not check.passed:
                return check
        return None


@dataclass(frozen=True)
class Verdict:
    """pass: all conditions hold and the splitting is certified.
    fail: a condition fails and a relation word witnesses collapse.
    inconclusive: a condition fails and no witness is known."""

    kind: str
    splitting: Optional[SplittingDescriptor]
    failing: Optional[ConditionCheck]
    certificate: PingPongCertificate
    relation: Optional[str] = None
    relation_value: Optional[str] = None


def splitting_from_structure(ps: PowerStructure) -> SplittingDescriptor:
    """The splitting shape forced by the power structure of R."""
    if not ps.is_finite:
        return SplittingDescriptor("free")
    if ps.sigma == 1:
        return SplittingDescriptor("free-times-finite", ps.finite_order)
    return SplittingDescriptor("amalgam", ps.finite_order)


def residue_set(ps: PowerStructure) -> tuple:
    """(j, branch) pairs covering every nontrivial power of R exactly once.

    Finite order: single powers j, branch None; j = p is dropped when
    R^p = -I since that power lies in H.  Infinite order: m = p*n + j with
    j in 1..p for n >= 0 and j in -p..-1 for n <= 0, covering all m >= 1
    and m <= -1 respectively.  Both sets are closed under negation, which
    the mirror bookkeeping relies on.
    """
    if ps.is_finite:
        skip = ps.period if ps.sigma == -1 else None
        return tuple((j, None) for j in range(1, ps.finite_order) if j != skip)
    forward = tuple((j, "n>=0") for j in range(1, ps.period + 1))
    backward = tuple((j, "n<=0") for j in range(-ps.period, 0))
    return forward + backward


def family_for(
    left_inv: Mat, prefix: Mat, j: int, right: Mat, gens: GroupGens, ps: PowerStructure
) -> MatPoly:
    """Matrix polynomial f with sigma^n f(n) = left_inv prefix R^(pn+j) right.

    Coefficients are left_inv * prefix * R^j * Z^m/m! * right for m below
    the nilpotency degree of Z.
    """
    base = left_inv * prefix * (gens.R ** j)
    coeffs = []
    zpow = Mat.identity(gens.dim)
    factorial = 1
    for m in range(max(1, ps.nilpotency_degree)):
        if m:
            zpow = zpow * ps.Z
            factorial *= m
        coeffs.append(base * zpow.scale(Fraction(1, factorial)) * right)
    return MatPoly(tuple(coeffs))


def _twist(f: MatPoly) -> MatPoly:
    """f(n) -> f(-n) on coefficients."""
    return MatPoly(tuple(c if m % 2 == 0 else c.scale(-1) for m, c in enumerate(f.coeffs)))


def _matrix_check(condition, target, mat, j=None, note="") -> ConditionCheck:
    pattern = classify_sign(mat)
    return ConditionCheck(
        condition=condition,
        target=target,
        j=j,
        branch=None,
        kind="matrix",
        sigma=1,
        verdict=pattern.verdict,
        threshold=0,
        checked=(),
        passed=_PREDICATES[condition](pattern),
        note=note,
    )


def _family_check(condition, target, fam, branch, j, sigma, note="") -> ConditionCheck:
    report = matpoly_sign_over_branch(fam, branch)
    return ConditionCheck(
        condition=condition,
        target=target,
        j=j,
        branch=branch,
        kind="family",
        sigma=sigma,
        verdict=report.verdict,
        threshold=report.threshold,
        checked=tuple((n, pat.render()) for n, pat in report.checked),
        passed=report.holds(_PREDICATES[condition]),
        note=note,
    )


def _structural_check(condition, target, passed, note="") -> ConditionCheck:
    return ConditionCheck(
        condition=condition,
        target=target,
        j=None,
        branch=None,
        kind="structural",
        sigma=1,
        verdict="ok" if passed else "violated",
        threshold=0,
        checked=(),
        passed=passed,
        note=note,
    )


def _factor_descriptions(ps: PowerStructure) -> Tuple[str, str, str]:
    if not ps.is_finite:
        return "trivial", "Z generated by T", "Z generated by R (infinite order)"
    if ps.sigma == 1:
        return (
            "trivial",
            "Z generated by T",
            f"Z/{ps.finite_order} generated by R",
        )
    return (
        "pm",
        "Z x Z/2 generated by T and -I",
        f"Z/{ps.finite_order} generated by R, with R^{ps.period} = -I",
    )


def _residue_checks_finite(gens, cones, ps, t_inv) -> List[ConditionCheck]:
    checks: List[ConditionCheck] = []
    order = ps.finite_order
    powers = {j: gens.R ** j for j in range(-(order - 1), order)}
    for j, _branch in residue_set(ps):
        rj = powers[j]
        rmj = powers[-j]
        # mirror identities: the N frame at j is the M frame at -j
        if cones.n_inv * rj * cones.N != cones.m_inv * rmj * cones.M:
            raise AssertionError(f"mirror identity failed for R^{j}")
        if cones.n_inv * gens.T * rj * cones.M != cones.m_inv * t_inv * rmj * cones.N:
            raise AssertionError(f"mirror identity failed for T R^{j}")
        checks.append(_matrix_check("i", f"M^-1 R^{j} M", cones.m_inv * rj * cones.M, j=j))
        checks.append(_matrix_check("i", f"M^-1 R^{j} N", cones.m_inv * rj * cones.N, j=j))
        checks.append(
            _matrix_check("vi", f"M^-1 T^-1 R^{j} M", cones.m_inv * t_inv * rj * cones.M, j=j)
        )
        checks.append(
            _matrix_check("vi", f"M^-1 T^-1 R^{j} N", cones.m_inv * t_inv * rj * cones.N, j=j)
        )
        checks.append(
            _matrix_check("vii", f"N^-1 T R^{j} M", cones.n_inv * gens.T * rj * cones.M, j=j)
        )
        checks.append(
            _matrix_check("vii", f"N^-1 T R^{j} N", cones.n_inv * gens.T * rj * cones.N, j=j)
        )
    return checks


def _residue_checks_infinite(gens, cones, ps, t_inv) -> List[ConditionCheck]:
    checks: List[ConditionCheck] = []
    ident = Mat.identity(gens.dim)
    sigma = ps.sigma
    note = "actual matrix at step n is sigma^n * family(n)" if sigma == -1 else ""

    def fam(left_inv, prefix, j, right):
        return family_for(left_inv, prefix, j, right, gens, ps)

    for j, branch in residue_set(ps):
        f_im = fam(cones.m_inv, ident, j, cones.M)
        f_in = fam(cones.m_inv, ident, j, cones.N)
        f_vim = fam(cones.m_inv, t_inv, j, cones.M)
        f_vin = fam(cones.m_inv, t_inv, j, cones.N)
        f_viim = fam(cones.n_inv, gens.T, j, cones.M)
        f_viin = fam(cones.n_inv, gens.T, j, cones.N)
        # B mirror: N-frame families at j equal twisted M-frame families at -j
        if fam(cones.n_inv, ident, j, cones.N) != _twist(fam(cones.m_inv, ident, -j, cones.M)):
            raise AssertionError(f"mirror twist failed for R family at j={j}")
        if f_viim != _twist(fam(cones.m_inv, t_inv, -j, cones.N)):
            raise AssertionError(f"mirror twist failed for T R family at j={j}")
        if f_viin != _twist(fam(cones.m_inv, t_inv, -j, cones.M)):
            raise AssertionError(f"mirror twist failed for T R (N frame) at j={j}")
        tag = f"[{j}+{ps.period}n]"
        checks.append(_family_check("i", f"M^-1 R^{tag} M", f_im, branch, j, sigma, note))
        checks.append(_family_check("i", f"M^-1 R^{tag} N", f_in, branch, j, sigma, note))
        checks.append(_family_check("vi", f"M^-1 T^-1 R^{tag} M", f_vim, branch, j, sigma, note))
        checks.append(_family_check("vi", f"M^-1 T^-1 R^{tag} N", f_vin, branch, j, sigma, note))
        checks.append(_family_check("vii", f"N^-1 T R^{tag} M", f_viim, branch, j, sigma, note))
        checks.append(_family_check("vii", f"N^-1 T R^{tag} N", f_viin, branch, j, sigma, note))
    return checks


def verify_case(case: CaseSpec, p_max: int = 12) -> Verdict:
    """Run the full certificate for one case and return the verdict."""
    gens = build_generators(case)
    ps = detect_power_structure(gens, p_max)
    cones = build_cones(gens)
    conclusion = splitting_from_structure(ps)
    h_kind, g1, g2 = _factor_descriptions(ps)
    t_inv = gens.T.inverse()

    checks: List[ConditionCheck] = []
    k_iv = cones.m_inv * t_inv * cones.M
    k_v = cones.n_inv * gens.T * cones.N
    if k_v != k_iv:
        raise AssertionError("mirror identity failed for T")
    checks.append(_matrix_check("iv", "M^-1 T^-1 M", k_iv))
    checks.append(_matrix_check("v", "N^-1 T N", k_v, note="equals M^-1 T^-1 M under B"))

    if ps.is_finite:
        checks.extend(_residue_checks_finite(gens, cones, ps, t_inv))
    else:
        checks.extend(_residue_checks_infinite(gens, cones, ps, t_inv))

    ii_ok = (
        cones.M.det() != 0
        and cones.N.det() != 0
        and cones.N == gens.B * cones.M
        and gens.B.apply(cones.v) == cones.v
    )
    checks.append(
        _structural_check(
            "ii",
            "cone construction",
            ii_ok,
            "C+ = M(open orthant), C- = N(open orthant) = B C+, frames invertible",
        )
    )
    if h_kind == "pm":
        h_ok = (gens.R ** ps.period) == Mat.identity(gens.dim).scale(-1)
        h_note = "H = {I, -I} is central; every condition is negation invariant"
    else:
        h_ok = True
        h_note = "H is trivial"
    checks.append(_structural_check("H", "H stability", h_ok, h_note))

    certificate = PingPongCertificate(
        case_id=case.id,
        h_kind=h_kind,
        g1=g1,
        g2=g2,
        residues=residue_set(ps),
        checks=tuple(checks),
        conclusion=conclusion,
    )

    failing = certificate.failing()
    if failing is None:
        return Verdict("pass", conclusion, None, certificate)
    if case.relation_word is not None:
        value = verify_relation(case.relation_word, gens)
        if value in ("I", "-I"):
            return Verdict(
                "fail", None, failing, certificate,
                relation=case.relation_word, relation_value=value,
            )
    return Verdict("inconclusive", None, failing, certificate)
