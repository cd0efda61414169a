"""Case catalog, generator construction and structural verification.

A case is a tuple of rotation parameters together with the two integers
(d, k) that pin down the integral generator pair: U is maximally unipotent,
T is a transvection, and R = T*U has eigenvalues exp(2*pi*i*a_j).  The
builtin catalog lists the fourteen rank-4 symplectic cases plus one 2x2
demo case used to exercise the same engine in SL(2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from .linalg import (
    Mat,
    Poly,
    Scalar,
    charpoly,
    cyclotomic,
    is_squarefree,
    nilpotent_exp,
    nilpotent_log,
)


class IncompleteOrbitError(ValueError):
    """Parameters do not split into complete primitive-residue orbits."""


class NoStructureError(ValueError):
    """No power of R (up to the search bound) is unipotent up to sign."""


class CaseFormatError(ValueError):
    """A case file line does not match the documented format."""


@dataclass(frozen=True)
class SplittingDescriptor:
    """Shape of a free or amalgamated product splitting.

    kind is one of "free" (Z * Z), "free-times-finite" (Z * Z/m) and
    "amalgam" ((Z x Z/2) amalgamated with Z/m over Z/2, m = 2p).
    """

    kind: str
    m: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("free", "free-times-finite", "amalgam"):
            raise ValueError(f"unknown splitting kind {self.kind!r}")
        if (self.m is None) != (self.kind == "free"):
            raise ValueError("m is required exactly for the non-free kinds")

    def render(self) -> str:
        if self.kind == "free":
            return "Z*Z"
        if self.kind == "free-times-finite":
            return f"Z*Z/{self.m}"
        return f"(ZxZ/2)*[Z/2]Z/{self.m}"

    @classmethod
    def parse(cls, text: str) -> "SplittingDescriptor":
        text = text.strip()
        if text == "Z*Z":
            return cls("free")
        if text.startswith("Z*Z/"):
            return cls("free-times-finite", int(text[4:]))
        if text.startswith("(ZxZ/2)*[Z/2]Z/"):
            return cls("amalgam", int(text[len("(ZxZ/2)*[Z/2]Z/"):]))
        raise CaseFormatError(f"unknown splitting descriptor {text!r}")


@dataclass(frozen=True)
class CaseSpec:
    """One verification case: parameters, integral data and expectation."""

    id: str
    dim: int
    params: Optional[tuple]
    d: Optional[int]
    k: Optional[int]
    expected_kind: str  # "split" | "relation" | "unknown"
    expected_splitting: Optional[SplittingDescriptor] = None
    relation_word: Optional[str] = None

    def __post_init__(self):
        if self.dim not in (2, 4):
            raise ValueError("dim must be 2 or 4")
        if self.expected_kind not in ("split", "relation", "unknown"):
            raise ValueError(f"unknown expectation {self.expected_kind!r}")
        if (self.expected_kind == "split") != (self.expected_splitting is not None):
            raise ValueError("split expectation requires a splitting descriptor")
        if (self.expected_kind == "relation") != (self.relation_word is not None):
            raise ValueError("relation expectation requires a relation word")
        if self.dim == 4 and self.params is not None and (self.d is None or self.k is None):
            raise ValueError("dim-4 catalog cases need d and k")
        if self.params is not None:
            ps = tuple(Fraction(p) for p in self.params)
            if len(ps) != self.dim:
                raise ValueError("need one parameter per dimension")
            if any(not (0 < p < 1) for p in ps):
                raise ValueError("parameters must lie strictly between 0 and 1")
            if list(ps) != sorted(ps):
                raise ValueError("parameters must be sorted ascending")
            if sorted(1 - p for p in ps) != sorted(ps):
                raise ValueError("parameters must be closed under a -> 1-a")
            object.__setattr__(self, "params", ps)


@dataclass(frozen=True)
class GroupGens:
    """Generator set: U maximally unipotent, T a transvection, R = T*U,
    J the invariant form, B an involution with B R B = R^-1, B T^-1 B = T."""

    dim: int
    d: Optional[int]
    k: Optional[int]
    U: Mat
    T: Mat
    R: Mat
    J: Mat
    B: Mat


@dataclass(frozen=True)
class PowerStructure:
    """Minimal p with sigma * R^p unipotent, and Z = log(sigma * R^p).

    finite_order is the exact order of R when Z = 0, else None.
    nilpotency_degree is the least e with Z^e = 0 (0 when Z = 0).
    """

    period: int
    sigma: int
    Z: Mat
    finite_order: Optional[int]
    nilpotency_degree: int

    @property
    def is_finite(self) -> bool:
        return self.finite_order is not None


@dataclass(frozen=True)
class StructureCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class StructureReport:
    case_id: str
    checks: tuple
    power: Optional[PowerStructure]
    charpoly: Poly

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def build_generators(case: CaseSpec) -> GroupGens:
    """Construct the integral generator set for a case."""
    if case.dim == 2:
        u = Mat([[3, 4], [-1, -1]])
        t = Mat([[1, 3], [0, 1]])
        j = Mat([[0, 1], [-1, 0]])
        b = Mat([[1, 1], [0, -1]])
        return GroupGens(2, None, None, u, t, t * u, j, b)
    d, k = case.d, case.k
    if d is None or k is None or d < 1 or k < 1:
        raise ValueError("dim-4 generators need integers d >= 1 and k >= 1")
    u = Mat([[1, 1, 0, 0], [0, 1, 0, 0], [d, d, 1, 0], [0, -k, -1, 1]])
    t = Mat([[1, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 0], [0, 0, 0, 1]])
    j = Mat([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    b = Mat([[-1, 0, 0, 0], [0, 1, 0, -1], [-d, 0, 1, 0], [0, 0, 0, -1]])
    return GroupGens(4, d, k, u, t, t * u, j, b)


def detect_power_structure(gens: GroupGens, p_max: int = 12) -> PowerStructure:
    """Find minimal p <= p_max and sigma with sigma * R^p unipotent."""
    n = gens.R.dim
    ident = Mat.identity(n)
    power = ident
    for p in range(1, p_max + 1):
        power = power * gens.R
        for sigma in (1, -1):
            cand = power.scale(sigma)
            if ((cand - ident) ** n).is_zero():
                z = nilpotent_log(cand)
                if nilpotent_exp(z) != cand:
                    raise AssertionError("log/exp round trip failed")
                if z.is_zero():
                    finite = p if sigma == 1 else 2 * p
                    degree = 0
                else:
                    finite = None
                    degree = next(e for e in range(1, n + 1) if (z ** e).is_zero())
                return PowerStructure(p, sigma, z, finite, degree)
    raise NoStructureError(f"no power of R up to {p_max} is unipotent up to sign")


def order_result(gens: GroupGens, bound: int = 24):
    """Exact power iteration: ("minus", p), ("finite", m) or ("infinite", bound)."""
    ident = Mat.identity(gens.R.dim)
    power = ident
    for m in range(1, bound + 1):
        power = power * gens.R
        if power == -ident:
            return ("minus", m)
        if power == ident:
            return ("finite", m)
    return ("infinite", bound)


def charpoly_from_params(params: Iterable) -> Poly:
    """Product of cyclotomic polynomials determined by the parameters.

    Each reduced parameter a/q must come with the full primitive-residue
    orbit {r/q : gcd(r, q) = 1}; otherwise IncompleteOrbitError is raised.
    """
    remaining = [Fraction(p) for p in params]
    if any(not (0 < p < 1) for p in remaining):
        raise ValueError("parameters must lie strictly between 0 and 1")
    result = Poly((1,))
    while remaining:
        q = remaining[0].denominator
        orbit = [Fraction(r, q) for r in range(1, q) if Fraction(r, q).denominator == q]
        for member in orbit:
            try:
                remaining.remove(member)
            except ValueError:
                raise IncompleteOrbitError(
                    f"orbit of denominator {q} is incomplete: missing {member}"
                ) from None
        result = result * cyclotomic(q)
    return result


def _preserves_form(g: Mat, j: Mat) -> bool:
    return g.transpose() * j * g == j


def verify_structure(case: CaseSpec, p_max: int = 12) -> StructureReport:
    """Run every exact structural identity for a case and report results."""
    gens = build_generators(case)
    n = gens.dim
    ident = Mat.identity(n)
    checks = []

    def check(name: str, passed: bool, detail: str = ""):
        checks.append(StructureCheck(name, bool(passed), detail))

    check("R = T*U", gens.R == gens.T * gens.U)
    for label, g in (("U", gens.U), ("T", gens.T), ("R", gens.R)):
        check(f"{label} preserves J", _preserves_form(g, gens.J))
    check("B^2 = I", gens.B * gens.B == ident)
    check("B R B = R^-1", gens.B * gens.R * gens.B == gens.R.inverse())
    check("B T^-1 B = T", gens.B * gens.T.inverse() * gens.B == gens.T)
    check("rank(T - I) = 1", (gens.T - ident).rank() == 1)
    unipotent_steps = (gens.U - ident) ** (n - 1)
    check(
        "U maximally unipotent",
        ((gens.U - ident) ** n).is_zero() and not unipotent_steps.is_zero(),
    )
    if n == 4:
        e2 = (0, 1, 0, 0)
        e3 = (0, 0, 1, 0)
        check("B fixes e2 and e3", gens.B.apply(e2) == e2 and gens.B.apply(e3) == e3)
        check("B carries -d", gens.B.rows[2][0] == -gens.d)
    else:
        e1 = (1, 0)
        check("B fixes e1", gens.B.apply(e1) == e1)

    cp = charpoly(gens.R)
    if case.params is not None:
        check(
            "charpoly(R) matches parameters",
            cp == charpoly_from_params(case.params),
            repr(cp),
        )

    power: Optional[PowerStructure] = None
    try:
        power = detect_power_structure(gens, p_max)
    except NoStructureError as err:
        check("power structure", False, str(err))
    else:
        recon = nilpotent_exp(power.Z)
        check(
            "sigma * R^p = exp(Z)",
            (gens.R ** power.period).scale(power.sigma) == recon,
            f"p={power.period} sigma={power.sigma:+d}",
        )
        check(
            "finite order iff squarefree charpoly",
            (power.finite_order is not None) == is_squarefree(cp),
        )
        kind, value = order_result(gens, bound=2 * p_max)
        if power.finite_order is None:
            check("power iteration agrees", kind == "infinite")
        elif power.sigma == -1:
            check(
                "power iteration agrees",
                kind == "minus" and value == power.period,
                f"R^{value} = -I",
            )
        else:
            check(
                "power iteration agrees",
                kind == "finite" and value == power.finite_order,
                f"R^{value} = I",
            )

    return StructureReport(case.id, tuple(checks), power, cp)


def _case(cid, params, d, k, expected):
    kind, split, word = expected
    return CaseSpec(
        id=cid,
        dim=2 if cid == "sl2" else 4,
        params=tuple(Fraction(a, b) for a, b in params),
        d=d,
        k=k,
        expected_kind=kind,
        expected_splitting=split,
        relation_word=word,
    )


def _split(desc):
    return ("split", SplittingDescriptor.parse(desc), None)


def _rel(word):
    return ("relation", None, word)


_UNKNOWN = ("unknown", None, None)

# (d, k) for each parameter row are pinned by the exact identities
# trace(R) = 4 - k and e2(R) = 6 - 2k + d; the structure tests recompute
# charpoly(R) and compare with the cyclotomic product of the parameters.
_CATALOG = (
    _case("c01", [(1, 5), (2, 5), (3, 5), (4, 5)], 5, 5, _split("Z*Z/5")),
    _case("c02", [(1, 8), (3, 8), (5, 8), (7, 8)], 2, 4, _split("(ZxZ/2)*[Z/2]Z/8")),
    _case("c03", [(1, 12), (5, 12), (7, 12), (11, 12)], 1, 4, _split("(ZxZ/2)*[Z/2]Z/12")),
    _case("c04", [(1, 2), (1, 2), (1, 2), (1, 2)], 16, 8, _split("Z*Z")),
    _case("c05", [(1, 3), (1, 2), (1, 2), (2, 3)], 12, 7, _split("Z*Z")),
    _case("c06", [(1, 4), (1, 2), (1, 2), (3, 4)], 8, 6, _split("Z*Z")),
    _case("c07", [(1, 6), (1, 2), (1, 2), (5, 6)], 4, 5, _split("Z*Z")),
    _case("c08", [(1, 4), (1, 3), (2, 3), (3, 4)], 6, 5, _rel("(R^6T)^2(R^6T^-1)^2")),
    _case("c09", [(1, 6), (1, 6), (5, 6), (5, 6)], 1, 2, _rel("(RT)^8")),
    _case("c10", [(1, 6), (1, 4), (3, 4), (5, 6)], 2, 3, _rel("(R^6T)^2(R^6T^-1)^2")),
    _case("c11", [(1, 6), (1, 3), (2, 3), (5, 6)], 3, 4, _rel("(R^3T)^2(R^3T^-1)^2")),
    _case("c12", [(1, 10), (3, 10), (7, 10), (9, 10)], 1, 3, _rel("(R^2T)^12")),
    _case("c13", [(1, 4), (1, 4), (3, 4), (3, 4)], 4, 4, _UNKNOWN),
    _case("c14", [(1, 3), (1, 3), (2, 3), (2, 3)], 9, 6, _UNKNOWN),
    _case("sl2", [(1, 3), (2, 3)], None, None, _split("Z*Z/3")),
)


def builtin_catalog() -> tuple:
    """The built-in cases: fourteen 4x4 rows plus the 2x2 demo."""
    return _CATALOG


def case_by_id(cid: str, cases: Optional[Iterable[CaseSpec]] = None) -> CaseSpec:
    for case in cases if cases is not None else builtin_catalog():
        if case.id == cid:
            return case
    raise KeyError(f"no case with id {cid!r}")


def explore_case(d: int, k: int) -> CaseSpec:
    """A dim-4 case built from raw (d, k), with no parameter expectations."""
    return CaseSpec(id=f"d{d}k{k}", dim=4, params=None, d=d, k=k, expected_kind="unknown")


def render_expected(case: CaseSpec) -> str:
    if case.expected_kind == "split":
        return case.expected_splitting.render()
    if case.expected_kind == "relation":
        return f"relation:{case.relation_word}"
    return "?"


def parse_case_line(line: str) -> Optional[CaseSpec]:
    """Parse one case-file line: ``id dim a1 a2 [a3 a4] d k expected``.

    Returns None for blank lines and comments.  dim-2 lines carry two
    parameters and no d/k.  expected is ``split:<descriptor>``,
    ``relation:<word>`` or ``unknown``.
    """
    text = line.split("#", 1)[0].strip()
    if not text:
        return None
    tokens = text.split()
    try:
        cid, dim = tokens[0], int(tokens[1])
        if dim == 2:
            params = tuple(Fraction(t) for t in tokens[2:4])
            d = k = None
            expected = tokens[4]
            extra = tokens[5:]
        elif dim == 4:
            params = tuple(Fraction(t) for t in tokens[2:6])
            d, k = int(tokens[6]), int(tokens[7])
            expected = tokens[8]
            extra = tokens[9:]
        else:
            raise CaseFormatError(f"dim must be 2 or 4, got {dim}")
        if extra:
            raise CaseFormatError(f"unexpected trailing tokens {extra}")
    except (IndexError, ValueError, ZeroDivisionError) as err:
        if isinstance(err, CaseFormatError):
            raise
        raise CaseFormatError(f"malformed case line {line!r}") from None

    if expected == "unknown":
        kind, split, word = "unknown", None, None
    elif expected.startswith("split:"):
        kind, split, word = "split", SplittingDescriptor.parse(expected[6:]), None
    elif expected.startswith("relation:"):
        kind, split, word = "relation", None, expected[9:]
    else:
        raise CaseFormatError(f"unknown expectation token {expected!r}")
    try:
        return CaseSpec(cid, dim, params, d, k, kind, split, word)
    except ValueError as err:
        raise CaseFormatError(str(err)) from None


def load_case_file(path) -> tuple:
    """Load a whitespace-separated case file; '#' starts a comment."""
    cases = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, 1):
            try:
                case = parse_case_line(line)
            except CaseFormatError as err:
                raise CaseFormatError(f"{path}:{lineno}: {err}") from None
            if case is not None:
                cases.append(case)
    seen = set()
    for case in cases:
        if case.id in seen:
            raise CaseFormatError(f"duplicate case id {case.id!r}")
        seen.add(case.id)
    return tuple(cases)


def render_case_line(case: CaseSpec) -> str:
    """Inverse of parse_case_line for round-tripping catalogs to files."""
    parts = [case.id, str(case.dim)]
    parts.extend(str(p) for p in case.params)
    if case.dim == 4:
        parts.extend([str(case.d), str(case.k)])
    if case.expected_kind == "split":
        parts.append(f"split:{case.expected_splitting.render()}")
    elif case.expected_kind == "relation":
        parts.append(f"relation:{case.relation_word}")
    else:
        parts.append("unknown")
    return " ".join(parts)
