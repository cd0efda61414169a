"""Point oracle internals.

The integer helpers are tested against the Fraction-based linear algebra
they are meant to double-check, and the oracle is fed a deliberately false
certificate to prove it can actually catch violations.
"""

import pytest
from hypothesis import given, settings, strategies as st

from pingpong.catalog import build_generators, case_by_id, detect_power_structure
from pingpong.certify import ConditionCheck, PingPongCertificate, verify_case
from pingpong.cones import build_cones
from pingpong.linalg import Mat
from pingpong.pointcheck import (
    _condition_ok,
    _int_inverse_unimodular,
    _PowerCache,
    brute_force_check,
    int_matmul,
    integer_adjugate,
    integer_det,
    integer_rows,
)

int_rows_3 = st.lists(
    st.lists(st.integers(min_value=-9, max_value=9), min_size=3, max_size=3),
    min_size=3,
    max_size=3,
).map(lambda rows: tuple(tuple(r) for r in rows))


@settings(max_examples=60, deadline=None)
@given(int_rows_3)
def test_integer_det_and_adjugate_against_fractions(rows):
    mat = Mat(rows)
    assert integer_det(rows) == mat.det()
    adj = integer_adjugate(rows)
    # A * adj(A) = det(A) * I, including the singular case
    prod = int_matmul(rows, adj)
    det = mat.det()
    assert prod == tuple(
        tuple(det if i == j else 0 for j in range(3)) for i in range(3)
    )


@settings(max_examples=40, deadline=None)
@given(int_rows_3, int_rows_3)
def test_int_matmul_matches_mat(a, b):
    assert int_matmul(a, b) == (Mat(a) * Mat(b)).rows


def test_integer_rows_scaling():
    cones = build_cones(build_generators(case_by_id("c01")))
    rows, c = integer_rows(cones.M)
    assert c == 12
    assert rows[2] == (-25, 30, 60, 0)
    assert all(isinstance(x, int) for row in rows for x in row)


def test_unimodular_inverse():
    gens = build_generators(case_by_id("c05"))
    r_rows = tuple(tuple(int(x) for x in row) for row in gens.R.rows)
    inv = _int_inverse_unimodular(r_rows)
    assert Mat(inv) == gens.R.inverse()
    with pytest.raises(ValueError):
        _int_inverse_unimodular(((2, 0), (0, 1)))


def test_power_cache():
    gens = build_generators(case_by_id("c04"))
    r_rows = tuple(tuple(int(x) for x in row) for row in gens.R.rows)
    cache = _PowerCache(r_rows)
    for m in (-7, -1, 0, 1, 9):
        assert Mat(cache.power(m)) == gens.R ** m, m


def test_condition_predicates():
    assert _condition_ok("iv", (1, 2, 3, 4))
    assert not _condition_ok("iv", (1, 0, 3, 4))
    assert _condition_ok("vi", (-1, -2, -3, -4))
    assert not _condition_ok("vi", (1, -2, 3, 4))
    assert _condition_ok("i", (1, -2, 3, 4))
    assert not _condition_ok("i", (1, 2, 3, 4))
    assert not _condition_ok("i", (-1, -2, -3, -4))
    with pytest.raises(ValueError):
        _condition_ok("ii", (1,))


def test_oracle_clean_and_deterministic():
    case = case_by_id("c01")
    gens = build_generators(case)
    ps = detect_power_structure(gens)
    cones = build_cones(gens)
    verdict = verify_case(case)
    rep1 = brute_force_check(verdict.certificate, gens, ps, cones, count=120, seed=3)
    rep2 = brute_force_check(verdict.certificate, gens, ps, cones, count=120, seed=3)
    assert rep1 == rep2
    assert rep1.clean
    assert rep1.targets == 26
    assert rep1.points == 26 * 120


def test_oracle_catches_false_claims():
    # R^0 maps C+ to itself identically, so claiming disjointness must fail
    case = case_by_id("c01")
    gens = build_generators(case)
    ps = detect_power_structure(gens)
    cones = build_cones(gens)
    lie = ConditionCheck(
        condition="i",
        target="M^-1 R^0 M",
        j=0,
        branch=None,
        kind="matrix",
        sigma=1,
        verdict="all-nonneg",
        threshold=0,
        checked=(),
        passed=True,
    )
    cert = PingPongCertificate(
        case_id="c01",
        h_kind="trivial",
        g1="Z generated by T",
        g2="Z/5 generated by R",
        residues=((0, None),),
        checks=(lie,),
        conclusion=verify_case(case).certificate.conclusion,
    )
    report = brute_force_check(cert, gens, ps, cones, count=50, seed=11)
    assert not report.clean
    assert len(report.violations) == 20  # recording cap
    first = report.violations[0]
    assert first.condition == "i" and first.n is None
    assert all(x > 0 for x in first.z)
