"""Cone frame and sign analysis tests.

The dominance threshold is the load-bearing bound: hypothesis compares the
predicted eventual sign against exact evaluation on a window beyond the
threshold for random integer polynomials.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pingpong.catalog import build_generators, builtin_catalog, case_by_id
from pingpong.cones import (
    BRANCHES,
    DegenerateQuadraticError,
    SignPattern,
    build_cones,
    classify_sign,
    compute_special_vector,
    matpoly_sign_over_branch,
)
from pingpong.linalg import Mat, MatPoly, sign


def test_c01_frozen_frame():
    cones = build_cones(build_generators(case_by_id("c01")))
    assert cones.v == (0, 1, Fraction(-25, 12), 0)
    assert cones.M == Mat(
        [
            [0, 1, 0, 0],
            [1, 0, 0, 0],
            [Fraction(-25, 12), Fraction(5, 2), 5, 0],
            [0, Fraction(-25, 12), 0, -5],
        ]
    )
    assert cones.N == Mat(
        [
            [0, -1, 0, 0],
            [1, Fraction(25, 12), 0, 5],
            [Fraction(-25, 12), Fraction(-5, 2), 5, 0],
            [0, Fraction(25, 12), 0, 5],
        ]
    )


def test_special_vector_closed_form():
    # solving the isotropy quadratic must give v = (0, 1, d/12 - k/2, 0)
    for case in builtin_catalog():
        if case.dim != 4:
            continue
        gens = build_generators(case)
        cones = build_cones(gens)
        expected = (0, 1, Fraction(case.d, 12) - Fraction(case.k, 2), 0)
        assert cones.v == tuple(
            x if isinstance(x, int) else x for x in expected
        ), case.id


def test_frame_invariants_all_cases():
    for case in builtin_catalog():
        gens = build_generators(case)
        cones = build_cones(gens)
        n = gens.dim
        if n == 4:
            assert cones.M.det() == case.d * case.d, case.id
        else:
            assert cones.M.det() != 0
        assert cones.N == gens.B * cones.M, case.id
        assert cones.Q == gens.B * cones.P * gens.B, case.id
        assert cones.m_inv * cones.M == Mat.identity(n)
        assert cones.n_inv * cones.N == Mat.identity(n)
        # frame diagonalizes U to the exponential of the shift matrix
        conj = cones.m_inv * gens.U * cones.M
        for i in range(n):
            for j in range(n):
                want = 0
                if i >= j:
                    fact = 1
                    for m in range(2, i - j + 1):
                        fact *= m
                    want = Fraction(1, fact)
                assert conj.rows[i][j] == want, case.id


def test_sl2_frozen_frame():
    cones = build_cones(build_generators(case_by_id("sl2")))
    assert cones.v == (1, 0)
    assert cones.M == Mat([[1, 2], [0, -1]])
    assert cones.N == Mat([[1, 1], [0, 1]])


def test_degenerate_quadratic():
    j = Mat([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
    bad_c = Mat([[0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])
    with pytest.raises(DegenerateQuadraticError):
        compute_special_vector(bad_c, j)
    with pytest.raises(DegenerateQuadraticError):
        compute_special_vector(Mat.zeros(4), j)


def test_sign_pattern_verdicts():
    assert classify_sign(Mat([[1, 0], [2, 3]])).verdict == "all-nonneg"
    assert classify_sign(Mat([[-1, 0], [0, -2]])).verdict == "all-nonpos"
    assert classify_sign(Mat.zeros(2)).verdict == "all-nonneg"
    split = classify_sign(Mat([[1, 2], [-1, -2]]))
    assert split.verdict == "row-split"
    assert split.is_disjoint_certificate
    assert not split.is_uniform_sign
    assert classify_sign(Mat([[1, -1], [1, 1]])).verdict == "indefinite"


def test_sign_pattern_zero_rows_count_both_ways():
    pat = classify_sign(Mat([[0, 0], [1, -1]]))
    assert pat.nonneg_rows == (0,)
    assert pat.nonpos_rows == (0,)
    assert pat.zero_rows == (0,)
    assert pat.verdict == "row-split"
    assert pat.render() == "00/+-"


def one_by_one(coeffs):
    return MatPoly(tuple(Mat([[c]]) for c in coeffs))


def test_branch_report_thresholds():
    rep = matpoly_sign_over_branch(one_by_one([-10, 1]), "n>=1")
    assert rep.threshold == 11
    assert rep.eventual.signs == ((1,),)
    assert [n for n, _ in rep.checked] == list(range(1, 11))
    assert not rep.holds(lambda p: p.is_all_nonneg)
    assert rep.verdict == "mixed(all-nonneg)"

    rep = matpoly_sign_over_branch(one_by_one([0, 0, 1]), "n<=0")
    assert rep.threshold == 1
    assert rep.eventual.signs == ((1,),)  # even degree
    assert rep.checked == ((0, SignPattern(((0,),))),)
    assert rep.holds(lambda p: p.is_all_nonneg)

    rep = matpoly_sign_over_branch(one_by_one([0, 0, 0, 1]), "n<=-1")
    assert rep.eventual.signs == ((-1,),)  # odd degree flips on the left
    assert rep.checked == ()
    assert rep.holds(lambda p: p.is_all_nonpos)
    assert rep.verdict == "all-nonpos"


def test_branch_report_matrix_entries():
    f = MatPoly((Mat([[1, 1], [0, 0]]), Mat([[1, 0], [0, 1]])))
    rep = matpoly_sign_over_branch(f, "n>=0")
    assert rep.threshold == 2
    assert rep.eventual.signs == ((1, 1), (0, 1))
    assert rep.holds(lambda p: p.is_all_nonneg)
    with pytest.raises(ValueError):
        matpoly_sign_over_branch(f, "n>2")


@settings(max_examples=120, deadline=None)
@given(
    st.lists(st.integers(min_value=-9, max_value=9), min_size=1, max_size=4),
    st.sampled_from(BRANCHES),
)
def test_threshold_soundness_brute_force(coeffs, branch):
    f = one_by_one(coeffs)
    rep = matpoly_sign_over_branch(f, branch)
    lo, hi = (0 if "0" in branch else 1, rep.threshold + 40)
    direction = 1 if branch.startswith("n>=") else -1
    for mag in range(lo, hi):
        n = direction * mag
        actual = sign(f.eval(n).rows[0][0])
        if mag >= rep.threshold:
            assert actual == rep.eventual.signs[0][0], (coeffs, branch, n)
        else:
            assert (n, SignPattern(((actual,),))) in rep.checked
