import math
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from avcensus import numfield as nf
from avcensus.errors import PreconditionError

NINE = [1, 2, 3, 7, 11, 19, 43, 67, 163]


def test_class_number_examples():
    assert nf.class_number(1) == 1
    assert nf.class_number(23) == 3
    assert nf.class_number(163) == 1
    assert nf.class_number(5) == 2


def test_non_squarefree_rejected():
    with pytest.raises(PreconditionError):
        nf.class_number(4)


def test_class_number_one_scan_examples():
    assert nf.class_number_one_scan(200) == NINE
    assert nf.class_number_one_scan(5) == [1, 2, 3]
    assert nf.class_number_one_scan(1) == [1]


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 20000))
def test_reduced_forms_match_brute(d):
    if not nf.is_squarefree(d):
        return
    assert nf.class_number(d) == nf.class_number_brute(d)


@settings(max_examples=300, deadline=None)
@given(st.integers(-200, 200), st.integers(1, 199).filter(lambda n: n % 2))
def test_kronecker_matches_jacobi_for_odd_n(D, n):
    assert nf.kronecker(D, n) == sympy.jacobi_symbol(D % n, n) if n > 1 else nf.kronecker(D, n) == 1


def test_kronecker_at_two():
    # (D/2) = 0 for even D, 1 for D = +-1 mod 8, -1 for D = +-3 mod 8
    for D in range(-50, 50):
        expected = 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
        assert nf.kronecker(D, 2) == expected


@pytest.mark.parametrize("n", [0, 2, 4, 6, 8, 10, 12, 20])
def test_bernoulli_matches_sympy(n):
    assert nf.bernoulli(n) == Fraction(str(sympy.bernoulli(n)))


def test_bernoulli_one_convention():
    assert nf.bernoulli(1) == Fraction(-1, 2)


def test_l_value_examples():
    z2 = nf.dirichlet_L_exact(1, 2)
    assert (z2.rational, z2.pi_power, z2.radicand) == (Fraction(1, 6), 2, 1)
    z4 = nf.dirichlet_L_exact(1, 4)
    assert (z4.rational, z4.pi_power) == (Fraction(1, 90), 4)
    l1 = nf.dirichlet_L_exact(-4, 1)
    assert (l1.rational, l1.pi_power, l1.radicand) == (Fraction(1, 4), 1, 1)


def test_parity_mismatch_rejected():
    with pytest.raises(PreconditionError):
        nf.dirichlet_L_exact(-4, 2)
    with pytest.raises(PreconditionError):
        nf.dirichlet_L_exact(1, 3)


def _l_series(D, k):
    mpmath.mp.dps = 30
    m = abs(D)
    if k == 1:
        return -sum(nf.kronecker(D, a) * mpmath.digamma(mpmath.mpf(a) / m) for a in range(1, m + 1)) / m
    # periodic character: L(k) = m^-k sum_a chi(a) zeta(k, a/m)
    return sum(nf.kronecker(D, a) * mpmath.zeta(k, mpmath.mpf(a) / m) for a in range(1, m + 1)) / mpmath.mpf(m) ** k


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -11, -19, -43, -67, -163, -23, -15])
@pytest.mark.parametrize("k", [1, 3, 5])
def test_l_values_match_hurwitz_series(D, k):
    mpmath.mp.dps = 30
    exact = nf.dirichlet_L_exact(D, k).to_mpf()
    assert abs(exact - _l_series(D, k)) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("k", [2, 4, 6, 8, 10])
def test_zeta_values(k):
    mpmath.mp.dps = 30
    assert abs(nf.dirichlet_L_exact(1, k).to_mpf() - mpmath.zeta(k)) < mpmath.mpf(10) ** -25


def test_class_number_formula_exact_small():
    for d in range(1, 200):
        if not nf.is_squarefree(d):
            continue
        F = nf.ImagQuadField(d)
        L = nf.dirichlet_L_exact(F.D, 1)
        # h * 2 pi / (w sqrt|D|) = L(1, chi_D): rational parts and radicands equal
        s, m = nf.squarefree_part(abs(F.D))
        lhs = nf.LValue(Fraction(2 * F.h, F.w * m * s), 1, s)
        assert lhs == L


def test_generalized_bernoulli_b1_gives_class_number():
    # h = -w/2 * B_{1, chi} for D < -4 ... and w/2 * |B_1| in general
    for d in NINE + [5, 6, 23, 47]:
        F = nf.ImagQuadField(d)
        b1 = nf.generalized_bernoulli(1, F.character)
        assert Fraction(-F.w, 2) * b1 == F.h


def test_regulator_bound_examples():
    assert abs(nf.regulator_lower_bound(1, 0) - 0.00299 * math.exp(0.48)) < 1e-12
    assert abs(nf.regulator_lower_bound(0, 1) - 0.003175) < 1e-5
    for r1 in range(4):
        for r2 in range(4):
            if r1 + r2:
                assert nf.regulator_lower_bound(r1, r2) >= 1 / 500


def test_zeta_residue_examples():
    assert abs(nf.zeta_residue_upper_bound(2, 4) - 1.884) < 1e-3
    assert abs(nf.zeta_residue_upper_bound(3, 49) - 7.0) < 0.01
    with pytest.raises(PreconditionError):
        nf.zeta_residue_upper_bound(1, 4)


def test_class_number_bound_chain_examples():
    ln, value = nf.class_number_bound_chain([nf.CMBoundInput(2, 0, 1, 4)])
    assert math.isclose(value, 2 * math.log(4) * 500 * math.e, rel_tol=1e-12)
    ln, value = nf.class_number_bound_chain([nf.CMBoundInput(1, 1, 0, 1)])
    assert math.isclose(value, math.sqrt(500 * math.e), rel_tol=1e-12)


def test_minkowski_examples():
    expected = [2, 48, 96, 23040, 46080, 23224320, 46448640, 22295347200]
    assert [nf.minkowski_bound(n) for n in range(1, 9)] == expected
    for n in range(1, 9):
        assert nf.minkowski_bound(n) >= math.factorial(n) * 2 ** n


def test_weil_discriminant_exponent():
    assert nf.weil_discriminant_exponent(4) == 3
    assert nf.weil_discriminant_exponent(2) == Fraction(1, 2)
