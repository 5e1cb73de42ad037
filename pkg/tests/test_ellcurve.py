import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avcensus import ellcurve as ec
from avcensus.errors import LimitExceededError, PreconditionError
from avcensus.numfield import kronecker


def test_point_count_examples():
    td = ec.point_count(ec.Curve(5, 1, 0))
    assert (td.N1, td.a) == (4, 2)
    c = ec.Curve(7, 0, 2)
    td = ec.point_count(c)
    assert td.N1 == ec.point_count_naive(c)
    assert abs(td.a) <= 5


def test_singular_curve_rejected():
    with pytest.raises(PreconditionError):
        ec.Curve(5, 0, 0)
    with pytest.raises(PreconditionError):
        ec.Curve(3, 1, 1)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_fp2_oracle_on_every_curve(p):
    for a4 in range(p):
        for a6 in range(p):
            if (4 * a4 ** 3 + 27 * a6 ** 2) % p == 0:
                continue
            c = ec.Curve(p, a4, a6)
            td = ec.point_count(c)
            assert td.N1 == ec.point_count_naive(c)
            assert td.N2 == ec.point_count_fp2_brute(c)
            assert td.N2 == (p + 1 - td.a) * (p + 1 + td.a)
            assert td.a * td.a <= 4 * p


def test_family_traces_match_single_counts():
    p = 17
    traces, ok = ec.family_traces(p)
    for a4 in range(p):
        for a6 in range(p):
            if ok[a4, a6]:
                assert traces[a4, a6] == ec.point_count(ec.Curve(p, a4, a6)).a


def test_p_power_convention():
    assert ec.is_p_power(1, 5)
    assert ec.is_p_power(125, 5)
    assert not ec.is_p_power(6, 5)


@pytest.mark.parametrize("p", [5, 7])
def test_lemma_examples(p):
    r = ec.verify_not_both_p_groups(p)
    assert r.passed and r.violations == [] and r.identity_ok


def test_lemma_all_primes_to_200():
    for p in ec.primes_upto(200):
        if p >= 5:
            assert ec.verify_not_both_p_groups(int(p)).passed


def test_supersingular_edge():
    for p in (5, 7, 11, 13, 17, 19, 23):
        assert not ec.is_p_power(p + 1, p)


def test_cm_trace_examples():
    assert ec.find_cm_trace(5, 1) == (2, 4)
    assert ec.find_cm_trace(2, 7) == (1, 1)
    assert ec.find_cm_trace(3, 1) is None
    with pytest.raises(PreconditionError):
        ec.find_cm_trace(5, 5)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5000), st.sampled_from(sorted(ec.CM_DISCRIMINANTS)))
def test_cm_trace_solutions_are_exact(p, d):
    if not ec.is_prime(p):
        return
    hit = ec.find_cm_trace(p, d)
    if hit is not None:
        a, b = hit
        assert a * a + d * b * b == 4 * p
        assert a * a <= 4 * p
    else:
        assert all((4 * p - a * a) % d or math.isqrt((4 * p - a * a) // d) ** 2 != (4 * p - a * a) // d
                   or (4 * p - a * a) == 0
                   for a in range(-math.isqrt(4 * p), math.isqrt(4 * p) + 1))


def test_density_fixture_values():
    assert ec.good_prime_density(2) == (1, 1, 1.0)
    assert ec.good_prime_density(100) == (25, 25, 1.0)


def test_density_matches_per_prime_evaluation():
    X = 3000
    primes = [int(p) for p in ec.primes_upto(X)]
    good = sum(1 for p in primes if any(kronecker(D, p) == 1 for D in ec.CM_DISCRIMINANTS.values()))
    assert ec.good_prime_density(X) == (good, len(primes), good / len(primes))


def test_limits():
    with pytest.raises(LimitExceededError):
        ec.good_prime_density(10 ** 8)
    with pytest.raises(LimitExceededError):
        ec.point_count_fp2_brute(ec.Curve(17, 1, 1))
