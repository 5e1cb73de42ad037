import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avcensus import config, weil
from avcensus.errors import LimitExceededError, PreconditionError
from avcensus.weil import WeilPolynomial


def numeric_is_weil(f, tol=1e-6):
    coeffs = list(reversed(f.coefficients()))
    roots = np.roots([float(c) for c in coeffs])
    return bool(np.all(np.abs(np.abs(roots) ** 2 - f.q) < tol * f.q * 10))


def a_box(g, q):
    return [math.comb(2 * g, k) * math.isqrt(q ** k) + math.comb(2 * g, k) + 1 for k in range(1, g + 1)]


@pytest.mark.parametrize("q", [2, 3, 5, 7])
def test_genus_one_count(q):
    assert weil.enumerate_weil(1, q).count == 2 * math.isqrt(4 * q) + 1


@pytest.mark.parametrize("g,q,expected", [(1, 2, 5), (1, 5, 9), (0, 2, 1), (0, 3, 1)])
def test_enumerate_examples(g, q, expected):
    assert weil.enumerate_weil(g, q).count == expected


@pytest.mark.parametrize("q", [2, 3])
def test_genus_two_matches_numeric_roots(q):
    found = {f.a for f in weil.enumerate_weil(2, q, keep_list=True).polynomials}
    b1, b2 = a_box(2, q)
    numeric = set()
    for a1 in range(-b1, b1 + 1):
        for a2 in range(-b2, b2 + 1):
            if numeric_is_weil(WeilPolynomial(2, q, (a1, a2))):
                numeric.add((a1, a2))
    assert found == numeric


def test_is_weil_examples():
    assert weil.is_weil(WeilPolynomial(1, 2, (2,)))
    assert not weil.is_weil(WeilPolynomial(1, 2, (3,)))
    assert weil.is_weil(WeilPolynomial(1, 4, (4,)))


def test_repeated_root_sqrt_q_accepted():
    # (x^2 - 3)^2 = x^4 - 6x^2 + 9 over q = 3: a = (0, -6)
    assert weil.is_weil(WeilPolynomial(2, 3, (0, -6)))


def test_to_real_weil_examples():
    assert weil.to_real_weil(WeilPolynomial(1, 2, (3,))).c == (-3,)
    assert weil.to_real_weil(WeilPolynomial(2, 2, (0, 0))).c == (0, -4)
    assert weil.to_real_weil(WeilPolynomial(0, 2, ())).c == ()


def test_functional_equation_violation_rejected():
    with pytest.raises(PreconditionError):
        WeilPolynomial.from_coefficients([2, 0, 1, 0, 1], 2)


def test_power_sum_examples():
    assert weil.power_sum_profile(WeilPolynomial(1, 2, (2,))) == [2]
    assert weil.power_sum_profile(WeilPolynomial(1, 4, (4,))) == [4]
    a1, a2 = 0, 0
    assert weil.power_sum_profile(WeilPolynomial(2, 2, (a1, a2))) == [a1, a1 * a1 - 2 * a2]


@pytest.mark.parametrize("g,q", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_enumerated_invariants(g, q):
    res = weil.enumerate_weil(g, q, keep_list=True)
    bounds = weil.lemma_count_bounds(g, q)
    assert res.count <= bounds.rigorous_bound
    for f in res.polynomials:
        assert weil.functional_equation_holds(f.coefficients(), q)
        assert weil.to_real_weil(f).to_weil() == f
        assert weil.is_weil(f)
        for k, s in enumerate(weil.power_sum_profile(f), start=1):
            assert s * s <= 4 * g * g * q ** k


def test_lemma_bounds_examples():
    b = weil.lemma_count_bounds(1, 2)
    assert b.rigorous_bound == 5
    assert abs(float(b.paper_bound.value()) - 2 * math.sqrt(2)) < 1e-12
    assert abs(float(weil.lemma_count_bounds(2, 2).paper_bound.value()) - 16 * 2 ** 1.5) < 1e-9
    assert weil.lemma_count_bounds(1, 4).rigorous_bound == 9


def test_limits_are_enforced_and_echoed():
    with pytest.raises(LimitExceededError) as info:
        weil.enumerate_weil(5, 2)
    assert "4" in str(info.value)
    config.set_value("weil.max_q", 3)
    with pytest.raises(LimitExceededError):
        weil.enumerate_weil(1, 4)


def test_non_prime_power_rejected():
    with pytest.raises(PreconditionError):
        weil.enumerate_weil(1, 6)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 3), st.data())
def test_is_weil_agrees_with_numeric_roots(q, data):
    g = data.draw(st.integers(1, 3))
    box = a_box(g, q)
    a = tuple(data.draw(st.integers(-b, b)) for b in box)
    f = WeilPolynomial(g, q, a)
    exact = weil.is_weil(f)
    if exact:
        assert numeric_is_weil(f, tol=1e-3)
    else:
        # roots of integer polynomials off the circle stay well away from it
        assert not numeric_is_weil(f, tol=1e-9)


def test_exponent_trend_report():
    # reported, not asserted as a hard limit: log N / ((g^2/4) log q) for g = 1..3
    for q in (2, 3):
        ratios = [math.log(weil.enumerate_weil(g, q).count) / (g * g / 4 * math.log(q))
                  for g in (1, 2, 3)]
        assert all(r > 0 for r in ratios)
