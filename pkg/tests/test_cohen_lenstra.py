import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from avcensus import cohen_lenstra as cl
from avcensus.cohen_lenstra import AbelianLGroup
from avcensus.errors import PreconditionError


def snf_oracle(m, ell, k):
    """Cokernel over Z/l^k from the integer Smith form of a lift."""
    n = len(m)
    s = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
    exps = []
    for i in range(n):
        d = int(s[i, i])
        if d == 0:
            return AbelianLGroup(ell, insufficient=True)
        v = 0
        while d % ell == 0:
            d //= ell
            v += 1
        if v >= k:
            return AbelianLGroup(ell, insufficient=True)
        exps.append(v)
    return AbelianLGroup(ell, tuple(exps))


def test_cokernel_examples():
    assert cl.cokernel([[1, 0], [0, 1]], 2, 4).is_trivial
    assert cl.cokernel([[2, 0], [0, 1]], 2, 4).exponents == (1,)
    # det = 4 and the entries generate the unit ideal, so the cokernel is Z/4
    assert cl.cokernel([[2, 1], [0, 2]], 2, 4).exponents == (2,)
    assert cl.cokernel([[0, 0], [0, 1]], 2, 4).insufficient


def test_group_order():
    assert AbelianLGroup(3, (2, 1)).order == 27
    assert AbelianLGroup(3, insufficient=True).order is None


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 4), st.integers(1, 4), st.data())
def test_cokernel_matches_smith_form(ell, k, n, data):
    m = [[data.draw(st.integers(0, ell ** k - 1)) for _ in range(n)] for _ in range(n)]
    assert cl.cokernel(m, ell, k) == snf_oracle(m, ell, k)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(1, 5), st.integers(0, 10 ** 6))
def test_batched_cokernel_matches_scalar(ell, g, seed):
    k = 3
    mats = cl.MatrixSampler(ell, k, g, seed).batch(0, 20)
    batched = cl.batch_cokernels(mats, ell, k)
    for m, b in zip(mats, batched):
        assert cl.cokernel(m.tolist(), ell, k) == b


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(-3, 3), st.integers(0, 2))
def test_cokernel_invariant_under_unimodular_change(seed, c, pos):
    ell, k, g = 2, 5, 3
    m = cl.MatrixSampler(ell, k, g, seed).batch(0, 1)[0]
    u = np.eye(g, dtype=np.int64)
    u[pos, (pos + 1) % g] = c
    v = np.eye(g, dtype=np.int64)[[1, 2, 0]]
    mod = ell ** k
    conj = (u @ m @ v) % mod
    assert cl.cokernel(m.tolist(), ell, k) == cl.cokernel(conj.tolist(), ell, k)


def test_exhaustive_genus_one_oracle():
    # P(1 - f is a unit mod 16) over all 16 residues
    exact = Fraction(sum(1 for f in range(16) if (1 - f) % 2), 16)
    assert exact == Fraction(1, 2)
    est = cl.joint_sample(1, 2, 4, (1,), [()], 20000, seed=7)
    assert abs(est.estimate - float(exact)) <= 3 * est.stderr


def test_trials_must_be_positive():
    with pytest.raises(PreconditionError):
        cl.joint_sample(1, 2, 4, (1,), [()], 0, seed=1)
    with pytest.raises(PreconditionError):
        cl.joint_sample(2, 2, 4, (1, 1), [(), ()], 10, seed=1)


@pytest.mark.parametrize("g", [2, 4, 6])
@pytest.mark.parametrize("ell", [2, 3])
def test_sampling_converges_to_gl_density(g, ell):
    k = 6 if ell == 2 else 4
    est = cl.joint_sample(g, ell, k, (1,), [()], 100000, seed=1000 + 10 * g + ell)
    p = float(cl.trivial_cokernel_density(g, ell))
    assert abs(est.estimate - p) <= 3 * math.sqrt(p * (1 - p) / est.trials)


def test_density_examples():
    assert cl.trivial_cokernel_density(1, 2) == Fraction(1, 2)
    assert cl.trivial_cokernel_density(2, 3) == Fraction(16, 27)
    assert cl.trivial_cokernel_density(2, 3) == Fraction(cl.gl_count(2, 3), 3 ** 4)
    for g in range(1, 6):
        assert cl.trivial_cokernel_density(g, 2) == Fraction(cl.gl_count(g, 2), 2 ** (g * g))


def test_density_limit():
    assert abs(float(cl.trivial_cokernel_density(40, 2)) - 0.2887880951) < 1e-9


def test_pm1_bound_and_exact_avoidance():
    assert f"{float(cl.pm1_bound(3)):.5f}" == "0.12025"
    assert cl.avoidance_exact(1, 5) == Fraction(3, 5)
    assert cl.avoidance_exact(1, 3) == Fraction(1, 3)
    with pytest.raises(PreconditionError):
        cl.pm1_bound(2)


def test_pm1_estimate_consistent_with_bound():
    r = cl.pm1_avoidance_bound(3, g=6, trials=20000, seed=5)
    assert r.consistent


def test_product_over_S():
    assert cl.product_over_S([]) == (1, 0.0)
    p, se = cl.product_over_S([(2, 0.5, 0.01)])
    assert p == 0.5 and math.isclose(se, 0.01)
    p, se = cl.product_over_S([(2, Fraction(1, 2), 0), (3, Fraction(1, 2), 0)])
    assert p == Fraction(1, 4)
    with pytest.raises(PreconditionError):
        cl.product_over_S([(2, 0.5, 0), (2, 0.5, 0)])


def test_determinism_and_worker_independence():
    a = cl.joint_sample(4, 2, 6, (1, 2), [(), ()], 9000, seed=42, workers=1)
    b = cl.joint_sample(4, 2, 6, (1, 2), [(), ()], 9000, seed=42, workers=1)
    c = cl.joint_sample(4, 2, 6, (1, 2), [(), ()], 9000, seed=42, workers=2)
    assert a.to_json() == b.to_json()
    assert (a.hits, a.insufficient, a.per_event) == (c.hits, c.insufficient, c.per_event)


def test_mod_two_containment_small():
    r = cl.containment_check(20000, g=6, seed=3)
    assert r["violations"] == 0


def test_insufficient_rate_decreases_with_precision():
    rates = []
    for k in (1, 2, 4, 6):
        est = cl.joint_sample(4, 2, k, (1,), [()], 20000, seed=11)
        rates.append(est.insufficient / est.trials)
    assert all(x >= y for x, y in zip(rates, rates[1:]))
    assert rates[-1] < rates[0]


def test_nontrivial_target_matches_exact_small_case():
    # g = 1, l = 3, k = 3: coker(1 - f) = Z/3 iff val_3(1 - f) = 1, probability 2/9
    est = cl.joint_sample(1, 3, 3, (1,), [(1,)], 30000, seed=9)
    p = 2 / 9
    assert abs(est.estimate - p) <= 3 * math.sqrt(p * (1 - p) / est.trials)
