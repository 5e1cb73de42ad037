import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from avcensus import lattice_count as lc
from avcensus import poly
from avcensus.errors import (InternalAssertionError, LimitExceededError,
                             PrecisionInsufficientError, PreconditionError)
from avcensus.lattice_count import TruncatedMatrix


def test_hilb_examples():
    assert lc.hilb_count(2, 0) == 1
    assert lc.hilb_count(3, 0) == 1
    assert lc.hilb_count(2, 2) == 3
    assert lc.hilb_count(2, 3) == 7
    assert lc.hilb_brute_force(2, 2) == 3


@pytest.mark.parametrize("ell", [2, 3])
@pytest.mark.parametrize("j", range(5))
def test_hilb_brute_matches_formula(ell, j):
    assert lc.hilb_brute_force(ell, j) == lc.hilb_count(ell, j)


@pytest.mark.parametrize("ell", [2, 3, 5])
@pytest.mark.parametrize("j", range(9))
def test_hilb_bound_chain(ell, j):
    assert lc.hilb_count(ell, j) <= ell ** j * 2 ** j


def test_partition_counts():
    assert [lc.partition_count(n) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]
    for n in range(16):
        assert lc.partition_count(n) == sum(1 for _ in lc.partitions(n))
    assert all(lc.partition_bound_check(j) for j in range(65))


def test_limits():
    with pytest.raises(LimitExceededError):
        lc.hilb_brute_force(2, 5)
    with pytest.raises(LimitExceededError):
        lc.hilb_brute_force(5, 2)
    with pytest.raises(PreconditionError):
        lc.hilb_count(2, -1)


def test_identity_matrix_counts_all_sublattices():
    # every sublattice is stable under the identity; rank 2: sigma(l^c) of colength c
    for ell in (2, 3):
        counts = lc.count_stable_sublattices(TruncatedMatrix(ell, 4, ((1, 0), (0, 1))), 3)
        assert counts == {c: sum(ell ** i for i in range(c + 1)) for c in range(4)}
    counts = lc.count_stable_sublattices(TruncatedMatrix(2, 3, tuple(
        tuple(int(i == j) for j in range(3)) for i in range(3))), 1)
    assert counts[1] == 2 ** 3 - 1


def test_precision_insufficient():
    with pytest.raises(PrecisionInsufficientError):
        lc.count_stable_sublattices(TruncatedMatrix(2, 2, ((1, 0), (0, 1))), 2)


def test_matrix_json_roundtrip():
    m = TruncatedMatrix.from_json({"ell": 2, "k": 3, "n": 2, "rows": [[0, 1], [1, 0]]})
    assert m.rows == ((0, 1), (1, 0))
    with pytest.raises(PreconditionError):
        TruncatedMatrix.from_json({"ell": 2, "k": 3, "n": 3, "rows": [[0, 1], [1, 0]]})


def test_valuations():
    assert lc.resultant_valuation([0, 1], [-2, 1], 2) == 1
    assert lc.resultant_valuation([0, 1], [-4, 1], 2) == 2
    assert lc.resultant_valuation([-1, 1], [-1, 1], 2) == lc.INFINITE
    assert lc.discriminant_valuation([-2, 0, 1], 2) == 3


def brute_glue(f1, f2, ell):
    """Independent count: subgroups A of (Z/l^t)^n, gamma A <= A, meeting both blocks trivially."""
    n1, n2 = len(f1) - 1, len(f2) - 1
    n = n1 + n2
    t = lc.resultant_valuation(f1, f2, ell)
    if t == 0:
        return 1
    mod = ell ** t
    gamma = [[0] * n for _ in range(n)]
    for i, r in enumerate(lc.companion(f1)):
        gamma[i][:n1] = r
    for i, r in enumerate(lc.companion(f2)):
        gamma[n1 + i][n1:] = r

    def span(gens):
        elems = {tuple([0] * n)}
        frontier = list(elems)
        while frontier:
            nxt = []
            for e in frontier:
                for gvec in gens:
                    s = tuple((a + b) % mod for a, b in zip(e, gvec))
                    if s not in elems:
                        elems.add(s)
                        nxt.append(s)
            frontier = nxt
        return frozenset(elems)

    vectors = list(itertools.product(range(mod), repeat=n))
    found = set()
    for r in range(min(n1, n2) + 1):
        for gens in itertools.combinations(vectors, r):
            found.add(span(gens))
    count = 0
    for a in found:
        stable = all(tuple(sum(gamma[i][j] * v[j] for j in range(n)) % mod for i in range(n)) in a
                     for v in a)
        if not stable:
            continue
        meets1 = any(any(v[:n1]) and not any(v[n1:]) for v in a)
        meets2 = any(any(v[n1:]) and not any(v[:n1]) for v in a)
        if not meets1 and not meets2:
            count += 1
    return count


GLUE_CASES = [
    ([0, 1], [-1, 1], 2),
    ([0, 1], [-2, 1], 2),
    ([0, 1], [-4, 1], 2),
    ([0, 1], [-3, 1], 3),
    ([0, 1], [-9, 1], 3),
    ([1, 0, 1], [-1, 1], 2),
    ([0, 1], [-2, 0, 1], 2),
    ([-1, 1], [2, 1], 3),
]


@pytest.mark.parametrize("f1,f2,ell", GLUE_CASES)
def test_glue_brute_agrees_with_independent_enumeration(f1, f2, ell):
    r = lc.isotypic_glue_count(f1, f2, ell, 6)
    assert r.brute_count == brute_glue(f1, f2, ell)
    # the enumerated count is l^(unordered resultant valuation)
    assert r.brute_count == ell ** r.delta_unordered
    assert r.delta_prime == 2 * r.delta_unordered


def test_glue_strict_raises_on_mismatch():
    with pytest.raises(InternalAssertionError):
        lc.isotypic_glue_count([0, 1], [-2, 1], 2, 6, strict=True)
    assert lc.isotypic_glue_count([0, 1], [-1, 1], 2, 6, strict=True).matches


def test_glue_preconditions():
    with pytest.raises(PreconditionError):
        lc.isotypic_glue_count([-1, 1], [-1, 1], 2, 6)
    with pytest.raises(PrecisionInsufficientError):
        lc.isotypic_glue_count([0, 1], [-4, 1], 2, 3)
    with pytest.raises(PreconditionError):
        lc.isotypic_glue_count([1, 0, 1], [1, 0, 0, 1], 2, 6)


@pytest.mark.parametrize("f,ell", [([-2, 0, 1], 2), ([1, 0, 1], 2), ([-3, 0, 1], 3), ([0, -2, 1], 2)])
def test_stable_orbit_bound_dominates(f, ell):
    n = len(f) - 1
    delta = lc.discriminant_valuation(f, ell)
    top = min(n * delta, 3)
    gamma = TruncatedMatrix(ell, top + 1, tuple(tuple(r) for r in lc.companion(f)))
    counts = lc.count_stable_sublattices(gamma, top)
    assert sum(counts.values()) <= lc.stable_orbit_bound(n, delta, ell) * counts[0]


def test_global_orbit_bound():
    b = lc.global_orbit_bound(1, 2)
    # (2 sqrt 2)^4 = 64
    assert abs(float(b.value()) - 64) < 1e-9
    assert b.exponent_of(2) == 6


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_stable_counts_conjugation_invariant(a, b, c, d):
    # conjugating gamma by an integral unimodular matrix permutes stable lattices
    g = ((a, b), (c, d))
    u = ((1, 1), (0, 1))
    uinv = ((1, -1), (0, 1))

    def mm(x, y):
        return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2))

    conj = mm(mm(u, g), uinv)
    c1 = lc.count_stable_sublattices(TruncatedMatrix(2, 3, g), 2)
    c2 = lc.count_stable_sublattices(TruncatedMatrix(2, 3, conj), 2)
    assert c1 == c2
