"""Exhaustive search for unimodular positive-definite lattices.

Candidates are Gram matrices of bases satisfying necessary conditions of
greedy (Minkowski) reduction:

* ``a_1 <= a_2 <= ... <= a_n`` on the diagonal, with ``a_1..a_{n-1} <= B``
  (``a_n`` is forced by the determinant, and ``a_1 <= B`` holds for every
  lattice once ``B`` exceeds the Hermite bound, so rank 2 is exhaustive);
* ``Tr(lam * H[i][j]) <= N(lam) * a_i`` for small ``lam`` and ``i < j``
  (replacing ``e_j`` by ``e_j - lam e_i`` cannot lower its norm);
* ``<v, v> >= a_j`` for ``v = e_j + sum_{i<j} c_i e_i`` with ``c_i`` zero or
  a unit;
* the first nonzero entry above the diagonal in each column is the chosen
  representative of its unit orbit (rescaling ``e_j`` by a unit).

Survivors with determinant 1 are deduplicated by isometry testing.
Completeness depends on ``B``; callers evidence it by re-running with a
larger bound.
"""

import math
from fractions import Fraction

from .. import config
from ..errors import InternalAssertionError, LimitExceededError, PreconditionError
from .gram import HermitianGram
from .isometry import are_isometric, automorphism_count, short_vector_profile
from .ring import CLASS_NUMBER_ONE, IntegerRing, ring_for

# gamma_k^k for the Hermite constants known exactly (k = 1..8)
_HERMITE_POWER = {1: Fraction(1), 2: Fraction(4, 3), 3: Fraction(2), 4: Fraction(4),
                  5: Fraction(8), 6: Fraction(64, 3), 7: Fraction(64), 8: Fraction(256)}


def hermite_constant(k):
    if k in _HERMITE_POWER:
        return float(_HERMITE_POWER[k]) ** (1.0 / k)
    # Blichfeldt-type upper estimate for larger dimensions
    return 2.0 / math.pi * math.gamma(2 + k / 2.0) ** (2.0 / k)


def default_diagonal_bound(ring, n):
    """Doubled Hermite bound on the minimum of a unimodular O-lattice."""
    dim = ring.rank * n
    covol = 1.0 if isinstance(ring, IntegerRing) else (abs(ring.disc) / 4.0) ** n
    minimum = hermite_constant(dim) * covol ** (1.0 / dim)
    factor = config.get("hermitian.diagonal_bound_factor")
    return max(1, int(math.floor(factor * minimum + 1e-9)))


def _multipliers(ring):
    """Nonzero lam with small coordinates, paired with N(lam)."""
    if ring.rank == 1:
        return [((x,), x * x) for x in (-2, -1, 1, 2)]
    out = []
    for x in range(-2, 3):
        for y in range(-2, 3):
            if x or y:
                out.append(((x, y), ring.norm((x, y))))
    return out


class _OffDiagonalTable:
    """Entries g allowed above a diagonal entry a: Tr(lam g) <= N(lam) a for all multipliers."""

    def __init__(self, ring):
        self.ring = ring
        self.mults = _multipliers(ring)
        self._cache = {}

    def allowed(self, ai):
        out = self._cache.get(ai)
        if out is not None:
            return out
        ring = self.ring
        if ring.rank == 1:
            cand = [(x,) for x in range(-ai, ai + 1)]
        else:
            # the region lies inside N(g) <= (N(w) + 2) a^2, a generous disc
            limit = (ring.norm((0, 1)) + 2) * ai * ai
            ymax = math.isqrt(4 * limit // max(1, 4 * ring.norm((0, 1)) - ring.trace((0, 1)) ** 2)) + 2
            xmax = math.isqrt(limit) + abs(ring.trace((0, 1))) * ymax + 2
            cand = [(x, y) for y in range(-ymax, ymax + 1) for x in range(-xmax, xmax + 1)]
        out = []
        for g in cand:
            if all(ring.trace(ring.mul(lam, g)) <= nl * ai for lam, nl in self.mults):
                out.append(g)
        out.sort(key=lambda g: (ring.norm(g), g))
        self._cache[ai] = out
        return out


def _check_rank(ring, n):
    if isinstance(ring, IntegerRing):
        limit = config.get("hermitian.max_rank_symmetric")
    else:
        limit = config.get("hermitian.max_rank")
        if ring.d not in CLASS_NUMBER_ONE:
            raise PreconditionError(
                f"field d={ring.d} is not one of the class-number-1 fields {CLASS_NUMBER_ONE}")
    if n < 1:
        raise PreconditionError("rank must be positive")
    if n > limit:
        raise LimitExceededError("rank", n, limit)


def _field_solve(ring, rows, vec):
    """Solve rows * x = vec over the fraction field (rows invertible)."""
    n = len(rows)
    zero = tuple(Fraction(0) for _ in range(ring.rank))
    A = [[tuple(Fraction(c) for c in e) for e in row] + [tuple(Fraction(c) for c in vec[i])]
         for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != zero)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        nz = ring.norm(p)
        pinv = tuple(Fraction(x) / nz for x in ring.conj(p))
        A[col] = [ring.mul(pinv, e) for e in A[col]]
        for r in range(n):
            if r != col and A[r][col] != zero:
                f = A[r][col]
                A[r] = [ring.sub(a, ring.mul(f, b)) for a, b in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def _integral_inverse(ring, H, j):
    """(den, M) with M integral and A^{-1} = M / den for the leading j x j block A."""
    A = [row[:j] for row in H[:j]]
    cols = []
    for k in range(j):
        e = [ring.one if i == k else ring.zero for i in range(j)]
        cols.append(_field_solve(ring, A, e))
    den = 1
    for col in cols:
        for x in col:
            for c in x:
                den = den * c.denominator // math.gcd(den, c.denominator)
    M = [[tuple(int(c * den) for c in cols[k][i]) for k in range(j)] for i in range(j)]
    return den, M


def _schur(ring, H, j, inverse):
    """v^* A^{-1} v for the leading block A and v = column j above the diagonal."""
    if j == 0:
        return Fraction(0)
    den, M = inverse
    v = [H[i][j] for i in range(j)]
    total = ring.zero
    for i in range(j):
        if v[i] == ring.zero:
            continue
        ci = ring.conj(v[i])
        row = M[i]
        for k in range(j):
            if v[k] != ring.zero:
                total = ring.add(total, ring.mul(ring.mul(ci, row[k]), v[k]))
    if any(total[1:]):
        raise InternalAssertionError("Schur complement is not real")
    return Fraction(total[0], den)


def reduced_candidates(ring, n, bound):
    """Yield unimodular Gram matrices in reduced form.

    The first n-1 diagonal entries are at most ``bound``; the last one is
    determined by the determinant.

    Column j is filled above the diagonal first; the diagonal entry must then
    exceed the Schur complement s (positivity), and on the last column it is
    forced to s + 1/det so that the determinant is 1.
    """
    table = _OffDiagonalTable(ring)
    units = list(ring.units)
    zero = ring.zero
    H = [[zero] * n for _ in range(n)]
    diag = [0] * n
    dets = [Fraction(1)] + [None] * n

    def combos_by_last(j):
        # (coeffs, <sum c_k e_k, same>) for c over indices < j, grouped by last nonzero index
        groups = [[] for _ in range(j)]

        def rec(i, coeffs, q):
            if i == j:
                return
            rec(i + 1, coeffs + (zero,), q)
            for c in units:
                q2 = q + ring.norm(c) * diag[i]
                for k, ck in enumerate(coeffs):
                    if ck != zero:
                        q2 += ring.trace(ring.mul(ring.mul(ck, ring.conj(c)), H[k][i]))
                groups[i].append((coeffs + (c,), q2))
                rec(i + 1, coeffs + (c,), q2)

        rec(0, (), 0)
        return groups

    def entries_ok(j, i, groups):
        for coeffs, q in groups[i]:
            lin = 0
            for k, c in enumerate(coeffs):
                if c != zero:
                    lin += ring.trace(ring.mul(c, H[k][j]))
            if q + lin < 0:
                return False
        return True

    def fill(j, i, seen_nonzero, groups, inverse):
        if i == j:
            yield from finish_column(j, inverse)
            return
        for g in table.allowed(diag[i]):
            if g != zero and not seen_nonzero and ring.canonical_associate(g)[0] != g:
                continue
            H[i][j] = g
            H[j][i] = ring.conj(g)
            if entries_ok(j, i, groups):
                yield from fill(j, i + 1, seen_nonzero or g != zero, groups, inverse)
        H[i][j] = zero
        H[j][i] = zero

    def finish_column(j, inverse):
        s = _schur(ring, H, j, inverse)
        lo = diag[j - 1] if j else 1
        if j == n - 1:
            a = s + 1 / dets[j]
            if a.denominator != 1 or a < lo:
                return
            choices = [int(a)]
        else:
            choices = range(max(lo, math.floor(s) + 1), bound + 1)
        for a in choices:
            if a <= s:
                continue
            if any(ring.norm(H[i][j]) >= diag[i] * a for i in range(j)):
                continue
            diag[j] = a
            H[j][j] = ring.from_int(a)
            dets[j + 1] = dets[j] * (a - s)
            if j == n - 1:
                yield HermitianGram(ring, [list(row) for row in H], check=False)
            else:
                yield from fill(j + 1, 0, False, combos_by_last(j + 1),
                                _integral_inverse(ring, H, j + 1))
        diag[j] = 0
        H[j][j] = zero

    yield from fill(0, 0, False, [], None)


def gram_order(g):
    """Total order on Gram matrices: diagonal first, then all entries."""
    return (tuple(g.diagonal()), g.key())


def deduplicate(grams, profile_top=None):
    """One representative (first in ``gram_order``) per isometry class, sorted."""
    grams = sorted(set(grams), key=gram_order)
    buckets = {}
    reps = []
    for g in grams:
        top = profile_top or max(g.diagonal())
        inv = short_vector_profile(g, top)
        bucket = buckets.setdefault(inv, [])
        if any(are_isometric(g, h) for h in bucket):
            continue
        bucket.append(g)
        reps.append(g)
    reps.sort(key=gram_order)
    return reps


def enumerate_classes(field, n, bound=None):
    """Representatives of the isometry classes of unimodular lattices of rank n.

    ``field`` is ``"Z"`` for symmetric lattices over the integers or the
    squarefree ``d`` of Q(sqrt(-d)).
    """
    ring = ring_for(field)
    _check_rank(ring, n)
    if bound is None:
        bound = default_diagonal_bound(ring, n)
    cands = list(reduced_candidates(ring, n, bound))
    top = bound
    return deduplicate(cands, profile_top=top)


def mass_brute(field, n, bound=None, by_norm_tag=False):
    """Sum of 1/#Aut over enumerated classes (exact)."""
    reps = enumerate_classes(field, n, bound)
    if not by_norm_tag:
        return sum((Fraction(1, automorphism_count(g)) for g in reps), Fraction(0))
    out = {}
    for g in reps:
        tag = g.norm_gcd()
        out[tag] = out.get(tag, Fraction(0)) + Fraction(1, automorphism_count(g))
    return out
