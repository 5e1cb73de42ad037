"""Counting Frobenius-stable lattices over truncated l-adic rings.

Sublattices ``M`` with ``l^k Z^n <= M <= Z^n`` are stored in row Hermite
normal form: row ``i`` is ``l^(e_i) e_i + sum_{j>i} m_ij e_j`` with
``0 <= m_ij < l^(e_j)``.  The colength is ``sum e_i``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from . import config, poly
from .errors import InternalAssertionError, LimitExceededError, PrecisionInsufficientError, PreconditionError
from .logscale import LogScale

INFINITE = math.inf


# -- partitions and Hilbert-scheme counts ------------------------------------

def partitions(j, largest=None):
    """Partitions of j as weakly decreasing tuples."""
    if largest is None:
        largest = j
    if j == 0:
        yield ()
        return
    for first in range(min(j, largest), 0, -1):
        for rest in partitions(j - first, first):
            yield (first,) + rest


def partition_count(j):
    """p(j) by Euler's pentagonal recurrence."""
    p = [1] + [0] * j
    for m in range(1, j + 1):
        total, k = 0, 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * p[m - g2]
            k += 1
        p[m] = total
    return p[j]


def partition_bound_check(j):
    if j < 0 or j > 64:
        raise PreconditionError("j must lie in 0..64")
    return partition_count(j) <= 2 ** j


def hilb_count(ell, j):
    limit = config.get("lattice.hilb_max_j")
    if j < 0:
        raise PreconditionError("j must be nonnegative")
    if j > limit:
        raise LimitExceededError("j", j, limit)
    return sum(ell ** (j - len(lam)) for lam in partitions(j))


# -- HNF enumeration ----------------------------------------------------------

@dataclass(frozen=True)
class TruncatedMatrix:
    ell: int
    k: int
    rows: tuple

    def __post_init__(self):
        if self.k < 1:
            raise PreconditionError("precision k must be at least 1")
        mod = self.ell ** self.k
        rows = tuple(tuple(int(x) % mod for x in r) for r in self.rows)
        if any(len(r) != len(rows) for r in rows):
            raise PreconditionError("matrix must be square")
        object.__setattr__(self, "rows", rows)

    @property
    def n(self):
        return len(self.rows)

    def apply(self, v):
        mod = self.ell ** self.k
        return tuple(sum(a * b for a, b in zip(r, v)) % mod for r in self.rows)

    @classmethod
    def from_json(cls, data):
        rows = data["rows"]
        if "n" in data and data["n"] != len(rows):
            raise PreconditionError("n does not match the number of rows")
        return cls(int(data["ell"]), int(data["k"]), tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class SublatticeHNF:
    ell: int
    k: int
    basis: tuple
    exps: tuple

    @property
    def colength(self):
        return sum(self.exps)

    @property
    def n(self):
        return len(self.exps)

    def contains(self, v):
        return hnf_contains(self.basis, self.exps, self.ell, self.k, v)


def hnf_contains(basis, exps, ell, k, v, start=0):
    """Membership of v (mod l^k) in the lattice spanned by HNF rows plus l^k Z^n.

    With ``start`` only rows ``start..`` are used; v must vanish before it.
    """
    mod = ell ** k
    v = [x % mod for x in v]
    if any(v[:start]):
        return False
    for i in range(start, len(basis)):
        row = basis[i]
        if v[i] == 0:
            continue
        d = ell ** exps[i]
        if v[i] % d:
            return False
        c = v[i] // d
        for j in range(i, len(v)):
            v[j] = (v[j] - c * row[j]) % mod
    return not any(v)


def _exponent_vectors(n, total, caps):
    if n == 0:
        if total == 0:
            yield ()
        return
    for e in range(min(total, caps[0]), -1, -1):
        for rest in _exponent_vectors(n - 1, total - e, caps[1:]):
            yield (e,) + rest


def enumerate_hnf(ell, k, n, colength, caps=None, row_filter=None):
    """All sublattices containing l^k Z^n of the given colength, as (basis, exps).

    Rows are built bottom-up; ``row_filter(i, basis_tail, exps_tail)`` may
    reject a partial lattice spanned by rows i..n-1 (used for pruning).
    """
    caps = caps or [k] * n
    mod = ell ** k
    for exps in _exponent_vectors(n, colength, [min(c, k) for c in caps]):
        rows = [None] * n

        def build(i):
            if i < 0:
                yield tuple(rows), exps
                return
            free = [j for j in range(i + 1, n)]
            ranges = [range(ell ** exps[j]) for j in free]

            def fill(idx, row):
                if idx == len(free):
                    rows[i] = tuple(row)
                    if row_filter is None or row_filter(i, rows, exps):
                        yield from build(i - 1)
                    return
                for m in ranges[idx]:
                    row[free[idx]] = m
                    yield from fill(idx + 1, row)
                row[free[idx]] = 0

            base = [0] * n
            base[i] = ell ** exps[i] % mod if exps[i] < k else 0
            if exps[i] == k:
                # the row is l^k e_i, already in l^k Z^n
                rows[i] = tuple(base)
                if row_filter is None or row_filter(i, rows, exps):
                    yield from build(i - 1)
                return
            yield from fill(0, base)

        yield from build(n - 1)


def count_stable_sublattices(gamma, max_colength):
    """Map c -> number of gamma-stable sublattices of colength c, 0 <= c <= max_colength."""
    if max_colength < 0:
        raise PreconditionError("max_colength must be nonnegative")
    if max_colength >= gamma.k:
        raise PrecisionInsufficientError(
            f"colength {max_colength} needs precision > {max_colength}, have k={gamma.k}",
            precision=gamma.k)
    limit = config.get("lattice.max_enumeration_size")
    if gamma.n * max_colength > limit:
        raise LimitExceededError("n*max_colength", gamma.n * max_colength, limit)
    ell, k, n = gamma.ell, gamma.k, gamma.n
    out = {}
    for c in range(max_colength + 1):
        count = 0
        for basis, exps in enumerate_hnf(ell, k, n, c):
            if all(hnf_contains(basis, exps, ell, k, gamma.apply(r)) for r in basis):
                count += 1
        out[c] = count
    return out


def hilb_brute_force(ell, j):
    """Colength-j ideals of Z_l[[x]] counted inside the quotient by (l, x)^j.

    R/(l, x)^j is the group sum_{b<j} (Z/l^(j-b)) x^b; ideals are the
    subgroups stable under multiplication by x.  They correspond to
    sublattices of Z^j containing diag(l^j, l^(j-1), ..., l) and stable under
    the shift e_b -> e_(b+1) (e_(j-1) -> 0), of index l^j.
    """
    jmax = config.get("lattice.hilb_brute_max_j")
    emax = config.get("lattice.hilb_brute_max_ell")
    if j < 0:
        raise PreconditionError("j must be nonnegative")
    if j > jmax:
        raise LimitExceededError("j", j, jmax)
    if ell > emax:
        raise LimitExceededError("ell", ell, emax)
    if j == 0:
        return 1
    n = j
    k = j

    def shift(v):
        return (0,) + tuple(v[:-1])

    def row_filter(i, rows, exps):
        # x * row_i involves only coordinates > i, which are already fixed
        if not hnf_contains(rows, exps, ell, k, shift(rows[i]), start=i):
            return False
        # the generator l^(j-i) x^i of (l, x)^j must lie in the lattice
        lam = [0] * n
        lam[i] = ell ** (j - i)
        return hnf_contains(rows, exps, ell, k, lam, start=i)

    count = 0
    caps = [j - b for b in range(n)]
    for basis, exps in enumerate_hnf(ell, k, n, j, caps=caps, row_filter=row_filter):
        count += 1
    return count


# -- resultants and gluing ------------------------------------------------------

def valuation(n, ell):
    if n == 0:
        return INFINITE
    n = abs(n)
    if isinstance(n, Fraction):
        return valuation(n.numerator, ell) - valuation(n.denominator, ell)
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def resultant_valuation(f, g, ell):
    """val_l Res(f, g); ``INFINITE`` (math.inf) when the resultant is 0."""
    if not poly.trim(f) or not poly.trim(g):
        raise PreconditionError("polynomials must be nonzero")
    return valuation(poly.resultant(f, g), ell)


def discriminant_valuation(f, ell):
    if poly.degree(f) < 1:
        raise PreconditionError("need a nonconstant polynomial")
    return valuation(poly.discriminant(f), ell)


def companion(f):
    """Companion matrix (columns) of a monic polynomial given lowest degree first."""
    f = poly.trim(f)
    if f[-1] != 1:
        raise PreconditionError("companion matrix needs a monic polynomial")
    n = len(f) - 1
    m = [[0] * n for _ in range(n)]
    for i in range(1, n):
        m[i][i - 1] = 1
    for i in range(n):
        m[i][n - 1] = -f[i]
    return m


def subgroup_order_exponent(gens, ell, t, m):
    """log_l of the order of the subgroup of (Z/l^t)^m generated by ``gens``."""
    mod = ell ** t
    rows = [[x % mod for x in g] for g in gens]
    rows = [r for r in rows if any(r)]
    total = 0
    for col in range(m):
        best, bv = None, None
        for idx, r in enumerate(rows):
            if r[col]:
                v = valuation(r[col], ell)
                if bv is None or v < bv:
                    best, bv = idx, v
        if best is None:
            continue
        piv = rows.pop(best)
        unit = piv[col] // ell ** bv
        inv = pow(unit, -1, mod)
        new_rows = []
        for r in rows:
            if r[col]:
                c = (r[col] // ell ** bv) * inv % mod
                r = [(a - c * b) % mod for a, b in zip(r, piv)]
            if any(r):
                new_rows.append(r)
        extra = [(ell ** (t - bv) * b) % mod for b in piv]
        if any(extra):
            new_rows.append(extra)
        rows = new_rows
        total += t - bv
    return total


@dataclass(frozen=True)
class GlueCount:
    brute_count: int
    delta_prime: int
    delta_unordered: int
    ell: int

    @property
    def predicted(self):
        return self.ell ** self.delta_prime

    @property
    def matches(self):
        return self.brute_count == self.predicted


def isotypic_glue_count(f1, f2, ell, precision, strict=False):
    """Count gamma-stable M with M cap V_1 = M_1 and M cap V_2 = M_2 (standard lattices).

    gamma is the block companion matrix of f1 * f2.  Such M contain
    M_1 + M_2 = Z^n and the glue M / (M_1 + M_2) is killed by Res(f1, f2), so
    after scaling by l^v, v = val_l Res, they are the stable L with
    l^v Z^n <= L <= Z^n meeting each block exactly in l^v times its lattice.
    Returns the brute count with delta' (ordered pairs) and the unordered sum.
    With ``strict`` a mismatch between brute_count and l^delta' raises.
    """
    f1, f2 = poly.trim(f1), poly.trim(f2)
    n1, n2 = len(f1) - 1, len(f2) - 1
    if n1 < 1 or n2 < 1 or n1 + n2 > 4:
        raise PreconditionError("need deg f1, deg f2 >= 1 and deg f1 + deg f2 <= 4")
    v = resultant_valuation(f1, f2, ell)
    if v == INFINITE:
        raise PreconditionError("f1 and f2 must be coprime over Q")
    if v > precision - 2:
        raise PrecisionInsufficientError(
            f"val Res = {v} needs precision >= {v + 2}, have {precision}", precision=precision)
    n = n1 + n2
    gamma_rows = [[0] * n for _ in range(n)]
    for i, row in enumerate(companion(f1)):
        gamma_rows[i][:n1] = row
    for i, row in enumerate(companion(f2)):
        gamma_rows[n1 + i][n1:] = row
    if v == 0:
        brute = 1
    else:
        t = v
        gamma = TruncatedMatrix(ell, t, tuple(tuple(r) for r in gamma_rows))
        brute = 0
        caps = [t] * n
        for c in range(0, t * n1 + 1):
            # rows n1.. must be l^t e_i, so the colength is t*n2 + (first block part)
            for basis, exps in enumerate_hnf(ell, t, n, c + t * n2, caps=caps,
                                             row_filter=_second_block_filter(n1, t)):
                if not all(hnf_contains(basis, exps, ell, t, gamma.apply(r)) for r in basis):
                    continue
                # L cap V_1 = l^t Z^(n1) iff |L / l^t Z^n| = |pi_2(L) / l^t Z^(n2)|
                size = t * n - sum(exps)
                proj = [r[n1:] for r in basis]
                if subgroup_order_exponent(proj, ell, t, n2) == size:
                    brute += 1
    result = GlueCount(brute, 2 * v, v, ell)
    if strict and not result.matches:
        raise InternalAssertionError(
            f"brute count {brute} != {ell}^{2 * v} (delta' over ordered pairs)")
    return result


def _second_block_filter(n1, t):
    def ok(i, rows, exps):
        if i >= n1:
            return exps[i] == t
        return True
    return ok


def stable_orbit_bound(n, delta, ell):
    if n < 0 or delta < 0 or ell < 2:
        raise PreconditionError("invalid inputs")
    return ell ** (4 * n * delta)


def global_orbit_bound(g, p):
    """(2 p^(1/2))^(4 C(2g, 2)) on a log scale."""
    if g < 1 or p < 2:
        raise PreconditionError("invalid inputs")
    e = 4 * math.comb(2 * g, 2)
    return LogScale.power(2, e) * LogScale.power(p, Fraction(e, 2))
