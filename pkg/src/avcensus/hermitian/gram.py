"""Gram matrices of hermitian (and symmetric) lattices.

A lattice of rank ``n`` over a ring ``O`` with Z-basis ``beta_0..beta_{r-1}``
is also a Z-lattice of rank ``r*n``.  Its *trace Gram* has entries
``Tr(beta_a * conj(beta_b) * H[i][j])``; it is an integer matrix, positive
definite exactly when ``H`` is, and ``<v, v> = T(v, v) / 2``.
"""

import math
from fractions import Fraction
from math import gcd, isqrt

from ..errors import PreconditionError
from .ring import IntegerRing, ring_for


def det_bareiss(rows):
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def leading_minors_positive(rows, start=1):
    """True iff every leading principal minor of size >= ``start`` is positive."""
    n = len(rows)
    for k in range(max(start, 1), n + 1):
        if det_bareiss([r[:k] for r in rows[:k]]) <= 0:
            return False
    return True


def cholesky_rational(rows):
    """Return ``q`` with ``v^T A v = sum_i q[i][i] (v_i + sum_{j>i} q[i][j] v_j)^2``.

    Raises if ``A`` is not positive definite.
    """
    n = len(rows)
    q = [[Fraction(x) for x in r] for r in rows]
    for i in range(n):
        if q[i][i] <= 0:
            raise PreconditionError("matrix is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(rows, bound):
    """All nonzero integer vectors ``v`` with ``v^T A v <= bound``.

    Fincke-Pohst enumeration.  The search runs in floating point with a
    small slack so that no vector is lost to rounding; every survivor is then
    checked with its exact integer norm.  Returns (vector, norm) pairs.
    """
    n = len(rows)
    q = [[float(x) for x in row] for row in cholesky_rational(rows)]
    slack = 1e-7 * (1.0 + float(bound))
    out = []
    x = [0] * n

    def rec(i, remaining):
        c = 0.0
        qi = q[i]
        for j in range(i + 1, n):
            if x[j]:
                c -= qi[j] * x[j]
        r = math.sqrt(max(remaining, 0.0) / qi[i])
        lo = math.ceil(c - r - 1e-9)
        hi = math.floor(c + r + 1e-9)
        for xi in range(lo, hi + 1):
            t = xi - c
            left = remaining - qi[i] * t * t
            if left < -slack:
                continue
            x[i] = xi
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, left)
        x[i] = 0

    rec(n - 1, float(bound) + slack)
    result = []
    for v in out:
        if not any(v):
            continue
        norm = 0
        for i in range(n):
            vi = v[i]
            if vi:
                row = rows[i]
                norm += vi * sum(row[j] * v[j] for j in range(n) if v[j])
        if norm <= bound:
            result.append((v, norm))
    return result


class HermitianGram:
    """Gram matrix ``H`` (list of rows of ring elements) of an O-lattice.

    With ``ring = IntegerRing()`` this is an integral symmetric Gram matrix.
    """

    def __init__(self, ring, entries, check=True):
        self.ring = ring
        self.entries = tuple(tuple(tuple(e) for e in row) for row in entries)
        self.n = len(self.entries)
        if check:
            self.validate()

    @classmethod
    def from_ints(cls, rows, field="Z"):
        """Build from plain integers (symmetric case) or element tuples."""
        ring = ring_for(field)
        entries = []
        for row in rows:
            out = []
            for e in row:
                if isinstance(e, int):
                    out.append(ring.from_int(e))
                else:
                    out.append(tuple(e))
            entries.append(out)
        return cls(ring, entries)

    @classmethod
    def identity(cls, ring, n):
        rows = [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]
        return cls(ring, rows, check=False)

    def validate(self):
        ring = self.ring
        for i, row in enumerate(self.entries):
            if len(row) != self.n:
                raise PreconditionError("Gram matrix must be square")
            for j, e in enumerate(row):
                if len(e) != ring.rank:
                    raise PreconditionError(f"entry {e} has wrong length for {ring.name}")
                if ring.conj(e) != self.entries[j][i]:
                    raise PreconditionError(f"Gram matrix is not hermitian at ({i},{j})")
            if not ring.is_rational(row[i]):
                raise PreconditionError("diagonal entries must be rational integers")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def diagonal(self):
        return [self.entries[i][i][0] for i in range(self.n)]

    def trace_gram(self):
        ring = self.ring
        basis = ring.basis
        r = ring.rank
        dim = r * self.n
        t = [[0] * dim for _ in range(dim)]
        for i in range(self.n):
            for a in range(r):
                for j in range(self.n):
                    h = self.entries[i][j]
                    for b in range(r):
                        coeff = ring.mul(ring.mul(basis[a], ring.conj(basis[b])), h)
                        t[r * i + a][r * j + b] = ring.trace(coeff)
        return t

    def short_vectors(self, top):
        """(flat coordinates, 2<v,v>) for nonzero v with <v, v> <= top, cached."""
        cache = self.__dict__.setdefault("_sv", {})
        for t, vecs in cache.items():
            if t >= top:
                return [item for item in vecs if item[1] <= 2 * top]
        vecs = short_vectors(self.trace_gram(), 2 * top)
        cache[top] = vecs
        return vecs

    def is_positive_definite(self):
        return leading_minors_positive(self.trace_gram())

    def determinant(self):
        """``det H`` as a rational integer (requires positive definiteness)."""
        tdet = det_bareiss(self.trace_gram())
        if isinstance(self.ring, IntegerRing):
            # trace Gram is 2G
            return tdet // (2 ** self.n)
        scale = abs(self.ring.disc) ** self.n
        if tdet % scale:
            raise PreconditionError("trace Gram determinant not divisible by |D|^n")
        sq = tdet // scale
        root = isqrt(sq)
        if root * root != sq:
            raise PreconditionError("trace Gram determinant is not |D|^n times a square")
        return root

    def is_unimodular(self):
        return self.is_positive_definite() and self.determinant() == 1

    def norm_gcd(self):
        """Positive generator of the ideal of Z generated by all <m, m>."""
        t = self.trace_gram()
        g = 0
        for i in range(len(t)):
            g = gcd(g, t[i][i] // 2)
            for j in range(i + 1, len(t)):
                g = gcd(g, t[i][j])
        return g

    def inner(self, u, v):
        """Hermitian product of coordinate vectors (tuples of ring elements)."""
        ring = self.ring
        acc = ring.zero
        for i in range(self.n):
            if u[i] == ring.zero:
                continue
            for j in range(self.n):
                if v[j] == ring.zero:
                    continue
                acc = ring.add(acc, ring.mul(ring.mul(u[i], ring.conj(v[j])), self.entries[i][j]))
        return acc

    def key(self):
        return tuple(x for row in self.entries for e in row for x in e)

    def to_json(self):
        return {
            "field": getattr(self.ring, "d", "Z"),
            "n": self.n,
            "rows": [[list(e) for e in row] for row in self.entries],
        }

    def __eq__(self, other):
        return (isinstance(other, HermitianGram) and self.ring == other.ring
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        if isinstance(self.ring, IntegerRing):
            rows = [[e[0] for e in row] for row in self.entries]
        else:
            rows = [list(row) for row in self.entries]
        return f"HermitianGram({self.ring.name}, {rows})"


def coords_to_vector(ring, flat):
    """Z-coordinates (length rank*n) to a tuple of ring elements."""
    r = ring.rank
    return tuple(tuple(flat[r * i:r * i + r]) for i in range(len(flat) // r))
