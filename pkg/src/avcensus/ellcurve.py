"""Naive point counting on short Weierstrass curves over small prime fields."""

import math
from dataclasses import dataclass

import numpy as np

from . import config
from .errors import InternalAssertionError, LimitExceededError, PreconditionError
from .numfield import kronecker

CM_DISCRIMINANTS = {1: -4, 2: -8, 3: -3, 7: -7, 11: -11, 19: -19, 43: -43, 67: -67, 163: -163}


def is_prime(n):
    if n < 2:
        return False
    return all(n % q for q in range(2, math.isqrt(n) + 1))


def primes_upto(n):
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(n) + 1):
        if sieve[q]:
            sieve[q * q::q] = False
    return np.nonzero(sieve)[0].astype(np.int64)


@dataclass(frozen=True)
class Curve:
    p: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.p <= 3 or not is_prime(self.p):
            raise PreconditionError("p must be a prime > 3")
        object.__setattr__(self, "a4", self.a4 % self.p)
        object.__setattr__(self, "a6", self.a6 % self.p)
        if (4 * self.a4 ** 3 + 27 * self.a6 ** 2) % self.p == 0:
            raise PreconditionError(f"singular curve y^2 = x^3 + {self.a4}x + {self.a6} mod {self.p}")


@dataclass(frozen=True)
class TraceData:
    p: int
    a: int
    N1: int
    N2: int

    @property
    def b(self):
        return self.a * self.a - 2 * self.p


def legendre_table(p):
    chi = -np.ones(p, dtype=np.int64)
    x = np.arange(p, dtype=np.int64)
    chi[(x * x) % p] = 1
    chi[0] = 0
    return chi


def trace_data(p, a):
    if a * a > 4 * p:
        raise InternalAssertionError(f"Hasse bound violated: a={a}, p={p}")
    n1 = p + 1 - a
    n2 = (p + 1 - a) * (p + 1 + a)
    if n2 != p * p + 1 - (a * a - 2 * p):
        raise InternalAssertionError("N2 identity failed")
    return TraceData(p, a, n1, n2)


def point_count(curve):
    p = curve.p
    limit = config.get("ec.max_point_count_p")
    if p > limit:
        raise LimitExceededError("p", p, limit)
    chi = legendre_table(p)
    x = np.arange(p, dtype=np.int64)
    vals = (x * x % p * x + curve.a4 * x + curve.a6) % p
    n1 = p + 1 + int(chi[vals].sum())
    return trace_data(p, p + 1 - n1)


def point_count_naive(curve):
    """Count (x, y) pairs directly; independent of the Legendre table."""
    p = curve.p
    n = 1
    for x in range(p):
        rhs = (x ** 3 + curve.a4 * x + curve.a6) % p
        n += sum(1 for y in range(p) if (y * y - rhs) % p == 0)
    return n


def _fp2_nonresidue(p):
    """Least n with x^2 - n irreducible over F_p, so F_p2 = F_p[t]/(t^2 - n)."""
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise InternalAssertionError("no nonresidue found")


def point_count_fp2_brute(curve):
    """#E(F_p2) by enumerating F_p2 = F_p[t]/(t^2 - n)."""
    p = curve.p
    if p > 13:
        raise LimitExceededError("p", p, 13)
    n = _fp2_nonresidue(p)

    def mul(u, v):
        return ((u[0] * v[0] + n * u[1] * v[1]) % p, (u[0] * v[1] + u[1] * v[0]) % p)

    elems = [(a, b) for a in range(p) for b in range(p)]
    squares = {}
    for y in elems:
        s = mul(y, y)
        squares[s] = squares.get(s, 0) + 1
    total = 1
    a4, a6 = (curve.a4, 0), (curve.a6, 0)
    for x in elems:
        x3 = mul(mul(x, x), x)
        ax = mul(a4, x)
        rhs = ((x3[0] + ax[0] + a6[0]) % p, (x3[1] + ax[1]) % p)
        total += squares.get(rhs, 0)
    return total


def is_p_power(n, p):
    """n = p^e for some e >= 0 (n = 1 counts)."""
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


@dataclass
class LemmaReport:
    p: int
    curves: int
    violations: list
    identity_ok: bool

    @property
    def passed(self):
        return not self.violations and self.identity_ok

    def to_json(self):
        return {"p": self.p, "curves": self.curves, "violations": self.violations,
                "identity_ok": self.identity_ok, "passed": self.passed}


def family_traces(p):
    """Array a[a4, a6] of traces (0 marks singular pairs via the mask)."""
    chi = legendre_table(p)
    x = np.arange(p, dtype=np.int64)
    cube = x * x % p * x % p
    a6 = np.arange(p, dtype=np.int64)
    traces = np.zeros((p, p), dtype=np.int64)
    for a4 in range(p):
        base = (cube + a4 * x) % p
        vals = (base[None, :] + a6[:, None]) % p
        traces[a4] = -chi[vals].sum(axis=1)
    a4s = np.arange(p, dtype=np.int64)[:, None]
    singular = (4 * a4s ** 3 + 27 * a6[None, :] ** 2) % p == 0
    return traces, ~singular


def verify_not_both_p_groups(p):
    if p <= 3 or not is_prime(p):
        raise PreconditionError("p must be a prime > 3")
    limit = config.get("ec.max_scan_p")
    if p > limit:
        raise LimitExceededError("p", p, limit)
    traces, ok = family_traces(p)
    violations = []
    count = 0
    for a4, a6 in zip(*np.nonzero(ok)):
        a = int(traces[a4, a6])
        td = trace_data(p, a)
        count += 1
        if is_p_power(td.N1, p) and is_p_power(td.N2, p):
            violations.append({"a4": int(a4), "a6": int(a6), "a": a, "N1": td.N1, "N2": td.N2})
    # both p-powers would force a = 1 and b = a^2 - 2p = 1, hence (a^2 - b) / 2 = 0 != p
    a, b = 1, 1
    identity_ok = (a * a - b) // 2 != p
    report = LemmaReport(p, count, violations, identity_ok)
    return report


def find_cm_trace(p, d, ordinary=False):
    """(a, b) with a^2 - 4p = -d b^2 and |a| <= 2 sqrt p, searching a = 0, 1, -1, 2, ..."""
    if not is_prime(p):
        raise PreconditionError("p must be prime")
    if d not in CM_DISCRIMINANTS:
        raise PreconditionError("d must be one of the nine class-number-1 values")
    amax = math.isqrt(4 * p)
    for a in sorted(range(-amax, amax + 1), key=lambda t: (abs(t), -t)):
        if ordinary and a % p == 0:
            continue
        r = 4 * p - a * a
        if r % d:
            continue
        b2 = r // d
        b = math.isqrt(b2)
        if b * b == b2 and b > 0:
            if a * a + d * b * b != 4 * p:
                raise InternalAssertionError("norm equation check failed")
            return a, b
    return None


def find_any_cm_trace(p):
    for d in sorted(CM_DISCRIMINANTS):
        hit = find_cm_trace(p, d)
        if hit is not None:
            return d, hit
    return None


def good_prime_density(X):
    """(good, all, ratio) over primes p <= X, good meaning (D|p) = 1 for one of the nine D."""
    limit = config.get("ec.max_density_x")
    if X > limit:
        raise LimitExceededError("X", X, limit)
    primes = primes_upto(X)
    if len(primes) == 0:
        return 0, 0, 0.0
    good = np.zeros(len(primes), dtype=bool)
    for D in CM_DISCRIMINANTS.values():
        m = abs(D)
        table = np.array([kronecker(D, r) for r in range(m)], dtype=np.int64)
        good |= table[primes % m] == 1
    g = int(good.sum())
    return g, len(primes), g / len(primes)
