"""Imaginary quadratic fields, exact L-values and class-number bounds."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import config
from .errors import LimitExceededError, PreconditionError

CLASS_NUMBER_ONE = (1, 2, 3, 7, 11, 19, 43, 67, 163)


def is_squarefree(n):
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1 if k == 2 else 2
    return True


def squarefree_part(n):
    """Squarefree s and integer m with n = s * m^2 (n > 0)."""
    s, m = 1, 1
    k = 2
    while k * k <= n:
        while n % (k * k) == 0:
            n //= k * k
            m *= k
        if n % k == 0:
            n //= k
            s *= k
        k += 1
    return s * n, m


def fundamental_discriminant(d):
    """Discriminant of Q(sqrt(-d)) for squarefree d >= 1."""
    if not is_squarefree(d):
        raise PreconditionError(f"d={d} is not a squarefree positive integer")
    return -d if d % 4 == 3 else -4 * d


def unit_count(D):
    return {-3: 6, -4: 4}.get(D, 2)


def _check_d(d):
    limit = config.get("numfield.max_d")
    if d > limit:
        raise LimitExceededError("d", d, limit)
    return fundamental_discriminant(d)


def reduced_forms(D):
    """Reduced primitive forms (a, b, c) of discriminant D < 0."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and a == c:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
        a += 1
    return out


def class_number(d):
    """Class number of Q(sqrt(-d)) by counting reduced forms."""
    return len(reduced_forms(_check_d(d)))


def _reduce_form(a, b, c):
    # standard reduction to |b| <= a <= c
    while True:
        if a > c:
            a, c = c, a
            b = -b
        if b > a or b <= -a:
            k = (a - b) // (2 * a)
            c = a * k * k + b * k + c
            b = b + 2 * a * k
            continue
        if a == c and b < 0:
            b = -b
        return a, b, c


def class_number_brute(d):
    """Independent recount: reduce every primitive form with |b| <= a <= sqrt(|D|/3)."""
    D = _check_d(d)
    seen = set()
    amax = math.isqrt(-D // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            seen.add(_reduce_form(a, b, c))
    return len(seen)


def class_number_one_scan(limit):
    if limit < 1:
        raise PreconditionError("limit must be positive")
    return [d for d in range(1, limit + 1) if is_squarefree(d) and class_number(d) == 1]


@dataclass(frozen=True)
class ImagQuadField:
    d: int
    D: int = field(init=False)
    w: int = field(init=False)
    h: int = field(init=False)

    def __post_init__(self):
        D = _check_d(self.d)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "w", unit_count(D))
        object.__setattr__(self, "h", class_number(self.d))

    @property
    def character(self):
        return QuadCharacter(self.D)


# -- characters and L-values ------------------------------------------------

def kronecker(D, n):
    """Kronecker symbol (D/n) for integers D and n."""
    if n == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if D < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D/n) for odd n
    a = D % n if n > 1 else 0
    if n == 1:
        return result
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


class QuadCharacter:
    """The character n -> (D/n) attached to a fundamental discriminant D (D=1 trivial)."""

    def __init__(self, D):
        if D != 1 and not is_fundamental(D):
            raise PreconditionError(f"{D} is not a fundamental discriminant")
        self.D = D
        self.conductor = abs(D)

    @property
    def is_trivial(self):
        return self.D == 1

    @property
    def is_odd(self):
        return self.D < 0

    def __call__(self, n):
        if self.D == 1:
            return 1
        return kronecker(self.D, n)

    def __repr__(self):
        return f"QuadCharacter({self.D})"


def is_fundamental(D):
    if D == 1 or D == 0:
        return False
    if D % 4 == 1:
        return is_squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(math.comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return B[n]


def bernoulli_poly(n, x):
    x = Fraction(x)
    return sum(math.comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1))


def generalized_bernoulli(k, chi):
    f = chi.conductor
    if f == 1:
        # B_{k, trivial} uses B_1 = +1/2
        return Fraction(1, 2) if k == 1 else bernoulli(k)
    return Fraction(f) ** (k - 1) * sum(chi(a) * bernoulli_poly(k, Fraction(a, f))
                                        for a in range(1, f + 1))


@dataclass(frozen=True)
class LValue:
    """rational * pi^pi_power * sqrt(radicand), radicand squarefree."""
    rational: Fraction
    pi_power: int
    radicand: int = 1

    def __float__(self):
        return float(self.rational) * math.pi ** self.pi_power * math.sqrt(self.radicand)

    def to_mpf(self):
        import mpmath
        return mpmath.mpf(self.rational.numerator) / self.rational.denominator \
            * mpmath.pi ** self.pi_power * mpmath.sqrt(self.radicand)

    def __mul__(self, other):
        s, m = squarefree_part(self.radicand * other.radicand)
        return LValue(self.rational * other.rational * m, self.pi_power + other.pi_power, s)


def dirichlet_L_exact(chi, k):
    """L(k, chi) when the parity of k matches chi, as an LValue."""
    if k < 1:
        raise PreconditionError("k must be positive")
    if isinstance(chi, int):
        chi = QuadCharacter(chi)
    a = 1 if chi.is_odd else 0
    if (k - a) % 2:
        raise PreconditionError(
            f"parity mismatch: k={k} with {'odd' if a else 'even'} character has no rational-times-pi^k value")
    if chi.is_trivial and k == 1:
        raise PreconditionError("zeta has a pole at 1")
    f = chi.conductor
    Bk = generalized_bernoulli(k, chi)
    sign = -1 if ((k - a) // 2) % 2 == 0 else 1
    # L = sign * sqrt(f)/2 * (2 pi / f)^k * B_{k,chi} / k!
    r = sign * Fraction(1, 2) * Fraction(2 ** k, f ** k) * Bk / math.factorial(k)
    s, m = squarefree_part(f)
    return LValue(r * m, k, s)


# -- class number formula chain ---------------------------------------------

def regulator_lower_bound(r1, r2):
    if r1 < 0 or r2 < 0 or r1 + r2 < 1:
        raise PreconditionError("need r1 + r2 >= 1")
    return max(0.00299 * math.exp(0.48 * r1 + 0.06 * r2), 1.0 / 500)


def zeta_residue_upper_bound(d, DK):
    if d < 2:
        raise PreconditionError("degree 1 is degenerate for this bound")
    if DK < 3:
        raise PreconditionError("|D_K| must be at least 3")
    return (math.e * math.log(DK) / (2 * (d - 1))) ** (d - 1)


@dataclass(frozen=True)
class CMBoundInput:
    d: int
    r1: int
    r2: int
    DK: int

    def __post_init__(self):
        if self.d < 1 or self.DK < 1 or self.r1 < 0 or self.r2 < 0:
            raise PreconditionError("invalid field data")
        if self.r1 + 2 * self.r2 != self.d:
            raise PreconditionError("d must equal r1 + 2 r2")


def class_number_bound_chain(fields):
    """log of prod sqrt(D_K) (log D_K)^(d-1) * 500^g * e^g with g = sum d / 2.

    Returns (natural log, decimal value as float or inf).
    """
    fields = list(fields)
    if not fields:
        raise PreconditionError("need at least one field")
    g = Fraction(sum(f.d for f in fields), 2)
    total = 0.0
    for f in fields:
        total += 0.5 * math.log(f.DK)
        if f.d > 1:
            total += (f.d - 1) * math.log(math.log(f.DK)) if f.DK > 1 else -math.inf
    total += float(g) * (math.log(500) + 1)
    try:
        value = math.exp(total)
    except OverflowError:
        value = math.inf
    return total, value


def weil_discriminant_exponent(d):
    """Exponent e with sqrt(D_K) <= (2 sqrt p)^e when D_K <= (2 sqrt p)^C(d,2)."""
    return Fraction(math.comb(d, 2), 2)


# -- finite subgroups of GL_n(Z) --------------------------------------------

def _primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, math.isqrt(p) + 1))]


def _val(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def minkowski_exponent(n, p):
    total, pa = 0, 1
    while (p - 1) * pa <= n:
        total += n // ((p - 1) * pa)
        pa *= p
    return total


def minkowski_bound(n):
    limit = config.get("numfield.max_minkowski_n")
    if n < 1:
        raise PreconditionError("n must be positive")
    if n > limit:
        raise LimitExceededError("n", n, limit)
    out = 2 ** _val(gl_order(n, 3), 2)
    for p in _primes_upto(n + 1):
        if p > 2:
            out *= p ** minkowski_exponent(n, p)
    return out
