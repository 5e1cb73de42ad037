"""q-Weil polynomials: representation, exact root test, enumeration, bounds.

A Weil polynomial of half-degree g is stored through ``a = (a_1, ..., a_g)``
with

    f(x) = x^(2g) - a_1 x^(2g-1) + a_2 x^(2g-2) - ... + q^g

and ``a_(2g-k) = q^(g-k) a_k``.  The real Weil polynomial ``h`` satisfies
``f(x) = x^g h(x + q/x)``; ``h`` is monic of degree g.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import config, poly
from .errors import LimitExceededError, PreconditionError
from .logscale import LogScale


def is_prime_power(q):
    if q < 2:
        return False
    p = next(d for d in range(2, q + 1) if q % d == 0)
    while q % p == 0:
        q //= p
    return q == 1


@dataclass(frozen=True)
class WeilPolynomial:
    g: int
    q: int
    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if self.g < 0 or len(self.a) != self.g:
            raise PreconditionError("need exactly g coefficients a_1..a_g")
        if not is_prime_power(self.q):
            raise PreconditionError(f"q={self.q} is not a prime power")

    def signed(self):
        """Coefficients a_0..a_2g of f = sum (-1)^k a_k x^(2g-k)."""
        g, q = self.g, self.q
        full = [1] + list(self.a) + [0] * g
        for k in range(g + 1, 2 * g + 1):
            full[k] = q ** (k - g) * full[2 * g - k]
        return full

    def coefficients(self):
        """Coefficient list of f, lowest degree first."""
        full = self.signed()
        n = 2 * self.g
        return [(-1) ** (n - i) * full[n - i] for i in range(n + 1)]

    @classmethod
    def from_coefficients(cls, coeffs, q):
        """Build from a full coefficient list (lowest first), checking the functional equation."""
        coeffs = poly.trim(coeffs)
        n = len(coeffs) - 1
        if n < 0 or n % 2 or coeffs[-1] != 1:
            raise PreconditionError("f must be monic of even degree")
        g = n // 2
        if not functional_equation_holds(coeffs, q):
            raise PreconditionError("coefficients violate q^g f(x) = x^(2g) f(q/x)")
        a = [(-1) ** k * coeffs[n - k] for k in range(1, g + 1)]
        return cls(g, q, tuple(a))

    def __str__(self):
        return f"WeilPolynomial(g={self.g}, q={self.q}, a={list(self.a)})"


@dataclass(frozen=True)
class RealWeilPolynomial:
    g: int
    q: int
    c: tuple

    def coefficients(self):
        """h(y) = y^g + c_1 y^(g-1) + ... + c_g, lowest degree first."""
        return list(reversed((1,) + tuple(self.c)))

    def to_weil(self):
        """Expand x^g h(x + q/x)."""
        g, q = self.g, self.q
        # x^g (x + q/x)^k = x^(g-k) (x^2 + q)^k
        full = [0] * (2 * g + 1)
        coeffs = (1,) + tuple(self.c)
        for k in range(g + 1):
            ck = coeffs[g - k]
            if not ck:
                continue
            term = poly.power([q, 0, 1], k)
            for i, t in enumerate(term):
                full[i + g - k] += ck * t
        return WeilPolynomial.from_coefficients(full, q)


def functional_equation_holds(coeffs, q):
    """x^(2g) f(q/x) = q^g f(x), i.e. q^g c_i = q^(n-i) c_(n-i) for all i."""
    n = len(coeffs) - 1
    if n % 2:
        return False
    g = n // 2
    return all(q ** g * coeffs[i] == q ** (n - i) * coeffs[n - i] for i in range(n + 1))


def to_real_weil(f):
    """h with f(x) = x^g h(x + q/x), by peeling x^(g-k) (x^2+q)^k from the top."""
    g, q = f.g, f.q
    rem = f.coefficients()
    c = [0] * (g + 1)
    for k in range(g, -1, -1):
        # leading coefficient of rem sits at degree g + k
        ck = rem[g + k] if g + k < len(rem) else 0
        c[g - k] = ck
        if ck:
            term = poly.power([q, 0, 1], k)
            for i, t in enumerate(term):
                rem[i + g - k] -= ck * t
    if any(rem):
        raise PreconditionError("coefficients violate the functional equation")
    if c[0] != 1:
        raise PreconditionError("f must be monic")
    return RealWeilPolynomial(g, q, tuple(c[1:]))


def auxiliary_k(h_coeffs):
    """k(u) with roots b^2 for the roots b of h: E(u)^2 - u O(u)^2 up to sign.

    Writing h(y) = E(y^2) + y O(y^2), the product h(y) h(-y) = E^2 - y^2 O^2,
    which equals +-Res_y(h(y), u - y^2) at u = y^2.
    """
    E = h_coeffs[0::2]
    O = h_coeffs[1::2]
    k = poly.sub(poly.mul(E, E), poly.mul([0, 1], poly.mul(O, O)))
    g = len(h_coeffs) - 1
    return poly.scale(k, (-1) ** g)


def is_weil(f):
    """Exact test that every root of f has absolute value sqrt(q)."""
    if f.g == 0:
        return True
    return is_weil_real(to_real_weil(f))


def power_sum_profile(f):
    """Power sums s_1..s_g of the 2g roots of f (Newton's identities)."""
    return newton_power_sums(f.a, f.g)


def newton_power_sums(e, count):
    """Power sums from elementary symmetric functions e_1.. (e_k = 0 past the list)."""
    s = []
    for k in range(1, count + 1):
        total = (-1) ** (k - 1) * k * (e[k - 1] if k <= len(e) else 0)
        for i in range(1, k):
            ei = e[i - 1] if i <= len(e) else 0
            total += (-1) ** (i - 1) * ei * s[k - i - 1]
        s.append(total)
    return s


def _check_limits(g, q):
    if g < 0:
        raise PreconditionError("g must be nonnegative")
    if not is_prime_power(q):
        raise PreconditionError(f"q={q} is not a prime power")
    gmax, qmax = config.get("weil.max_g"), config.get("weil.max_q")
    if g > gmax:
        raise LimitExceededError("g", g, gmax)
    if q > qmax:
        raise LimitExceededError("q", q, qmax)


def _floor_sqrt_bound(square):
    return math.isqrt(square)


def enumerate_weil_h(g, q):
    """All q-Weil polynomials of half-degree g, via the coefficients of h."""
    _check_limits(g, q)
    if g == 0:
        return [WeilPolynomial(0, q, ())]
    bounds = [_floor_sqrt_bound(math.comb(g, k) ** 2 * 4 ** k * q ** k) for k in range(1, g + 1)]
    out = []
    c = []

    def rec(k):
        if k == g:
            hw = RealWeilPolynomial(g, q, tuple(c))
            if is_weil_real(hw):
                out.append(hw.to_weil())
            return
        b = bounds[k]
        for ck in range(-b, b + 1):
            c.append(ck)
            # roots of h are real with |b_i| <= 2 sqrt(q): |t_k| <= g (2 sqrt q)^k
            e = [(-1) ** (i + 1) * c[i] for i in range(len(c))]
            t = newton_power_sums(e, k + 1)[-1]
            if t * t <= g * g * 4 ** (k + 1) * q ** (k + 1):
                rec(k + 1)
            c.pop()

    rec(0)
    out.sort(key=lambda f: f.a)
    return out


def is_weil_real(hw):
    """h has g real roots (with multiplicity), all with b^2 <= 4q."""
    h = hw.coefficients()
    g, q = hw.g, hw.q
    k = auxiliary_k(h)
    # cheap necessary conditions: all roots of k in [0, 4q]
    if not poly.alternates(k) or not poly.alternates(poly.taylor_shift_reflect(k, 4 * q)):
        return False
    if poly.count_real_roots(h) != g:
        return False
    return poly.count_real_roots(k, 0, 4 * q) == g


def enumerate_weil_a(g, q):
    """All q-Weil polynomials of half-degree g, via a_1..a_g directly."""
    _check_limits(g, q)
    if g == 0:
        return [WeilPolynomial(0, q, ())]
    bounds = [_floor_sqrt_bound(math.comb(2 * g, k) ** 2 * q ** k) for k in range(1, g + 1)]
    out = []
    a = []

    def rec(k):
        if k == g:
            f = WeilPolynomial(g, q, tuple(a))
            if is_weil(f):
                out.append(f)
            return
        b = bounds[k]
        for ak in range(-b, b + 1):
            a.append(ak)
            s = newton_power_sums(a, k + 1)[-1]
            if s * s <= 4 * g * g * q ** (k + 1):
                rec(k + 1)
            a.pop()

    rec(0)
    out.sort(key=lambda f: f.a)
    return out


@dataclass
class WeilCount:
    g: int
    q: int
    count: int
    polynomials: list


def enumerate_weil(g, q, keep_list=False, cross_check=True):
    """Exact count of q-Weil polynomials of degree 2g (both enumerators must agree)."""
    via_h = enumerate_weil_h(g, q)
    if cross_check:
        via_a = enumerate_weil_a(g, q)
        if [f.a for f in via_h] != [f.a for f in via_a]:
            from .errors import InternalAssertionError
            raise InternalAssertionError(f"enumerators disagree at g={g}, q={q}")
    return WeilCount(g, q, len(via_h), via_h if keep_list else [])


@dataclass(frozen=True)
class LemmaBounds:
    paper_bound: LogScale
    rigorous_bound: int

    @property
    def paper_decimal(self):
        return self.paper_bound.decimal(20)


def lemma_count_bounds(g, q):
    if g < 1:
        raise PreconditionError("g must be positive")
    stated = LogScale.power(2 * g, g) * LogScale.power(q, Fraction(g * (g + 1), 4))
    rigorous = 1
    for k in range(1, g + 1):
        rigorous *= 2 * math.isqrt(4 * g * g * q ** k) + 1
    return LemmaBounds(stated, rigorous)


def paper_bound_mpf(g, q, dps=30):
    with mpmath.workdps(dps):
        return mpmath.mpf(2 * g) ** g * mpmath.mpf(q) ** (mpmath.mpf(g * (g + 1)) / 4)


def to_json_list(polys):
    return [{"g": f.g, "q": f.q, "a": list(f.a)} for f in polys]
