"""Exact products of rational powers, reported on a log scale.

A ``LogScale`` stands for ``prod base**exp`` (integer bases, rational
exponents) times ``exp(extra_ln)`` for terms with no closed power form.
"""

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

PRECISION = 60


@dataclass(frozen=True)
class LogScale:
    factors: tuple = ()
    extra_ln: float = 0.0
    label: str = ""

    @classmethod
    def power(cls, base, exponent, label=""):
        exponent = Fraction(exponent)
        if base == 1 or exponent == 0:
            return cls((), 0.0, label)
        return cls(((int(base), exponent),), 0.0, label)

    @classmethod
    def one(cls):
        return cls()

    def _merged(self, other_factors, sign):
        acc = {}
        for b, e in self.factors:
            acc[b] = acc.get(b, Fraction(0)) + e
        for b, e in other_factors:
            acc[b] = acc.get(b, Fraction(0)) + sign * e
        return tuple(sorted((b, e) for b, e in acc.items() if e != 0))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogScale.power(other, 1) if other > 0 else None
        return LogScale(self._merged(other.factors, 1), self.extra_ln + other.extra_ln, self.label)

    def __truediv__(self, other):
        return LogScale(self._merged(other.factors, -1), self.extra_ln - other.extra_ln, self.label)

    def __pow__(self, k):
        k = Fraction(k)
        return LogScale(tuple((b, e * k) for b, e in self.factors), float(self.extra_ln * k), self.label)

    def exponent_of(self, base):
        for b, e in self.factors:
            if b == base:
                return e
        return Fraction(0)

    @property
    def ln(self):
        with mpmath.workdps(PRECISION):
            total = mpmath.mpf(self.extra_ln)
            for b, e in self.factors:
                total += mpmath.mpf(e.numerator) / e.denominator * mpmath.log(b)
            return total

    @property
    def log2(self):
        with mpmath.workdps(PRECISION):
            return self.ln / mpmath.log(2)

    def value(self):
        with mpmath.workdps(PRECISION):
            return mpmath.exp(self.ln)

    def decimal(self, digits=15):
        return mpmath.nstr(self.value(), digits)

    def is_exact(self):
        return self.extra_ln == 0.0

    def to_json(self):
        return {
            "factors": [[b, str(e)] for b, e in self.factors],
            "extra_ln": self.extra_ln,
            "ln": mpmath.nstr(self.ln, 20),
            "log2": mpmath.nstr(self.log2, 20),
        }
