"""Rings of integers used as lattice coefficients.

Elements are tuples of integers in a fixed Z-basis: ``(x,)`` for Z and
``(x, y)`` meaning ``x + y*omega`` for an imaginary quadratic order, where
``omega = sqrt(-d)`` (d = 1, 2 mod 4) or ``(1 + sqrt(-d))/2`` (d = 3 mod 4).
"""

from fractions import Fraction
from functools import cached_property

from ..errors import PreconditionError

CLASS_NUMBER_ONE = (1, 2, 3, 7, 11, 19, 43, 67, 163)


def _squarefree(n):
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


class IntegerRing:
    """Z with the trivial involution (symmetric lattices)."""

    rank = 1
    name = "Z"
    disc = 1
    zero = (0,)
    one = (1,)

    def add(self, a, b):
        return (a[0] + b[0],)

    def sub(self, a, b):
        return (a[0] - b[0],)

    def neg(self, a):
        return (-a[0],)

    def mul(self, a, b):
        return (a[0] * b[0],)

    def conj(self, a):
        return a

    def trace(self, a):
        return 2 * a[0]

    def norm(self, a):
        return a[0] * a[0]

    def real_part(self, a):
        return Fraction(a[0])

    @cached_property
    def units(self):
        return ((1,), (-1,))

    @property
    def basis(self):
        return ((1,),)

    def from_int(self, n):
        return (n,)

    def is_rational(self, a):
        return True

    def canonical_associate(self, a):
        """Smallest element of the unit orbit ``{a*u}``, with the unit used."""
        if a[0] < 0:
            return (-a[0],), (-1,)
        return a, (1,)

    def __repr__(self):
        return "IntegerRing()"

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("Z")


class QuadraticRing:
    """Ring of integers of Q(sqrt(-d)), d squarefree and positive."""

    def __init__(self, d):
        if d < 1 or not _squarefree(d):
            raise PreconditionError(f"d={d} must be a squarefree positive integer")
        self.d = d
        self.rank = 2
        self.name = f"Q(sqrt(-{d}))"
        if d % 4 == 3:
            self.disc = -d
            self.t = 1  # trace of omega
            self.n = (1 + d) // 4  # norm of omega
        else:
            self.disc = -4 * d
            self.t = 0
            self.n = d
        self.zero = (0, 0)
        self.one = (1, 0)

    def add(self, a, b):
        return (a[0] + b[0], a[1] + b[1])

    def sub(self, a, b):
        return (a[0] - b[0], a[1] - b[1])

    def neg(self, a):
        return (-a[0], -a[1])

    def mul(self, a, b):
        x1, y1 = a
        x2, y2 = b
        yy = y1 * y2
        # omega^2 = t*omega - n
        return (x1 * x2 - self.n * yy, x1 * y2 + x2 * y1 + self.t * yy)

    def conj(self, a):
        return (a[0] + self.t * a[1], -a[1])

    def trace(self, a):
        return 2 * a[0] + self.t * a[1]

    def norm(self, a):
        x, y = a
        return x * x + self.t * x * y + self.n * y * y

    def real_part(self, a):
        return Fraction(self.trace(a), 2)

    @cached_property
    def units(self):
        # Units have norm 1; the norm form is positive definite so search a box.
        out = []
        for y in range(-2, 3):
            for x in range(-2, 3):
                if self.norm((x, y)) == 1:
                    out.append((x, y))
        return tuple(sorted(out))

    @property
    def basis(self):
        return ((1, 0), (0, 1))

    def from_int(self, n):
        return (n, 0)

    def is_rational(self, a):
        return a[1] == 0

    def canonical_associate(self, a):
        best = None
        for u in self.units:
            b = self.mul(a, u)
            if best is None or _assoc_key(b) < _assoc_key(best[0]):
                best = (b, u)
        return best

    def __repr__(self):
        return f"QuadraticRing({self.d})"

    def __eq__(self, other):
        return isinstance(other, QuadraticRing) and other.d == self.d

    def __hash__(self):
        return hash(("Q", self.d))


def _assoc_key(b):
    # Prefer positive first coordinate, then small second coordinate.
    return (-b[0], abs(b[1]), -b[1])


def ring_for(field):
    """``field`` is ``"Z"``/``0`` for the rational integers or a positive d."""
    if field in ("Z", "z", 0, None):
        return IntegerRing()
    return QuadraticRing(int(field))
