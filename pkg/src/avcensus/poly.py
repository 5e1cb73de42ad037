"""Dense integer/rational polynomials (coefficient lists, lowest degree first)."""

import math
from fractions import Fraction


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(trim(p)) - 1


def add(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def sub(p, q):
    return add(p, [-c for c in q])


def mul(p, q):
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def scale(p, c):
    return trim([c * a for a in p])


def power(p, k):
    out = [1]
    for _ in range(k):
        out = mul(out, p)
    return out


def derivative(p):
    return trim([i * p[i] for i in range(1, len(p))])


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def divmod_poly(a, b):
    """Quotient and remainder over Q."""
    a = [Fraction(c) for c in trim(a)]
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = Fraction(b[-1])
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a = trim(a)
    return trim(q), a


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(c) / lead for c in a]


def squarefree_decomposition(p):
    """Yun's algorithm: list of (factor, multiplicity) with p = c * prod factor^mult."""
    p = trim(p)
    if degree(p) <= 0:
        return []
    out = []
    dp = derivative(p)
    a = gcd_poly(p, dp)
    b, _ = divmod_poly(p, a)
    c, _ = divmod_poly(dp, a)
    d = sub(c, derivative(b))
    i = 1
    while degree(b) > 0:
        a = gcd_poly(b, d)
        if degree(a) > 0:
            out.append((a, i))
        b, _ = divmod_poly(b, a)
        c, _ = divmod_poly(d, a)
        d = sub(c, derivative(b))
        i += 1
    return out


def sturm_sequence(p):
    seq = [[Fraction(c) for c in trim(p)], [Fraction(c) for c in derivative(p)]]
    while trim(seq[-1]):
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(values):
    signs = [v for v in values if v != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if (x > 0) != (y > 0))


def _at_infinity(p, positive):
    lead = p[-1]
    if positive or (len(p) - 1) % 2 == 0:
        return lead
    return -lead


def count_distinct_real_roots(p, lo=None, hi=None):
    """Distinct real roots of p in (lo, hi]; None means an infinite endpoint."""
    seq = sturm_sequence(p)
    if lo is None:
        vlo = [_at_infinity(s, False) for s in seq]
    else:
        vlo = [evaluate(s, Fraction(lo)) for s in seq]
    if hi is None:
        vhi = [_at_infinity(s, True) for s in seq]
    else:
        vhi = [evaluate(s, Fraction(hi)) for s in seq]
    return _sign_changes(vlo) - _sign_changes(vhi)


def _primitive(p):
    g = 0
    for c in p:
        g = math.gcd(g, c)
    return [c // g for c in p] if g > 1 else list(p)


def signed_prem(a, b):
    """Remainder of |lc(b)|^(deg a - deg b + 1) * a by b (integers, sign kept)."""
    a, b = trim(a), trim(b)
    lead = b[-1]
    delta = len(a) - len(b) + 1
    if delta <= 0:
        return a
    a = [c * abs(lead) ** delta for c in a]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] // lead
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a = trim(a)
    return a


def sturm_sequence_int(p):
    """Sturm chain with integer entries (each a positive multiple of the classical one)."""
    p = _primitive(trim(p))
    seq = [p, _primitive(derivative(p))]
    while len(seq[-1]) > 1:
        r = signed_prem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_primitive([-c for c in r]))
    return seq


def _changes_at(seq, x):
    if x is None:
        return None
    return _sign_changes([evaluate(s, x) for s in seq])


def count_real_roots(p, lo=None, hi=None, closed=True):
    """Real roots of p counted with multiplicity, in [lo, hi] (or (lo, hi] if not closed).

    Endpoints are integers or Fractions; None means infinite.
    """
    p = trim(p)
    if len(p) <= 1:
        return 0
    seq = sturm_sequence_int(p)
    if len(seq[-1]) == 1:
        # squarefree: the chain counts distinct roots, which are simple
        vlo = _sign_changes([_at_infinity(s, False) for s in seq]) if lo is None else _changes_at(seq, lo)
        vhi = _sign_changes([_at_infinity(s, True) for s in seq]) if hi is None else _changes_at(seq, hi)
        n = vlo - vhi
        if closed and lo is not None and evaluate(p, lo) == 0:
            n += 1
        return n
    total = 0
    for factor, mult in squarefree_decomposition(p):
        n = count_distinct_real_roots(factor, lo, hi)
        if closed and lo is not None and evaluate(factor, Fraction(lo)) == 0:
            n += 1
        total += mult * n
    return total


def alternates(p):
    """True iff the (nonzero run of) coefficients weakly alternate in sign.

    Necessary for a real polynomial with all roots in [0, oo).
    """
    sign = None
    for i, c in enumerate(trim(p)):
        if c == 0:
            continue
        s = (c > 0) == (i % 2 == 0)
        if sign is None:
            sign = s
        elif s != sign:
            return False
    return True


def taylor_shift_reflect(p, t):
    """Coefficients of p(t - u) as a polynomial in u."""
    acc = []
    for c in reversed(trim(p)):
        acc = add(mul(acc, [t, -1]), [c])
    return acc


def sylvester_matrix(f, g):
    """Sylvester matrix of f, g (coefficient lists, lowest degree first)."""
    f, g = trim(f), trim(g)
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        rows.append([0] * i + fr + [0] * (size - i - len(fr)))
    for i in range(m):
        rows.append([0] * i + gr + [0] * (size - i - len(gr)))
    return rows


def determinant(rows):
    """Exact determinant over Q (Fractions), small sizes."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def resultant(f, g):
    """Res(f, g) via the Sylvester determinant (exact integer for integer inputs)."""
    f, g = trim(f), trim(g)
    if not f or not g:
        return 0
    if len(f) == 1 and len(g) == 1:
        return 1
    d = determinant(sylvester_matrix(f, g))
    return int(d) if d.denominator == 1 else d


def discriminant(f):
    """disc(f) = (-1)^(n(n-1)/2) Res(f, f') / lc(f)."""
    f = trim(f)
    n = len(f) - 1
    r = resultant(f, derivative(f))
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    val = Fraction(sign * r, f[-1])
    return int(val) if val.denominator == 1 else val
