"""Headline bounds assembled from their components, with exact exponent bookkeeping.

Every p-exponent is stored as a polynomial in g with Fraction coefficients
``(c0, c1, c2)`` meaning ``c0 + c1 g + c2 g^2``; leading coefficients are the
``g^2`` terms and identities between them are checked exactly.
"""

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__, config
from .errors import InternalAssertionError, PreconditionError
from .hermitian.mass import orbit_count_estimate
from .logscale import LogScale


def _factor(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def int_power(n, e, label=""):
    """n^e as a LogScale over prime bases."""
    out = LogScale((), 0.0, label)
    for p, k in _factor(n).items():
        out = out * LogScale.power(p, Fraction(e) * k)
    return LogScale(out.factors, out.extra_ln, label)


def two_sqrt_p(p, e, label=""):
    """(2 p^(1/2))^e."""
    out = int_power(2, e) * int_power(p, Fraction(e, 2))
    return LogScale(out.factors, out.extra_ln, label)


def _poly_add(*polys):
    out = [Fraction(0)] * 3
    for q in polys:
        for i, c in enumerate(q):
            out[i] += Fraction(c)
    return tuple(out)


def _poly_eval(q, g):
    return sum(Fraction(c) * g ** i for i, c in enumerate(q))


@dataclass
class Component:
    name: str
    value: LogScale
    p_exponent: tuple  # polynomial in g

    @property
    def leading(self):
        return self.p_exponent[2]

    def to_json(self, p=None):
        out = {"name": self.name, "log2": float(self.value.log2),
               "p_exponent_poly": [str(c) for c in self.p_exponent],
               "leading_g2_coefficient": str(self.leading)}
        if p is not None:
            out["p_exponent"] = str(self.value.exponent_of(p))
        return out


@dataclass
class Bound:
    name: str
    value: LogScale
    components: list
    leading: Fraction
    notes: dict = field(default_factory=dict)

    @property
    def log2(self):
        return float(self.value.log2)

    def to_json(self, p=None):
        return {"name": self.name, "log2": self.log2, "leading_g2_coefficient": str(self.leading),
                "components": [c.to_json(p) for c in self.components], "notes": self.notes}


def _assemble(name, components, notes=None):
    value = LogScale.one()
    for c in components:
        value = value * c.value
    lead = sum((c.leading for c in components), Fraction(0))
    return Bound(name, LogScale(value.factors, value.extra_ln, name), components, lead, notes or {})


def _check_g(g, least=1):
    if not isinstance(g, int) or g < least:
        raise PreconditionError(f"g must be an integer >= {least}")


def _check_p(p):
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise PreconditionError("p must be prime")


def isogeny_bound(g, q):
    """(2g)^g q^(g(g+1)/4); exact Weil counts are attached for g <= 2, q <= 3."""
    _check_g(g)
    if q < 2:
        raise PreconditionError("q must be at least 2")
    base = Component("(2g)^g", int_power(2 * g, g), (0, 0, 0))
    qpart = Component("q^(g(g+1)/4)", int_power(q, Fraction(g * (g + 1), 4)),
                      (0, Fraction(1, 4), Fraction(1, 4)))
    notes = {}
    if g <= 2 and q <= 3:
        from .weil import enumerate_weil
        notes["exact_count"] = enumerate_weil(g, q, cross_check=False).count
    bound = _assemble("isogeny", [base, qpart], notes)
    bound.leading = qpart.leading
    return bound


def per_class_bound(g, p):
    """Orbit, stabilizer-depth, class-number and constant components."""
    _check_g(g)
    _check_p(p)
    e = 4 * math.comb(2 * g, 2)
    # (2 p^(1/2))^(4 C(2g,2)): p-exponent 2 C(2g, 2) = 4 g^2 - 2 g
    orbit_poly = (0, -2, 4)
    orbit = Component("orbit", two_sqrt_p(p, e), orbit_poly)
    stab = Component("stabilizer_depth", two_sqrt_p(p, e), orbit_poly)
    # (2 p^(1/2))^(g^2 / 2): p-exponent g^2 / 4
    cls = Component("class_number", two_sqrt_p(p, Fraction(g * g, 2)), (0, 0, Fraction(1, 4)))
    const = Component("constants (500 e)^g", LogScale((), g * (math.log(500) + 1), ""), (0, 0, 0))
    bound = _assemble("per_class", [orbit, stab, cls, const])
    if bound.leading != Fraction(33, 4):
        raise InternalAssertionError(f"per-class leading coefficient {bound.leading} != 33/4")
    return bound


def total_unpolarized_bound(g, p):
    iso = isogeny_bound(g, p)
    per = per_class_bound(g, p)
    components = iso.components + per.components
    total = _assemble("total_unpolarized", components, dict(iso.notes))
    total.leading = iso.leading + per.leading
    if total.leading != Fraction(17, 2):
        raise InternalAssertionError(f"total leading coefficient {total.leading} != 17/2")
    if total.leading != Fraction(1, 4) + Fraction(33, 4):
        raise InternalAssertionError("exponent assembly failed")
    return total


SQUAREFREE_STATED_LEADING = Fraction(3)


def squarefree_polarization_bound(g, p):
    """(2 p^(1/2))^(4 C(g,2)) (2 p^(1/2))^(g^2); leading term only, flagged."""
    _check_g(g, 2)
    _check_p(p)
    first = Component("(2 sqrt p)^(4 C(g,2))", two_sqrt_p(p, 4 * math.comb(g, 2)), (0, -1, 1))
    second = Component("(2 sqrt p)^(g^2)", two_sqrt_p(p, g * g), (0, 0, Fraction(1, 2)))
    bound = _assemble("squarefree_polarization", [first, second],
                      {"leading_term_only": True,
                       "stated_leading_coefficient": str(SQUAREFREE_STATED_LEADING),
                       "computed_leading_coefficient": None,
                       "constant_C": "unspecified"})
    bound.notes["computed_leading_coefficient"] = str(bound.leading)
    return bound


def ppav_lower_bound(g):
    """Leading term g^2 ln g (natural log)."""
    _check_g(g)
    value = g * g * math.log(g)
    cross = orbit_count_estimate([1], [g])
    if not math.isclose(value, cross, rel_tol=1e-12, abs_tol=1e-12):
        raise InternalAssertionError("ppav bound disagrees with orbit_count_estimate")
    return value


def _exact(x):
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def convexity_check(x, g, eps):
    """Check sum x_i^2 <= g^2 (eps^2 + (1 - eps)^2); returns (ok, sum of squares, maximum)."""
    xs = [_exact(v) for v in x]
    G, E = _exact(g), _exact(eps)
    if not (Fraction(1, 2) < E < 1):
        raise PreconditionError("eps must lie in (1/2, 1)")
    tol = Fraction(1, 10 ** 9) * max(G, 1) if any(isinstance(v, float) for v in list(x) + [g, eps]) else 0
    if any(v < 0 or v > E * G + tol for v in xs):
        raise PreconditionError("need 0 <= x_i <= eps g")
    if abs(sum(xs) - G) > tol:
        raise PreconditionError("need sum x_i = g")
    sumsq = sum(v * v for v in xs)
    maximum = G * G * (E * E + (1 - E) ** 2)
    ok = sumsq <= maximum + 2 * tol * G
    if not ok:
        raise InternalAssertionError(f"convexity bound violated: {sumsq} > {maximum}")
    if tol:
        return ok, float(sumsq), float(maximum)
    return ok, sumsq, maximum


@dataclass(frozen=True)
class FactorProfile:
    factors: tuple  # (degree, rank) pairs

    def __post_init__(self):
        if not self.factors or any(k <= 0 or n <= 0 for k, n in self.factors):
            raise PreconditionError("profile entries must be positive")

    @property
    def g(self):
        return sum(k * n for k, n in self.factors)


def dominant_factor_test(profile, threshold=0.99):
    if not isinstance(profile, FactorProfile):
        profile = FactorProfile(tuple(tuple(f) for f in profile))
    g = profile.g
    degrees = [k for k, _ in profile.factors]
    ranks = [n for _, n in profile.factors]
    estimate = orbit_count_estimate(degrees, ranks)
    if estimate < threshold * g * g * math.log(g):
        return None
    for i, (k, n) in enumerate(profile.factors):
        if k == 1 and n >= threshold * g:
            return i
    raise InternalAssertionError(f"estimate clears the threshold but no dominant factor: {profile}")


# -- report -------------------------------------------------------------------

COLUMNS = ["p", "g", "log2_isogeny", "log2_per_class", "log2_total_unpolarized",
           "log2_squarefree_polarization", "log2_ppav_lower_leading",
           "lead_isogeny", "lead_per_class", "lead_total", "lead_squarefree"]


def report_rows(p, g_min, g_max):
    rows = []
    for g in range(g_min, g_max + 1):
        iso = isogeny_bound(g, p)
        per = per_class_bound(g, p)
        tot = total_unpolarized_bound(g, p)
        sq = squarefree_polarization_bound(g, p) if g >= 2 else None
        ppav = ppav_lower_bound(g) / math.log(2)
        if Fraction(tot.value.exponent_of(p)) != iso.value.exponent_of(p) + per.value.exponent_of(p):
            raise InternalAssertionError("total exponent is not the sum of its parts")
        rows.append({
            "p": p, "g": g,
            "log2_isogeny": iso.log2,
            "log2_per_class": per.log2,
            "log2_total_unpolarized": tot.log2,
            "log2_squarefree_polarization": sq.log2 if sq else None,
            "log2_ppav_lower_leading": ppav,
            "lead_isogeny": str(iso.leading),
            "lead_per_class": str(per.leading),
            "lead_total": str(tot.leading),
            "lead_squarefree": str(sq.leading) if sq else None,
            "components": {
                "isogeny": iso.to_json(p), "per_class": per.to_json(p),
                "total_unpolarized": tot.to_json(p),
                "squarefree_polarization": sq.to_json(p) if sq else None,
            },
        })
    return rows


def _render(p, g_min, g_max, fmt):
    rows = report_rows(p, g_min, g_max)
    if fmt == "json":
        doc = {"version": __version__, "p": p, "g_min": g_min, "g_max": g_max,
               "log_base": {"log2_*": 2, "formula internals": "e"}, "rows": rows}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow(["" if r[c] is None else (repr(r[c]) if isinstance(r[c], float) else r[c])
                        for c in COLUMNS])
        return buf.getvalue()
    raise PreconditionError(f"unknown format {fmt!r}")


def cache_key(p, g_min, g_max, fmt):
    blob = json.dumps({"p": p, "g_min": g_min, "g_max": g_max, "format": fmt,
                       "version": __version__}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def report(p, g_min, g_max, fmt="csv", cache_dir=None):
    """Serialized report; cached under ``cache_dir`` by content address."""
    _check_p(p)
    if g_min < 1:
        raise PreconditionError("g_min must be at least 1")
    cache_dir = cache_dir if cache_dir is not None else config.get("census.cache_dir")
    path = None
    if cache_dir:
        path = os.path.join(cache_dir, f"{cache_key(p, g_min, g_max, fmt)}.{fmt}")
        try:
            with open(path, "r", encoding="utf-8", newline="") as fh:
                return fh.read()
        except FileNotFoundError:
            pass
    text = _render(p, g_min, g_max, fmt)
    if path:
        try:
            os.makedirs(cache_dir, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=".tmp-")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except OSError as exc:
            raise OSError(f"cannot write cache file {path}: {exc}") from exc
    return text
