"""Exact mass formula for unimodular hermitian lattices, with calibration.

For L = Q(sqrt(D)) over K = Q the mass of a genus of rank n is

    2 * c(n, D) * prod_{k=1}^n Lambda(k) / prod_{p | D} beta_p

with ``c = prod_{d=1}^n (d-1)!/(2 pi)^d * |D|^(n(n+1)/4)``, ``Lambda(k)`` the
partial zeta value (Euler factors at p | D removed) for even k and
``L(k, chi_D)`` for odd k, and ``beta_p`` the ramified local density.  The
pi powers and square roots cancel, leaving a rational.

At a ramified p the reduction of the unitary group is orthogonal, and which
of the two orthogonal groups occurs is not determined a priori.  The
candidates are

* ``"O+"`` / ``"O-"``: split / non-split orthogonal group, density
  ``2 (1 + eps p^-m) prod_{i<m} (1 - p^-2i)`` for n = 2m (eps = +1 / -1);
* ``"Sp"``: eps = 0 (dyadic case with odd norm ideal);
* ``"O+ even"`` / ``"O- even"``: the orthogonal densities scaled by ``2^n``,
  for dyadic genera whose norm ideal is divisible by 2.

For odd n every candidate reduces to ``2 prod_{i<=m} (1 - p^-2i)``, n = 2m+1
(label ``"O"``).  The selection is calibrated against exhaustive enumeration
and persisted in ``data/mass_calibration.json``.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from ..errors import InternalAssertionError, PreconditionError
from ..numfield import (LValue, dirichlet_L_exact, fundamental_discriminant, kronecker,
                        squarefree_part)
from .enumerate import mass_brute
from .ring import CLASS_NUMBER_ONE

FIXTURE_NAME = "mass_calibration.json"
FIXTURE_VERSION = 1
CANDIDATES = ("O+", "O-", "Sp", "O+ even", "O- even")


def _ramified_primes(D):
    n = abs(D)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def rank_class(n):
    if n % 2:
        return "odd"
    return "0 mod 4" if n % 4 == 0 else "2 mod 4"


def ramified_density(p, n, kind):
    """Local density at a ramified prime for the given orthogonal-type choice."""
    p = Fraction(p)
    m = n // 2
    if n % 2:
        out = Fraction(2)
        for i in range(1, m + 1):
            out *= 1 - p ** (-2 * i)
        return out
    eps = {"O+": 1, "O-": -1, "Sp": 0, "O+ even": 1, "O- even": -1}[kind]
    out = 2 * (1 + eps * p ** (-m))
    for i in range(1, m):
        out *= 1 - p ** (-2 * i)
    if kind.endswith("even"):
        out *= 2 ** n
    return out


def candidate_kinds(p, n, tag):
    if n % 2:
        return ("O",)
    if p == 2 and tag % 2 == 0:
        return ("O+ even", "O- even")
    if p == 2:
        return ("Sp", "O+", "O-")
    return ("O+", "O-")


def discriminant_rule(p, n):
    """Orthogonal type predicted at odd p for even n = 2m: eps = -((-1)^m / p)."""
    m = n // 2
    eps = -kronecker((-1) ** m, p)
    return "O+" if eps == 1 else "O-"


def unramified_part(D, n):
    """c(n, D) * prod Lambda(k) as an LValue, with the individual factors."""
    c = LValue(Fraction(1), 0, 1)
    for d in range(1, n + 1):
        c = c * LValue(Fraction(math.factorial(d - 1), 2 ** d), -d, 1)
    e = n * (n + 1) // 2
    s, m = squarefree_part(abs(D) ** e)
    c = c * LValue(Fraction(m), 0, s)
    ram = _ramified_primes(D)
    lambdas = []
    for k in range(1, n + 1):
        if k % 2 == 0:
            z = dirichlet_L_exact(1, k)
            f = Fraction(1)
            for p in ram:
                f *= 1 - Fraction(1, p ** k)
            z = LValue(z.rational * f, z.pi_power, z.radicand)
        else:
            z = dirichlet_L_exact(D, k)
        lambdas.append(z)
    total = c
    for z in lambdas:
        total = total * z
    return c, lambdas, total


def _rational_part(value):
    if value.pi_power != 0 or value.radicand != 1:
        raise InternalAssertionError(
            f"pi powers or square roots failed to cancel: pi^{value.pi_power} sqrt({value.radicand})")
    return value.rational


def genus_mass(D, n, kinds):
    """Mass for the given ramified choices ``{p: kind}``."""
    _, _, total = unramified_part(D, n)
    r = _rational_part(total)
    out = 2 * r
    for p, kind in kinds.items():
        out /= ramified_density(p, n, kind)
    return out


# -- calibration ------------------------------------------------------------

def _field_d(field_):
    if field_ in ("Z", 0, None):
        return None
    return int(field_)


def calibrate(ds=CLASS_NUMBER_ONE, ranks=(1, 2), extra=()):
    """Select the ramified choice matching enumeration for each genus.

    ``extra`` is an iterable of additional (d, n) pairs.  Returns the fixture
    dictionary (not written).
    """
    entries = {}
    genera = set()
    rows = [(d, n) for d in ds for n in ranks] + list(extra)
    for d, n in rows:
        D = fundamental_discriminant(d)
        brute = mass_brute(d, n, by_norm_tag=True)
        for tag, m in sorted(brute.items()):
            genera.add((D, tag, n % 2))
            ram = _ramified_primes(D)
            # all class-number-one fields have a single ramified prime
            (p,) = ram
            matches = [k for k in candidate_kinds(p, n, tag) if genus_mass(D, n, {p: k}) == m]
            key = (D, p, tag, rank_class(n))
            rec = entries.setdefault(key, {"D": D, "p": p, "norm_tag": tag,
                                           "rank_class": rank_class(n), "choice": None,
                                           "calibrated_at": []})
            if len(matches) != 1:
                rec["choice"] = "unresolved"
            elif rec["choice"] in (None, matches[0]):
                rec["choice"] = matches[0]
            else:
                rec["choice"] = "conflict"
            rec["calibrated_at"].append({"rank": n, "mass": [m.numerator, m.denominator]})
    return {
        "version": FIXTURE_VERSION,
        "entries": sorted(entries.values(), key=lambda r: (-r["D"], r["norm_tag"], r["rank_class"])),
        "genera": [{"D": D, "norm_tag": t, "rank_parity": "odd" if par else "even"}
                   for D, t, par in sorted(genera, key=lambda x: (-x[0], x[1], x[2]))],
    }


def load_fixture(path=None):
    if path is None:
        text = resources.files("avcensus.data").joinpath(FIXTURE_NAME).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    if data.get("version") != FIXTURE_VERSION:
        raise PreconditionError(f"unsupported calibration fixture version {data.get('version')}")
    return data


def _lookup(fixture, D, p, tag, n):
    rc = rank_class(n)
    for rec in fixture["entries"]:
        if rec["D"] == D and rec["p"] == p and rec["norm_tag"] == tag and rec["rank_class"] == rc:
            if rec["choice"] in CANDIDATES or rec["choice"] == "O":
                return rec["choice"], "calibrated"
    if n % 2:
        return "O", "forced"
    if p > 2 and tag == 1:
        return discriminant_rule(p, n), "rule"
    if p == 2 and tag == 1:
        return "Sp", "rule"
    return None, "uncalibrated"


def _known_tags(fixture, D, n):
    par = "odd" if n % 2 else "even"
    tags = {g["norm_tag"] for g in fixture["genera"] if g["D"] == D and g["rank_parity"] == par}
    return sorted(tags or {1})


@dataclass
class MassFormulaResult:
    field: object
    rank: int
    mass: Fraction
    genera: dict
    c_factor: LValue
    lambdas: list
    densities: dict
    choices: dict
    notes: list = field(default_factory=list)

    def to_json(self):
        def lv(x):
            return {"rational": [x.rational.numerator, x.rational.denominator],
                    "pi_power": x.pi_power, "sqrt": x.radicand}
        return {
            "field": self.field, "rank": self.rank,
            "mass": {"num": self.mass.numerator, "den": self.mass.denominator},
            "genera": {str(t): {"num": m.numerator, "den": m.denominator} for t, m in self.genera.items()},
            "c": lv(self.c_factor), "lambda": [lv(x) for x in self.lambdas],
            "densities": {f"{p}/{t}": [b.numerator, b.denominator] for (p, t), b in self.densities.items()},
            "choices": {f"{p}/{t}": list(v) for (p, t), v in self.choices.items()},
            "notes": self.notes,
        }


def symmetric_even_mass(n):
    """Mass of the genus of even unimodular Z-lattices, n = 0 mod 8."""
    if n <= 0 or n % 8:
        raise PreconditionError("even unimodular Z-lattices need n = 0 mod 8")
    from ..numfield import bernoulli
    k = n // 2
    out = abs(bernoulli(k)) / n
    for j in range(1, k):
        out *= abs(bernoulli(2 * j)) / (4 * j)
    return out


def symmetric_odd_mass_from_even(n):
    """Odd unimodular mass for n = 0 mod 8 via index-2 even sublattices.

    Each odd L has a unique even part L0 (index 2), L0 has one odd and two
    even unimodular overlattices, and an even E contains one such L0 per
    nonzero singular vector of E/2E (2^(n-1) + 2^(n/2-1) - 1 of them).
    """
    singular = 2 ** (n - 1) + 2 ** (n // 2 - 1) - 1
    return Fraction(singular, 2) * symmetric_even_mass(n)


def mass_formula(field_, n, fixture=None):
    if n < 1:
        raise PreconditionError("rank must be positive")
    d = _field_d(field_)
    if d is None:
        if n % 8:
            raise PreconditionError("the symmetric formula path covers n = 0 mod 8 only")
        even = symmetric_even_mass(n)
        odd = symmetric_odd_mass_from_even(n)
        return MassFormulaResult("Z", n, even + odd, {1: odd, 2: even}, LValue(Fraction(1), 0),
                                 [], {}, {}, ["genus 2 = even lattices"])
    if d not in CLASS_NUMBER_ONE:
        raise PreconditionError(f"d={d} is not a class-number-1 field")
    D = fundamental_discriminant(d)
    fixture = fixture or load_fixture()
    c, lambdas, total = unramified_part(D, n)
    r = _rational_part(total)
    genera, densities, choices, notes = {}, {}, {}, []
    for tag in _known_tags(fixture, D, n):
        m = 2 * r
        for p in _ramified_primes(D):
            kind, source = _lookup(fixture, D, p, tag, n)
            if kind is None:
                notes.append(f"norm tag {tag} at p={p}: no calibrated density, genus omitted")
                m = None
                break
            beta = ramified_density(p, n, kind)
            densities[(p, tag)] = beta
            choices[(p, tag)] = (kind, source)
            m /= beta
        if m is not None:
            genera[tag] = m
    if not genera:
        raise InternalAssertionError("no genus could be evaluated")
    return MassFormulaResult(d, n, sum(genera.values(), Fraction(0)), genera, c, lambdas,
                             densities, choices, notes)


# -- estimates --------------------------------------------------------------

def log_mass_estimate(K_degree, n, D_L_norm):
    """(leading term [K:Q] n^2 log n, exact finite part) in natural log."""
    if K_degree <= 0 or n <= 0 or D_L_norm <= 0:
        raise PreconditionError("inputs must be positive")
    leading = K_degree * n * n * math.log(n)
    exact = sum(math.lgamma(d) - d * math.log(2 * math.pi) for d in range(1, n + 1))
    exact += n * (n + 1) / 4 * math.log(D_L_norm)
    return leading, exact


def orbit_count_estimate(degrees, ranks):
    degrees, ranks = list(degrees), list(ranks)
    if len(degrees) != len(ranks):
        raise PreconditionError("degrees and ranks must have the same length")
    if any(x <= 0 for x in degrees + ranks):
        raise PreconditionError("degrees and ranks must be positive")
    return sum(k * n * n * math.log(n) for k, n in zip(degrees, ranks))
