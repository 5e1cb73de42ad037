"""Cokernels of random l-adic matrices truncated at precision k.

Sampling uses numpy's Philox counter-based generator.  Batch ``b`` of a run
with seed ``s`` draws from ``Philox(key=s)`` with the counter's top word set
to ``b``, so batches are disjoint reproducible streams and results do not
depend on how batches are spread over workers.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from . import config
from .errors import LimitExceededError, PreconditionError


@dataclass(frozen=True)
class AbelianLGroup:
    """Finite abelian l-group by elementary-divisor exponents (decreasing)."""
    ell: int
    exponents: tuple = ()
    insufficient: bool = False

    def __post_init__(self):
        exps = tuple(sorted((int(e) for e in self.exponents if e), reverse=True))
        object.__setattr__(self, "exponents", exps)

    @property
    def order(self):
        if self.insufficient:
            return None
        return self.ell ** sum(self.exponents)

    @property
    def is_trivial(self):
        return not self.insufficient and not self.exponents

    def to_json(self):
        if self.insufficient:
            return {"ell": self.ell, "insufficient": True}
        return {"ell": self.ell, "exponents": list(self.exponents)}


def _val(x, ell, k):
    if x == 0:
        return k
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def cokernel(matrix, ell, k):
    """Cokernel of a square matrix over Z/l^k by local diagonalization."""
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise PreconditionError("matrix must be square")
    mod = ell ** k
    a = [[int(x) % mod for x in r] for r in matrix]
    exps = []
    for t in range(n):
        best = None
        for i in range(t, n):
            for j in range(t, n):
                v = _val(a[i][j], ell, k)
                if best is None or v < best[0]:
                    best = (v, i, j)
                    if v == 0:
                        break
            if best[0] == 0:
                break
        v, i, j = best
        if v >= k:
            return AbelianLGroup(ell, insufficient=True)
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        unit = a[t][t] // ell ** v
        inv = pow(unit, -1, mod)
        for r in range(t + 1, n):
            if a[r][t]:
                f = (a[r][t] // ell ** v) * inv % mod
                a[r] = [(x - f * y) % mod for x, y in zip(a[r], a[t])]
        exps.append(v)
    return AbelianLGroup(ell, tuple(exps))


def _check_window(g, ell, k):
    mod = ell ** k
    if mod >= 2 ** 31 or g * mod * mod >= 2 ** 62:
        raise LimitExceededError("ell^k", mod, 2 ** 31)


def _batch_valuation(x, ell, k):
    v = np.zeros(x.shape, dtype=np.int64)
    alive = np.ones(x.shape, dtype=bool)
    rem = x.copy()
    for _ in range(k):
        alive &= (rem % ell == 0)
        v += alive
        rem = np.where(alive, rem // ell, rem)
    return v


def _batch_powmod(base, e, mod):
    result = np.ones_like(base)
    b = base % mod
    while e:
        if e & 1:
            result = result * b % mod
        b = b * b % mod
        e >>= 1
    return result


def batch_cokernel_exponents(mats, ell, k):
    """Pivot valuations (batch, g) of each matrix; a value of k means undetermined."""
    mats = np.array(mats, dtype=np.int64)
    nb, g, _ = mats.shape
    _check_window(g, ell, k)
    mod = ell ** k
    phi = mod - mod // ell
    a = mats % mod
    out = np.zeros((nb, g), dtype=np.int64)
    rows = np.arange(nb)
    for t in range(g):
        sub = a[:, t:, t:]
        m = g - t
        vals = _batch_valuation(sub, ell, k).reshape(nb, m * m)
        idx = vals.argmin(axis=1)
        v = vals[rows, idx]
        out[:, t] = v
        pi = idx // m + t
        pj = idx % m + t
        # swap rows t <-> pi and columns t <-> pj
        row_t = a[rows, t, :].copy()
        a[rows, t, :] = a[rows, pi, :]
        a[rows, pi, :] = row_t
        col_t = a[rows, :, t].copy()
        a[rows, :, t] = a[rows, :, pj]
        a[rows, :, pj] = col_t
        if t == g - 1:
            break
        vv = np.minimum(v, k - 1)
        scale = ell ** vv
        piv = a[:, t, t]
        unit = np.where(v < k, piv // scale, 1)
        inv = _batch_powmod(unit, phi - 1, mod)
        col = a[:, t + 1:, t]
        f = (col // scale[:, None]) % mod * inv[:, None] % mod
        f = np.where((v < k)[:, None], f, 0)
        a[:, t + 1:, :] = (a[:, t + 1:, :] - f[:, :, None] * a[:, t:t + 1, :]) % mod
    return out


def batch_cokernels(mats, ell, k):
    exps = batch_cokernel_exponents(mats, ell, k)
    out = []
    for row in exps:
        if (row >= k).any():
            out.append(AbelianLGroup(ell, insufficient=True))
        else:
            out.append(AbelianLGroup(ell, tuple(int(x) for x in row)))
    return out


class MatrixSampler:
    """Uniform g x g matrices over Z/l^k from a Philox stream keyed by ``seed``."""

    def __init__(self, ell, k, g, seed):
        if config.get("cl.prng") != "philox4x64-10":
            raise PreconditionError("only the philox4x64-10 generator is supported")
        self.ell, self.k, self.g, self.seed = ell, k, g, int(seed)

    def batch(self, index, size):
        bitgen = np.random.Philox(key=self.seed % 2 ** 64, counter=[0, 0, 0, int(index)])
        gen = np.random.Generator(bitgen)
        return gen.integers(0, self.ell ** self.k, size=(size, self.g, self.g), dtype=np.int64)


def batch_matpow(mats, n, mod):
    g = mats.shape[1]
    result = np.broadcast_to(np.eye(g, dtype=np.int64), mats.shape).copy()
    base = mats % mod
    while n:
        if n & 1:
            result = np.matmul(result, base) % mod
        base = np.matmul(base, base) % mod
        n >>= 1
    return result


@dataclass
class JointEstimate:
    n: tuple
    targets: tuple
    trials: int
    hits: int
    insufficient: int
    per_event: list
    seed: int
    workers: int
    partition: list = field(default_factory=list)

    @property
    def estimate(self):
        return self.hits / self.trials

    @property
    def stderr(self):
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)

    def to_json(self):
        return {
            "n": list(self.n),
            "targets": [t.to_json() for t in self.targets],
            "trials": self.trials,
            "hits": self.hits,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "per_event_hits": self.per_event,
            "precision_insufficient": self.insufficient,
            "seed": self.seed,
            "workers": self.workers,
            "worker_partition": self.partition,
        }


def _run_batches(args):
    g, ell, k, n_tuple, target_exps, seed, batches = args
    sampler = MatrixSampler(ell, k, g, seed)
    mod = ell ** k
    hits = insufficient = 0
    per_event = [0] * len(n_tuple)
    eye = np.eye(g, dtype=np.int64)
    for index, size in batches:
        f = sampler.batch(index, size)
        joint = np.ones(size, dtype=bool)
        bad = np.zeros(size, dtype=bool)
        for j, n in enumerate(n_tuple):
            m = (eye - batch_matpow(f, n, mod)) % mod
            exps = batch_cokernel_exponents(m, ell, k)
            undetermined = (exps >= k).any(axis=1)
            canon = -np.sort(-exps, axis=1)
            want = np.zeros(g, dtype=np.int64)
            te = target_exps[j]
            if len(te) > g:
                match = np.zeros(size, dtype=bool)
            else:
                want[:len(te)] = te
                match = (canon == want).all(axis=1) & ~undetermined
            per_event[j] += int(match.sum())
            joint &= match
            bad |= undetermined
        hits += int(joint.sum())
        insufficient += int(bad.sum())
    return hits, insufficient, per_event


def _as_group(ell, t):
    if isinstance(t, AbelianLGroup):
        return t
    return AbelianLGroup(ell, tuple(t))


def joint_sample(g, ell, k, n_tuple, targets, trials, seed, workers=1, batch_size=None):
    n_tuple = tuple(int(n) for n in n_tuple)
    if trials < 1:
        raise PreconditionError("trials must be at least 1")
    if g < 1 or k < 1:
        raise PreconditionError("g and k must be positive")
    if len(set(n_tuple)) != len(n_tuple) or any(n < 1 for n in n_tuple):
        raise PreconditionError("n values must be distinct positive integers")
    targets = tuple(_as_group(ell, t) for t in targets)
    if len(targets) != len(n_tuple):
        raise PreconditionError("need one target group per n")
    _check_window(g, ell, k)
    batch_size = batch_size or config.get("cl.batch_size")
    batches = []
    done = 0
    while done < trials:
        size = min(batch_size, trials - done)
        batches.append((len(batches), size))
        done += size
    workers = max(1, int(workers))
    parts = [batches[w::workers] for w in range(workers)]
    target_exps = [t.exponents for t in targets]
    jobs = [(g, ell, k, n_tuple, target_exps, seed, part) for part in parts if part]
    if workers == 1 or len(jobs) == 1:
        results = [_run_batches(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_batches, jobs))
    hits = sum(r[0] for r in results)
    insufficient = sum(r[1] for r in results)
    per_event = [sum(r[2][j] for r in results) for j in range(len(n_tuple))]
    partition = [[b[0] for b in part] for part in parts]
    return JointEstimate(n_tuple, targets, trials, hits, insufficient, per_event,
                         int(seed), workers, partition)


def trivial_cokernel_density(g, ell):
    """prod_{k=1}^{g} (1 - l^-k) = #GL_g(F_l) / l^(g^2)."""
    if g < 1:
        raise PreconditionError("g must be at least 1")
    out = Fraction(1)
    for k in range(1, g + 1):
        out *= 1 - Fraction(1, ell ** k)
    return out


def gl_count(g, ell):
    out = 1
    for i in range(g):
        out *= ell ** g - ell ** i
    return out


def convergence_table(ell, g_values):
    return [(g, trivial_cokernel_density(g, ell)) for g in g_values]


def infinite_product(ell, dps=30):
    with mpmath.workdps(dps):
        return mpmath.qp(mpmath.mpf(1) / ell)


def _batch_invertible_mod2(mats):
    mats = np.asarray(mats) % 2
    nb, g, _ = mats.shape
    if g > 62:
        raise LimitExceededError("g", g, 62)
    weights = (np.int64(1) << np.arange(g, dtype=np.int64))
    rows = (mats.astype(np.int64) * weights).sum(axis=2)
    ok = np.ones(nb, dtype=bool)
    idx = np.arange(nb)
    for c in range(g):
        has = (rows[:, c:] >> c) & 1
        ok &= has.any(axis=1)
        piv = has.argmax(axis=1) + c
        prow = rows[idx, piv].copy()
        rows[idx, piv] = rows[:, c]
        rows[:, c] = prow
        hit = ((rows >> c) & 1).astype(bool)
        hit[:, c] = False
        rows = np.where(hit, rows ^ prow[:, None], rows)
    return ok


def batch_invertible_mod(mats, ell):
    """Boolean array: matrix invertible mod the prime l."""
    if ell == 2:
        return _batch_invertible_mod2(mats)
    exps = batch_cokernel_exponents(np.asarray(mats, dtype=np.int64) % ell, ell, 1)
    return (exps == 0).all(axis=1)


def avoidance_exact(g, ell):
    """Exact P(neither +1 nor -1 is an eigenvalue of F mod l) by enumeration."""
    if ell ** (g * g) > 10 ** 6:
        raise LimitExceededError("l^(g^2)", ell ** (g * g), 10 ** 6)
    good = 0
    total = ell ** (g * g)
    eye = np.eye(g, dtype=np.int64)
    flat = np.arange(total, dtype=np.int64)
    digits = np.empty((total, g * g), dtype=np.int64)
    for i in range(g * g):
        digits[:, i] = flat % ell
        flat //= ell
    mats = digits.reshape(total, g, g)
    ok = batch_invertible_mod(mats - eye, ell) & batch_invertible_mod(mats + eye, ell)
    good = int(ok.sum())
    return Fraction(good, total)


@dataclass
class AvoidanceResult:
    ell: int
    bound: float
    g: int
    trials: int
    hits: int

    @property
    def estimate(self):
        return self.hits / self.trials

    @property
    def stderr(self):
        p = self.estimate
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def consistent(self):
        return self.estimate >= self.bound - 3 * self.stderr

    def to_json(self):
        return {"ell": self.ell, "bound": self.bound, "g": self.g, "trials": self.trials,
                "hits": self.hits, "estimate": self.estimate, "stderr": self.stderr,
                "consistent": self.consistent}


def pm1_bound(ell):
    """1 - 2 (1 - prod_k (1 - l^-k))."""
    if ell < 3:
        raise PreconditionError("l = 2 is handled separately; need l >= 3")
    return 1 - 2 * (1 - infinite_product(ell))


def pm1_avoidance_bound(ell, g=6, trials=20000, seed=0):
    """Lower bound with a Monte-Carlo estimate of the avoidance probability."""
    bound = float(pm1_bound(ell))
    sampler = MatrixSampler(ell, 1, g, seed)
    eye = np.eye(g, dtype=np.int64)
    hits = 0
    done = 0
    index = 0
    bs = config.get("cl.batch_size")
    while done < trials:
        size = min(bs, trials - done)
        f = sampler.batch(index, size)
        ok = batch_invertible_mod(f - eye, ell) & batch_invertible_mod(f + eye, ell)
        hits += int(ok.sum())
        done += size
        index += 1
    return AvoidanceResult(ell, bound, g, trials, hits)


def containment_check(samples, g=6, seed=0):
    """Count samples where 1 - F^2 is invertible mod 2 but 1 - F is not."""
    sampler = MatrixSampler(2, 1, g, seed)
    eye = np.eye(g, dtype=np.int64)
    violations = 0
    both = 0
    done = 0
    index = 0
    bs = max(config.get("cl.batch_size"), 65536)
    while done < samples:
        size = min(bs, samples - done)
        f = sampler.batch(index, size)
        inv2 = batch_invertible_mod(eye - np.matmul(f, f) % 2, 2)
        inv1 = batch_invertible_mod(eye - f, 2)
        violations += int((inv2 & ~inv1).sum())
        both += int(inv2.sum())
        done += size
        index += 1
    return {"samples": samples, "violations": violations, "inv_1_minus_F2": both}


def product_over_S(estimates):
    """Multiply per-prime (probability, stderr) pairs with first-order error propagation.

    ``estimates`` is a list of (prime, probability, stderr).
    """
    primes = [e[0] for e in estimates]
    if len(set(primes)) != len(primes):
        raise PreconditionError("primes in S must be distinct")
    prob = 1
    for _, p, _ in estimates:
        prob = prob * p
    var = 0.0
    for i, (_, p, se) in enumerate(estimates):
        others = 1.0
        for j, (_, q, _) in enumerate(estimates):
            if j != i:
                others *= float(q)
        var += (others * float(se)) ** 2
    return prob, math.sqrt(var)
