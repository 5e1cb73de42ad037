"""Isometry testing and automorphism counting by backtracking.

An O-linear isometry ``M -> M'`` is determined by the images ``v_1..v_n`` of
the basis; it exists iff ``<v_i, v_j>' = H[i][j]`` for all ``i, j``.  Equal
Gram matrices of unimodular lattices force the images to be a basis, so no
index check is needed once determinants agree.
"""

from .gram import coords_to_vector


class _Target:
    """Candidate image vectors in a lattice, grouped by norm."""

    def __init__(self, gram, norms):
        self.gram = gram
        ring = gram.ring
        top = max(norms) if norms else 0
        found = gram.short_vectors(top)
        self.by_norm = {a: [] for a in norms}
        for flat, tnorm in found:
            a = tnorm // 2
            if a in self.by_norm:
                self.by_norm[a].append(coords_to_vector(ring, flat))
        self._cache = {}

    def inner(self, u, v):
        key = (u, v)
        val = self._cache.get(key)
        if val is None:
            val = self.gram.inner(u, v)
            self._cache[key] = val
        return val


def _extend(source, target, images, limit_one=True, counter=None):
    """Depth-first extension of partial basis images; True if one completes."""
    k = len(images)
    n = source.n
    if k == n:
        if counter is not None:
            counter[0] += 1
        return True
    a = source.entries[k][k][0]
    found = False
    for w in target.by_norm[a]:
        ok = True
        for j in range(k):
            if target.inner(w, images[j]) != source.entries[k][j]:
                ok = False
                break
        if not ok:
            continue
        images.append(w)
        hit = _extend(source, target, images, limit_one, counter)
        images.pop()
        if hit:
            found = True
            if limit_one:
                return True
    return found


def find_isometry(source, target):
    """Images of ``source``'s basis in ``target`` realizing an isometry, or None."""
    if source.ring != target.ring or source.n != target.n:
        return None
    tgt = _Target(target, set(source.diagonal()))
    images = []

    def rec():
        k = len(images)
        if k == source.n:
            return True
        a = source.entries[k][k][0]
        for w in tgt.by_norm[a]:
            if all(tgt.inner(w, images[j]) == source.entries[k][j] for j in range(k)):
                images.append(w)
                if rec():
                    return True
                images.pop()
        return False

    return list(images) if rec() else None


def are_isometric(g1, g2):
    # search from the Gram with the smaller diagonal: fewer candidate images
    if max(g2.diagonal(), default=0) < max(g1.diagonal(), default=0):
        g1, g2 = g2, g1
    return find_isometry(g1, g2) is not None


def automorphism_count(gram):
    """Order of the isometry group of ``gram`` (a :class:`HermitianGram`).

    Uses the pointwise-stabilizer chain: ``#Aut = prod_k #orbit_k`` where
    ``orbit_k`` is the orbit of ``e_k`` under the automorphisms fixing
    ``e_1..e_{k-1}``; each orbit element is certified by one completing
    extension.
    """
    n = gram.n
    ring = gram.ring
    tgt = _Target(gram, set(gram.diagonal()))
    basis = []
    for i in range(n):
        basis.append(tuple(ring.one if j == i else ring.zero for j in range(n)))
    order = 1
    for k in range(n):
        fixed = basis[:k]
        a = gram.entries[k][k][0]
        orbit = 0
        for w in tgt.by_norm[a]:
            if not all(tgt.inner(w, fixed[j]) == gram.entries[k][j] for j in range(k)):
                continue
            if _extend(gram, tgt, fixed + [w]):
                orbit += 1
        order *= orbit
    return order


def automorphism_count_naive(gram):
    """Count every automorphism individually (small lattices only)."""
    tgt = _Target(gram, set(gram.diagonal()))
    counter = [0]
    _extend(gram, tgt, [], limit_one=False, counter=counter)
    return counter[0]


def short_vector_profile(gram, top):
    """Number of vectors of each norm ``1..top`` (an isometry invariant)."""
    found = gram.short_vectors(top)
    counts = [0] * (top + 1)
    for _, tnorm in found:
        counts[tnorm // 2] += 1
    return tuple(counts[1:])
