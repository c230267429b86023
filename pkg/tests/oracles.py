"""Slow reference implementations used to check the fast code.

Nothing here imports the reduction or the matcher: the rank oracle builds its
own cells straight from the pixel mask and works with GF(2) vectors stored as
Python integers; the transport oracle enumerates every partial matching.
"""

from collections import Counter
from itertools import combinations, permutations
import math

import numpy as np


def lattice_cells(mask):
    """Closed cubical complex of a mask as ``{cell: faces}`` with lattice-point vertices.

    Pixel ``(r, c)`` covers ``[c, c+1] x [H-r-1, H-r]`` in y-up coordinates.
    """
    mask = np.asarray(mask, dtype=bool)
    H = mask.shape[0]
    cells = {}
    for r, c in zip(*np.nonzero(mask)):
        x0, y0 = int(c), int(H - r - 1)
        corners = [(x0, y0), (x0 + 1, y0), (x0 + 1, y0 + 1), (x0, y0 + 1)]
        sides = [frozenset((corners[i], corners[(i + 1) % 4])) for i in range(4)]
        for p in corners:
            cells[frozenset([p])] = ()
        for s in sides:
            cells[s] = tuple(frozenset([p]) for p in s)
        cells[frozenset(corners)] = tuple(sides)
    return cells


def _insert(basis, vec):
    """Reduce ``vec`` against ``basis`` (pivot -> vector); return True if it was new."""
    while vec:
        p = vec.bit_length() - 1
        b = basis.get(p)
        if b is None:
            basis[p] = vec
            return True
        vec ^= b
    return False


def _kernel(vectors):
    """Basis of the GF(2) kernel; ``vectors`` is a list of (image, label) pairs."""
    basis, out = {}, []
    for vec, label in vectors:
        combo = label
        while vec:
            p = vec.bit_length() - 1
            if p not in basis:
                basis[p] = (vec, combo)
                break
            bv, bc = basis[p]
            vec ^= bv
            combo ^= bc
        else:
            out.append(combo)
    return out


def rank_oracle(mask, v):
    """Extended persistence multiset ``Counter((degree, kind, birth, death))``.

    Every parameter of the extended sequence is a pair of subcomplexes:
    ``(K_t, empty)`` for the ordinary value ``t`` and ``(K, K^t)`` for the
    relative value ``t``, after an initial empty pair. Ranks of all induced maps
    in degrees 0 and 1 give the interval multiplicities by inclusion-exclusion.
    """
    cells = lattice_cells(mask)
    order = sorted(cells, key=lambda s: (len(s), sorted(s)))
    index = {s: i for i, s in enumerate(order)}
    dim = {s: {1: 0, 2: 1, 4: 2}[len(s)] for s in order}
    h = {p: p[0] * v[0] + p[1] * v[1] for s in order if len(s) == 1 for p in s}
    hi = {s: max(h[p] for p in s) for s in order}
    lo = {s: min(h[p] for p in s) for s in order}
    bd = {s: sum(1 << index[f] for f in cells[s]) for s in order}

    def mask_of(pred):
        return sum(1 << index[s] for s in order if pred(s))

    values = sorted(set(h.values()))
    everything = mask_of(lambda s: True)
    params = [(None, None, 0, 0)]
    params += [("Ord", t, mask_of(lambda s, t=t: hi[s] <= t), 0) for t in values]
    params += [("Rel", t, everything, mask_of(lambda s, t=t: lo[s] >= t)) for t in reversed(values)]
    P = len(params)

    def rel_cells(p, k):
        _, _, a, a2 = params[p]
        live = a & ~a2
        return [s for s in order if dim[s] == k and live >> index[s] & 1], live

    out = Counter()
    for k in (0, 1):
        cycles, bounds = [], []
        for p in range(P):
            ks, live = rel_cells(p, k)
            cycles.append(_kernel([(bd[s] & live, 1 << index[s]) for s in ks]))
            kk, live1 = rel_cells(p, k + 1)
            basis = {}
            for s in kk:
                _insert(basis, bd[s] & live1)
            bounds.append((basis, live1))

        r = np.zeros((P, P), dtype=int)
        for a in range(1, P):
            for b in range(a, P):
                basis, live = bounds[b]
                basis = dict(basis)
                r[a, b] = sum(_insert(basis, z & live) for z in cycles[a])

        for i in range(1, P):
            for j in range(i + 1, P):
                mu = r[i, j - 1] - r[i - 1, j - 1] - r[i, j] + r[i - 1, j]
                assert mu >= 0
                if not mu:
                    continue
                (bt, bv, _, _), (dt, dv, _, _) = params[i], params[j]
                if bv == dv:
                    continue
                kind = {("Ord", "Ord"): "ordinary", ("Rel", "Rel"): "relative",
                        ("Ord", "Rel"): "essential"}[(bt, dt)]
                out[(k, kind, float(bv), float(dv))] += int(mu)
        # anything alive at the last parameter would be an unpaired class
        assert r[P - 1, P - 1] == 0
    return out


def _endpoint(a, b):
    if a.tag is not b.tag:
        return math.inf
    return abs(a.value - b.value)


def _to_ephemeral(x):
    # the cost |b - s| + |d - s| is piecewise linear in s, so a breakpoint is optimal
    b, d = x.birth.value, x.death.value
    return min(abs(b - s) + abs(d - s) for s in (b, d))


def w1_brute(X, Y):
    """Cheapest plan over every partial bijection, cross-kind pairs included."""
    xs, ys = list(X), list(Y)
    best = math.inf
    for k in range(min(len(xs), len(ys)) + 1):
        for left in combinations(range(len(xs)), k):
            rest_x = sum(_to_ephemeral(xs[i]) for i in range(len(xs)) if i not in left)
            for right in permutations(range(len(ys)), k):
                cost = rest_x + sum(_to_ephemeral(ys[j]) for j in range(len(ys)) if j not in right)
                for i, j in zip(left, right):
                    cost += _endpoint(xs[i].birth, ys[j].birth) + _endpoint(xs[i].death, ys[j].death)
                best = min(best, cost)
    return best
