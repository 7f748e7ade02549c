"""Isomorphism testing with invariant pruning, and the discriminator catalog.

Isomorphisms must preserve each element's order, its number of square and
fourth roots, and how many elements of each order commute with it.  The
multiset of these per-element invariants (the discriminator) is a cheap
fingerprint of the whole loop: tables with different discriminators are
never isomorphic, and candidate images in the backtracking search are
restricted to elements with equal invariants.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .subloop import subloop_closure
from .table import LoopError


def element_invariant(loop, x):
    """(order, square-root count, fourth-root count, commutant profile) of x."""
    return _invariant_tuples(loop)[x]


def _invariant_tuples(loop):
    cached = getattr(loop, "_invariant_tuples", None)
    if cached is not None:
        return cached
    T = loop.cells.astype(np.int64)
    n = loop.n
    left_orders, right_orders, bad = loop._power_profile
    squares = np.diagonal(T)
    s = np.bincount(squares, minlength=n)
    fourth = T[squares, squares]
    f = np.bincount(fourth, minlength=n)
    commutes = T == T.T
    onehot = np.zeros((n, n + 1), dtype=np.int64)
    onehot[np.arange(n), left_orders] = 1
    profile = commutes.astype(np.int64) @ onehot
    if bad:
        # no well-defined element orders: fall back to the pair of one-sided
        # power periods, which relabeling still preserves
        tuples = tuple(
            (
                int(left_orders[x]),
                int(right_orders[x]),
                int(s[x]),
                int(f[x]),
                tuple(int(c) for c in profile[x, 1:]),
            )
            for x in range(n)
        )
    else:
        tuples = tuple(
            (int(left_orders[x]), int(s[x]), int(f[x]), tuple(int(c) for c in profile[x, 1:]))
            for x in range(n)
        )
    loop._invariant_tuples = tuples
    return tuples


@dataclass(frozen=True)
class Discriminator:
    """Canonically sorted multiset of (element invariant, multiplicity)."""

    entries: tuple

    @property
    def key(self):
        return self.entries

    def __len__(self):
        return sum(count for _, count in self.entries)


def discriminator(loop):
    cached = getattr(loop, "_discriminator", None)
    if cached is not None:
        return cached
    counts = Counter(_invariant_tuples(loop))
    disc = Discriminator(tuple(sorted(counts.items())))
    loop._discriminator = disc
    return disc


def _generating_sequence(loop, rarity):
    """Greedy generators: repeatedly the rarest-invariant element outside the
    subloop generated so far."""
    n = loop.n
    chosen = []
    closure = {0}
    order = sorted(range(n), key=lambda x: (rarity[x], x))
    while len(closure) < n:
        nxt = next(x for x in order if x not in closure)
        chosen.append(nxt)
        closure = set(subloop_closure(loop, chosen).elements)
    return chosen


def are_isomorphic(l1, l2):
    """An isomorphism mapping from l1 to l2 as a list, or None.

    Fails fast on discriminator mismatch, then backtracks over a generating
    sequence of l1, restricting each image to elements of l2 with the same
    invariant and propagating forced products through closure.
    """
    if l1.n != l2.n:
        raise LoopError("SIZE_MISMATCH", f"orders {l1.n} and {l2.n}")
    if discriminator(l1).key != discriminator(l2).key:
        return None
    n = l1.n
    inv1 = _invariant_tuples(l1)
    inv2 = _invariant_tuples(l2)
    ids = {}
    class1 = [ids.setdefault(t, len(ids)) for t in inv1]
    class2 = [ids.setdefault(t, len(ids)) for t in inv2]
    rarity = Counter(class1)
    gens = _generating_sequence(l1, [rarity[c] for c in class1])
    candidates = [
        [y for y in range(n) if class2[y] == class1[g]] for g in gens
    ]
    t1 = l1.rows
    t2 = l2.rows

    fwd = [-1] * n
    bwd = [-1] * n
    fwd[0] = 0
    bwd[0] = 0
    known = [0]

    def extend(x, y):
        """Force f[x] = y and close under products.

        Returns (ok, count) where count is how many assignments were made
        and must be undone on backtrack."""
        if fwd[x] != -1:
            return fwd[x] == y, 0
        if bwd[y] != -1 or class1[x] != class2[y]:
            return False, 0
        start = len(known)
        fwd[x] = y
        bwd[y] = x
        known.append(x)
        i = start
        while i < len(known):
            a = known[i]
            fa = fwd[a]
            for b in known:
                for c, d in (
                    (t1[a][b], t2[fa][fwd[b]]),
                    (t1[b][a], t2[fwd[b]][fa]),
                ):
                    fc = fwd[c]
                    if fc != -1:
                        if fc != d:
                            return False, len(known) - start
                        continue
                    if bwd[d] != -1 or class1[c] != class2[d]:
                        return False, len(known) - start
                    fwd[c] = d
                    bwd[d] = c
                    known.append(c)
            i += 1
        return True, len(known) - start

    def undo(count):
        for _ in range(count):
            x = known.pop()
            y = fwd[x]
            fwd[x] = -1
            bwd[y] = -1

    def dfs(level):
        if level == len(gens):
            return len(known) == n
        g = gens[level]
        if fwd[g] != -1:
            return dfs(level + 1)
        for y in candidates[level]:
            if bwd[y] != -1:
                continue
            ok, added = extend(g, y)
            if ok and dfs(level + 1):
                return True
            undo(added)
        return False

    if not dfs(0):
        return None
    phi = np.fromiter(fwd, dtype=np.int64)
    # belt and braces: re-verify the homomorphism equation on all pairs
    c2 = l2.cells.astype(np.int64)
    if not (phi[l1.cells.astype(np.int64)] == c2[phi[:, None], phi[None, :]]).all():
        raise LoopError("BAD_STEP", "internal error: search returned a non-isomorphism")
    return [int(v) for v in phi]


class IsoCatalog:
    """Loops bucketed by discriminator; full tests run only inside a bucket."""

    def __init__(self):
        self.tables = []
        self.buckets = {}
        self._exact = {}

    def __len__(self):
        return len(self.tables)

    def insert_if_new(self, loop):
        """(id, was_new): the id of an isomorphic stored loop, or a fresh one."""
        exact = self._exact.get(loop.key)
        if exact is not None:
            return exact, False
        key = discriminator(loop).key
        bucket = self.buckets.setdefault(key, [])
        for idx in bucket:
            if are_isomorphic(self.tables[idx], loop) is not None:
                self._exact[loop.key] = idx
                return idx, False
        idx = len(self.tables)
        self.tables.append(loop)
        bucket.append(idx)
        self._exact[loop.key] = idx
        return idx, True

    def bucket_sizes(self):
        return sorted((len(v) for v in self.buckets.values()), reverse=True)
