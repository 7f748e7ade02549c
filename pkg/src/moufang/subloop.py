"""Subloops, normality, quotients, and quotient-shape detection.

The search only ever modifies along a normal subloop S whose quotient is a
cyclic group of even order or a dihedral group of order 4m.  Such quotients
are groups, so S must contain the associator subloop A(L); candidate S are
therefore pulled back from the normal subgroups of the group L/A(L).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .table import Law, LoopError, LoopTable


@dataclass(frozen=True)
class SubloopHandle:
    parent: LoopTable
    elements: tuple

    def __post_init__(self):
        if 0 not in self.elements:
            raise LoopError("OUT_OF_RANGE", "subloop must contain 0")

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in set(self.elements)

    def restricted(self):
        """(table, embed) where table is the subloop on its own indices and
        embed[i] is the parent element behind index i."""
        embed = list(self.elements)
        pos = {e: i for i, e in enumerate(embed)}
        rows = self.parent.rows
        cells = [[pos[rows[a][b]] for b in embed] for a in embed]
        return LoopTable(cells), embed


def subloop_closure(loop, generators):
    """Smallest multiplicatively closed subset containing the generators and 0.

    Finite and closed under products implies closed under both divisions,
    so the result is a subloop.
    """
    rows = loop.rows
    seen = {0}
    pending = [0]
    for g in generators:
        if not 0 <= g < loop.n:
            raise LoopError("OUT_OF_RANGE", f"generator {g}")
        if g not in seen:
            seen.add(g)
            pending.append(g)
    processed = []
    while pending:
        a = pending.pop()
        row_a = rows[a]
        for c in (row_a[a],):
            if c not in seen:
                seen.add(c)
                pending.append(c)
        for b in processed:
            for c in (row_a[b], rows[b][a]):
                if c not in seen:
                    seen.add(c)
                    pending.append(c)
        processed.append(a)
    return SubloopHandle(loop, tuple(sorted(seen)))


def is_subloop(loop, elements):
    rows = loop.rows
    elset = set(elements)
    if 0 not in elset:
        return False
    return all(rows[a][b] in elset for a in elements for b in elements)


def is_normal(loop, sub):
    """aH == Ha, a(bH) == (ab)H and (aH)b == a(Hb) for all a, b (as sets)."""
    T = loop.cells.astype(np.int64)
    H = np.fromiter(sub.elements, dtype=np.int64)
    aH = np.sort(T[:, H], axis=1)                      # aH[a] sorted
    Ha = np.sort(T[H, :].T, axis=1)                    # Ha[a] sorted
    if not (aH == Ha).all():
        return False
    bH = T[:, H]                                       # unsorted coset rows
    left_assoc = np.sort(T[:, bH], axis=2)             # [a, b] = sorted a(bH)
    if not (left_assoc == aH[T]).all():                # (ab)H sorted == aH[T[a,b]]
        return False
    Hb = T[H, :].T                                     # [b, k] = h_k * b
    right_inner = np.sort(T[:, Hb], axis=2)            # [a, b] = sorted a(Hb)
    outer = T[bH]                                      # [a, k, b] = (a h_k) * b
    outer = np.sort(np.transpose(outer, (0, 2, 1)), axis=2)
    return bool((outer == right_inner).all())


def _coset_partition(loop, sub):
    rows = loop.rows
    n = loop.n
    members = sorted(sub.elements)
    coset_of = [-1] * n
    cosets = []
    for a in range(n):
        if coset_of[a] != -1:
            continue
        block = sorted(rows[a][s] for s in members)
        bid = len(cosets)
        for e in block:
            if coset_of[e] != -1:
                raise LoopError("NOT_NORMAL", "cosets do not partition the loop")
        for e in block:
            coset_of[e] = bid
        cosets.append(tuple(block))
    return tuple(cosets), tuple(coset_of)


@dataclass(frozen=True)
class NormalDecomposition:
    parent: LoopTable
    subloop: SubloopHandle
    cosets: tuple
    coset_of: tuple
    quotient: LoopTable

    @property
    def index(self):
        return len(self.cosets)


def quotient(loop, sub):
    """Coset partition and quotient table of loop by a normal subloop."""
    if not is_subloop(loop, sub.elements):
        raise LoopError("NOT_NORMAL", "given elements are not a subloop")
    if not is_normal(loop, sub):
        raise LoopError("NOT_NORMAL", f"subloop {sub.elements} is not normal")
    cosets, coset_of = _coset_partition(loop, sub)
    reps = [block[0] for block in cosets]
    q = [[coset_of[loop.rows[a][b]] for b in reps] for a in reps]
    qt = LoopTable(q)
    # representative-independence: any two representatives multiply into the
    # block the quotient predicts
    cmap = np.fromiter(coset_of, dtype=np.int64)
    T = loop.cells.astype(np.int64)
    if not (cmap[T] == qt.cells.astype(np.int64)[cmap[:, None], cmap[None, :]]).all():
        raise LoopError("NOT_NORMAL", "quotient multiplication is not well defined")
    return NormalDecomposition(loop, sub, cosets, coset_of, qt)


def associator_subloop(loop):
    """Smallest normal subloop containing every associator [x,y,z]."""
    core = subloop_closure(loop, loop.associator_values())
    while not is_normal(loop, core):
        extra = _inner_mapping_sweep(loop, core.elements)
        core = subloop_closure(loop, extra)
    return core


def _inner_mapping_sweep(loop, elements):
    """One pass of the inner mappings T_x, L_{x,y}, R_{x,y} over a subset."""
    rows = loop.rows
    n = loop.n
    out = set(elements)
    ldiv = loop._row_inverse
    rdiv = loop._col_inverse
    for h in list(out):
        for x in range(n):
            out.add(int(ldiv[x, rows[h][x]]))                  # T_x: x \ (h x)
            for y in range(n):
                out.add(int(ldiv[rows[y][x], rows[y][rows[x][h]]]))   # L_{x,y}
                out.add(int(rdiv[rows[x][y], rows[rows[h][x]][y]]))   # R_{x,y}
    return out


def subgroups_of(group):
    """All subgroups of a group table, as sorted element tuples.

    Iterated joins of cyclic subgroups; every subgroup is such a join.
    """
    if not group.satisfies(Law.ASSOCIATIVE):
        raise LoopError("NOT_ASSOCIATIVE", "subgroup lattice needs a group")
    rows = group.rows
    n = group.n
    cyclics = set()
    for x in range(1, n):
        acc = [0, x]
        cur = x
        while True:
            cur = rows[cur][x]
            if cur == 0:
                break
            acc.append(cur)
        cyclics.add(tuple(sorted(acc)))
    trivial = (0,)
    found = {trivial} | cyclics
    frontier = list(cyclics)
    cyclist = sorted(cyclics)
    while frontier:
        base = frontier.pop()
        base_set = set(base)
        for cyc in cyclist:
            if set(cyc) <= base_set:
                continue
            join = subloop_closure(group, base + cyc).elements
            if join not in found:
                found.add(join)
                frontier.append(join)
    return sorted(found, key=lambda t: (len(t), t))


def normal_subgroups_of(group):
    rows = group.rows
    n = group.n
    inv = [group.inverse(x) for x in range(n)]
    result = []
    for sub in subgroups_of(group):
        sset = set(sub)
        if all(rows[rows[g][s]][inv[g]] in sset for g in range(n) for s in sub):
            result.append(sub)
    return result


@dataclass(frozen=True)
class QuotientShape:
    kind: str                       # "cyclic" | "dihedral" | "other"
    order: int
    generators: tuple = ()          # cyclic: generator block ids
    pairs: tuple = ()               # dihedral: (beta, gamma) block id pairs


def classify_quotient(q):
    """Shape of an associative quotient: cyclic of even order with all its
    generators, dihedral of order 4m with all valid involution pairs, or
    other.  The Klein four-group counts as dihedral with m = 1."""
    if not q.satisfies(Law.ASSOCIATIVE):
        raise LoopError("NOT_ASSOCIATIVE", "quotient shapes are defined for groups")
    n = q.n
    orders = q.element_orders()
    gens = tuple(int(b) for b in range(n) if orders[b] == n)
    if gens and n % 2 == 0:
        return QuotientShape("cyclic", n, generators=gens)
    if n % 4 == 0:
        invol = [b for b in range(1, n) if orders[b] == 2]
        half = n // 2
        pairs = tuple(
            (b, g)
            for b in invol
            for g in invol
            if orders[q.mul(b, g)] == half
        )
        if pairs:
            return QuotientShape("dihedral", n, pairs=pairs)
    return QuotientShape("other", n)


def normal_subloops_for_search(loop):
    """All nontrivial normal subloops S with L/S cyclic of even order or
    dihedral of order 4m, as NormalDecompositions in canonical S order.

    Routed through the group L/A(L): cyclic and dihedral quotients are
    groups, so S must contain A(L) and corresponds to a normal subgroup of
    L/A(L).  The trivial S = {0} is omitted; both constructions draw their
    modifier h from S, so it never yields a modification.
    """
    aloop = associator_subloop(loop)
    base = quotient(loop, aloop)
    out = []
    seen = set()
    for k in normal_subgroups_of(base.quotient):
        elements = tuple(sorted(e for bid in k for e in base.cosets[bid]))
        if len(elements) <= 1 or elements in seen:
            continue
        seen.add(elements)
        sub = SubloopHandle(loop, elements)
        dec = quotient(loop, sub)
        if classify_quotient(dec.quotient).kind != "other":
            out.append(dec)
    out.sort(key=lambda d: d.subloop.elements)
    return out


# -- small-group recognition ----------------------------------------------

def _prime_factors(n):
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

def _partitions(k):
    if k == 0:
        yield ()
        return
    for first in range(k, 0, -1):
        for rest in _partitions(k - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def _cyclic_stat(m):
    return {d: _totient(d) for d in range(1, m + 1) if m % d == 0}


def _totient(d):
    out = d
    for p in _prime_factors(d):
        out -= out // p
    return out


def _stat_product(sa, sb):
    out = {}
    for da, ca in sa.items():
        for db, cb in sb.items():
            d = math.lcm(da, db)
            out[d] = out.get(d, 0) + ca * cb
    return out


def _abelian_candidates(n):
    """(invariant factors, order statistic) for every abelian group of order n."""
    factors = _prime_factors(n)
    per_prime = []
    for p, e in sorted(factors.items()):
        opts = []
        for part in _partitions(e):
            opts.append(tuple(p ** k for k in part))   # descending prime powers
        per_prime.append(opts)

    def combine(idx):
        if idx == len(per_prime):
            yield ()
            return
        for rest in combine(idx + 1):
            for opt in per_prime[idx]:
                yield (opt,) + rest

    for combo in combine(0):
        width = max(len(opt) for opt in combo)
        invariant = []
        for i in range(width):
            f = 1
            for opt in combo:
                if i < len(opt):
                    f *= opt[i]
            invariant.append(f)
        invariant.sort()
        stat = reduce(_stat_product, (_cyclic_stat(f) for f in invariant))
        yield tuple(invariant), stat


# Order statistics of the named nonabelian groups the class reports need.
# Regenerated by tests from the builtin constructors.
NONABELIAN_FINGERPRINTS = {
    (6, ((1, 1), (2, 3), (3, 2))): "D6",
    (8, ((1, 1), (2, 5), (4, 2))): "D8",
    (8, ((1, 1), (2, 1), (4, 6))): "Q8",
    (10, ((1, 1), (2, 5), (5, 4))): "D10",
    (12, ((1, 1), (2, 7), (3, 2), (6, 2))): "D12",
    (12, ((1, 1), (2, 1), (3, 2), (4, 6), (6, 2))): "Dic12",
    (12, ((1, 1), (2, 3), (3, 8))): "A4",
    (14, ((1, 1), (2, 7), (7, 6))): "D14",
    (16, ((1, 1), (2, 9), (4, 2), (8, 4))): "D16",
    (16, ((1, 1), (2, 5), (4, 6), (8, 4))): "SD16",
    (16, ((1, 1), (2, 1), (4, 10), (8, 4))): "Dic16",
    (16, ((1, 1), (2, 3), (4, 4), (8, 8))): "M16",
    (21, ((1, 1), (3, 14), (7, 6))): "C7:C3",
    (24, ((1, 1), (2, 9), (3, 8), (4, 6))): "S4",
    (24, ((1, 1), (2, 1), (3, 8), (4, 6), (6, 8))): "SL23",
    (27, ((1, 1), (3, 26))): "He3",
    (27, ((1, 1), (3, 8), (9, 18))): "M27",
}


def identify_small_group(q):
    """Canonical name of a small group from (order, abelianness, order statistic).

    Abelian groups are decomposed exactly (the order statistic determines
    them); nonabelian groups go through a fingerprint table of the named
    groups the reports need.  Raises UNRECOGNIZED outside that set.
    """
    if not q.satisfies(Law.ASSOCIATIVE):
        raise LoopError("NOT_ASSOCIATIVE", "cannot name a nonassociative table")
    if q.n == 1:
        return "C1"
    stat = q.order_statistic().counts
    if q.is_abelian():
        for invariant, cand in _abelian_candidates(q.n):
            if cand == stat:
                return "x".join(f"C{f}" for f in invariant)
        raise LoopError("UNRECOGNIZED", f"abelian of order {q.n} with odd statistic")
    key = (q.n, tuple(sorted(stat.items())))
    name = NONABELIAN_FINGERPRINTS.get(key)
    if name is None:
        raise LoopError("UNRECOGNIZED", f"nonabelian group of order {q.n} not in fingerprint set")
    return name
