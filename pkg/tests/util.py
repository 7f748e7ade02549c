"""Independent oracles and generators used across the test suite.

Everything here recomputes results from definitions, without touching the
library's optimized paths, so the tests stay meaningful.
"""

import itertools

from moufang.table import LoopTable


def cyclic_table(n):
    return LoopTable([[(i + j) % n for j in range(n)] for i in range(n)], label=f"C{n}")


def klein_table():
    return LoopTable([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]], label="C2xC2")


def dihedral_table(order):
    k = order // 2
    t = [[0] * order for _ in range(order)]
    for i in range(k):
        for j in range(k):
            t[i][j] = (i + j) % k
            t[i][j + k] = k + (j - i) % k
            t[i + k][j] = k + (i + j) % k
            t[i + k][j + k] = (j - i) % k
    return LoopTable(t, label=f"D{order}")


def random_loop(n, rng):
    """Random loop table of order n by randomized backtracking."""
    grid = [[None] * n for _ in range(n)]
    grid[0] = list(range(n))
    for i in range(n):
        grid[i][0] = i
    col_used = [set(range(n))] + [{j} for j in range(1, n)]

    def fill(pos):
        if pos == (n - 1) * (n - 1):
            return True
        i = 1 + pos // (n - 1)
        j = 1 + pos % (n - 1)
        row_used = {v for v in grid[i] if v is not None}
        options = [v for v in range(n) if v not in row_used and v not in col_used[j]]
        rng.shuffle(options)
        for v in options:
            grid[i][j] = v
            col_used[j].add(v)
            if fill(pos + 1):
                return True
            grid[i][j] = None
            col_used[j].remove(v)
        return False

    assert fill(0), f"no loop of order {n}?"
    return LoopTable(grid)


def random_identity_fixing_perm(n, rng):
    return [0] + rng.sample(range(1, n), n - 1)


def random_power_associative_loop(n, rng, attempts=500):
    """Random loop whose left- and right-normed powers agree everywhere."""
    from moufang.table import Law

    for _ in range(attempts):
        loop = random_loop(n, rng)
        if loop.satisfies(Law.POWER_ASSOCIATIVE_WITNESS):
            return loop
    raise AssertionError(f"no power-associative loop of order {n} found")


def brute_force_isomorphism(a, b):
    """All-permutations isomorphism oracle (permutations fixing 0)."""
    if a.n != b.n:
        return None
    n = a.n
    ta, tb = a.rows, b.rows
    for rest in itertools.permutations(range(1, n)):
        p = (0,) + rest
        ok = True
        for x in range(1, n):
            px = p[x]
            row_a = ta[x]
            row_b = tb[px]
            for y in range(1, n):
                if p[row_a[y]] != row_b[p[y]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return list(p)
    return None


def naive_element_order(table, x):
    k = 1
    acc = x
    while acc != 0:
        acc = table.mul(acc, x)
        k += 1
    return k


def naive_closure(table, gens):
    out = {0} | set(gens)
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(out):
                c = table.mul(a, b)
                if c not in out:
                    out.add(c)
                    changed = True
    return frozenset(out)


def naive_is_normal(table, elements):
    """The three coset conditions, straight from the definition."""
    h = sorted(elements)
    n = table.n

    def lset(a, items):
        return frozenset(table.mul(a, s) for s in items)

    def rset(items, a):
        return frozenset(table.mul(s, a) for s in items)

    for a in range(n):
        if lset(a, h) != rset(h, a):
            return False
        for b in range(n):
            if lset(a, lset(b, h)) != lset(table.mul(a, b), h):
                return False
            if rset(lset(a, h), b) != lset(a, rset(h, b)):
                return False
    return True


def naive_subloops(table, max_generators=4):
    """Every subloop, as closures of small generator sets.

    Adding a generator outside a finite subloop at least doubles it, so
    max_generators=4 is exhaustive through order 16.
    """
    found = {naive_closure(table, ())}
    frontier = [()]
    for _ in range(max_generators):
        new_frontier = []
        for gens in frontier:
            base = naive_closure(table, gens)
            for x in range(1, table.n):
                if x in base:
                    continue
                cand = gens + (x,)
                cl = naive_closure(table, cand)
                if cl not in found:
                    found.add(cl)
                    new_frontier.append(cand)
        frontier = new_frontier
    return found


def naive_quotient_shape(table):
    """(kind, data) of a group table: cyclic generators or dihedral pairs."""
    n = table.n
    orders = [naive_element_order(table, x) for x in range(n)]
    gens = [x for x in range(n) if orders[x] == n]
    if gens and n % 2 == 0:
        return "cyclic", gens
    if n % 4 == 0:
        invol = [x for x in range(1, n) if orders[x] == 2]
        pairs = [
            (b, g)
            for b in invol
            for g in invol
            if naive_element_order(table, table.mul(b, g)) == n // 2
        ]
        if pairs:
            return "dihedral", pairs
    return "other", []
