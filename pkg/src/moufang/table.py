"""Cayley-table loops and the algebraic primitives everything else consumes.

A loop of order n is stored as an n-by-n table over the indices 0..n-1.
Rows index the left factor, columns the right factor.  Element 0 is always
the two-sided neutral element; external inputs are renumbered on ingest to
enforce this (see :mod:`moufang.files`).
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from functools import cached_property

import numpy as np


class LoopError(Exception):
    """Domain error carrying a stable machine-readable code."""

    def __init__(self, code, message=""):
        self.code = code
        super().__init__(f"{code}: {message}" if message else code)


class Law(enum.Enum):
    ASSOCIATIVE = "associative"
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    M4 = "M4"
    EXTRA = "extra"
    POWER_ASSOCIATIVE_WITNESS = "power-associative-witness"


def _as_grid(cells):
    grid = np.asarray(cells)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise LoopError("NOT_LATIN", f"grid is not square: shape {grid.shape}")
    if grid.size == 0:
        raise LoopError("NOT_LATIN", "empty grid")
    if not np.issubdtype(grid.dtype, np.integer):
        grid = grid.astype(np.int64)
    return grid


class LoopTable:
    """Immutable multiplication table of a finite loop.

    The constructor validates the Latin-square and identity invariants and
    raises LoopError(NOT_LATIN / NO_IDENTITY / OUT_OF_RANGE) on bad input.
    Instances are safe to share between threads; every method is pure.
    """

    def __init__(self, cells, label=None):
        grid = _as_grid(cells)
        n = grid.shape[0]
        if grid.min() < 0 or grid.max() >= n:
            bad = grid[(grid < 0) | (grid >= n)].flat[0]
            raise LoopError("OUT_OF_RANGE", f"cell value {bad} not in 0..{n - 1}")
        ref = np.arange(n)
        if not (np.sort(grid, axis=1) == ref).all():
            raise LoopError("NOT_LATIN", "some row repeats an element")
        if not (np.sort(grid, axis=0) == ref[:, None]).all():
            raise LoopError("NOT_LATIN", "some column repeats an element")
        if not ((grid[0] == ref).all() and (grid[:, 0] == ref).all()):
            raise LoopError("NO_IDENTITY", "row/column 0 is not the identity permutation")
        dtype = np.uint8 if n <= 256 else np.uint32
        self._cells = grid.astype(dtype)
        self._cells.flags.writeable = False
        self.n = n
        self.label = label

    @property
    def cells(self):
        return self._cells

    def __repr__(self):
        tag = f" {self.label!r}" if self.label else ""
        return f"<LoopTable order={self.n}{tag}>"

    def __eq__(self, other):
        if not isinstance(other, LoopTable):
            return NotImplemented
        return self.n == other.n and self._cells.tobytes() == other._cells.tobytes()

    def __hash__(self):
        return hash((self.n, self._cells.tobytes()))

    @cached_property
    def key(self):
        """Exact-table key: equal keys means equal cells (not mere isomorphism)."""
        return (self.n, self._cells.tobytes())

    @cached_property
    def rows(self):
        """Cells as a tuple of tuples, fast for scalar-heavy inner loops."""
        return tuple(tuple(int(v) for v in row) for row in self._cells)

    def _check_index(self, *xs):
        for x in xs:
            if not 0 <= x < self.n:
                raise LoopError("OUT_OF_RANGE", f"element {x} not in 0..{self.n - 1}")

    def mul(self, x, y):
        self._check_index(x, y)
        return int(self._cells[x, y])

    @cached_property
    def _row_inverse(self):
        # _row_inverse[a, b] solves a * x == b
        return np.argsort(self._cells, axis=1).astype(self._cells.dtype)

    @cached_property
    def _col_inverse(self):
        # _col_inverse[a, b] solves x * a == b
        return np.argsort(self._cells, axis=0).T.astype(self._cells.dtype)

    def ldiv(self, a, b):
        """The unique x with a * x == b."""
        self._check_index(a, b)
        return int(self._row_inverse[a, b])

    def rdiv(self, a, b):
        """The unique x with x * a == b."""
        self._check_index(a, b)
        return int(self._col_inverse[a, b])

    def divide(self, side, a, b):
        if side == "left":
            return self.ldiv(a, b)
        if side == "right":
            return self.rdiv(a, b)
        raise LoopError("OUT_OF_RANGE", f"side must be 'left' or 'right', got {side!r}")

    def inverse(self, x):
        """Two-sided inverse of x, or NO_TWO_SIDED_INVERSE if left != right."""
        self._check_index(x)
        left = self.ldiv(x, 0)
        right = self.rdiv(x, 0)
        if left != right:
            raise LoopError(
                "NO_TWO_SIDED_INVERSE",
                f"element {x}: left inverse {left}, right inverse {right}",
            )
        return left

    # -- powers and orders ------------------------------------------------

    @cached_property
    def _power_profile(self):
        """(left orders, right orders, bad): first returns to 0 of the two
        power sequences, and the elements where they disagree on the way."""
        n = self.n
        cells = self._cells.astype(np.int64)
        left_orders = np.zeros(n, dtype=np.int64)
        right_orders = np.zeros(n, dtype=np.int64)
        bad = set()
        idx = np.arange(n)
        left = idx.copy()
        right = idx.copy()
        left_active = np.ones(n, dtype=bool)
        right_active = np.ones(n, dtype=bool)
        left_active[0] = right_active[0] = False
        left_orders[0] = right_orders[0] = 1
        for k in range(2, n + 2):
            if not (left_active.any() or right_active.any()):
                break
            disagree = (left_active | right_active) & (left != right)
            for x in idx[disagree]:
                bad.add(int(x))
            hit = left_active & (left == 0)
            left_orders[hit] = k - 1
            left_active &= ~hit
            hit = right_active & (right == 0)
            right_orders[hit] = k - 1
            right_active &= ~hit
            left = cells[left, idx]
            right = cells[idx, right]
        return left_orders, right_orders, frozenset(bad)

    def element_order(self, x):
        """Least k >= 1 with x^k == 0 (left-normed, checked against right-normed)."""
        self._check_index(x)
        left_orders, _, bad = self._power_profile
        if x in bad:
            raise LoopError("NOT_POWER_ASSOCIATIVE_AT", f"element {x}")
        return int(left_orders[x])

    def element_orders(self):
        left_orders, _, bad = self._power_profile
        if bad:
            raise LoopError("NOT_POWER_ASSOCIATIVE_AT", f"element {min(bad)}")
        return left_orders

    def order_statistic(self):
        return OrderStatistic(Counter(int(k) for k in self.element_orders()))

    def power(self, x, k):
        """x^k with integer k; negative exponents go through the inverse."""
        self._check_index(x)
        if k == 0:
            return 0
        if k < 0:
            return self.power(self.inverse(x), -k)
        acc = x
        for _ in range(k - 1):
            acc = self.mul(acc, x)
        return acc

    # -- identities --------------------------------------------------------

    @cached_property
    def _law_cache(self):
        return {}

    def satisfies(self, law):
        """Exhaustively check one of the supported identities on all triples."""
        if not isinstance(law, Law):
            raise LoopError("OUT_OF_RANGE", f"unknown law {law!r}")
        cache = self._law_cache
        if law not in cache:
            cache[law] = self._check_law(law)
        return cache[law]

    def _check_law(self, law):
        if law is Law.POWER_ASSOCIATIVE_WITNESS:
            return not self._power_profile[2]
        T = self._cells
        n = self.n
        X = np.arange(n)[:, None, None]
        Y = np.arange(n)[None, :, None]
        Z = np.arange(n)[None, None, :]
        if law is Law.ASSOCIATIVE:
            return bool((T[T[X, Y], Z] == T[X, T[Y, Z]]).all())
        if law is Law.M1:
            return bool((T[T[T[X, Y], X], Z] == T[X, T[Y, T[X, Z]]]).all())
        if law is Law.M2:
            return bool((T[X, T[Y, T[Z, Y]]] == T[T[T[X, Y], Z], Y]).all())
        if law is Law.M3:
            return bool((T[T[X, Y], T[Z, X]] == T[X, T[T[Y, Z], X]]).all())
        if law is Law.M4:
            return bool((T[T[X, Y], T[Z, X]] == T[T[X, T[Y, Z]], X]).all())
        if law is Law.EXTRA:
            return bool((T[X, T[Y, T[Z, X]]] == T[T[T[X, Y], Z], X]).all())
        raise LoopError("OUT_OF_RANGE", f"unknown law {law!r}")

    def is_group(self):
        return self.satisfies(Law.ASSOCIATIVE)

    def is_moufang(self):
        return self.satisfies(Law.M1)

    def is_abelian(self):
        return bool((self._cells == self._cells.T).all())

    def has_nonassociative_triple(self):
        """Cheap associativity refuter: strided sample first, full scan fallback."""
        T = self._cells
        n = self.n
        step = max(1, n // 7)
        sample = np.arange(0, n, step)
        X = sample[:, None, None]
        Y = sample[None, :, None]
        Z = sample[None, None, :]
        if (T[T[X, Y], Z] != T[X, T[Y, Z]]).any():
            return True
        return not self.satisfies(Law.ASSOCIATIVE)

    # -- associator, nucleus, center ---------------------------------------

    def associator(self, x, y, z):
        """The unique a with (xy)z == (x(yz)) * a."""
        self._check_index(x, y, z)
        lhs = self.mul(self.mul(x, y), z)
        rhs = self.mul(x, self.mul(y, z))
        return self.ldiv(rhs, lhs)

    def associator_values(self):
        """Set of all associator values [x,y,z] over the full cube."""
        T = self._cells.astype(np.int64)
        n = self.n
        X = np.arange(n)[:, None, None]
        Y = np.arange(n)[None, :, None]
        Z = np.arange(n)[None, None, :]
        lhs = T[T[X, Y], Z]
        rhs = T[X, T[Y, Z]]
        assoc = self._row_inverse.astype(np.int64)[rhs, lhs]
        return sorted(int(v) for v in np.unique(assoc))

    def _associates_in_all_slots(self, x):
        T = self._cells
        # slot 1: (x y) z == x (y z)
        if not (T[T[x], :] == T[x][T]).all():
            return False
        # slot 2: (y x) z == y (x z)
        if not (T[T[:, x], :] == T[:, T[x]]).all():
            return False
        # slot 3: (y z) x == y (z x)
        if not (T[T, x] == T[:, T[:, x]]).all():
            return False
        return True

    @cached_property
    def _nucleus(self):
        return tuple(x for x in range(self.n) if self._associates_in_all_slots(x))

    def nucleus(self):
        """Elements associating with every pair in all three slots."""
        return self._nucleus

    @cached_property
    def _center(self):
        T = self._cells
        return tuple(x for x in self._nucleus if (T[x] == T[:, x]).all())

    def center(self):
        return self._center

    def nucleus_and_center(self):
        return self._nucleus, self._center

    # -- relabeling ---------------------------------------------------------

    def relabel(self, perm, label=None):
        """Isomorphic copy under the bijection perm, which must fix 0."""
        p = np.asarray(perm, dtype=np.int64)
        if p.shape != (self.n,) or not (np.sort(p) == np.arange(self.n)).all():
            raise LoopError("NOT_BIJECTION", "perm is not a bijection on 0..n-1")
        if p[0] != 0:
            raise LoopError("IDENTITY_MOVED", "perm must fix the neutral element 0")
        old = self._cells.astype(np.int64)
        new = np.empty_like(old)
        new[p[:, None], p[None, :]] = p[old]
        return LoopTable(new, label=label)


class OrderStatistic:
    """Histogram of element orders, plus the loop exponent (lcm of orders)."""

    def __init__(self, counts):
        self.counts = dict(sorted(counts.items()))

    @property
    def exponent(self):
        return math.lcm(*self.counts.keys())

    def as_tuple(self):
        return tuple(sorted(self.counts.items()))

    def __eq__(self, other):
        if isinstance(other, OrderStatistic):
            return self.counts == other.counts
        if isinstance(other, dict):
            return self.counts == other
        return NotImplemented

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        body = " ".join(f"{k}:{v}" for k, v in self.counts.items())
        return f"<OrderStatistic {body}>"


def direct_product(a, b, label=None):
    """Componentwise product on pairs, serialized in row-major pair order."""
    na, nb = a.n, b.n
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    prod_a = a.cells.astype(np.int64)[np.ix_(ia, ia)]
    prod_b = b.cells.astype(np.int64)[np.ix_(ib, ib)]
    cells = prod_a * nb + prod_b
    if label is None and a.label and b.label:
        label = f"{a.label}x{b.label}"
    return LoopTable(cells, label=label)


def table_distance(a, b):
    """Number of cells where the two tables differ."""
    if a.n != b.n:
        raise LoopError("SIZE_MISMATCH", f"orders {a.n} and {b.n}")
    return int((a.cells != b.cells).sum())
