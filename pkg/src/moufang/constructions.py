"""Chein doubling and the cyclic/dihedral quarter-table modifications.

Both modifications rewrite x*y = xy * h^eps where eps in {-1, 0, 1} depends
only on the cosets of x and y modulo a normal subloop S.  Exactly one
quarter of the table is touched whenever h != 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .subloop import (
    NormalDecomposition,
    SubloopHandle,
    classify_quotient,
    normal_subloops_for_search,
    quotient,
    subloop_closure,
)
from .table import Law, LoopError, LoopTable


@dataclass(frozen=True)
class SigmaWindow:
    """The integer window M = {-m+1, ..., m} with wrap-around arithmetic."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise LoopError("OUT_OF_WINDOW", f"window needs m >= 1, got {self.m}")

    @property
    def members(self):
        return range(-self.m + 1, self.m + 1)

    def sigma(self, i):
        if i > self.m:
            return 1
        if i < -self.m + 1:
            return -1
        return 0

    def _check(self, *vals):
        for v in vals:
            if not -self.m + 1 <= v <= self.m:
                raise LoopError("OUT_OF_WINDOW", f"{v} outside {{-{self.m - 1}, ..., {self.m}}}")

    def oplus(self, i, j):
        self._check(i, j)
        return i + j - 2 * self.m * self.sigma(i + j)

    def ominus(self, i, j):
        self._check(i, j)
        return i - j - 2 * self.m * self.sigma(i - j)

    def wrap(self, k):
        """Residue of k in M."""
        r = k % (2 * self.m)
        return r if r <= self.m else r - 2 * self.m


def chein_double(g, require_group=True, label=None):
    """Double a group G to the Moufang loop of order 2|G| on G plus Gu.

    Products: g*h = gh, g*(hu) = (hg)u, (gu)*h = (g h^-1)u and
    (gu)*(hu) = h^-1 g.  The result is nonassociative iff G is nonabelian.
    """
    if require_group and not g.satisfies(Law.ASSOCIATIVE):
        raise LoopError("NOT_A_GROUP", "doubling is defined over group tables")
    n = g.n
    T = g.cells.astype(np.int64)
    inv = np.fromiter((g.inverse(x) for x in range(n)), dtype=np.int64)
    out = np.empty((2 * n, 2 * n), dtype=np.int64)
    out[:n, :n] = T
    out[:n, n:] = T.T + n                    # g * (hu) = (hg)u
    out[n:, :n] = T[:, inv] + n              # (gu) * h = (g h^-1)u
    out[n:, n:] = T[inv, :].T                # (gu) * (hu) = h^-1 g
    if label is None and g.label:
        label = f"M({g.label},2)"
    return LoopTable(out, label=label)


@dataclass(frozen=True)
class CyclicParams:
    decomposition: NormalDecomposition
    alpha: int          # generator block id of the cyclic quotient
    h: int              # element of Z(L) intersect S

    @property
    def subloop_elements(self):
        return self.decomposition.subloop.elements


@dataclass(frozen=True)
class DihedralParams:
    decomposition: NormalDecomposition
    beta: int           # involution block id
    gamma: int          # involution block id, beta*gamma of order 2m
    h: int              # element of N(L) intersect Z(G0) intersect S

    @property
    def subloop_elements(self):
        return self.decomposition.subloop.elements


def _block_logs(qt, alpha):
    """Map block id -> exponent k with block == alpha^k, for cyclic <alpha>."""
    logs = {0: 0}
    cur = alpha
    k = 1
    while cur != 0:
        logs[cur] = k
        cur = qt.mul(cur, alpha)
        k += 1
    return logs


def _apply_exponents(loop, h, eps):
    """Cells x*y = (xy) * h^eps[x, y] with eps in {-1, 0, 1}."""
    T = loop.cells.astype(np.int64)
    mul_h = T[:, h]
    mul_hinv = T[:, loop.inverse(h)]
    out = T.copy()
    out[eps == 1] = mul_h[T[eps == 1]]
    out[eps == -1] = mul_hinv[T[eps == -1]]
    return out


def cyclic_modify(loop, params, label=None):
    """Quarter-table rewrite along a cyclic quotient of even order 2m."""
    dec = params.decomposition
    if dec.parent != loop:
        raise LoopError("BAD_PARAMS", "decomposition belongs to a different table")
    qt = dec.quotient
    if qt.n % 2 != 0 or qt.element_order(params.alpha) != qt.n:
        raise LoopError("BAD_PARAMS", "quotient is not cyclic of even order with this generator")
    if params.h not in set(loop.center()) or params.h not in set(dec.subloop.elements):
        raise LoopError("BAD_PARAMS", "h must lie in the center and in S")
    m = qt.n // 2
    w = SigmaWindow(m)
    logs = _block_logs(qt, params.alpha)
    exps = np.fromiter((w.wrap(logs[b]) for b in dec.coset_of), dtype=np.int64)
    total = exps[:, None] + exps[None, :]
    eps = np.where(total > m, 1, np.where(total < -m + 1, -1, 0))
    return LoopTable(_apply_exponents(loop, params.h, eps), label=label)


def dihedral_modify(loop, params, label=None):
    """Quarter-table rewrite along a dihedral quotient of order 4m.

    Row cosets are alpha^i and beta*alpha^i, column cosets alpha^j and
    alpha^j*gamma; the sign of the exponent flips for columns outside the
    preimage G0 of <beta*gamma>.
    """
    dec = params.decomposition
    if dec.parent != loop:
        raise LoopError("BAD_PARAMS", "decomposition belongs to a different table")
    qt = dec.quotient
    if qt.n % 4 != 0:
        raise LoopError("BAD_PARAMS", "dihedral quotients have order 4m")
    orders = qt.element_orders()
    if orders[params.beta] != 2 or orders[params.gamma] != 2:
        raise LoopError("BAD_PARAMS", "beta and gamma must be involutions")
    rho = qt.mul(params.beta, params.gamma)
    m = qt.n // 4
    if qt.element_order(rho) != 2 * m:
        raise LoopError("BAD_PARAMS", "beta*gamma must have order half the quotient")
    logs = _block_logs(qt, rho)
    if params.beta in logs:
        raise LoopError("BAD_PARAMS", "beta lies in <beta*gamma>")
    w = SigmaWindow(m)
    g0_elements = sorted(
        e for b in logs for e in dec.cosets[b]
    )
    h = params.h
    g0 = SubloopHandle(loop, tuple(g0_elements))
    sub, embed = g0.restricted()
    z_g0 = {embed[i] for i in sub.center()}
    if h not in set(loop.nucleus()) or h not in z_g0 or h not in set(dec.subloop.elements):
        raise LoopError("BAD_PARAMS", "h must lie in N(L), Z(G0) and S")
    if not _inverted_outside(loop, h, set(g0_elements)):
        raise LoopError("BAD_PARAMS", "conjugation by elements outside G0 must invert h")

    row_idx = np.empty(loop.n, dtype=np.int64)
    col_idx = np.empty(loop.n, dtype=np.int64)
    flip = np.empty(loop.n, dtype=np.int64)
    for b, block in enumerate(dec.cosets):
        if b in logs:
            i = w.wrap(logs[b])
            j = i
            f = 1
        else:
            i = w.wrap(logs[qt.mul(params.beta, b)])
            j = w.wrap(logs[qt.mul(b, params.gamma)])
            f = -1
        for e in block:
            row_idx[e] = i
            col_idx[e] = j
            flip[e] = f
    total = row_idx[:, None] + col_idx[None, :]
    eps = np.where(total > m, 1, np.where(total < -m + 1, -1, 0)) * flip[None, :]
    return LoopTable(_apply_exponents(loop, h, eps), label=label)


def _inverted_outside(loop, h, g0_elements):
    """True when u h u^-1 == h^-1 for every u outside G0.

    The quarter-block pattern of the dihedral rewrite is compatible with
    the reflection cosets only under this conjugation behaviour; dropping
    it breaks associativity already for groups.  It is automatic whenever
    h is an involution in the center.
    """
    hinv = loop.inverse(h)
    rows = loop.rows
    for u in range(loop.n):
        if u in g0_elements:
            continue
        if rows[rows[u][h]][loop.inverse(u)] != hinv:
            return False
    return True


def modify(loop, params, label=None):
    if isinstance(params, CyclicParams):
        return cyclic_modify(loop, params, label=label)
    if isinstance(params, DihedralParams):
        return dihedral_modify(loop, params, label=label)
    raise LoopError("BAD_PARAMS", f"unsupported parameter bundle {type(params).__name__}")


def _is_two_loop(loop):
    n = loop.n
    if n & (n - 1):
        return False
    return all(k & (k - 1) == 0 for k in loop.order_statistic().counts)


def enumerate_modifications(loop, include_trivial=False):
    """All admissible (params, modified table) pairs for one loop.

    Covers every normal subloop from normal_subloops_for_search.  Cyclic
    quotients contribute one generator per quotient when the loop is a
    2-loop with A(L) inside Z(L) (modifying by a power of the generator is
    isomorphic to modifying by a power of h), and every generator
    otherwise.  Dihedral quotients contribute every involution pair.
    Results come in a canonical order: by S, then generator ids, then h.
    """
    center = set(loop.center())
    nucleus = set(loop.nucleus())
    reduce_generators = _is_two_loop(loop)
    if reduce_generators:
        aset = set(subloop_closure(loop, loop.associator_values()).elements)
        reduce_generators = aset <= center
    out = []
    for dec in normal_subloops_for_search(loop):
        shape = classify_quotient(dec.quotient)
        s_set = set(dec.subloop.elements)
        if shape.kind == "cyclic":
            hs = sorted(center & s_set - {0})
            if not include_trivial and not hs:
                continue
            gens = shape.generators[:1] if reduce_generators else shape.generators
            for alpha in gens:
                for h in ([0] if include_trivial else []) + hs:
                    params = CyclicParams(dec, alpha, h)
                    out.append((params, cyclic_modify(loop, params)))
        elif shape.kind == "dihedral":
            z_g0_cache = {}
            for beta, gamma in shape.pairs:
                rho = dec.quotient.mul(beta, gamma)
                logs = _block_logs(dec.quotient, rho)
                key = frozenset(logs)
                if key not in z_g0_cache:
                    g0_elements = frozenset(e for b in logs for e in dec.cosets[b])
                    sub, embed = SubloopHandle(loop, tuple(sorted(g0_elements))).restricted()
                    z_g0 = {embed[i] for i in sub.center()}
                    admissible = {
                        h
                        for h in nucleus & z_g0 & s_set - {0}
                        if _inverted_outside(loop, h, g0_elements)
                    }
                    z_g0_cache[key] = admissible
                hs = sorted(z_g0_cache[key])
                for h in ([0] if include_trivial else []) + hs:
                    params = DihedralParams(dec, beta, gamma, h)
                    out.append((params, dihedral_modify(loop, params)))
    return out
