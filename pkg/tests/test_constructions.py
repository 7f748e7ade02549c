import random

import pytest

from moufang.constructions import (
    CyclicParams,
    DihedralParams,
    SigmaWindow,
    chein_double,
    cyclic_modify,
    dihedral_modify,
    enumerate_modifications,
)
from moufang.groups import builtin_group
from moufang.iso import are_isomorphic
from moufang.subloop import (
    SubloopHandle,
    associator_subloop,
    classify_quotient,
    normal_subloops_for_search,
    quotient,
)
from moufang.table import Law, LoopError, table_distance

from util import brute_force_isomorphism, cyclic_table, dihedral_table


def test_sigma_values():
    w = SigmaWindow(4)
    assert w.sigma(0) == 0
    assert w.sigma(5) == 1
    assert w.sigma(-4) == -1
    assert [w.sigma(i) for i in (-3, 4)] == [0, 0]


def test_oplus_ominus():
    w = SigmaWindow(4)
    assert w.oplus(3, 2) == -3
    assert w.oplus(4, 4) == 0
    assert w.oplus(1, -1) == 0
    assert w.ominus(-3, 2) == 3
    with pytest.raises(LoopError) as err:
        w.oplus(5, 0)
    assert err.value.code == "OUT_OF_WINDOW"


def test_sigma_wrap_identities():
    # exhaustive for every window up to m = 8
    for m in range(1, 9):
        w = SigmaWindow(m)
        for i in w.members:
            for j in w.members:
                assert w.sigma(i + j) + w.sigma(w.oplus(i, j) - i) == 0
            assert w.sigma(m + j) + w.sigma(w.oplus(m, j) + m) == 1


def test_chein_double_orders():
    for ref in ("C2", "C4", "D6", "D8"):
        g = builtin_group(ref)
        assert chein_double(g).n == 2 * g.n


def test_chein_double_of_c2():
    doubled = chein_double(cyclic_table(2))
    assert doubled.satisfies(Law.ASSOCIATIVE)
    klein = builtin_group("C2xC2")
    c4 = cyclic_table(4)
    assert brute_force_isomorphism(doubled, klein) is not None
    assert brute_force_isomorphism(doubled, c4) is None


def test_chein_double_nonassociative_iff_nonabelian():
    for ref in ("C8", "C2xC4", "D6", "D8", "Dic8", "A4"):
        g = builtin_group(ref)
        doubled = chein_double(g)
        assert doubled.satisfies(Law.M1)
        assert doubled.satisfies(Law.ASSOCIATIVE) == g.is_abelian()


def test_chein_double_requires_group():
    m12 = chein_double(dihedral_table(6))
    with pytest.raises(LoopError) as err:
        chein_double(m12)
    assert err.value.code == "NOT_A_GROUP"


def cyclic_c4_params():
    c4 = cyclic_table(4)
    dec = quotient(c4, SubloopHandle(c4, (0, 2)))
    alpha = classify_quotient(dec.quotient).generators[0]
    return c4, dec, alpha


def test_cyclic_modify_identity_h():
    c4, dec, alpha = cyclic_c4_params()
    assert cyclic_modify(c4, CyclicParams(dec, alpha, 0)) == c4


def test_cyclic_modify_c4_gives_klein():
    c4, dec, alpha = cyclic_c4_params()
    out = cyclic_modify(c4, CyclicParams(dec, alpha, 2))
    assert out.order_statistic().counts == {1: 1, 2: 3}
    assert table_distance(c4, out) == 4


def test_cyclic_modify_rejects_bad_h():
    m12 = chein_double(dihedral_table(6))
    dec = next(
        d for d in normal_subloops_for_search(m12) if classify_quotient(d.quotient).kind == "cyclic"
    )
    alpha = classify_quotient(dec.quotient).generators[0]
    h_outside = next(x for x in range(1, 12) if x not in dec.subloop.elements)
    with pytest.raises(LoopError) as err:
        cyclic_modify(m12, CyclicParams(dec, alpha, h_outside))
    assert err.value.code == "BAD_PARAMS"


def d8_center_params():
    d8 = dihedral_table(8)
    dec = quotient(d8, SubloopHandle(d8, (0, 2)))
    shape = classify_quotient(dec.quotient)
    assert shape.kind == "dihedral"
    return d8, dec, shape


def test_dihedral_modify_identity_h():
    d8, dec, shape = d8_center_params()
    beta, gamma = shape.pairs[0]
    assert dihedral_modify(d8, DihedralParams(dec, beta, gamma, 0)) == d8


def test_dihedral_modify_d8_quarter():
    d8, dec, shape = d8_center_params()
    for beta, gamma in shape.pairs:
        out = dihedral_modify(d8, DihedralParams(dec, beta, gamma, 2))
        assert out.satisfies(Law.ASSOCIATIVE)
        assert table_distance(d8, out) == 16


def test_dihedral_modify_rejects_non_involution():
    m16 = chein_double(dihedral_table(8))
    dec = next(
        d for d in normal_subloops_for_search(m16) if classify_quotient(d.quotient).kind == "dihedral"
    )
    with pytest.raises(LoopError) as err:
        dihedral_modify(m16, DihedralParams(dec, 0, 1, 0))
    assert err.value.code == "BAD_PARAMS"


def test_enumerate_c4():
    mods = enumerate_modifications(cyclic_table(4))
    assert len(mods) == 1
    assert mods[0][1].order_statistic().counts == {1: 1, 2: 3}


def test_enumerate_m12_fixed_point():
    m12 = chein_double(dihedral_table(6))
    mods = enumerate_modifications(m12)
    for params, out in mods:
        assert are_isomorphic(m12, out) is not None


def sample_modified_pairs(orders=(12, 16, 20, 24), limit=None):
    """(loop, params, output) triples drawn from small classification runs."""
    from moufang.search import search_orders

    catalog = search_orders(list(orders))
    triples = []
    for entry in catalog.entries:
        for params, out in enumerate_modifications(entry.table):
            triples.append((entry.table, params, out))
            if limit and len(triples) >= limit:
                return triples
    return triples


def test_invariance_suite():
    """Moufang-ness, nucleus, associator subloop and the extra flag survive
    every modification, and reapplying the step with the inverse modifier
    restores the original table."""
    triples = sample_modified_pairs(orders=(16, 24), limit=120)
    assert len(triples) >= 60
    for loop, params, out in triples:
        assert out.satisfies(Law.M1)
        assert out.nucleus() == loop.nucleus()
        assert associator_subloop(out).elements == associator_subloop(loop).elements
        assert out.satisfies(Law.EXTRA) == loop.satisfies(Law.EXTRA)
        dec = quotient(out, SubloopHandle(out, params.subloop_elements))
        h_inv = out.inverse(params.h)
        if isinstance(params, CyclicParams):
            back = cyclic_modify(out, CyclicParams(dec, params.alpha, h_inv))
        else:
            back = dihedral_modify(out, DihedralParams(dec, params.beta, params.gamma, h_inv))
        assert back == loop


def test_quarter_distance():
    triples = sample_modified_pairs(orders=(16, 24), limit=80)
    for loop, params, out in triples:
        assert table_distance(loop, out) == loop.n * loop.n // 4


def test_reversibility_via_enumeration():
    triples = sample_modified_pairs(orders=(16,), limit=12)
    for loop, params, out in triples:
        assert any(
            are_isomorphic(loop, back) is not None
            for _, back in enumerate_modifications(out)
        )


def collect_cyclic_cases(orders=(16, 24), limit=25):
    cases = []
    for loop, params, out in sample_modified_pairs(orders=orders):
        if isinstance(params, CyclicParams):
            cases.append((loop, params, out))
            if len(cases) >= limit:
                break
    return cases


def test_star_inverses():
    # inverses move by h exactly on the top coset of the cyclic quotient
    for loop, params, out in collect_cyclic_cases():
        dec = params.decomposition
        qt = dec.quotient
        m = qt.n // 2
        top = {
            b for b in range(qt.n) if qt.element_order(params.alpha) and _log(qt, params.alpha, b) == m
        }
        h_inv = loop.inverse(params.h)
        for x in range(loop.n):
            expected = loop.inverse(x)
            if dec.coset_of[x] in top:
                expected = loop.mul(expected, h_inv)
            assert out.inverse(x) == expected


def _log(qt, alpha, block):
    cur, k = 0, 0
    while cur != block:
        cur = qt.mul(cur, alpha)
        k += 1
        if k > qt.n:
            raise AssertionError("block outside the cyclic quotient")
    return k


def test_star_conjugation():
    # x * y * x^-1 agrees with the unmodified conjugation for all x, y
    for loop, params, out in collect_cyclic_cases(limit=12):
        for x in range(loop.n):
            x_star = out.inverse(x)
            for y in range(loop.n):
                left = out.mul(out.mul(x, y), x_star)
                right = out.mul(x, out.mul(y, x_star))
                plain = loop.mul(loop.mul(x, y), loop.inverse(x))
                assert left == right == plain


def test_star_powers():
    for loop, params, out in collect_cyclic_cases(limit=25):
        dec = params.decomposition
        qt = dec.quotient
        m = qt.n // 2
        h = params.h
        alpha_block = params.alpha
        for x in range(loop.n):
            if dec.coset_of[x] == alpha_block:
                for i in range(-m + 1, 2 * m + 1):
                    star = out.power(x, i)
                    plain = loop.power(x, i)
                    if m < i <= 2 * m:
                        plain = loop.mul(plain, h)
                    assert star == plain
        # x_{2m} = x^{2m} h^j for x in any coset alpha^j
        w_members = range(-m + 1, m + 1)
        logs = {0: 0}
        cur, k = alpha_block, 1
        while cur != 0:
            logs[cur] = k
            cur = qt.mul(cur, alpha_block)
            k += 1
        for x in range(loop.n):
            j = logs[dec.coset_of[x]]
            j = j if j <= m else j - 2 * m
            assert j in w_members
            expected = loop.mul(loop.power(x, 2 * m), loop.power(h, j))
            assert out.power(x, 2 * m) == expected


def test_generator_reduction_matches_full_sweep():
    """On extra 2-loops, one generator per cyclic quotient reaches the same
    isomorphism types as sweeping every generator."""
    m16 = chein_double(dihedral_table(8))
    assert m16.satisfies(Law.EXTRA)
    reduced = enumerate_modifications(m16)
    center = set(m16.center())
    seen_reduced = [out for p, out in reduced if isinstance(p, CyclicParams)]
    full = []
    for dec in normal_subloops_for_search(m16):
        shape = classify_quotient(dec.quotient)
        if shape.kind != "cyclic":
            continue
        hs = sorted(center & set(dec.subloop.elements) - {0})
        for alpha in shape.generators:
            for h in hs:
                full.append(cyclic_modify(m16, CyclicParams(dec, alpha, h)))
    for candidate in full:
        assert any(are_isomorphic(candidate, kept) is not None for kept in seen_reduced)


def test_proposition_power_twist(full_catalog):
    """Modifying by a generator power is isomorphic to powering the modifier:
    G[S, alpha^j, h] and G[S, alpha, h^k] agree up to isomorphism whenever
    jk = 1 mod 2m, on extra 2-loops with the associator subloop central."""
    catalog, _, _ = full_catalog
    checked = 0
    for entry in catalog.entries:
        if entry.order > 32 or not entry.extra or entry.order & (entry.order - 1):
            continue
        loop = entry.table
        aset = set(associator_subloop(loop).elements)
        if not aset <= set(loop.center()):
            continue
        center = set(loop.center())
        for dec in normal_subloops_for_search(loop):
            shape = classify_quotient(dec.quotient)
            if shape.kind != "cyclic" or shape.order < 4:
                continue
            two_m = shape.order
            m = two_m // 2
            base_alpha = shape.generators[0]
            logs = {0: 0}
            cur, k = base_alpha, 1
            while cur != 0:
                logs[cur] = k
                cur = dec.quotient.mul(cur, base_alpha)
                k += 1
            for alpha in shape.generators:
                j = logs[alpha]
                for k_exp in range(-m + 1, m + 1):
                    if (j * k_exp) % two_m != 1 % two_m:
                        continue
                    for h in sorted(center & set(dec.subloop.elements) - {0}):
                        left = cyclic_modify(loop, CyclicParams(dec, alpha, h))
                        h_pow = loop.power(h, k_exp)
                        right = cyclic_modify(loop, CyclicParams(dec, base_alpha, h_pow))
                        assert are_isomorphic(left, right) is not None
                        checked += 1
    assert checked > 0
