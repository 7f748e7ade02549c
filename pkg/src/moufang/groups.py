"""Builtin group constructors and the bundled nonabelian group tables.

Family constructors cover cyclic, abelian, dihedral, dicyclic,
semidihedral, modular-maximal-cyclic and metacyclic groups plus A4, S4,
SL(2,3) and direct products.  Groups outside those families (a handful at
orders 16, 18, 24, 27 and most of order 32) ship as table files under
data/groups/, generated offline by tools/generate_group_bundle.py.

Naming is order-based throughout: D8 is the dihedral group of order 8,
Dic12 the dicyclic group of order 12, M16 the modular group of order 16.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from itertools import permutations

from .table import Law, LoopError, LoopTable, direct_product

# Table-file parsing lives in files.py; imported lazily to avoid a cycle.


def _finish(cells, label):
    table = LoopTable(cells, label=label)
    if not table.satisfies(Law.ASSOCIATIVE):
        raise LoopError("BAD_FAMILY_PARAMS", f"{label}: constructor produced a nonassociative table")
    return table


def cyclic(k):
    if k < 1:
        raise LoopError("BAD_FAMILY_PARAMS", f"cyclic order {k}")
    return _finish([[(i + j) % k for j in range(k)] for i in range(k)], f"C{k}")


def abelian(factors):
    if not factors:
        raise LoopError("BAD_FAMILY_PARAMS", "empty abelian factor list")
    table = cyclic(factors[0])
    for k in factors[1:]:
        table = direct_product(table, cyclic(k))
    label = "x".join(f"C{k}" for k in factors)
    return _finish(table.cells, label)


def dihedral(order):
    """Dihedral group of the given even order: rotations first, then
    reflections; reflection s satisfies s r s = r^-1."""
    if order < 2 or order % 2:
        raise LoopError("BAD_FAMILY_PARAMS", f"dihedral order {order}")
    k = order // 2
    t = [[0] * order for _ in range(order)]
    for i in range(k):
        for j in range(k):
            t[i][j] = (i + j) % k
            t[i][j + k] = k + (j - i) % k
            t[i + k][j] = k + (i + j) % k
            t[i + k][j + k] = (j - i) % k
    return _finish(t, f"D{order}")


def dicyclic(order):
    """Dicyclic group: a^(2k) = 1, b^2 = a^k, b a b^-1 = a^-1."""
    if order < 8 or order % 4:
        raise LoopError("BAD_FAMILY_PARAMS", f"dicyclic order {order}")
    k = order // 4
    two_k = 2 * k
    t = [[0] * order for _ in range(order)]
    for i in range(two_k):
        for j in range(two_k):
            t[i][j] = (i + j) % two_k
            t[i][j + two_k] = two_k + (i + j) % two_k
            t[i + two_k][j] = two_k + (i - j) % two_k
            t[i + two_k][j + two_k] = (i - j + k) % two_k
    return _finish(t, f"Dic{order}")


def _split_extension_of_cyclic(order, twist, label):
    """C_(order/2) extended by an involution b with b a^j b = a^(twist*j)."""
    k = order // 2
    t = [[0] * order for _ in range(order)]
    for i in range(k):
        for j in range(k):
            t[i][j] = (i + j) % k
            t[i][j + k] = k + (i + j) % k
            t[i + k][j] = k + (i + j * twist) % k
            t[i + k][j + k] = (i + j * twist) % k
    return _finish(t, label)


def semidihedral(order):
    if order < 16 or order & (order - 1):
        raise LoopError("BAD_FAMILY_PARAMS", f"semidihedral order {order}")
    return _split_extension_of_cyclic(order, order // 4 - 1, f"SD{order}")


def modular_maximal_cyclic(order):
    if order < 16 or order & (order - 1):
        raise LoopError("BAD_FAMILY_PARAMS", f"modular-maximal-cyclic order {order}")
    return _split_extension_of_cyclic(order, order // 4 + 1, f"M{order}")


def metacyclic(a, b, t):
    """C_a semidirect C_b with the C_b generator acting as x -> x^t."""
    if a < 2 or b < 2 or not 0 < t < a or pow(t, b, a) != 1:
        raise LoopError("BAD_FAMILY_PARAMS", f"metacyclic({a},{b},{t})")
    cells = [[0] * (a * b) for _ in range(a * b)]
    for j1 in range(b):
        for i1 in range(a):
            for j2 in range(b):
                for i2 in range(a):
                    i = (i1 + i2 * pow(t, j1, a)) % a
                    j = (j1 + j2) % b
                    cells[j1 * a + i1][j2 * a + i2] = j * a + i
    return _finish(cells, f"Meta({a},{b},{t})")


def _from_permutations(perms, label):
    elems = sorted(perms)
    if elems[0] != tuple(range(len(elems[0]))):
        raise LoopError("BAD_FAMILY_PARAMS", f"{label}: identity not first")
    pos = {p: i for i, p in enumerate(elems)}
    cells = [
        [pos[tuple(p[q[i]] for i in range(len(q)))] for q in elems] for p in elems
    ]
    return _finish(cells, label)


def alternating4():
    perms = [p for p in permutations(range(4)) if _parity(p) == 0]
    return _from_permutations(perms, "A4")


def symmetric4():
    return _from_permutations(list(permutations(range(4))), "S4")


def _parity(p):
    seen = [False] * len(p)
    parity = 0
    for i in range(len(p)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        parity ^= (length - 1) & 1
    return parity


def sl23():
    """SL(2,3): 2x2 matrices of determinant 1 over the field with 3 elements."""
    mats = [
        (a, b, c, d)
        for a in range(3)
        for b in range(3)
        for c in range(3)
        for d in range(3)
        if (a * d - b * c) % 3 == 1
    ]
    mats.sort(key=lambda m: (m != (1, 0, 0, 1), m))
    pos = {m: i for i, m in enumerate(mats)}
    cells = [
        [
            pos[
                (
                    (m[0] * k[0] + m[1] * k[2]) % 3,
                    (m[0] * k[1] + m[1] * k[3]) % 3,
                    (m[2] * k[0] + m[3] * k[2]) % 3,
                    (m[2] * k[1] + m[3] * k[3]) % 3,
                )
            ]
            for k in mats
        ]
        for m in mats
    ]
    return _finish(cells, "SL23")


_ATOM = re.compile(
    r"^(C(?P<cyc>\d+)|D(?P<dih>\d+)|Dic(?P<dic>\d+)|SD(?P<sd>\d+)|M(?P<mod>\d+)"
    r"|Meta\((?P<ma>\d+),(?P<mb>\d+),(?P<mt>\d+)\)|A4|S4|SL23"
    r"|NA\((?P<nan>\d+),(?P<nam>\d+)\))$"
)


def _split_product(ref):
    """Split on 'x' separators that sit outside parentheses."""
    parts = []
    depth = 0
    cur = []
    for ch in ref:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "x" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def builtin_group(ref):
    """Resolve a group reference string to a verified group table.

    Grammar: C<k>, D<order>, Dic<order>, SD<order>, M<order>,
    Meta(a,b,t), A4, S4, SL23, NA(order,index) for bundled nonabelian
    groups, and 'x'-separated direct products of any of these.
    """
    parts = _split_product(ref.strip())
    tables = [_builtin_atom(p) for p in parts]
    out = tables[0]
    for t in tables[1:]:
        out = direct_product(out, t)
    if len(tables) > 1:
        out = LoopTable(out.cells, label=ref.strip())
    return out


def _builtin_atom(ref):
    m = _ATOM.match(ref.strip())
    if not m:
        raise LoopError("BAD_FAMILY_PARAMS", f"unknown group reference {ref!r}")
    d = m.groupdict()
    if d["cyc"]:
        return cyclic(int(d["cyc"]))
    if d["dih"]:
        return dihedral(int(d["dih"]))
    if d["dic"]:
        return dicyclic(int(d["dic"]))
    if d["sd"]:
        return semidihedral(int(d["sd"]))
    if d["mod"]:
        return modular_maximal_cyclic(int(d["mod"]))
    if d["ma"]:
        return metacyclic(int(d["ma"]), int(d["mb"]), int(d["mt"]))
    if d["nan"]:
        return _nonabelian(int(d["nan"]), int(d["nam"]))
    if ref == "A4":
        return alternating4()
    if ref == "S4":
        return symmetric4()
    return sl23()


# Family-constructible nonabelian groups per order; the rest are bundled.
_FAMILY_NONABELIAN = {
    6: ["D6"],
    8: ["D8", "Dic8"],
    10: ["D10"],
    12: ["D12", "Dic12", "A4"],
    14: ["D14"],
    16: ["D16", "Dic16", "SD16", "M16", "D8xC2", "Dic8xC2"],
    18: ["D18", "D6xC3"],
    20: ["D20", "Dic20", "Meta(5,4,2)"],
    21: ["Meta(7,3,2)"],
    22: ["D22"],
    24: [
        "Meta(3,8,2)",
        "SL23",
        "Dic24",
        "D6xC4",
        "D24",
        "Dic12xC2",
        "D8xC3",
        "Dic8xC3",
        "S4",
        "A4xC2",
        "D12xC2",
    ],
    26: ["D26"],
    27: ["Meta(9,3,4)"],
    28: ["D28", "Dic28"],
    30: ["D30", "D10xC3", "D6xC5"],
    32: ["D32", "Dic32", "SD32", "M32"],
}


@lru_cache(maxsize=None)
def _bundled_tables(order):
    from .files import parse_table_text

    root = resources.files("moufang").joinpath("data/groups")
    out = []
    names = sorted(
        (p.name for p in root.iterdir() if p.name.startswith(f"na{order}_")),
        key=lambda s: int(s.split("_")[1].split(".")[0]),
    )
    for name in names:
        text = root.joinpath(name).read_text()
        out.append(parse_table_text(text, source=name))
    return tuple(out)


@lru_cache(maxsize=None)
def nonabelian_groups(order):
    """Every nonabelian group of the given order, in a fixed repo order:
    family-built groups first, then the bundled table files."""
    tables = [builtin_group(ref) for ref in _FAMILY_NONABELIAN.get(order, [])]
    tables.extend(_bundled_tables(order))
    return tuple(tables)


def _nonabelian(order, index):
    groups = nonabelian_groups(order)
    if not 1 <= index <= len(groups):
        raise LoopError(
            "BAD_FAMILY_PARAMS",
            f"NA({order},{index}): only {len(groups)} groups of order {order}",
        )
    table = groups[index - 1]
    return LoopTable(table.cells, label=f"NA({order},{index})")
