#!/usr/bin/env python3
"""Regenerate the bundled nonabelian group tables under src/moufang/data/groups/.

Most groups come from the family constructors in moufang.groups; this script
produces the rest:

  * orders 16 and 32: the closure of the cyclic group under the quarter-table
    modifications reaches every group of that order, so we take the
    bootstrap output and drop the family-constructible types,
  * order 18: the generalized dihedral group over C3 x C3,
  * order 24: C3 extended by the order-8 dihedral group acting through its
    Klein quotient,
  * order 27: the Heisenberg group over the field with three elements.

Output files are deterministic; rerunning the script must reproduce the
committed bundle bit for bit.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from moufang.files import format_table
from moufang.groups import _FAMILY_NONABELIAN, builtin_group, cyclic, dihedral
from moufang.iso import are_isomorphic
from moufang.search import bootstrap_groups
from moufang.table import LoopTable

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "moufang" / "data" / "groups"


def generalized_dihedral_c3c3():
    def idx(a, b, s):
        return s * 9 + a * 3 + b

    cells = [[0] * 18 for _ in range(18)]
    for a1 in range(3):
        for b1 in range(3):
            for s1 in range(2):
                for a2 in range(3):
                    for b2 in range(3):
                        for s2 in range(2):
                            sign = -1 if s1 else 1
                            cells[idx(a1, b1, s1)][idx(a2, b2, s2)] = idx(
                                (a1 + sign * a2) % 3, (b1 + sign * b2) % 3, (s1 + s2) % 2
                            )
    return LoopTable(cells)


def c3_by_d8_klein_kernel():
    d8 = dihedral(8)
    # elements of D8 acting trivially on C3: the Klein subgroup {1, r^2, s, s r^2}
    kernel = {0, 2, 4, 6}

    def idx(c, d):
        return d * 3 + c

    cells = [[0] * 24 for _ in range(24)]
    for c1 in range(3):
        for d1 in range(8):
            for c2 in range(3):
                for d2 in range(8):
                    sign = 1 if d1 in kernel else -1
                    cells[idx(c1, d1)][idx(c2, d2)] = idx((c1 + sign * c2) % 3, d8.mul(d1, d2))
    # renumber so the identity (c=0, d=0) sits at index 0: it already does
    return LoopTable(cells)


def heisenberg3():
    def idx(a, b, c):
        return a * 9 + b * 3 + c

    cells = [[0] * 27 for _ in range(27)]
    for a1 in range(3):
        for b1 in range(3):
            for c1 in range(3):
                for a2 in range(3):
                    for b2 in range(3):
                        for c2 in range(3):
                            cells[idx(a1, b1, c1)][idx(a2, b2, c2)] = idx(
                                (a1 + a2) % 3, (b1 + b2) % 3, (c1 + c2 + a1 * b2) % 3
                            )
    return LoopTable(cells)


def bundle_for_power_of_two(order):
    family = [builtin_group(ref) for ref in _FAMILY_NONABELIAN[order]]
    closure = bootstrap_groups(order, cyclic(order))
    extras = []
    for g in closure:
        if g.is_abelian():
            continue
        if any(are_isomorphic(g, f) is not None for f in family):
            continue
        if any(are_isomorphic(g, e) is not None for e in extras):
            continue
        extras.append(g)
    return extras


def verify_distinct(order, extras):
    family = [builtin_group(ref) for ref in _FAMILY_NONABELIAN.get(order, [])]
    everything = family + extras
    for i, a in enumerate(everything):
        for b in everything[i + 1 :]:
            assert are_isomorphic(a, b) is None, f"duplicate group at order {order}"
    return len(everything)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    plan = {
        16: bundle_for_power_of_two(16),
        18: [generalized_dihedral_c3c3()],
        24: [c3_by_d8_klein_kernel()],
        27: [heisenberg3()],
        32: bundle_for_power_of_two(32),
    }
    expected_totals = {16: 9, 18: 3, 24: 12, 27: 2, 32: 44}
    for order, extras in sorted(plan.items()):
        total = verify_distinct(order, extras)
        assert total == expected_totals[order], (order, total)
        for i, table in enumerate(extras, start=1):
            named = LoopTable(table.cells, label=f"NA{order}_{i}")
            path = OUT / f"na{order}_{i}.tbl"
            path.write_text(format_table(named))
            print("wrote", path.relative_to(OUT.parents[2]))
    print("bundle complete")


if __name__ == "__main__":
    main()
