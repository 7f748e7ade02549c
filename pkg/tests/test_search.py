import random

import pytest

from moufang import search as S
from moufang.constructions import chein_double
from moufang.groups import builtin_group, cyclic
from moufang.iso import are_isomorphic
from moufang.table import Law, LoopError

from util import dihedral_table, random_identity_fixing_perm


def chein_seed(ref):
    descriptor = S.SeedDescriptor("chein", (ref,))
    return descriptor, S.resolve_seed(descriptor)


def test_explore_order_12():
    catalog = S.explore([chein_seed("D6")])
    assert [e.name for e in catalog.entries] == ["12:1"]
    entry = catalog.entries[0]
    assert entry.nucleus_size == 1
    assert entry.assoc_name == "C3"
    assert not entry.extra
    assert entry.explored


def test_explore_order_16_class():
    catalog = S.explore([chein_seed("D8"), chein_seed("Dic8")])
    entries = catalog.entries
    assert len(entries) == 5
    assert all(e.nucleus_size == 2 and e.assoc_name == "C2" and e.extra for e in entries)
    roots = {catalog.components.find(e.component) for e in entries}
    assert len(roots) == 1  # both seeds land in the same class


def test_explore_rejects_non_moufang_seed():
    left_cells = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 3, 4, 0, 1],
        [3, 4, 1, 2, 0],
        [4, 2, 0, 1, 3],
    ]
    from moufang.table import LoopTable

    table = LoopTable(left_cells)
    assert not table.satisfies(Law.M1)
    with pytest.raises(LoopError) as err:
        S.explore([(S.SeedDescriptor("raw", ("x",)), table)])
    assert err.value.code == "SEED_NOT_MOUFANG"


def test_closure_idempotence():
    catalog = S.explore([chein_seed("D8"), chein_seed("Dic8")])
    before = [e.name for e in catalog.entries]
    S.explore([(e.recipe.seed, e.table) for e in catalog.entries], catalog=S.Catalog())
    again = S.explore([chein_seed("D8")])
    merged = S.explore([chein_seed("Dic8")], catalog=again)
    assert [e.name for e in merged.entries] == before


def test_seed_symmetry():
    """Each loop of the order-16 class regenerates the whole class."""
    catalog = S.explore([chein_seed("D8")])
    reference = [e.table for e in catalog.entries]
    for entry in catalog.entries[:2]:
        redo = S.explore([(S.SeedDescriptor("raw", ("x",)), entry.table)])
        assert len(redo.entries) == len(reference)
        for e in redo.entries:
            assert any(are_isomorphic(e.table, t) is not None for t in reference)


def test_class_uniformity():
    catalog = S.explore([chein_seed("D8"), chein_seed("Dic8")])
    rows = S.class_report(catalog.entries, catalog.components)
    assert all(r["uniform"] for r in rows)


def test_order_54_exception_pair():
    """Two seeds with identical invariants still give two distinct classes."""
    catalog = S.search_orders([54])
    rows = S.class_report(catalog.entries, catalog.components)
    assert len(rows) == 2
    assert all(r["size"] == 1 for r in rows)
    assert {(r["nucleus"], r["assoc"], r["extra"]) for r in rows} == {(3, "C3", False)}
    a, b = catalog.entries
    assert are_isomorphic(a.table, b.table) is None


def test_replay_zero_steps():
    descriptor, table = chein_seed("D6")
    assert S.replay(S.Recipe(descriptor)) == table


def test_replay_reproduces_catalog_tables():
    catalog = S.explore([chein_seed("D8"), chein_seed("Dic8")])
    for entry in catalog.entries:
        assert S.replay(entry.recipe) == entry.table


def test_recipe_roundtrip_strings():
    catalog = S.explore([chein_seed("D8")])
    deep = max(catalog.entries, key=lambda e: len(e.recipe.steps))
    assert deep.recipe.steps
    for step in deep.recipe.steps:
        assert S.parse_step(S.step_to_str(step)) == step
    assert S.parse_seed(S.seed_to_str(deep.recipe.seed)) == deep.recipe.seed


def test_product_seed_resolution():
    small = S.explore([chein_seed("D6")])
    descriptor = S.SeedDescriptor("product", ("L(12,1)", "C3"))
    table = S.resolve_seed(descriptor, small.lookup)
    assert table.n == 36
    with pytest.raises(LoopError) as err:
        S.resolve_seed(descriptor, lambda key: None)
    assert err.value.code == "UNRESOLVABLE_SEED"


def test_bootstrap_groups_errors():
    with pytest.raises(LoopError) as err:
        S.bootstrap_groups(12, cyclic(12))
    assert err.value.code == "NOT_POWER_OF_TWO"
    with pytest.raises(LoopError) as err:
        S.bootstrap_groups(64, cyclic(64))
    assert err.value.code == "NOT_POWER_OF_TWO"
    with pytest.raises(LoopError) as err:
        S.bootstrap_groups(8, cyclic(4))
    assert err.value.code == "SIZE_MISMATCH"
    with pytest.raises(LoopError) as err:
        S.bootstrap_groups(12, chein_double(builtin_group("D6")))
    assert err.value.code == "NOT_POWER_OF_TWO"


def test_bootstrap_groups_order_8():
    tables = S.bootstrap_groups(8, cyclic(8))
    assert len(tables) == 5
    assert sum(not t.is_abelian() for t in tables) == 2
    assert all(t.satisfies(Law.ASSOCIATIVE) for t in tables)


def test_jobs_determinism():
    serial = S.explore([chein_seed("D8")], jobs=1)
    threaded = S.explore([chein_seed("D8")], jobs=4)
    assert [e.name for e in serial.entries] == [e.name for e in threaded.entries]
    assert all(a.table == b.table for a, b in zip(serial.entries, threaded.entries))
    assert [e.recipe for e in serial.entries] == [e.recipe for e in threaded.entries]


def test_checkpoint_and_resume(tmp_path):
    from moufang import files

    path = tmp_path / "cat.txt"
    calls = []

    def checkpoint(cat):
        calls.append(len(cat.entries))
        files.write_catalog(cat.resolved_entries(), path)

    catalog = S.explore([chein_seed("D8"), chein_seed("Dic8")], checkpoint=checkpoint)
    assert len(calls) == sum(e.explored for e in catalog.entries)
    loaded = files.read_catalog(path)
    resumed = S.Catalog.from_entries(loaded)
    S.explore([], catalog=resumed)
    assert [e.name for e in resumed.entries] == [e.name for e in catalog.entries]
    assert all(a.table == b.table for a, b in zip(resumed.entries, catalog.entries))


def test_mixed_seed_kinds_report_names():
    catalog = S.search_orders([12, 16, 20, 36])
    rows = S.class_report(catalog.entries, catalog.components)
    names = [r["name"] for r in rows if r["order"] == 36]
    assert names == ["36:01", "36:02", "36:03", "36:x1"]
