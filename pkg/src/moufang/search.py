"""The classification cycle: modification closure from seeds.

Starting from one or more seed loops, repeatedly take the first unexplored
catalog entry, enumerate all of its quarter-table modifications, insert the
outputs that are not isomorphic to anything already stored, and mark the
entry explored.  Because the modifications are reversible, the closure
splits into classes (connected components) whose members all share the
nucleus size, associator-subloop type and the extra-loop flag.

Every entry carries a recipe: the seed descriptor plus the ordered list of
modification steps that rebuilt it.  Replay is deterministic, so a recipe
reconstructs the exact stored table, which keeps catalog files tiny.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from . import groups
from .constructions import (
    CyclicParams,
    DihedralParams,
    cyclic_modify,
    dihedral_modify,
    enumerate_modifications,
)
from .iso import IsoCatalog, discriminator
from .subloop import (
    LoopError,
    SubloopHandle,
    associator_subloop,
    identify_small_group,
    quotient,
)
from .table import Law, LoopTable, direct_product


@dataclass(frozen=True)
class SeedDescriptor:
    kind: str                   # "chein" | "product" | "raw"
    payload: tuple              # chein: (group_ref,); product: (ref_a, ref_b); raw: (path,)


@dataclass(frozen=True)
class ModStep:
    kind: str                   # "cyclic" | "dihedral"
    s_elements: tuple
    generator: tuple            # cyclic: (alpha,); dihedral: (beta, gamma)
    h: int


@dataclass(frozen=True)
class Recipe:
    seed: SeedDescriptor
    steps: tuple = ()


@dataclass
class CatalogEntry:
    order: int
    index: int                  # 1-based within the order
    table: LoopTable
    recipe: Recipe
    nucleus_size: int
    assoc_name: str
    extra: bool
    explored: bool = False
    component: int = 0
    mod_targets: tuple = ()     # catalog ids its one-step modifications hit
    mod_types: int = 0          # ... restricted to cyclic and true-dihedral (4m >= 8)
                                # quotients, the sweep behind the reported statistics

    @property
    def name(self):
        return f"{self.order}:{self.index}"


def seed_to_str(seed):
    return f"{seed.kind} {' '.join(str(p) for p in seed.payload)}"


def parse_seed(text):
    fields = text.split()
    if not fields or fields[0] not in ("chein", "product", "raw"):
        raise LoopError("PARSE_ERROR", f"bad seed {text!r}")
    kind = fields[0]
    payload = tuple(fields[1:])
    expected = {"chein": 1, "product": 2, "raw": 1}[kind]
    if len(payload) != expected:
        raise LoopError("PARSE_ERROR", f"seed {kind} takes {expected} arguments")
    return SeedDescriptor(kind, payload)


def step_to_str(step):
    s = ",".join(str(e) for e in step.s_elements)
    if step.kind == "cyclic":
        return f"cyclic S={s} gen={step.generator[0]} h={step.h}"
    return f"dihedral S={s} beta={step.generator[0]} gamma={step.generator[1]} h={step.h}"


def parse_step(text):
    fields = text.split()
    if not fields or fields[0] not in ("cyclic", "dihedral"):
        raise LoopError("PARSE_ERROR", f"bad modification step {text!r}")
    kv = {}
    for item in fields[1:]:
        k, eq, v = item.partition("=")
        if not eq:
            raise LoopError("PARSE_ERROR", f"bad step field {item!r}")
        kv[k] = v
    try:
        s_elements = tuple(int(x) for x in kv["S"].split(","))
        h = int(kv["h"])
        if fields[0] == "cyclic":
            gen = (int(kv["gen"]),)
        else:
            gen = (int(kv["beta"]), int(kv["gamma"]))
    except (KeyError, ValueError) as exc:
        raise LoopError("PARSE_ERROR", f"bad step {text!r}: {exc}")
    return ModStep(fields[0], s_elements, gen, h)


def params_to_step(params):
    if isinstance(params, CyclicParams):
        return ModStep("cyclic", params.subloop_elements, (params.alpha,), params.h)
    return ModStep("dihedral", params.subloop_elements, (params.beta, params.gamma), params.h)


def resolve_seed(seed, lookup=None):
    """Seed descriptor to table.  lookup resolves (order, index) references
    of the form L(order,index) used by product seeds."""

    def resolve_ref(ref):
        if ref.startswith("L(") and ref.endswith(")"):
            try:
                order, index = (int(v) for v in ref[2:-1].split(","))
            except ValueError:
                raise LoopError("UNRESOLVABLE_SEED", f"bad loop reference {ref!r}")
            table = lookup((order, index)) if lookup else None
            if table is None:
                raise LoopError("UNRESOLVABLE_SEED", f"loop {ref} is not in the catalog context")
            return table
        return groups.builtin_group(ref)

    try:
        if seed.kind == "chein":
            from .constructions import chein_double

            return chein_double(resolve_ref(seed.payload[0]))
        if seed.kind == "product":
            return direct_product(resolve_ref(seed.payload[0]), resolve_ref(seed.payload[1]))
        if seed.kind == "raw":
            from .files import read_table

            return read_table(seed.payload[0])
    except LoopError as exc:
        if exc.code in ("BAD_FAMILY_PARAMS", "PARSE_ERROR", "NOT_LATIN", "NO_IDENTITY"):
            raise LoopError("UNRESOLVABLE_SEED", str(exc))
        raise
    raise LoopError("UNRESOLVABLE_SEED", f"unknown seed kind {seed.kind!r}")


def replay(recipe, lookup=None):
    """Deterministic reconstruction of a recipe; equals the cataloged table."""
    table = resolve_seed(recipe.seed, lookup)
    for step in recipe.steps:
        sub = SubloopHandle(table, tuple(sorted(step.s_elements)))
        dec = quotient(table, sub)
        if step.kind == "cyclic":
            table = cyclic_modify(table, CyclicParams(dec, step.generator[0], step.h))
        elif step.kind == "dihedral":
            table = dihedral_modify(
                table, DihedralParams(dec, step.generator[0], step.generator[1], step.h)
            )
        else:
            raise LoopError("BAD_STEP", f"unknown step kind {step.kind!r}")
    return table


def _entry_invariants(table):
    nuc = len(table.nucleus())
    sub = associator_subloop(table)
    sub_table, _ = sub.restricted()
    if sub_table.satisfies(Law.ASSOCIATIVE):
        try:
            assoc_name = identify_small_group(sub_table)
        except LoopError:
            assoc_name = f"?{sub_table.n}"
    else:
        assoc_name = f"!{sub_table.n}"
    return nuc, assoc_name, table.satisfies(Law.EXTRA)


class _Components:
    """Union-find over class ids; classes merge when one class's output is
    isomorphic to an entry of another."""

    def __init__(self):
        self.parent = []

    def fresh(self):
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


class Catalog:
    """Mutable search state: entries plus per-order isomorphism buckets."""

    def __init__(self):
        self.entries = []
        self._iso = {}
        self._by_iso_id = {}
        self.components = _Components()

    @classmethod
    def from_entries(cls, entries):
        """Rebuild search state from loaded entries (checkpoint resume)."""
        cat = cls()
        max_component = -1
        for e in entries:
            iso = cat._catalog_for(e.order)
            iso_id, was_new = iso.insert_if_new(e.table)
            if not was_new:
                raise LoopError("BAD_STEP", f"catalog entries {e.name} duplicate an earlier one")
            cat._by_iso_id[(e.order, iso_id)] = e
            cat.entries.append(e)
            max_component = max(max_component, e.component)
        cat.components.parent = list(range(max_component + 1))
        return cat

    def resolved_entries(self):
        """Entries with component ids collapsed to their class roots."""
        return [
            replace(e, component=self.components.find(e.component)) for e in self.entries
        ]

    def order_entries(self, order=None):
        if order is None:
            return list(self.entries)
        return [e for e in self.entries if e.order == order]

    def _catalog_for(self, order):
        if order not in self._iso:
            self._iso[order] = IsoCatalog()
        return self._iso[order]

    def lookup(self, key):
        order, index = key
        for e in self.entries:
            if e.order == order and e.index == index:
                return e.table
        return None

    def insert(self, table, recipe, component=None):
        """(entry, was_new); merges components when an existing entry is hit."""
        cat = self._catalog_for(table.n)
        iso_id, was_new = cat.insert_if_new(table)
        if not was_new:
            entry = self._by_iso_id[(table.n, iso_id)]
            if component is not None:
                self.components.union(entry.component, component)
            return entry, False
        index = sum(1 for e in self.entries if e.order == table.n) + 1
        nuc, assoc_name, extra = _entry_invariants(table)
        entry = CatalogEntry(
            order=table.n,
            index=index,
            table=table,
            recipe=recipe,
            nucleus_size=nuc,
            assoc_name=assoc_name,
            extra=extra,
            component=self.components.fresh() if component is None else component,
        )
        self.entries.append(entry)
        self._by_iso_id[(table.n, iso_id)] = entry
        return entry, True


def explore(seeds, *, keep="nonassociative", catalog=None, checkpoint=None, jobs=1):
    """Modification closure of the given seeds.

    seeds: list of (SeedDescriptor, LoopTable) pairs.  keep selects the
    acceptable associativity of seeds and outputs: "nonassociative" for the
    loop search, "associative" for the group bootstrap.  checkpoint, if
    given, is called with the entry list after every explored entry.
    Returns the catalog (entries in deterministic discovery order).
    """
    if catalog is None:
        catalog = Catalog()
    want_assoc = keep == "associative"
    for descriptor, table in seeds:
        if not table.satisfies(Law.M1):
            raise LoopError("SEED_NOT_MOUFANG", f"seed {seed_to_str(descriptor)}")
        if table.satisfies(Law.ASSOCIATIVE) != want_assoc:
            raise LoopError(
                "SEED_NOT_MOUFANG",
                f"seed {seed_to_str(descriptor)} is on the wrong side of associativity for keep={keep!r}",
            )
        catalog.insert(table, Recipe(descriptor))
    while True:
        entry = next((e for e in catalog.entries if not e.explored), None)
        if entry is None:
            break
        targets = []
        narrow_targets = set()
        for params, out in _modifications_of(entry.table, jobs=jobs):
            still_ok = out.satisfies(Law.ASSOCIATIVE) if want_assoc else out.has_nonassociative_triple()
            if not still_ok:
                raise LoopError(
                    "BAD_STEP",
                    f"modification of {entry.name} crossed associativity, which the "
                    f"constructions cannot do",
                )
            recipe = Recipe(entry.recipe.seed, entry.recipe.steps + (params_to_step(params),))
            target, _ = catalog.insert(out, recipe, component=entry.component)
            targets.append((target.order, target.index))
            if isinstance(params, CyclicParams) or params.decomposition.quotient.n >= 8:
                narrow_targets.add((target.order, target.index))
        entry.mod_targets = tuple(sorted(set(targets)))
        entry.mod_types = len(narrow_targets)
        entry.explored = True
        if checkpoint is not None:
            checkpoint(catalog)
    return catalog


def _modifications_of(table, jobs=1):
    mods = enumerate_modifications(table)
    if jobs and jobs > 1 and len(mods) > 1:
        # Precompute discriminators in parallel; results are attached to the
        # tables, so the sequential insertion below stays deterministic.
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(discriminator, (out for _, out in mods)))
    return mods


def bootstrap_groups(order, seed_table):
    """Closure of a group of 2-power order under both modifications.

    All outputs stay associative; returns the isomorphism types reached.
    """
    if order < 2 or order & (order - 1) or order > 32:
        raise LoopError("NOT_POWER_OF_TWO", f"order {order} is not a power of two <= 32")
    if seed_table.n != order:
        raise LoopError("SIZE_MISMATCH", f"seed has order {seed_table.n}, expected {order}")
    if not seed_table.satisfies(Law.ASSOCIATIVE):
        raise LoopError("NOT_A_GROUP", "bootstrap seeds must be groups")
    descriptor = SeedDescriptor("raw", ("<bootstrap>",))
    catalog = explore([(descriptor, seed_table)], keep="associative")
    return [e.table for e in catalog.entries]


def class_report(entries, components=None):
    """One row per class: (name, nucleus size, associator type, extra, size).

    Classes are the closure components; rows are named n:01, n:02, ... in
    order of their first entry, with an x prefix for product-seeded classes.
    """
    if components is None:
        roots = {}
        for e in entries:
            roots.setdefault(e.component, []).append(e)
    else:
        roots = {}
        for e in entries:
            roots.setdefault(components.find(e.component), []).append(e)
    rows = []
    per_order_counter = {}
    for comp in sorted(roots, key=lambda c: (roots[c][0].order, roots[c][0].index)):
        members = roots[comp]
        order = members[0].order
        product_rooted = members[0].recipe.seed.kind == "product"
        key = (order, product_rooted)
        per_order_counter[key] = per_order_counter.get(key, 0) + 1
        idx = per_order_counter[key]
        name = f"{order}:x{idx}" if product_rooted else f"{order}:{idx:02d}"
        nucleus_sizes = {e.nucleus_size for e in members}
        assoc_names = {e.assoc_name for e in members}
        extras = {e.extra for e in members}
        rows.append(
            {
                "name": name,
                "order": order,
                "nucleus": members[0].nucleus_size,
                "assoc": members[0].assoc_name,
                "extra": members[0].extra,
                "size": len(members),
                "uniform": len(nucleus_sizes) == 1 and len(assoc_names) == 1 and len(extras) == 1,
            }
        )
    return rows


def class_members(catalog, order=None):
    """Entries grouped by closure class, keyed by the class root id."""
    groups = {}
    for e in catalog.entries:
        if order is not None and e.order != order:
            continue
        groups.setdefault(catalog.components.find(e.component), []).append(e)
    return groups


def class_statistics(members):
    """(size, discriminator types, largest same-discriminator bucket,
    max one-step nonisomorphic modifications) for one class."""
    from collections import Counter

    discs = Counter(discriminator(e.table).key for e in members)
    return (
        len(members),
        len(discs),
        max(discs.values()),
        max(e.mod_types for e in members),
    )


# -- the standard seed battery ----------------------------------------------

PRODUCT_SEEDS = {
    36: [("L(12,1)", "C3")],
    48: [(f"L(16,{i})", "C3") for i in range(1, 6)],
    60: [("L(20,1)", "C3"), ("L(12,1)", "C5")],
}


def standard_seeds(order, lookup=None):
    """Seed descriptors and tables for one target order of the full search:
    the Chein double of every nonabelian group of order n = order/2, plus
    the direct-product seeds at orders 36, 48 and 60."""
    if order % 2:
        raise LoopError("UNRESOLVABLE_SEED", f"no seeds at odd order {order}")
    out = []
    count = len(groups.nonabelian_groups(order // 2))
    for i in range(1, count + 1):
        descriptor = SeedDescriptor("chein", (f"NA({order // 2},{i})",))
        out.append((descriptor, resolve_seed(descriptor)))
    for ref_a, ref_b in PRODUCT_SEEDS.get(order, []):
        descriptor = SeedDescriptor("product", (ref_a, ref_b))
        out.append((descriptor, resolve_seed(descriptor, lookup)))
    return out


def search_orders(orders, catalog=None, checkpoint=None, jobs=1):
    """Run the closure for each target order in sequence, sharing one catalog
    so that product seeds can reference smaller loops."""
    if catalog is None:
        catalog = Catalog()
    for order in orders:
        seeds = standard_seeds(order, lookup=catalog.lookup)
        if seeds:
            explore(seeds, catalog=catalog, checkpoint=checkpoint, jobs=jobs)
    return catalog


TABLE_ORDERS = (12, 16, 20, 24, 28, 32, 36, 40, 42, 44, 48, 52, 54, 56, 60)
