"""Command-line interface.

Exit codes: 0 on success, 1 on a domain error (the error code is printed
to stderr), 2 on usage errors (argparse's default).
"""

from __future__ import annotations

import argparse
import sys

from . import files, groups, search
from .constructions import CyclicParams, DihedralParams, chein_double, modify
from .iso import are_isomorphic
from .subloop import (
    SubloopHandle,
    associator_subloop,
    identify_small_group,
    quotient,
)
from .table import Law, LoopError, LoopTable, direct_product, table_distance


def _load(ref):
    """A table from a file path, or from a group reference as a fallback."""
    import os

    if os.path.exists(ref):
        return files.read_table(ref)
    try:
        return groups.builtin_group(ref)
    except LoopError:
        raise LoopError("PARSE_ERROR", f"{ref!r} is neither a readable file nor a group reference")


def _emit(table, out):
    text = files.format_table(table)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args):
    table = files.read_table(args.file)
    print(f"valid loop of order {table.n}")
    return 0


def cmd_props(args):
    table = _load(args.file)
    stat = table.order_statistic()
    nucleus, center = table.nucleus_and_center()
    sub = associator_subloop(table)
    sub_table, _ = sub.restricted()
    try:
        assoc_name = identify_small_group(sub_table)
    except LoopError:
        assoc_name = f"unrecognized(order={sub_table.n})"
    print(f"order: {table.n}")
    print("order statistic:", " ".join(f"{k}:{v}" for k, v in stat.counts.items()))
    print("exponent:", stat.exponent)
    for law in (Law.ASSOCIATIVE, Law.M1, Law.M2, Law.M3, Law.M4, Law.EXTRA):
        print(f"{law.name}: {'yes' if table.satisfies(law) else 'no'}")
    print("nucleus size:", len(nucleus))
    print("center size:", len(center))
    print("associator subloop:", assoc_name, f"(order {sub_table.n})")
    return 0


def cmd_chein(args):
    table = _load(args.group)
    _emit(chein_double(table), args.out)
    return 0


def cmd_product(args):
    _emit(direct_product(_load(args.a), _load(args.b)), args.out)
    return 0


def cmd_modify(args):
    table = _load(args.file)
    elements = tuple(sorted(int(v) for v in args.S.split(",")))
    dec = quotient(table, SubloopHandle(table, elements))
    if args.kind == "cyclic":
        if args.gen is None:
            raise LoopError("BAD_PARAMS", "cyclic modification needs --gen")
        params = CyclicParams(dec, args.gen, args.h)
    else:
        if args.beta is None or args.gamma is None:
            raise LoopError("BAD_PARAMS", "dihedral modification needs --beta and --gamma")
        params = DihedralParams(dec, args.beta, args.gamma, args.h)
    out = modify(table, params)
    if args.diff:
        changed = [
            (x, y, table.mul(x, y), out.mul(x, y))
            for x in range(table.n)
            for y in range(table.n)
            if table.mul(x, y) != out.mul(x, y)
        ]
        print(f"# {len(changed)} of {table.n * table.n} cells differ")
        for x, y, old, new in changed:
            print(f"{x} {y} {old} -> {new}")
        return 0
    _emit(out, args.out)
    return 0


def cmd_iso(args):
    a = _load(args.a)
    b = _load(args.b)
    phi = are_isomorphic(a, b)
    if phi is None:
        print("not isomorphic")
    else:
        print("isomorphic:", " ".join(str(v) for v in phi))
    return 0


def _parse_seed_arg(text, lookup):
    kind, _, rest = text.partition(":")
    if kind == "chein":
        descriptor = search.SeedDescriptor("chein", (rest,))
    elif kind == "product":
        parts = tuple(rest.split(","))
        if len(parts) != 2:
            raise LoopError("UNRESOLVABLE_SEED", f"product seed needs two references: {text!r}")
        descriptor = search.SeedDescriptor("product", parts)
    elif kind == "raw":
        descriptor = search.SeedDescriptor("raw", (rest,))
    else:
        raise LoopError("UNRESOLVABLE_SEED", f"seed {text!r} (use chein:, product: or raw:)")
    return descriptor, search.resolve_seed(descriptor, lookup)


def cmd_search(args):
    catalog = search.Catalog()
    if args.resume:
        catalog = search.Catalog.from_entries(files.read_catalog(args.out))

    def checkpoint(cat):
        if args.out:
            files.write_catalog(cat.resolved_entries(), args.out, include_tables=args.tables)

    if args.seeds == ["auto"]:
        orders = [o for o in search.TABLE_ORDERS if o <= args.order_cap]
        if args.long_run_64 and args.order_cap >= 64:
            orders.append(64)
        search.search_orders(orders, catalog=catalog, checkpoint=checkpoint, jobs=args.jobs)
    else:
        seeds = [_parse_seed_arg(s, catalog.lookup) for s in args.seeds]
        for descriptor, table in seeds:
            if table.n > args.order_cap and not (table.n == 64 and args.long_run_64):
                raise LoopError(
                    "SEED_NOT_MOUFANG",
                    f"seed of order {table.n} above --order-cap {args.order_cap}",
                )
        search.explore(seeds, catalog=catalog, checkpoint=checkpoint, jobs=args.jobs)
    checkpoint(catalog)
    rows = search.class_report(catalog.entries, catalog.components)
    for r in rows:
        extra = "yes" if r["extra"] else "no"
        print(f"{r['name']}: nucleus={r['nucleus']} assoc={r['assoc']} extra={extra} size={r['size']}")
    print(f"total: {len(catalog.entries)} loops in {len(rows)} classes")
    return 0


def cmd_replay(args):
    entries = files.read_catalog(args.catalog)
    order, _, index = args.id.partition(":")
    target = next(
        (e for e in entries if e.order == int(order) and e.index == int(index)), None
    )
    if target is None:
        raise LoopError("UNRESOLVABLE_SEED", f"entry {args.id} not in {args.catalog}")
    _emit(target.table, args.out)
    return 0


def cmd_bootstrap(args):
    seed = _load(args.seed)
    out = search.bootstrap_groups(args.n, seed)
    nonabelian = [g for g in out if not g.is_abelian()]
    print(f"closure: {len(out)} groups, {len(nonabelian)} nonabelian")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for i, g in enumerate(out, start=1):
                named = LoopTable(g.cells, label=f"bootstrap{args.n}_{i}")
                fh.write(files.format_table(named))
                fh.write("\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="moufang", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a table file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("props", help="laws, order statistic and invariants of a table")
    p.add_argument("file")
    p.set_defaults(func=cmd_props)

    p = sub.add_parser("chein", help="double a group into a Moufang loop")
    p.add_argument("group")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chein)

    p = sub.add_parser("product", help="direct product of two tables")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("modify", help="apply one quarter-table modification")
    p.add_argument("file")
    p.add_argument("--kind", choices=("cyclic", "dihedral"), required=True)
    p.add_argument("--S", required=True, help="comma-separated subloop elements")
    p.add_argument("--gen", type=int, help="generator block id (cyclic)")
    p.add_argument("--beta", type=int, help="involution block id (dihedral)")
    p.add_argument("--gamma", type=int, help="involution block id (dihedral)")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--diff", action="store_true", help="print changed cells instead of the table")
    p.add_argument("--out")
    p.set_defaults(func=cmd_modify)

    p = sub.add_parser("iso", help="test two tables for isomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("search", help="run the classification search")
    p.add_argument("--seeds", nargs="+", required=True,
                   help="'auto' or chein:<group>, product:<ref>,<ref>, raw:<file>")
    p.add_argument("--order-cap", type=int, default=60)
    p.add_argument("--out", help="catalog file")
    p.add_argument("--tables", action="store_true", help="inline tables in the catalog")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--long-run-64", action="store_true")
    p.add_argument("--resume", action="store_true")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("replay", help="rebuild a catalog entry from its recipe")
    p.add_argument("--catalog", required=True)
    p.add_argument("--id", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("bootstrap-groups", help="group closure under the modifications")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bootstrap)

    return parser


def run_cli(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LoopError as exc:
        print(exc, file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
