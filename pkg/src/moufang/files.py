"""Text formats: single tables and search catalogs.

Table files: UTF-8 text, '#' starts a comment, first data line is the
order n, then n lines of n space-separated 0-based indices; cell (i, j)
is the product of row element i and column element j.  The identity may
sit at any index in external files and is renumbered to 0 on ingest.

Catalog files are line oriented: an `entry <order>:<index>` header, a
`seed ...` line, zero or more `mod ...` lines (the replay recipe), a
`meta ...` line with cached invariants, and optionally the literal table.
"""

from __future__ import annotations

import numpy as np

from .table import LoopError, LoopTable


def parse_table_text(text, source="<string>"):
    rows = []
    n = None
    label = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw
        if "#" in line:
            comment = line[line.index("#") + 1 :].strip()
            if comment.startswith("label:"):
                label = comment[len("label:") :].strip()
            line = line[: line.index("#")]
        if not line.strip():
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise LoopError("PARSE_ERROR", f"{source}:{lineno}: expected a single order")
            try:
                n = int(fields[0])
            except ValueError:
                raise LoopError("PARSE_ERROR", f"{source}:{lineno}: order {fields[0]!r} is not an integer")
            if n < 1:
                raise LoopError("PARSE_ERROR", f"{source}:{lineno}: order must be positive")
            continue
        if len(rows) == n:
            raise LoopError("PARSE_ERROR", f"{source}:{lineno}: more than {n} rows")
        if len(fields) != n:
            raise LoopError(
                "PARSE_ERROR", f"{source}:{lineno}: expected {n} entries, found {len(fields)}"
            )
        row = []
        for col, field in enumerate(fields, start=1):
            try:
                v = int(field)
            except ValueError:
                raise LoopError("PARSE_ERROR", f"{source}:{lineno}:{col}: {field!r} is not an integer")
            if not 0 <= v < n:
                raise LoopError("PARSE_ERROR", f"{source}:{lineno}:{col}: {v} not in 0..{n - 1}")
            row.append(v)
        rows.append(row)
    if n is None:
        raise LoopError("PARSE_ERROR", f"{source}: empty file")
    if len(rows) != n:
        raise LoopError("PARSE_ERROR", f"{source}: expected {n} rows, found {len(rows)}")
    return table_from_grid(rows, label=label)


def table_from_grid(rows, label=None):
    """Validate a raw grid, renumbering the identity to index 0 if needed."""
    grid = np.asarray(rows, dtype=np.int64)
    n = grid.shape[0]
    ref = np.arange(n)
    if not (np.sort(grid, axis=1) == ref).all() or not (np.sort(grid, axis=0) == ref[:, None]).all():
        raise LoopError("NOT_LATIN", "rows/columns are not permutations")
    ident = [e for e in range(n) if (grid[e] == ref).all() and (grid[:, e] == ref).all()]
    if not ident:
        raise LoopError("NO_IDENTITY", "no two-sided neutral element")
    e = ident[0]
    if e != 0:
        perm = np.empty(n, dtype=np.int64)
        perm[e] = 0
        perm[:e] = np.arange(1, e + 1)
        perm[e + 1 :] = np.arange(e + 1, n)
        new = np.empty_like(grid)
        new[perm[:, None], perm[None, :]] = perm[grid]
        grid = new
    return LoopTable(grid, label=label)


def read_table(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_table_text(fh.read(), source=str(path))


def format_table(table):
    lines = []
    if table.label:
        lines.append(f"# label: {table.label}")
    lines.append(str(table.n))
    for row in table.rows:
        lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def write_table(table, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_table(table))


# -- catalog files ----------------------------------------------------------

def format_catalog(entries, include_tables=False):
    from .search import seed_to_str, step_to_str

    lines = ["# moufang loop catalog"]
    for e in entries:
        lines.append(f"entry {e.order}:{e.index}")
        lines.append(f"seed {seed_to_str(e.recipe.seed)}")
        for step in e.recipe.steps:
            lines.append(f"mod {step_to_str(step)}")
        lines.append(
            "meta nucleus=%d assoc=%s extra=%d explored=%d component=%d types=%d"
            % (e.nucleus_size, e.assoc_name, int(e.extra), int(e.explored), e.component, e.mod_types)
        )
        if include_tables:
            lines.append("table")
            for row in e.table.rows:
                lines.append(" ".join(str(v) for v in row))
    return "\n".join(lines) + "\n"


def write_catalog(entries, path, include_tables=False):
    import os
    import tempfile

    text = format_catalog(entries, include_tables=include_tables)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".catalog-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_catalog(path):
    """Entries from a catalog file; tables are replayed when not inline."""
    from .search import CatalogEntry, Recipe, parse_seed, parse_step, replay

    with open(path, "r", encoding="utf-8") as fh:
        raw_lines = fh.read().splitlines()

    entries = []
    resolved = {}
    cur = None
    table_rows = None

    def finish(cur, table_rows):
        order, index, seed, steps, meta = cur
        recipe = Recipe(seed, tuple(steps))
        if table_rows is not None:
            if len(table_rows) != order:
                raise LoopError("PARSE_ERROR", f"{path}: entry {order}:{index} table has wrong size")
            table = LoopTable(table_rows)
        else:
            table = replay(recipe, resolved.get)
        entry = CatalogEntry(
            order=order,
            index=index,
            table=table,
            recipe=recipe,
            nucleus_size=int(meta.get("nucleus", -1)),
            assoc_name=meta.get("assoc", "?"),
            extra=bool(int(meta.get("extra", 0))),
            explored=bool(int(meta.get("explored", 0))),
            component=int(meta.get("component", 0)),
            mod_types=int(meta.get("types", 0)),
        )
        entries.append(entry)
        resolved[(order, index)] = table

    for lineno, raw in enumerate(raw_lines, start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        fields = line.split()
        kind = fields[0]
        if table_rows is not None and kind not in ("entry",) and all(
            f.isdigit() for f in fields
        ):
            table_rows.append([int(f) for f in fields])
            continue
        if kind == "entry":
            if cur is not None:
                finish(cur, table_rows)
            table_rows = None
            try:
                order, index = fields[1].split(":")
                cur = [int(order), int(index), None, [], {}]
            except (IndexError, ValueError):
                raise LoopError("PARSE_ERROR", f"{path}:{lineno}: bad entry header {line!r}")
        elif cur is None:
            raise LoopError("PARSE_ERROR", f"{path}:{lineno}: {kind!r} before any entry")
        elif kind == "seed":
            cur[2] = parse_seed(line[len("seed ") :].strip())
        elif kind == "mod":
            cur[3].append(parse_step(line[len("mod ") :].strip()))
        elif kind == "meta":
            for item in fields[1:]:
                k, _, v = item.partition("=")
                cur[4][k] = v
        elif kind == "table":
            table_rows = []
        else:
            raise LoopError("PARSE_ERROR", f"{path}:{lineno}: unknown line {kind!r}")
    if cur is not None:
        finish(cur, table_rows)
    return entries
