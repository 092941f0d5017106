"""Command-line interface.

Usage:
    k3ncount count --n 166 --d 15 --t 15
    k3ncount invariants --n 10 --d 9 --t 3
    k3ncount classes --n 10 --d 9 --t 3 --explain
    k3ncount table --max-n 25 --max-d 25 --format csv --out table.csv
    k3ncount search --max-n 200 --max-d 120 --min-count 2
    k3ncount verify --suite all --max-n 25 --max-d 25

Exit status: 0 on success, 1 on invalid input or unwritable output,
2 when counting levels disagree (``count``) or a suite finds a
counterexample (``verify``).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import sys
import zlib
from concurrent.futures import ProcessPoolExecutor
from functools import partial

import click

from .counting import (
    LEVELS,
    LevelMismatch,
    closed_form,
    cross_check,
    derive_invariants,
    determines_polarization_type,
    glue_count,
    iter_grid,
    lattice_count_via_glue,
    screen_query,
    sort_hits,
    verify_connected_cases,
    verify_index,
    verify_level_agreement,
)
from .glue import enumerate_isotropic_graphs, graph_equivalence_classes, overlattice_from_glue
from .quadform import canonical_pair
from .query import InvalidQuery, ModuliQuery

__all__ = ["cli", "main", "run", "table_row"]

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ("n", "d", "t", "D", "count", "n_classes", "determines_type")
SUITES = ("cor25", "prop22", "cross", "all")
# deterministic spot-check sample for the glue count in table mode (1 in 20)
SPOT_CHECK_MODULUS = 20


class OutputError(click.ClickException):
    exit_code = 1


def _parse_levels(ctx, param, value):
    levels = [x.strip().upper() for x in value.split(",") if x.strip()]
    if not levels or set(levels) - set(LEVELS):
        raise click.BadParameter(f"expected a comma separated subset of {','.join(LEVELS)}")
    return tuple(x for x in LEVELS if x in levels)


def _query(n, d, t) -> ModuliQuery:
    try:
        return ModuliQuery(n, d, t)
    except InvalidQuery as exc:
        raise click.UsageError(str(exc)) from exc


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc.strerror}") from exc


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_NONE, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_bare(row[c]) for c in columns])
    return buf.getvalue()


def _bare(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return value


def _text(rows, columns) -> str:
    table = [list(columns)] + [[str(_bare(r[c])) for c in columns] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(columns))]
    return "".join(
        "  ".join(cell.rjust(w) for cell, w in zip(line, widths)) + "\n" for line in table
    )


def _workers(value: int | None) -> int:
    return value if value and value > 0 else (os.cpu_count() or 1)


def _map(func, items, workers: int):
    """Order-preserving map, fanned out to processes when ``workers > 1``."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * workers))))


query_options = [
    click.option("--n", "n", type=int, required=True, help="Dimension parameter (dimension 2n)."),
    click.option("--d", "d", type=int, required=True, help="Half the polarization degree."),
    click.option("--t", "t", type=int, required=True, help="Divisibility."),
]

grid_options = [
    click.option("--max-n", type=int, required=True),
    click.option("--max-d", type=int, required=True),
    click.option("--min-n", type=int, default=2, show_default=True),
    click.option("--min-d", type=int, default=1, show_default=True),
]

common_options = [
    click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write here instead of stdout."),
    click.option("--workers", type=int, default=None, help="Worker processes (default: all CPUs)."),
]


def _add(options):
    def decorator(f):
        for opt in reversed(options):
            f = opt(f)
        return f
    return decorator


def _check_grid(max_n, max_d, min_n, min_d):
    if min_n > max_n and max_n >= 2 or min_d > max_d and max_d >= 1:
        raise click.UsageError("grid lower bounds exceed upper bounds")


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def cli(verbose):
    """Count classes of marked rank two lattices for (n, d, t)."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s: %(message)s")


@cli.command()
@_add(query_options)
@click.option("--levels", default="A,B,C,D", callback=_parse_levels, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def count(n, d, t, levels, fmt, out):
    """Count classes for a single query, cross-checking the chosen levels."""
    q = _query(n, d, t)
    status = 0
    try:
        report = cross_check(q, levels, strict=True)
    except LevelMismatch as exc:
        report = exc.report
        click.echo(f"error: {exc}", err=True)
        status = 2
    if fmt == "json":
        text = _json(report.to_dict())
    else:
        row = {
            "n": n, "d": d, "t": t, "D": report.invariants.D,
            "count": report.count, "n_classes": len(report.classes),
            "determines_type": determines_polarization_type(q),
        }
        for level in LEVELS:
            row[f"count_{level}"] = "-" if report.counts[level] is None else report.counts[level]
        cols = TABLE_COLUMNS + tuple(f"count_{level}" for level in LEVELS)
        text = _csv([row], cols) if fmt == "csv" else _text([row], cols)
    _emit(text, out)
    return status


@cli.command()
@_add(query_options)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def invariants(n, d, t, out):
    """Print the derived invariants of a query."""
    q = _query(n, d, t)
    cf = closed_form(q)
    payload = {
        "schema": 1,
        "n": n, "d": d, "t": t,
        "invariants": derive_invariants(q).to_dict(),
        "determines_type": determines_polarization_type(q),
        "bullet": cf.bullet,
        "condition_sets": list(cf.condition_sets),
        "formula_value": str(cf.value),
    }
    _emit(_json(payload), out)
    return 0


@cli.command()
@_add(query_options)
@click.option("--explain", is_flag=True, help="Also show every isotropic glue and its overlattice.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def classes(n, d, t, explain, out):
    """List canonical representatives of every class."""
    q = _query(n, d, t)
    count_c, reps = lattice_count_via_glue(q)
    payload = {
        "schema": 1,
        "n": n, "d": d, "t": t, "D": q.discriminant,
        "count": count_c,
        "classes": [c.to_dict() for c in reps],
    }
    if explain:
        graphs = enumerate_isotropic_graphs(q)
        glued = []
        for glue in graphs:
            gram, h, delta = overlattice_from_glue(q, glue)
            canon = canonical_pair(gram, h)
            glued.append({
                "glue": glue.to_dict(),
                "gram": gram.as_list(),
                "h": list(h),
                "delta": list(delta),
                "class": reps.index(canon),
            })
        payload["glues"] = glued
        payload["glue_classes"] = [
            [g.epsilon for g in cls] for cls in graph_equivalence_classes(q, graphs)
        ]
    _emit(_json(payload), out)
    return 0


def table_row(q: ModuliQuery, paranoid: bool = False) -> dict:
    """One table row. Top level so worker processes can pickle it."""
    if paranoid:
        report = cross_check(q, LEVELS, strict=False)
        cnt, n_classes, agree = report.count, len(report.classes), report.agree
    else:
        cnt = closed_form(q).count
        n_classes, _ = lattice_count_via_glue(q)
        agree = cnt == n_classes
        if zlib.crc32(f"{q.n},{q.d},{q.t}".encode()) % SPOT_CHECK_MODULUS == 0:
            agree = agree and glue_count(q)[0] == cnt
    return {
        "n": q.n, "d": q.d, "t": q.t, "D": q.discriminant,
        "count": cnt, "n_classes": n_classes,
        "determines_type": determines_polarization_type(q),
        "_agree": agree,
    }


@cli.command()
@_add(grid_options)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="csv", show_default=True)
@click.option("--paranoid", is_flag=True, help="Run all four levels on every row.")
@_add(common_options)
def table(max_n, max_d, min_n, min_d, fmt, paranoid, out, workers):
    """Tabulate every valid query in a grid, in (n, d, t) order."""
    _check_grid(max_n, max_d, min_n, min_d)
    queries = list(iter_grid(max_n, max_d, min_n, min_d))
    rows = _map(partial(table_row, paranoid=paranoid), queries, _workers(workers))
    for row in rows:
        if not row.pop("_agree"):
            click.echo(f"warning: levels disagree for n={row['n']} d={row['d']} t={row['t']}", err=True)
    if fmt == "json":
        text = _json({"schema": 1, "rows": rows})
    elif fmt == "csv":
        text = _csv(rows, TABLE_COLUMNS)
    else:
        text = _text(rows, TABLE_COLUMNS)
    _emit(text, out)
    return 0


@cli.command()
@_add(grid_options)
@click.option("--min-count", type=click.IntRange(min=2), default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json", show_default=True)
@_add(common_options)
def search(max_n, max_d, min_n, min_d, min_count, fmt, out, workers):
    """Find queries with at least --min-count classes."""
    _check_grid(max_n, max_d, min_n, min_d)
    queries = list(iter_grid(max_n, max_d, min_n, min_d))
    hits = sort_hits(_map(partial(screen_query, min_count=min_count), queries, _workers(workers)))
    rows = [{"n": q.n, "d": q.d, "t": q.t, "count": c} for q, c in hits]
    if fmt == "json":
        text = _json({"schema": 1, "min_count": min_count, "hits": rows})
    elif fmt == "csv":
        text = _csv(rows, ("n", "d", "t", "count"))
    else:
        text = _text(rows, ("n", "d", "t", "count"))
    _emit(text, out)
    return 0


@cli.command()
@click.option("--suite", type=click.Choice(SUITES), required=True)
@_add(grid_options)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def verify(suite, max_n, max_d, min_n, min_d, out):
    """Run a verification suite over a grid; exit 0 iff it finds no counterexample."""
    _check_grid(max_n, max_d, min_n, min_d)
    bounds = (max_n, max_d, min_n, min_d)
    results = {}
    if suite in ("cor25", "all"):
        results["cor25"] = verify_connected_cases(max_n, max_d, min_n=min_n, min_d=min_d)
    if suite in ("prop22", "all"):
        results["prop22"] = verify_index(*bounds)
    if suite in ("cross", "all"):
        results["cross"] = verify_level_agreement(*bounds)
    failures = 0
    for name, res in results.items():
        if name == "cor25":
            failures += sum(len(case["counterexamples"]) for case in res.values())
        else:
            failures += len(res["counterexamples"])
    _emit(_json({"schema": 1, "suite": suite, "ok": failures == 0, "results": results}), out)
    return 0 if failures == 0 else 2


def main(argv=None) -> int:
    """Run the CLI and return the exit status instead of exiting."""
    try:
        status = cli.main(args=argv, prog_name="k3ncount", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        return 1
    return status if isinstance(status, int) else 0


def run() -> None:
    sys.exit(main())
