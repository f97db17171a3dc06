"""``resistor`` command line.

Graph sources are an edge-list path, ``-`` for standard input, or a family
spec such as ``ladder:3`` or ``bent2tree:10:3,6``.  Vertex ids on the
command line and in files are 1-based.
"""
from __future__ import annotations

import functools
import json
import os
import sys
import time
from fractions import Fraction

import click
import numpy as np

from . import __version__
from .alt_solvers import InconsistentSystemError, simplex_embed
from .approx import ConvergenceError, commute_time_estimate, sketch_build, spectral_truncation
from .backends import BACKENDS, EXACT_BACKENDS, NotReducedError, compute, transform_resistance
from .closed_forms import OutOfDomainError, conjecture_probe, family_closed_form, family_pair_resistance
from .combinatorics import EnumerationLimitError, count_spanning_trees, forest_counts
from .families import FamilyError, FamilySpec, generate
from .graph import (
    EXACT,
    FLOAT,
    DisconnectedError,
    EdgeListParseError,
    GraphError,
    ModeError,
    format_decimal,
    format_scalar,
    read_edge_list,
    require_connected,
    write_edge_list,
)
from .incremental import SingularPerturbationError
from .transforms import NotApplicableError, reduce_two_terminal, trace_to_json, trace_to_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DISCONNECTED = 4
EXIT_NOT_APPLICABLE = 5
EXIT_MODE = 6
EXIT_NUMERIC = 7

_ERROR_CODES = (
    (EdgeListParseError, EXIT_PARSE),
    (DisconnectedError, EXIT_DISCONNECTED),
    (ModeError, EXIT_MODE),
    ((NotApplicableError, NotReducedError, OutOfDomainError, EnumerationLimitError, InconsistentSystemError),
     EXIT_NOT_APPLICABLE),
    ((ConvergenceError, SingularPerturbationError, ArithmeticError, np.linalg.LinAlgError), EXIT_NUMERIC),
    ((FamilyError, GraphError), EXIT_USAGE),
)


def _guarded(fn):
    @functools.wraps(fn)
    def run(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except click.ClickException:
            raise
        except Exception as exc:
            for kinds, code in _ERROR_CODES:
                if isinstance(exc, kinds):
                    click.echo(f"error: {exc}", err=True)
                    sys.exit(code)
            raise
    return run


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def parse_family(text: str) -> FamilySpec:
    name, *args = text.split(":")
    return FamilySpec.parse(name, args)


def load_graph(source: str, mode: str | None):
    """Return ``(graph, family spec or None)``."""
    if source == "-":
        return read_edge_list(sys.stdin.read(), mode), None
    if os.path.exists(source):
        return read_edge_list(source, mode), None
    if ":" in source or source.isalpha():
        spec = parse_family(source)
        g = generate(spec)
        return (g if mode is None else g.to_mode(mode)), spec
    raise EdgeListParseError(f"no such file or family spec: {source!r}")


def parse_pairs(values, n: int) -> list[tuple[int, int]]:
    """``all`` or items like ``1,2``; returns 0-based pairs."""
    if not values or "all" in values:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for item in values:
        for chunk in item.split(";"):
            parts = chunk.replace("-", ",").split(",")
            if len(parts) != 2:
                raise GraphError(f"bad pair {chunk!r}; expected 'u,v'")
            try:
                u, v = int(parts[0]) - 1, int(parts[1]) - 1
            except ValueError:
                raise GraphError(f"bad pair {chunk!r}") from None
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"pair {chunk!r} out of range 1..{n}")
            out.append((u, v))
    return out


def _row(u, v, x):
    exact = format_scalar(x) if isinstance(x, Fraction) else None
    return {"u": u + 1, "v": v + 1, "exact": exact, "value": format_decimal(x)}


def _emit_table(rows, columns, as_json: bool, payload: dict | None = None):
    if as_json:
        doc = dict(payload or {})
        doc["rows"] = rows
        click.echo(json.dumps(doc, indent=2, sort_keys=False))
        return
    widths = [max(len(c), *(len(str(r.get(c, ""))) for r in rows)) if rows else len(c) for c in columns]
    click.echo("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
    for r in rows:
        cells = ["" if r.get(c) is None else str(r.get(c)) for c in columns]
        click.echo("  ".join(x.ljust(w) for x, w in zip(cells, widths)).rstrip())


mode_option = click.option(
    "--mode", type=click.Choice([EXACT, FLOAT]), envvar="RESISTOR_MODE", default=None,
    help="Scalar mode; defaults to $RESISTOR_MODE, else inferred from the input.",
)
json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of a table.")
pairs_option = click.option("--pairs", multiple=True, help="Vertex pairs 'u,v' (repeatable) or 'all'.")


@click.group()
@click.version_option(__version__, prog_name="resistor")
def main():
    """Effective resistance toolkit."""


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------

@main.command()
@click.argument("family")
@click.argument("params", nargs=-1)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the edge list to this file instead of standard output.")
@mode_option
@_guarded
def gen(family, params, out, mode):
    """Write a named family as an edge list, e.g. ``gen bent2tree 10 3,6``."""
    g = generate(FamilySpec.parse(family, params))
    if mode:
        g = g.to_mode(mode)
    text = write_edge_list(g)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


# ---------------------------------------------------------------------------
# resist / matrix / compare
# ---------------------------------------------------------------------------

def _run_compare(g, spec, names):
    reports = {}
    for name in names:
        if name == "closed-form":
            if spec is None:
                raise OutOfDomainError("closed-form backend needs a family spec source")
            reports[name] = family_closed_form(spec)
        else:
            reports[name] = compute(g, name)
    ref = reports[names[0]]
    gaps = {name: ref.max_discrepancy(rep) for name, rep in reports.items()}
    exact_names = [n for n in names if reports[n].mode == EXACT]
    exact_ok = all(reports[n].values == reports[exact_names[0]].values for n in exact_names) if exact_names else True
    float_ok = all(gaps[n] <= 1e-9 * max(1.0, max(map(abs, map(float, ref.values.values())), default=1.0))
                   for n in names if reports[n].mode == FLOAT)
    return reports, gaps, exact_ok and float_ok


@main.command()
@click.argument("source")
@pairs_option
@click.option("--backend", default="pseudoinverse", show_default=True,
              help=f"One of {', '.join(BACKENDS)}, 'closed-form' or 'all'.")
@mode_option
@json_option
@click.option("--trace", "trace_file", type=click.Path(dir_okay=False, writable=True),
              help="With --backend transform, write the rewrite trace here (JSON if it ends in .json).")
@click.option("--timing", is_flag=True, help="Include wall-clock timing (makes output non-reproducible).")
@_guarded
def resist(source, pairs, backend, mode, as_json, trace_file, timing):
    """Resistance between vertex pairs."""
    t0 = time.perf_counter()
    g, spec = load_graph(source, mode)
    require_connected(g)
    P = parse_pairs(pairs, g.n)
    status = "PASS"
    discrepancy = float_discrepancy = None
    if backend == "all":
        names = list(EXACT_BACKENDS) + ["simplex"] if g.mode == EXACT else ["pseudoinverse", "simplex", "local-rules"]
        reports, gaps, ok = _run_compare(g, spec, names)
        rep = reports[names[0]]
        exact_gaps = [gaps[n] for n in names if reports[n].mode == EXACT]
        float_gaps = [gaps[n] for n in names if reports[n].mode == FLOAT]
        discrepancy = max(exact_gaps if g.mode == EXACT else float_gaps, default=0.0)
        float_discrepancy = max(float_gaps, default=None) if g.mode == EXACT else None
        status = "PASS" if ok else "FAIL"
        values = {p: rep[p] for p in P}
    elif backend == "transform":
        traces = []
        values = {}
        for u, v in P:
            if u == v:
                values[(u, v)] = Fraction(0) if g.mode == EXACT else 0.0
                continue
            values[(u, v)], tr, _ = transform_resistance(g, u, v)
            traces.append(((u, v), tr))
        if trace_file:
            with open(trace_file, "w") as fh:
                if trace_file.endswith(".json"):
                    docs = [json.loads(trace_to_json(tr, offset=1, terminals=[u + 1, v + 1])) for (u, v), tr in traces]
                    json.dump(docs, fh, indent=2)
                else:
                    for (u, v), tr in traces:
                        fh.write(f"# terminals {u + 1} {v + 1}\n")
                        fh.write(trace_to_text(tr, offset=1))
    elif backend == "closed-form":
        if spec is None:
            raise OutOfDomainError("closed-form backend needs a family spec source")
        values = {(u, v): family_pair_resistance(spec, u, v) for u, v in P}
    else:
        rep = compute(g, backend)
        values = {p: rep[p] for p in P}
    rows = [_row(u, v, x) for (u, v), x in values.items()]
    payload = {"input": source, "backend": backend, "mode": g.mode, "status": status}
    if discrepancy is not None:
        payload["max_discrepancy"] = discrepancy
    if float_discrepancy is not None:
        payload["float_discrepancy"] = float_discrepancy
    if timing:
        payload["seconds"] = round(time.perf_counter() - t0, 6)
    _emit_table(rows, ["u", "v", "exact", "value"], as_json, payload)
    if not as_json:
        extra = f"  max discrepancy {discrepancy:.3g}" if discrepancy is not None else ""
        if backend == "all" or timing:
            click.echo(f"{status}{extra}" + (f"  {payload['seconds']}s" if timing else ""))
    if status == "FAIL":
        sys.exit(EXIT_FAIL)


@main.command()
@click.argument("source")
@click.option("--backend", default="pseudoinverse", show_default=True)
@mode_option
@json_option
@_guarded
def matrix(source, backend, mode, as_json):
    """Full resistance matrix."""
    g, spec = load_graph(source, mode)
    rep = family_closed_form(spec) if backend == "closed-form" and spec else compute(g, backend)
    M = rep.matrix()
    fmt = (lambda x: format_scalar(x)) if rep.mode == EXACT else (lambda x: format_decimal(x))
    if as_json:
        click.echo(json.dumps({"input": source, "backend": rep.backend, "mode": rep.mode,
                               "matrix": [[fmt(x) for x in row] for row in M]}, indent=2))
        return
    for row in M:
        click.echo(" ".join(fmt(x) for x in row))


@main.command()
@click.argument("source")
@click.option("--backends", default=None, help="Comma-separated backends; the first is the reference.")
@mode_option
@json_option
@_guarded
def compare(source, backends, mode, as_json):
    """Run several backends on all pairs and report their discrepancies."""
    g, spec = load_graph(source, mode)
    require_connected(g)
    if backends:
        names = [b.strip() for b in backends.split(",") if b.strip()]
    else:
        names = list(EXACT_BACKENDS) if g.mode == EXACT else ["pseudoinverse", "simplex"]
    reports, gaps, ok = _run_compare(g, spec, names)
    status = "PASS" if ok else "FAIL"
    if as_json:
        click.echo(json.dumps({
            "input": source, "mode": g.mode, "backends": names, "status": status,
            "discrepancies": gaps,
            "pairs": [dict(_row(u, v, reports[names[0]][u, v]),
                           **{n: format_decimal(reports[n][u, v]) for n in names})
                      for u in range(g.n) for v in range(u + 1, g.n)],
        }, indent=2))
    else:
        rows = []
        for u in range(g.n):
            for v in range(u + 1, g.n):
                r = {"u": u + 1, "v": v + 1}
                for n in names:
                    x = reports[n][u, v]
                    r[n] = format_scalar(x) if isinstance(x, Fraction) else format_decimal(x)
                rows.append(r)
        _emit_table(rows, ["u", "v"] + names, False)
        for n in names[1:]:
            click.echo(f"{n}: max discrepancy {gaps[n]:.3g}")
        click.echo(status)
    if not ok:
        sys.exit(EXIT_FAIL)


# ---------------------------------------------------------------------------
# reduce / embed / count / formula
# ---------------------------------------------------------------------------

@main.command()
@click.argument("source")
@click.argument("s", type=int)
@click.argument("t", type=int)
@click.option("--star-mesh", is_flag=True, help="Allow star-mesh elimination in the driver.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@mode_option
@_guarded
def reduce(source, s, t, star_mesh, fmt, mode):
    """Reduce the network between terminals S and T and print the rewrite trace."""
    g, _ = load_graph(source, mode)
    require_connected(g)
    if not (1 <= s <= g.n and 1 <= t <= g.n) or s == t:
        raise GraphError(f"terminals must be distinct ids in 1..{g.n}")
    red = reduce_two_terminal(g, s - 1, t - 1, use_star_mesh=star_mesh)
    value = format_scalar(red.resistance) if red.reduced else None
    if fmt == "json":
        click.echo(trace_to_json(red.trace, offset=1, terminals=[s, t], reduced=red.reduced, resistance=value))
    else:
        text = trace_to_text(red.trace, offset=1)
        if text:
            click.echo(text)
        click.echo(f"resistance {value}" if red.reduced else "not reduced")
    if not red.reduced:
        sys.exit(EXIT_NOT_APPLICABLE)


@main.command()
@click.argument("source")
@_guarded
def embed(source):
    """Simplex coordinates as CSV (one row per vertex)."""
    g, _ = load_graph(source, FLOAT)
    emb = simplex_embed(g)
    k = emb.coords.shape[1]
    click.echo(",".join(["vertex"] + [f"s{c + 1}" for c in range(k)]))
    for i, row in enumerate(emb.coords):
        click.echo(",".join([str(i + 1)] + [format(x, ".12g") for x in row]))


@main.command()
@click.argument("source")
@pairs_option
@click.option("--method", type=click.Choice(["det", "enum"]), default="det", show_default=True)
@mode_option
@json_option
@_guarded
def count(source, pairs, method, mode, as_json):
    """Spanning trees and separating 2-forests, with r = F / T."""
    g, _ = load_graph(source, mode)
    T = count_spanning_trees(g, method)
    rows = []
    for u, v in parse_pairs(pairs, g.n):
        fc = forest_counts(g, u, v, method)
        rows.append({"u": u + 1, "v": v + 1, "forests": format_scalar(fc.separating),
                     "trees": format_scalar(fc.trees), "resistance": format_scalar(fc.resistance) if fc.trees else None})
    _emit_table(rows, ["u", "v", "forests", "trees", "resistance"], as_json,
                {"input": source, "method": method, "trees": format_scalar(T)})


@main.command()
@click.argument("family")
@click.argument("params", nargs=-1)
@pairs_option
@click.option("--as-printed", is_flag=True, help="Use the formula exactly as printed (known errata kept).")
@click.option("--check/--no-check", default=True, show_default=True, help="Compare against the exact backend.")
@json_option
@_guarded
def formula(family, params, pairs, as_printed, check, as_json):
    """Closed-form resistances for a named family."""
    spec = FamilySpec.parse(family, params)
    g = generate(spec)
    P = parse_pairs(pairs, g.n)
    exact = compute(g, "pseudoinverse") if check else None
    rows, ok = [], True
    for u, v in P:
        x = family_pair_resistance(spec, u, v, as_printed)
        r = _row(u, v, x)
        if exact is not None:
            match = x == exact[u, v]
            ok &= match
            r["oracle"] = format_scalar(exact[u, v])
            r["match"] = "yes" if match else "NO"
        rows.append(r)
    cols = ["u", "v", "exact", "value"] + (["oracle", "match"] if check else [])
    _emit_table(rows, cols, as_json, {"family": spec.family, "params": {k: list(v) if isinstance(v, tuple) else v
                                                                        for k, v in spec.params.items()},
                                      "as_printed": as_printed, "status": "PASS" if ok else "FAIL"})
    if not ok:
        sys.exit(EXIT_FAIL)


# ---------------------------------------------------------------------------
# approx / conjecture
# ---------------------------------------------------------------------------

@main.command()
@click.argument("source")
@pairs_option
@click.option("--method", type=click.Choice(["spectral", "sketch", "commute"]), default="sketch", show_default=True)
@click.option("--epsilon", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("-t", "t", type=int, default=None, help="Eigenpairs kept by the spectral method (default all).")
@click.option("--walks", type=int, default=10000, show_default=True)
@click.option("--exact/--no-exact", "with_exact", default=False, help="Also report the exact value and ratio.")
@json_option
@_guarded
def approx(source, pairs, method, epsilon, seed, t, walks, with_exact, as_json):
    """Approximate resistances (float)."""
    g, _ = load_graph(source, FLOAT)
    require_connected(g)
    P = parse_pairs(pairs, g.n)
    truth = compute(g, "pseudoinverse") if with_exact else None
    rows = []
    if method == "spectral":
        tr = spectral_truncation(g)
        tt = tr.max_t if t is None else t
        est = {p: (tr.estimate(tt, *p) if p[0] != p[1] else 0.0, None) for p in P}
    elif method == "sketch":
        sk = sketch_build(g, epsilon, seed)
        est = {p: (sk.query(*p), None) for p in P}
    else:
        est = {}
        for p in P:
            if p[0] == p[1]:
                est[p] = (0.0, 0.0)
                continue
            ce = commute_time_estimate(g, p[0], p[1], walks, seed)
            est[p] = (ce.resistance, ce.stderr)
    for (u, v), (x, se) in est.items():
        r = {"u": u + 1, "v": v + 1, "estimate": format_decimal(x)}
        if se is not None:
            r["stderr"] = format_decimal(se)
        if truth is not None:
            ex = truth[u, v]
            r["exact"] = format_decimal(ex)
            r["ratio"] = format_decimal(x / ex) if ex else None
        rows.append(r)
    cols = ["u", "v", "estimate"] + (["stderr"] if method == "commute" else []) + (["exact", "ratio"] if truth else [])
    _emit_table(rows, cols, as_json, {"input": source, "method": method, "epsilon": epsilon, "seed": seed})


@main.command()
@click.argument("which", type=click.IntRange(1, 4))
@click.option("--n-max", type=int, default=20, show_default=True)
@click.option("--n-min", type=int, default=None)
@click.option("-k", "k", type=int, default=2, show_default=True, help="k for the linear k-tree probe.")
@click.option("--budget", type=float, default=None, help="Stop starting new rows after this many seconds.")
@json_option
@_guarded
def conjecture(which, n_max, n_min, k, budget, as_json):
    """Numeric probe table for conjectures 1-4 (trend only, no proof)."""
    rows = []
    probe = conjecture_probe(which, n_max, k=k, n_min=n_min, budget=budget)
    partial = budget is not None and (not probe or probe[-1].n < n_max)
    if partial:
        last = probe[-1].n if probe else None
        click.echo(f"notice: budget spent; table stops at n={last} of {n_max}", err=True)
    for r in probe:
        rows.append({
            "n": r.n,
            "r": format_scalar(r.value),
            "value": format_decimal(r.value),
            "difference": None if r.difference is None else format_decimal(r.difference),
            "target": None if r.target is None else format_scalar(r.target),
            "extra": None if r.extra is None else format_decimal(r.extra),
        })
    _emit_table(rows, ["n", "value", "difference", "target", "extra"], as_json,
                {"conjecture": which, "k": k, "complete": not partial})


if __name__ == "__main__":
    main()
