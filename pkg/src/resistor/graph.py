"""Weighted multigraphs, Laplacian assembly and the exact/float scalar rules.

Edges carry conductances.  A graph is either *exact* (every conductance is a
:class:`fractions.Fraction`) or *float* (every conductance is a Python float);
the two are never mixed inside one graph.
"""
from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"


class GraphError(ValueError):
    """Malformed graph or invalid vertex argument."""


class DisconnectedError(ValueError):
    """A resistance query was made on a graph that is not connected."""


class ModeError(TypeError):
    """Exact and float scalars were mixed."""


class EdgeListParseError(ValueError):
    pass


def scalar_mode(x) -> str:
    if isinstance(x, bool):
        raise ModeError("booleans are not scalars")
    if isinstance(x, (Fraction, int)):
        return EXACT
    if isinstance(x, (float, np.floating)):
        return FLOAT
    raise ModeError(f"unsupported scalar type {type(x).__name__}")


def as_scalar(x, mode: str) -> Scalar:
    """Coerce ``x`` into ``mode``; ints and strings are accepted in both modes."""
    if isinstance(x, str):
        x = parse_scalar(x)
    if mode == EXACT:
        if isinstance(x, (float, np.floating)):
            raise ModeError(f"float {x!r} given where an exact rational is required")
        return Fraction(x)
    if mode == FLOAT:
        return float(x)
    raise ValueError(f"unknown mode {mode!r}")


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"`` or an integer as a Fraction, anything else as a float."""
    text = text.strip()
    if re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        return Fraction(text)
    try:
        return float(text)
    except ValueError:
        raise EdgeListParseError(f"not a number: {text!r}") from None


def format_scalar(x: Scalar, digits: int = 12) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return f"{float(x):.{digits}g}"


def format_decimal(x: Scalar, digits: int = 12) -> str:
    return f"{float(x):.{digits}g}"


def zero(mode: str) -> Scalar:
    return Fraction(0) if mode == EXACT else 0.0


def one(mode: str) -> Scalar:
    return Fraction(1) if mode == EXACT else 1.0


@dataclass(frozen=True)
class WeightedMultigraph:
    """Undirected multigraph on vertices ``0..n-1`` with per-edge conductance.

    A conductance of zero is an open circuit: the edge is kept (it matters for
    incremental updates) but carries no current.
    """

    n: int
    edges: tuple = ()
    mode: str = field(default=EXACT)

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")
        clean = []
        for e in self.edges:
            if len(e) == 2:
                u, v, w = e[0], e[1], 1
            else:
                u, v, w = e
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for {self.n} vertices")
            if isinstance(w, (int, Fraction)) and not isinstance(w, bool):
                if self.mode == FLOAT:
                    if isinstance(w, Fraction) and w.denominator != 1:
                        raise ModeError(f"exact conductance {w} on edge ({u}, {v}) in a float graph")
                    w = float(w)
                else:
                    w = Fraction(w)
            elif scalar_mode(w) != self.mode:
                raise ModeError(f"{scalar_mode(w)} conductance on edge ({u}, {v}) in a {self.mode} graph")
            else:
                w = float(w)
            if w < 0:
                raise GraphError(f"negative conductance on edge ({u}, {v})")
            clean.append((u, v, w))
        object.__setattr__(self, "edges", tuple(clean))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, mode: str = EXACT) -> "WeightedMultigraph":
        return cls(n, tuple(edges), mode)

    @classmethod
    def unit(cls, n: int, pairs: Iterable[Sequence[int]], mode: str = EXACT) -> "WeightedMultigraph":
        return cls(n, tuple((u, v, 1) for u, v in pairs), mode)

    @property
    def m(self) -> int:
        return len(self.edges)

    def to_mode(self, mode: str) -> "WeightedMultigraph":
        if mode == self.mode:
            return self
        if mode == FLOAT:
            return WeightedMultigraph(self.n, tuple((u, v, float(w)) for u, v, w in self.edges), FLOAT)
        return WeightedMultigraph(
            self.n, tuple((u, v, Fraction(w).limit_denominator(10**12)) for u, v, w in self.edges), EXACT
        )

    def degree(self, v: int, weighted: bool = False):
        total = 0
        for a, b, w in self.edges:
            if v in (a, b) and w != 0:
                total += w if weighted else 1
        return total

    def neighbors(self, v: int) -> list[int]:
        """Distinct neighbours over positive-conductance edges, sorted."""
        out = set()
        for a, b, w in self.edges:
            if w == 0:
                continue
            if a == v:
                out.add(b)
            elif b == v:
                out.add(a)
        return sorted(out)

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for a, b, w in self.edges:
            if w != 0:
                adj[a].add(b)
                adj[b].add(a)
        return adj

    def total_conductance(self) -> Scalar:
        return sum((w for _, _, w in self.edges), zero(self.mode))

    def is_unit(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def without_zero_edges(self) -> "WeightedMultigraph":
        return WeightedMultigraph(self.n, tuple(e for e in self.edges if e[2] != 0), self.mode)

    def with_edge(self, u: int, v: int, w=1) -> "WeightedMultigraph":
        return WeightedMultigraph(self.n, self.edges + ((u, v, w),), self.mode)

    def relabel(self, perm: Sequence[int]) -> "WeightedMultigraph":
        """Vertex ``i`` becomes ``perm[i]``."""
        return WeightedMultigraph(self.n, tuple((perm[u], perm[v], w) for u, v, w in self.edges), self.mode)

    def simple_edge_set(self) -> set[frozenset]:
        return {frozenset((u, v)) for u, v, w in self.edges if w != 0}


def build_laplacian(g: WeightedMultigraph):
    """Dense Laplacian.  Exact graphs give a list of Fraction rows, float graphs an ndarray."""
    if g.mode == FLOAT:
        L = np.zeros((g.n, g.n))
        for u, v, w in g.edges:
            L[u, u] += w
            L[v, v] += w
            L[u, v] -= w
            L[v, u] -= w
        return L
    L = [[Fraction(0)] * g.n for _ in range(g.n)]
    for u, v, w in g.edges:
        L[u][u] += w
        L[v][v] += w
        L[u][v] -= w
        L[v][u] -= w
    return L


def laplacian_is_psd(L, tol: float = 1e-9) -> bool:
    A = np.asarray(L, dtype=float)
    ev = np.linalg.eigvalsh(A)
    scale = max(1.0, float(np.abs(ev).max()))
    return bool(ev.min() >= -tol * scale)


def check_connected(g: WeightedMultigraph) -> bool:
    adj = g.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.n


def require_connected(g: WeightedMultigraph) -> None:
    if not check_connected(g):
        raise DisconnectedError("graph is not connected over positive-conductance edges")


def check_vertex(g: WeightedMultigraph, *vs: int) -> None:
    for v in vs:
        if not isinstance(v, (int, np.integer)) or not 0 <= v < g.n:
            raise GraphError(f"vertex {v!r} not in 0..{g.n - 1}")


def contract_pair(g: WeightedMultigraph, i: int, j: int) -> tuple[WeightedMultigraph, list[int]]:
    """Identify ``i`` and ``j``.

    Edges between ``i`` and ``j`` vanish; common neighbours end up joined by
    parallel edges.  Returns the contracted graph and ``mapping`` with
    ``mapping[old] = new``; the merged vertex takes the smaller id's slot.
    """
    check_vertex(g, i, j)
    if i == j:
        raise GraphError("cannot contract a vertex with itself")
    keep, drop = min(i, j), max(i, j)
    mapping = []
    for v in range(g.n):
        if v == drop:
            mapping.append(keep)
        else:
            mapping.append(v if v < drop else v - 1)
    edges = []
    for u, v, w in g.edges:
        a, b = mapping[u], mapping[v]
        if a == b:
            continue
        edges.append((a, b, w))
    return WeightedMultigraph(g.n - 1, tuple(edges), g.mode), mapping


def induced_subgraph(g: WeightedMultigraph, vertices: Sequence[int]) -> tuple[WeightedMultigraph, dict[int, int]]:
    """Subgraph on ``vertices`` (kept in the given order); returns it and old->new ids."""
    index = {v: k for k, v in enumerate(vertices)}
    edges = tuple((index[u], index[v], w) for u, v, w in g.edges if u in index and v in index)
    return WeightedMultigraph(len(vertices), edges, g.mode), index


# ---------------------------------------------------------------------------
# edge-list text format (1-based ids at the boundary)
# ---------------------------------------------------------------------------

def read_edge_list(source, mode: str | None = None) -> WeightedMultigraph:
    """Parse ``u v [weight]`` lines with 1-based ids.

    ``source`` may be a path, an open file or the text itself (when it
    contains a newline).  An optional ``n <count>`` header fixes the vertex
    count; otherwise it is the largest id seen.  Weights written ``p/q`` or
    as integers are exact; decimals force float mode.
    """
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and "\n" in source:
        text = source
    else:
        with open(source) as fh:
            text = fh.read()
    n_header = None
    raw = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise EdgeListParseError(f"line {lineno}: bad header {line!r}")
            n_header = int(parts[1])
            continue
        if len(parts) not in (2, 3):
            raise EdgeListParseError(f"line {lineno}: expected 'u v [weight]', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"line {lineno}: vertex ids must be integers") from None
        if u < 1 or v < 1:
            raise EdgeListParseError(f"line {lineno}: vertex ids are 1-based")
        w = parse_scalar(parts[2]) if len(parts) == 3 else Fraction(1)
        raw.append((u - 1, v - 1, w))
    n = n_header if n_header is not None else max((max(u, v) + 1 for u, v, _ in raw), default=0)
    if n < 1:
        raise EdgeListParseError("empty graph")
    if mode is None:
        mode = FLOAT if any(isinstance(w, float) for _, _, w in raw) else EXACT
    try:
        edges = tuple((u, v, as_scalar(w, mode)) for u, v, w in raw)
        return WeightedMultigraph(n, edges, mode)
    except (GraphError, ModeError) as exc:
        raise EdgeListParseError(str(exc)) from exc


def write_edge_list(g: WeightedMultigraph, fh=None, header: bool = True) -> str:
    out = io.StringIO()
    if header:
        out.write(f"n {g.n}\n")
    for u, v, w in g.edges:
        if w == 1:
            out.write(f"{u + 1} {v + 1}\n")
        else:
            out.write(f"{u + 1} {v + 1} {format_scalar(w, 17)}\n")
    text = out.getvalue()
    if fh is not None:
        fh.write(text)
    return text
