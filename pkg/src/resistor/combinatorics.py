"""Spanning-tree and spanning 2-forest counts, by determinant and by brute force.

Counts are weighted: each tree or forest contributes the product of its edge
conductances, so unit graphs give plain integer counts.  The resistance is
``F_G(u, v) / T(G)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import sqrt
from typing import Optional

from .graph import (
    EXACT,
    GraphError,
    WeightedMultigraph,
    build_laplacian,
    check_vertex,
    contract_pair,
    induced_subgraph,
    one,
    require_connected,
    zero,
)
from .linalg import delete_rows_cols, determinant

ENUM_EDGE_CAP = 25


class EnumerationLimitError(RuntimeError):
    """Brute-force enumeration was asked to scan too many edge subsets."""


@dataclass(frozen=True)
class ForestCounts:
    trees: object
    separating: object

    @property
    def resistance(self):
        if isinstance(self.trees, float) or isinstance(self.separating, float):
            return self.separating / self.trees
        return Fraction(self.separating) / Fraction(self.trees)


# ---------------------------------------------------------------------------
# determinant forms
# ---------------------------------------------------------------------------

def _minor_det(g: WeightedMultigraph, drop):
    L = build_laplacian(g)
    return determinant(delete_rows_cols(L, drop))


def _as_count(g, x):
    # unit exact graphs give integer counts
    if g.mode == EXACT and isinstance(x, Fraction) and x.denominator == 1 and g.is_unit():
        return int(x)
    return x


def count_spanning_trees_det(g: WeightedMultigraph, w: Optional[int] = None):
    """``det L(w|w)``: the (weighted) number of spanning trees; any ``w`` gives the same value."""
    require_connected(g)
    if w is None:
        w = g.n - 1
    check_vertex(g, w)
    return _as_count(g, _minor_det(g, [w]))


def count_separating_2forests_det(g: WeightedMultigraph, u: int, v: int):
    """``det L(u,v|u,v)``: spanning 2-forests with ``u`` and ``v`` in different trees."""
    check_vertex(g, u, v)
    if u == v:
        raise GraphError("2-forest count needs two distinct vertices")
    require_connected(g)
    return _as_count(g, _minor_det(g, [u, v]))


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

class _DSU:
    __slots__ = ("p",)

    def __init__(self, n):
        self.p = list(range(n))

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.p[ra] = rb
        return True


def _forests(g: WeightedMultigraph, k: int, max_edges: int):
    """Yield (dsu, weight) for each spanning forest with exactly ``k`` trees."""
    edges = [e for e in g.edges if e[2] != 0]
    if len(edges) > max_edges:
        raise EnumerationLimitError(f"{len(edges)} edges exceeds the enumeration cap of {max_edges}")
    size = g.n - k
    if size < 0:
        return
    for subset in combinations(edges, size):
        dsu = _DSU(g.n)
        w = one(g.mode)
        for a, b, c in subset:
            if not dsu.union(a, b):
                break
            w *= c
        else:
            yield dsu, w


def count_spanning_trees_enum(g: WeightedMultigraph, max_edges: int = ENUM_EDGE_CAP):
    require_connected(g)
    total = zero(g.mode)
    for _, w in _forests(g, 1, max_edges):
        total += w
    return _as_count(g, total)


def count_separating_2forests_enum(g: WeightedMultigraph, u: int, v: int, max_edges: int = ENUM_EDGE_CAP):
    check_vertex(g, u, v)
    if u == v:
        raise GraphError("2-forest count needs two distinct vertices")
    require_connected(g)
    total = zero(g.mode)
    for dsu, w in _forests(g, 2, max_edges):
        if dsu.find(u) != dsu.find(v):
            total += w
    return _as_count(g, total)


def count_point_pair_2forests_enum(g: WeightedMultigraph, a: int, b: int, c: int, max_edges: int = ENUM_EDGE_CAP):
    """``F_H(a, {b, c})``: 2-forests with ``b`` and ``c`` together and ``a`` apart, by enumeration."""
    check_vertex(g, a, b, c)
    total = zero(g.mode)
    for dsu, w in _forests(g, 2, max_edges):
        if dsu.find(b) == dsu.find(c) != dsu.find(a):
            total += w
    return _as_count(g, total)


def count_separating_2forests(g: WeightedMultigraph, u: int, v: int, method: str = "det"):
    if method == "det":
        return count_separating_2forests_det(g, u, v)
    if method == "enum":
        return count_separating_2forests_enum(g, u, v)
    raise ValueError(f"unknown method {method!r}")


def count_spanning_trees(g: WeightedMultigraph, method: str = "det"):
    if method == "det":
        return count_spanning_trees_det(g)
    if method == "enum":
        return count_spanning_trees_enum(g)
    raise ValueError(f"unknown method {method!r}")


def forest_counts(g: WeightedMultigraph, u: int, v: int, method: str = "det") -> ForestCounts:
    return ForestCounts(count_spanning_trees(g, method), count_separating_2forests(g, u, v, method))


def resistance_by_counts(g: WeightedMultigraph, u: int, v: int, method: str = "det"):
    """``F_G(u, v) / T(G)``."""
    fc = forest_counts(g, u, v, method)
    if g.mode == EXACT:
        return Fraction(fc.separating) / Fraction(fc.trees)
    return float(fc.separating) / float(fc.trees)


def resistance_matrix_by_counts(g: WeightedMultigraph, method: str = "det"):
    from .report import ResistanceReport

    T = count_spanning_trees(g, method)
    vals = {}
    for u in range(g.n):
        for v in range(u + 1, g.n):
            F = count_separating_2forests(g, u, v, method)
            vals[(u, v)] = Fraction(F) / Fraction(T) if g.mode == EXACT else float(F) / float(T)
    return ResistanceReport(g.n, vals, backend=f"counts-{method}", mode=g.mode)


# ---------------------------------------------------------------------------
# ladder recurrences
# ---------------------------------------------------------------------------

SQRT3 = sqrt(3.0)


def ladder_trees_closed_form(n: int) -> float:
    return ((2 + SQRT3) ** n - (2 - SQRT3) ** n) / (2 * SQRT3)


def ladder_rung_resistance_closed_form(n: int) -> float:
    """``r_{L_n}(1, 2)`` in floating point."""
    p, q = (2 + SQRT3) ** n, (2 - SQRT3) ** n
    return (p * (SQRT3 - 1) + q * (SQRT3 + 1)) / (p - q)


def ladder_count_recurrence(n: int, check: bool = True) -> tuple[int, int]:
    """``(T_n, V_n)`` from ``(T, V) <- [[3, 1], [2, 1]] (T, V)`` starting at ``(1, 1)``.

    ``V_n`` is the number of 2-forests separating the two ends of a rung at an
    end of the ladder.  With ``check`` the closed forms are compared too.
    """
    if n < 1:
        raise ValueError("ladder needs n >= 1")
    T, V = 1, 1
    for _ in range(n - 1):
        T, V = 3 * T + V, 2 * T + V
    if check:
        tc = ladder_trees_closed_form(n)
        rc = ladder_rung_resistance_closed_form(n)
        if abs(tc - T) > 1e-9 * T or abs(rc - V / T) > 1e-12:
            raise ArithmeticError(f"closed forms disagree with the recurrence at n={n}")
    return T, V


LADDER_FIVE_MATRIX = (
    (2, 1, 1, 2, 0),
    (1, 2, 1, 2, 0),
    (1, 1, 1, 1, 0),
    (0, 0, 0, 3, 1),
    (0, 0, 0, 2, 1),
)


def ladder_five_sequence(n: int) -> tuple[int, int, int, int, int]:
    """``(F_n, F~_n, A_n, T_n, V_n)`` from the 5x5 integer recurrence, starting at ``(4, 3, 2, 4, 3)`` for n=2.

    ``F_n = F(1, 2n)``, ``F~_n = F(1, 2n-1)`` and ``A_n`` counts 2-forests of
    the ladder with its last rung contracted, separating 1 from that rung.
    """
    if n < 2:
        raise ValueError("sequence starts at n = 2")
    x = (4, 3, 2, 4, 3)
    for _ in range(n - 2):
        x = tuple(sum(c * xi for c, xi in zip(row, x)) for row in LADDER_FIVE_MATRIX)
    return x


# ---------------------------------------------------------------------------
# 2-separations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoSeparation:
    """Separator ``(i, j)`` with vertex sides and the edge indices on each side."""

    separator: tuple
    side1: frozenset
    side2: frozenset
    edges1: tuple
    edges2: tuple

    @classmethod
    def from_sides(cls, g: WeightedMultigraph, i: int, j: int, side1, side2=None) -> "TwoSeparation":
        """Edges inside ``side1`` go to G1 (including any i-j edges), the rest to G2."""
        check_vertex(g, i, j)
        s1 = frozenset(side1) | {i, j}
        s2 = frozenset(side2) | {i, j} if side2 is not None else (frozenset(range(g.n)) - s1) | {i, j}
        e1, e2 = [], []
        for idx, (a, b, _) in enumerate(g.edges):
            if a in s1 and b in s1:
                e1.append(idx)
            elif a in s2 and b in s2:
                e2.append(idx)
            else:
                raise GraphError(f"edge ({a}, {b}) crosses the separator")
        sep = cls((i, j), s1, s2, tuple(e1), tuple(e2))
        sep.validate(g)
        return sep

    def validate(self, g: WeightedMultigraph) -> None:
        i, j = self.separator
        if i == j:
            raise GraphError("separator vertices must differ; use cut_vertex_split for a single cut vertex")
        if self.side1 | self.side2 != frozenset(range(g.n)):
            raise GraphError("sides do not cover the vertex set")
        if self.side1 & self.side2 != {i, j}:
            raise GraphError("sides must meet exactly in the separator")
        if set(self.edges1) & set(self.edges2) or set(self.edges1) | set(self.edges2) != set(range(g.m)):
            raise GraphError("edge sets must partition E(G)")
        for side, idxs in ((self.side1, self.edges1), (self.side2, self.edges2)):
            for k in idxs:
                a, b, _ = g.edges[k]
                if a not in side or b not in side:
                    raise GraphError(f"edge ({a}, {b}) is not inside its side")

    def part(self, g: WeightedMultigraph, which: int):
        """Side graph with its own 0-based ids; returns (graph, old->new index)."""
        side = sorted(self.side1 if which == 1 else self.side2)
        idxs = self.edges1 if which == 1 else self.edges2
        index = {v: k for k, v in enumerate(side)}
        edges = tuple((index[g.edges[k][0]], index[g.edges[k][1]], g.edges[k][2]) for k in idxs)
        return WeightedMultigraph(len(side), edges, g.mode), index


def two_switch(g: WeightedMultigraph, sep: TwoSeparation) -> tuple[WeightedMultigraph, dict]:
    """Glue G2 back with its copies of ``i`` and ``j`` exchanged.

    Vertex ids are kept; the returned map sends each G2-side label to its
    label in ``G'`` (only ``i`` and ``j`` move).
    """
    sep.validate(g)
    i, j = sep.separator
    swap = {i: j, j: i}
    edges = list(g.edges)
    for k in sep.edges2:
        a, b, w = edges[k]
        edges[k] = (swap.get(a, a), swap.get(b, b), w)
    return WeightedMultigraph(g.n, tuple(edges), g.mode), {i: j, j: i}


def _tree_det(h):
    return determinant(delete_rows_cols(build_laplacian(h), [h.n - 1])) if h.n > 1 else one(h.mode)


def _forest_det(h, a, b):
    return determinant(delete_rows_cols(build_laplacian(h), [a, b]))


def point_pair_forests(h: WeightedMultigraph, a: int, b: int, c: int, method: str = "det"):
    """``F_H(a, {b, c})``.

    Sorting 2-forests by where the third vertex lands gives
    ``F(a,b) + F(a,c) - F(b,c) = 2 F_H(a, {b, c})``.  Contracting ``b`` and
    ``c`` instead would count 3-forests splitting all three vertices.
    """
    if method == "enum":
        return count_point_pair_2forests_enum(h, a, b, c)
    return (_forest_det(h, a, b) + _forest_det(h, a, c) - _forest_det(h, b, c)) / 2


def forests_across_separation(g: WeightedMultigraph, sep: TwoSeparation, u: int, v: int, method: str = "det"):
    """``F_G(u, v)`` for ``u`` strictly in G1 and ``v`` strictly in G2, assembled from the two sides."""
    sep.validate(g)
    i, j = sep.separator
    if u in (i, j) or v in (i, j):
        raise GraphError("u and v must not be separator vertices")
    if u not in sep.side1 or v not in sep.side2:
        raise GraphError("u must lie in side 1 and v in side 2")
    out = zero(g.mode)
    parts = []
    for which, x in ((1, u), (2, v)):
        h, idx = sep.part(g, which)
        hi, hj, hx = idx[i], idx[j], idx[x]
        hc, mp = contract_pair(h, hi, hj)
        parts.append(
            {
                "T": _tree_det(h),
                "Fc": _forest_det(hc, mp[hx], mp[hi]),
                "Fi": _forest_det(h, hx, hi),
                "Fj": _forest_det(h, hx, hj),
                "Fij": point_pair_forests(h, hx, hi, hj, method),
            }
        )
    p1, p2 = parts
    out += p1["Fc"] * p2["T"] + p2["Fc"] * p1["T"]
    out += p1["Fi"] * p2["Fj"] + p1["Fj"] * p2["Fi"]
    out -= 2 * p1["Fij"] * p2["Fij"]
    return _as_count(g, out)


def resistance_across_separation(g: WeightedMultigraph, sep: TwoSeparation, u: int, v: int, method: str = "det"):
    F = forests_across_separation(g, sep, u, v, method)
    T = count_spanning_trees_det(g)
    if g.mode == EXACT:
        return Fraction(F) / Fraction(T)
    return float(F) / float(T)


def ladder_separation(n: int) -> tuple[WeightedMultigraph, TwoSeparation]:
    """``L_n`` split at the rung (2n-3, 2n-2): G1 is ``L_{n-1}``, G2 is the last square."""
    from .families import ladder

    if n < 2:
        raise ValueError("need n >= 2")
    g = ladder(n)
    i, j = 2 * n - 4, 2 * n - 3
    side1 = range(0, 2 * n - 2)
    return g, TwoSeparation.from_sides(g, i, j, side1)


__all__ = [
    "ENUM_EDGE_CAP",
    "EnumerationLimitError",
    "ForestCounts",
    "TwoSeparation",
    "count_point_pair_2forests_enum",
    "count_separating_2forests",
    "count_separating_2forests_det",
    "count_separating_2forests_enum",
    "count_spanning_trees",
    "count_spanning_trees_det",
    "count_spanning_trees_enum",
    "forest_counts",
    "forests_across_separation",
    "induced_subgraph",
    "ladder_count_recurrence",
    "ladder_five_sequence",
    "ladder_separation",
    "point_pair_forests",
    "resistance_across_separation",
    "resistance_by_counts",
    "resistance_matrix_by_counts",
    "two_switch",
]
