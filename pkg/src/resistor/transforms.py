"""Equivalent-network rewriting: series, parallel, delta-Y, Y-delta, star-mesh, mesh-star.

The rewrites act on a :class:`Circuit`, which stores edge *resistances*
under arbitrary integer vertex ids so that vertices created by a delta-Y can
take fresh ids past the original range.  Every rewrite returns a
:class:`TransformStep` recording exactly what was removed and added; replaying
a trace on the starting circuit reproduces the final one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Optional

import networkx as nx

from .graph import EXACT, FLOAT, GraphError, WeightedMultigraph, format_scalar


class NotApplicableError(GraphError):
    """The requested rewrite's structural precondition does not hold."""


SERIES = "Series"
PARALLEL = "Parallel"
DELTA_Y = "DeltaY"
Y_DELTA = "YDelta"
STAR_MESH = "StarMesh"
MESH_STAR = "MeshStar"
CUT_SPLIT = "CutVertexSplit"


@dataclass(frozen=True)
class TransformStep:
    kind: str
    removed_vertices: tuple = ()
    removed_edges: tuple = ()  # (u, v, resistance)
    added_vertices: tuple = ()
    added_edges: tuple = ()

    def to_dict(self, offset: int = 0) -> dict:
        def edge(e):
            return {"u": e[0] + offset, "v": e[1] + offset, "r": format_scalar(e[2])}

        return {
            "kind": self.kind,
            "removed_vertices": [v + offset for v in self.removed_vertices],
            "removed_edges": [edge(e) for e in self.removed_edges],
            "added_vertices": [v + offset for v in self.added_vertices],
            "added_edges": [edge(e) for e in self.added_edges],
        }

    def to_line(self, offset: int = 0) -> str:
        def edges(es):
            return " ".join(f"{u + offset}-{v + offset}:{format_scalar(r)}" for u, v, r in es)

        parts = [self.kind]
        if self.removed_vertices:
            parts.append("-v[" + " ".join(str(v + offset) for v in self.removed_vertices) + "]")
        if self.added_vertices:
            parts.append("+v[" + " ".join(str(v + offset) for v in self.added_vertices) + "]")
        parts.append("-e[" + edges(self.removed_edges) + "]")
        parts.append("+e[" + edges(self.added_edges) + "]")
        return " ".join(parts)


def trace_to_text(trace, offset: int = 0) -> str:
    return "\n".join(step.to_line(offset) for step in trace)


def trace_to_json(trace, offset: int = 0, **extra) -> str:
    doc = dict(extra)
    doc["steps"] = [s.to_dict(offset) for s in trace]
    return json.dumps(doc, indent=2)


class Circuit:
    """Mutable resistor network used as a private working copy by the rewrites."""

    def __init__(self, mode: str = EXACT):
        self.mode = mode
        self.vertices: set[int] = set()
        self.edges: dict[int, tuple] = {}
        self.inc: dict[int, set[int]] = {}
        self._next_edge = 0
        self._next_vertex = 0

    # construction ---------------------------------------------------------

    @classmethod
    def from_graph(cls, g: WeightedMultigraph) -> "Circuit":
        c = cls(g.mode)
        for v in range(g.n):
            c.add_vertex(v)
        for u, v, w in g.edges:
            if w != 0:  # open circuit
                c.add_edge(u, v, 1 / w)
        return c

    def copy(self) -> "Circuit":
        c = Circuit(self.mode)
        c.vertices = set(self.vertices)
        c.edges = dict(self.edges)
        c.inc = {v: set(s) for v, s in self.inc.items()}
        c._next_edge = self._next_edge
        c._next_vertex = self._next_vertex
        return c

    def add_vertex(self, v: Optional[int] = None) -> int:
        if v is None:
            v = self._next_vertex
        if v in self.vertices:
            raise GraphError(f"vertex {v} already present")
        self.vertices.add(v)
        self.inc[v] = set()
        self._next_vertex = max(self._next_vertex, v + 1)
        return v

    def remove_vertex(self, v: int) -> None:
        if self.inc[v]:
            raise GraphError(f"vertex {v} still has edges")
        self.vertices.remove(v)
        del self.inc[v]

    def add_edge(self, u: int, v: int, r) -> int:
        if u == v:
            raise GraphError("self-loop")
        if self.mode == EXACT:
            if isinstance(r, float):
                raise GraphError("float resistance in an exact circuit")
            r = Fraction(r)
        else:
            r = float(r)
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = (u, v, r)
        self.inc[u].add(eid)
        self.inc[v].add(eid)
        return eid

    def remove_edge(self, eid: int) -> tuple:
        u, v, r = self.edges.pop(eid)
        self.inc[u].discard(eid)
        self.inc[v].discard(eid)
        return (u, v, r)

    # queries --------------------------------------------------------------

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for eid in self.inc[v]:
            a, b, _ = self.edges[eid]
            out.add(b if a == v else a)
        return out

    def edge_ids_between(self, u: int, v: int) -> list[int]:
        return sorted(e for e in self.inc[u] if v in self.edges[e][:2])

    def resistance_between(self, u: int, v: int):
        """Resistance of the single edge u-v (NotApplicable unless exactly one)."""
        ids = self.edge_ids_between(u, v)
        if len(ids) != 1:
            raise NotApplicableError(f"expected one edge between {u} and {v}, found {len(ids)}")
        return self.edges[ids[0]][2]

    def degree(self, v: int) -> int:
        return len(self.inc[v])

    def to_graph(self, order=None) -> tuple[WeightedMultigraph, dict]:
        """Conductance graph on ``order`` (default: sorted ids); returns it and id -> index."""
        if order is None:
            order = sorted(self.vertices)
        index = {v: k for k, v in enumerate(order)}
        edges = tuple((index[u], index[v], 1 / r) for u, v, r in self.edges.values())
        return WeightedMultigraph(len(order), edges, self.mode), index

    def edge_multiset(self) -> list:
        return sorted((min(u, v), max(u, v), r) for u, v, r in self.edges.values())

    def apply_step(self, step: TransformStep) -> None:
        """Replay a recorded step; the removed edges must be present exactly."""
        for u, v, r in step.removed_edges:
            for eid in self.edge_ids_between(u, v):
                if self.edges[eid][2] == r:
                    self.remove_edge(eid)
                    break
            else:
                raise GraphError(f"step {step.kind}: edge {u}-{v} with resistance {r} not present")
        for v in step.removed_vertices:
            self.remove_vertex(v)
        for v in step.added_vertices:
            self.add_vertex(v)
        for u, v, r in step.added_edges:
            self.add_edge(u, v, r)

    # rewrites (in place) ---------------------------------------------------

    def _one(self):
        return Fraction(1) if self.mode == EXACT else 1.0

    def series(self, mid: int, protected=()) -> TransformStep:
        if mid in protected:
            raise NotApplicableError(f"vertex {mid} is protected")
        ids = sorted(self.inc.get(mid, ()))
        if len(ids) != 2:
            raise NotApplicableError(f"series needs exactly two incident edges at {mid}, found {len(ids)}")
        ends = []
        total = 0 * self._one()
        for eid in ids:
            a, b, r = self.edges[eid]
            ends.append(b if a == mid else a)
            total += r
        if ends[0] == ends[1]:
            raise NotApplicableError(f"both edges at {mid} go to the same vertex")
        removed = tuple(self.remove_edge(e) for e in ids)
        self.remove_vertex(mid)
        self.add_edge(ends[0], ends[1], total)
        return TransformStep(SERIES, (mid,), removed, (), ((ends[0], ends[1], total),))

    def parallel(self, u: int, v: int) -> TransformStep:
        ids = self.edge_ids_between(u, v)
        if len(ids) < 2:
            raise NotApplicableError(f"parallel needs at least two edges between {u} and {v}")
        removed = tuple(self.remove_edge(e) for e in ids)
        g = sum((1 / r for _, _, r in removed), 0 * self._one())
        r = 1 / g
        self.add_edge(u, v, r)
        return TransformStep(PARALLEL, (), removed, (), ((u, v, r),))

    def delta_y(self, tri, center: Optional[int] = None) -> TransformStep:
        n1, n2, n3 = tri
        if len({n1, n2, n3}) != 3:
            raise NotApplicableError("triangle needs three distinct vertices")
        # the leg at a corner is the product of its two triangle edges over the perimeter
        sides = {}
        for a, b in ((n2, n3), (n1, n3), (n1, n2)):
            ids = self.edge_ids_between(a, b)
            if len(ids) != 1:
                raise NotApplicableError(f"delta-Y needs one edge {a}-{b}, found {len(ids)}")
            sides[(a, b)] = ids[0]
        RA = self.edges[sides[(n2, n3)]][2]
        RB = self.edges[sides[(n1, n3)]][2]
        RC = self.edges[sides[(n1, n2)]][2]
        S = RA + RB + RC
        legs = (RB * RC / S, RA * RC / S, RA * RB / S)
        removed = tuple(self.remove_edge(e) for e in sides.values())
        c = self.add_vertex(center)
        added = tuple((c, x, leg) for x, leg in zip((n1, n2, n3), legs))
        for e in added:
            self.add_edge(*e)
        return TransformStep(DELTA_Y, (), removed, (c,), added)

    def _star(self, center: int, min_deg: int, exact_deg: Optional[int] = None):
        ids = sorted(self.inc.get(center, ()))
        if exact_deg is not None and len(ids) != exact_deg:
            raise NotApplicableError(f"vertex {center} has {len(ids)} edges, need {exact_deg}")
        if len(ids) < min_deg:
            raise NotApplicableError(f"vertex {center} has {len(ids)} edges, need >= {min_deg}")
        legs = []
        for eid in ids:
            a, b, r = self.edges[eid]
            legs.append((b if a == center else a, r))
        if len({x for x, _ in legs}) != len(legs):
            raise NotApplicableError(f"parallel edges at {center}; merge them first")
        return ids, legs

    def y_delta(self, center: int, protected=()) -> TransformStep:
        if center in protected:
            raise NotApplicableError(f"vertex {center} is protected")
        ids, legs = self._star(center, 3, 3)
        (x1, R1), (x2, R2), (x3, R3) = legs
        P = R1 * R2 + R2 * R3 + R1 * R3
        removed = tuple(self.remove_edge(e) for e in ids)
        self.remove_vertex(center)
        added = ((x2, x3, P / R1), (x1, x3, P / R2), (x1, x2, P / R3))
        for e in added:
            self.add_edge(*e)
        return TransformStep(Y_DELTA, (center,), removed, (), added)

    def star_mesh(self, center: int, protected=(), min_degree: int = 3) -> TransformStep:
        if center in protected:
            raise NotApplicableError(f"vertex {center} is protected")
        ids, legs = self._star(center, min_degree)
        inv_sum = sum((1 / r for _, r in legs), 0 * self._one())
        removed = tuple(self.remove_edge(e) for e in ids)
        self.remove_vertex(center)
        added = tuple((xu, xv, Ru * Rv * inv_sum) for (xu, Ru), (xv, Rv) in combinations(legs, 2))
        for e in added:
            self.add_edge(*e)
        return TransformStep(STAR_MESH, (center,), removed, (), added)

    def mesh_star(self, nodes, center: Optional[int] = None) -> TransformStep:
        nodes = tuple(nodes)
        N = len(nodes)
        if N < 3:
            raise NotApplicableError("mesh-star needs at least three nodes")
        R = {}
        ids = []
        for a, b in combinations(nodes, 2):
            e = self.edge_ids_between(a, b)
            if len(e) != 1:
                raise NotApplicableError(f"mesh needs one edge {a}-{b}, found {len(e)}")
            ids.append(e[0])
            R[frozenset((a, b))] = self.edges[e[0]][2]
        if N == 3:
            return self.delta_y(nodes, center)
        if not mesh_star_admissible({k: v for k, v in R.items()}, nodes):
            raise NotApplicableError("mesh resistances admit no equivalent star")
        # R_uv R_uw / R_vw = R_u^2 S with S the sum of leg conductances
        q = {}
        for u in nodes:
            v, w = [x for x in nodes if x != u][:2]
            q[u] = R[frozenset((u, v))] * R[frozenset((u, w))] / R[frozenset((v, w))]
        roots = {u: _sqrt(q[u], self.mode) for u in nodes}
        sqrtS = sum((1 / roots[u] for u in nodes), 0 * self._one())
        legs = {u: roots[u] / sqrtS for u in nodes}
        removed = tuple(self.remove_edge(e) for e in ids)
        c = self.add_vertex(center)
        added = tuple((c, u, legs[u]) for u in nodes)
        for e in added:
            self.add_edge(*e)
        return TransformStep(MESH_STAR, (), removed, (c,), added)

    def prune(self, keep) -> Optional[TransformStep]:
        """Drop every block not on a path between the vertices in ``keep``."""
        keep = set(keep)
        G = nx.Graph()
        G.add_nodes_from(self.vertices)
        G.add_edges_from((u, v) for u, v, _ in self.edges.values())
        relevant = _relevant_vertices(G, keep)
        drop = self.vertices - relevant
        if not drop:
            return None
        removed = []
        for v in sorted(drop):
            for eid in sorted(self.inc[v]):
                removed.append(self.remove_edge(eid))
        for v in sorted(drop):
            self.remove_vertex(v)
        return TransformStep(CUT_SPLIT, tuple(sorted(drop)), tuple(removed), (), ())


def _relevant_vertices(G: nx.Graph, keep: set) -> set:
    # vertices lying in a block on some path between kept vertices
    comp = nx.node_connected_component(G, next(iter(keep)))
    H = G.subgraph(comp)
    if len(keep) == 1 or H.number_of_edges() == 0:
        return set(keep)
    blocks = [frozenset(b) for b in nx.biconnected_components(H)]
    tree = nx.Graph()
    for k, b in enumerate(blocks):
        tree.add_node(("b", k))
        for v in b:
            tree.add_edge(("b", k), ("v", v))
    ks = sorted(keep)
    anchors = [("v", v) for v in ks]
    out = set(keep)
    for a, b in combinations(anchors, 2):
        for node in nx.shortest_path(tree, a, b):
            if node[0] == "b":
                out |= blocks[node[1]]
    return out


def _sqrt(x, mode):
    if mode == FLOAT:
        return float(x) ** 0.5
    x = Fraction(x)
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p != x.numerator or q * q != x.denominator:
        raise NotApplicableError("equivalent star has irrational resistances; use float mode")
    return Fraction(p, q)


def mesh_star_admissible(R: dict, nodes) -> bool:
    """Every product of opposite mesh edges must agree on each 4-subset.

    For four nodes labelled with edges A = 1-4, B = 2-4, C = 1-2, D = 2-3,
    E = 3-4, F = 1-3 this is ``AD = CE = BF``.
    """
    for a, b, c, d in combinations(nodes, 4):
        p1 = R[frozenset((a, b))] * R[frozenset((c, d))]
        p2 = R[frozenset((a, c))] * R[frozenset((b, d))]
        p3 = R[frozenset((a, d))] * R[frozenset((b, c))]
        if not (_close(p1, p2) and _close(p2, p3)):
            return False
    return True


def _close(x, y):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y))


def mesh4_admissible(A, B, C, D, E, F) -> bool:
    """``AD = CE = BF`` with the four-node mesh labelling of :func:`mesh_star_admissible`."""
    return _close(A * D, C * E) and _close(C * E, B * F)


# ---------------------------------------------------------------------------
# functional wrappers: copy, rewrite, return (circuit, step)
# ---------------------------------------------------------------------------

def as_circuit(g) -> Circuit:
    return Circuit.from_graph(g) if isinstance(g, WeightedMultigraph) else g


def series_reduce(g, mid: int):
    c = as_circuit(g).copy()
    return c, c.series(mid)


def parallel_reduce(g, u: int, v: int):
    c = as_circuit(g).copy()
    return c, c.parallel(u, v)


def delta_y(g, tri):
    c = as_circuit(g).copy()
    return c, c.delta_y(tri)


def y_delta(g, center: int):
    c = as_circuit(g).copy()
    return c, c.y_delta(center)


def star_mesh(g, center: int):
    c = as_circuit(g).copy()
    return c, c.star_mesh(center)


def mesh_star(g, nodes):
    c = as_circuit(g).copy()
    return c, c.mesh_star(nodes)


def is_cut_vertex(g: WeightedMultigraph, v: int) -> bool:
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from((a, b) for a, b, w in g.edges if w != 0)
    return v in set(nx.articulation_points(G))


def cut_vertex_split(g: WeightedMultigraph, v: int) -> list[tuple[WeightedMultigraph, list[int]]]:
    """Pieces ``V(C) + {v}`` for each component ``C`` of ``G - v``.

    Each entry is ``(subgraph, vertices)`` with ``vertices[k]`` the original id
    of subgraph vertex ``k``; ``v`` always comes first.
    """
    if not is_cut_vertex(g, v):
        raise NotApplicableError(f"vertex {v} is not a cut vertex")
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from((a, b) for a, b, w in g.edges if w != 0)
    G.remove_node(v)
    out = []
    for comp in sorted(nx.connected_components(G), key=min):
        verts = [v] + sorted(comp)
        index = {x: k for k, x in enumerate(verts)}
        edges = tuple((index[a], index[b], w) for a, b, w in g.edges if a in index and b in index)
        out.append((WeightedMultigraph(len(verts), edges, g.mode), verts))
    return out


# ---------------------------------------------------------------------------
# two-terminal driver
# ---------------------------------------------------------------------------

@dataclass
class Reduction:
    resistance: Optional[object]
    trace: list
    reduced: bool
    circuit: Circuit
    steps_used: int = 0


def _merge_all_parallel(c: Circuit, trace: list) -> bool:
    changed = False
    for v in sorted(c.vertices):
        if v not in c.vertices:
            continue
        for x in sorted(c.neighbors(v)):
            if x > v and len(c.edge_ids_between(v, x)) > 1:
                trace.append(c.parallel(v, x))
                changed = True
    return changed


def _series_pass(c: Circuit, trace: list, protected) -> bool:
    changed = False
    for v in sorted(c.vertices):
        if v in protected or v not in c.vertices:
            continue
        if c.degree(v) == 2 and len(c.neighbors(v)) == 2:
            trace.append(c.series(v, protected))
            changed = True
    return changed


def reduce_two_terminal(
    g, s: int, t: int, budget_factor: int = 50, use_star_mesh: bool = False, trace: Optional[list] = None
) -> Reduction:
    """Greedy reduction to a single s-t edge.

    Order of preference: parallel merges, series reductions, pruning of blocks
    off every s-t path, Y-delta at the lowest-id degree-3 vertex, then delta-Y on
    a triangle at the lowest-degree inner vertex.  ``use_star_mesh`` adds star-mesh
    elimination as a last resort, which always finishes.  When the budget of
    ``budget_factor * |E|`` rewrites runs out, or the vertex plus edge count has
    not dropped for ``3 |V| + 10`` rewrites, the partial trace is returned with
    ``reduced=False``.
    """
    c = as_circuit(g).copy()
    if s == t:
        raise GraphError("terminals must differ")
    if s not in c.vertices or t not in c.vertices:
        raise GraphError("terminal not in circuit")
    trace = [] if trace is None else trace
    protected = {s, t}
    budget = budget_factor * max(1, len(c.edges))
    tabu: Optional[int] = None
    used = 0
    # give up early once the vertex + edge count stops falling
    best, since = len(c.vertices) + len(c.edges), 0
    patience = 3 * len(c.vertices) + 10
    while used < budget and since < patience:
        used += 1
        size = len(c.vertices) + len(c.edges)
        if size < best:
            best, since = size, 0
        else:
            since += 1
        if _merge_all_parallel(c, trace):
            continue
        if _series_pass(c, trace, protected):
            continue
        step = c.prune(protected)
        if step is not None:
            trace.append(step)
            continue
        if c.vertices == protected and len(c.edges) == 1:
            r = next(iter(c.edges.values()))[2]
            return Reduction(r, trace, True, c, used)
        if len(c.edges) == 0:
            break
        cands = sorted(
            v for v in c.vertices if v not in protected and v != tabu and c.degree(v) == 3 and len(c.neighbors(v)) == 3
        )
        if cands:
            trace.append(c.y_delta(cands[0], protected))
            tabu = None
            continue
        if use_star_mesh:
            inner = sorted((c.degree(v), v) for v in c.vertices if v not in protected)
            if inner:
                trace.append(c.star_mesh(inner[0][1], protected, min_degree=1))
                tabu = None
                continue
        step = _delta_y_at_hub(c, protected, tabu)
        if step is None:
            break
        trace.append(step)
        tabu = step.added_vertices[0]
    return Reduction(None, trace, False, c, used)


def _delta_y_at_hub(c: Circuit, protected=(), tabu=None, prefer: str = "min") -> Optional[TransformStep]:
    # a delta-Y at v lowers deg(v) by one, so aiming at a low-degree inner
    # vertex brings it to degree 3 where Y-delta removes it
    inner = [v for v in c.vertices if v not in protected and v != tabu]
    sign = 1 if prefer == "min" else -1
    order = sorted(inner, key=lambda v: (sign * c.degree(v), v)) + sorted(protected)
    for v in order:
        nb = sorted(c.neighbors(v))
        for a, b in combinations(nb, 2):
            if b in c.neighbors(a):
                try:
                    return c.delta_y((v, a, b))
                except NotApplicableError:
                    continue
    return None


# ---------------------------------------------------------------------------
# Algorithm: ladder reduction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LadderState:
    """Iteration ``i``: triangle sides ``a``, ``b`` and tail ``t``; ``a = x/d`` unreduced, ``b = (x+1)/d``."""

    i: int
    a: object
    b: object
    t: Optional[object]
    x: int
    d: int


@dataclass
class LadderResult:
    states: list
    r_1_2: object
    r_1_2n: object
    r_1_2nm1: object
    trace: list


def ladder_reduction(n: int, mode: str = EXACT) -> LadderResult:
    """Reduce the unit ladder ``L_n`` by repeated delta-Y plus series, tracking ``(a_i, b_i, t_i)``.

    Labels are 1-based in the description: after eliminating vertex 2, vertex
    1 meets 3 with ``a_0 = 1`` and 4 with ``b_0 = 2``.  Iteration ``i``
    applies delta-Y to the triangle (V, 2i+1, 2i+2) and series-eliminates both
    rung ends, leaving a tail ``t_i``.  After ``n - 2`` iterations the last
    rung is reached; one more delta-Y yields the terminal legs, so
    ``r(1, 2n-1) = sum t + leg(2n-1)`` and ``r(2n-1, 2n) = r(1, 2)`` by symmetry.
    """
    from .families import ladder

    if n < 2:
        raise ValueError("ladder reduction needs n >= 2")
    g = ladder(n).to_mode(mode)
    c = Circuit.from_graph(g)
    trace = [c.series(1)]
    apex = 0
    x, d = 1, 1
    states = [LadderState(0, c.resistance_between(0, 2), c.resistance_between(0, 3), None, x, d)]
    tails = []
    for i in range(1, n - 1):
        top, bot = 2 * i, 2 * i + 1  # ids of labels 2i+1, 2i+2
        step = c.delta_y((apex, top, bot))
        trace.append(step)
        center = step.added_vertices[0]
        tails.append(step.added_edges[0][2])
        trace.append(c.series(top))
        trace.append(c.series(bot))
        apex = center
        x, d = 3 * x + 1 + d, 2 * x + 1 + d
        a = c.resistance_between(apex, top + 2)
        b = c.resistance_between(apex, bot + 2)
        states.append(LadderState(i, a, b, tails[-1], x, d))
    top, bot = 2 * n - 2, 2 * n - 1
    step = c.delta_y((apex, top, bot))
    trace.append(step)
    t_last, leg_top, leg_bot = (e[2] for e in step.added_edges)
    tail_sum = sum(tails, 0 * t_last) + t_last
    r_top = tail_sum + leg_top
    r_bot = tail_sum + leg_bot
    return LadderResult(states, leg_top + leg_bot, r_bot, r_top, trace)


def ladder_x_closed_form(i: int) -> float:
    s = 3 ** 0.5
    return ((3 - s) * (2 - s) ** (i + 1) + (3 + s) * (2 + s) ** (i + 1) - 6) / 12


# ---------------------------------------------------------------------------
# Algorithm: straight linear 3-tree
# ---------------------------------------------------------------------------

@dataclass
class Linear3TreeResult:
    resistance: object
    trace: list
    cycles: list  # per cycle: the four steps of that cycle


def linear3tree_cycle(c: Circuit, p: int, a: int, b: int, cc: int, d: int) -> tuple[int, list]:
    """One delta-Y / Y-delta / delta-Y / Y-delta round; returns the new terminal and its steps."""
    steps = [c.delta_y((p, a, b))]
    star = steps[0].added_vertices[0]
    steps.append(c.y_delta(a))
    for x, y in ((cc, d),):
        if len(c.edge_ids_between(x, y)) > 1:
            steps.append(c.parallel(x, y))
    steps.append(c.delta_y((p, star, cc)))
    ast = steps[-1].added_vertices[0]
    steps.append(c.y_delta(star))
    for x, y in ((b, d), (ast, b), (ast, d)):
        if len(c.edge_ids_between(x, y)) > 1:
            steps.append(c.parallel(x, y))
    return ast, steps


def linear3tree_reduction(n: int, mode: str = EXACT) -> Linear3TreeResult:
    """``r(1, n)`` on the unit straight linear 3-tree by repeated four-step rounds.

    Each round strips one tetrahedron off the front, leaving vertex 1 on a
    pendant chain, until a single tetrahedron remains; the generic driver
    then finishes.
    """
    from .families import linear_ktree

    if n < 4:
        raise ValueError("linear 3-tree reduction needs n >= 4")
    c = Circuit.from_graph(linear_ktree(n, 3).to_mode(mode))
    trace: list = []
    cycles = []
    p = 0
    a, b, cc = 1, 2, 3
    while cc + 1 < n:
        d = cc + 1
        p, steps = linear3tree_cycle(c, p, a, b, cc, d)
        trace.extend(steps)
        cycles.append(steps)
        a, b, cc = b, cc, d
    red = reduce_two_terminal(c, 0, n - 1, trace=trace)
    if not red.reduced:
        raise RuntimeError("final tetrahedron did not reduce")
    return Linear3TreeResult(red.resistance, red.trace, cycles)


# ---------------------------------------------------------------------------
# Algorithm: triangular grid
# ---------------------------------------------------------------------------

@dataclass
class TriGrid:
    """Weighted triangular grid on rows ``0..rows`` with pendant tails at the corners.

    ``edges`` maps ``frozenset({(r, k), (r', k')})`` to a resistance.  ``tails``
    holds the accumulated pendant resistance for corners ``"a"`` (top),
    ``"b"`` (bottom-left) and ``"c"`` (bottom-right).
    """

    rows: int
    edges: dict
    tails: dict = field(default_factory=dict)
    mode: str = EXACT

    @classmethod
    def from_graph(cls, g: WeightedMultigraph, rows: int) -> "TriGrid":
        from .families import triangular_grid_layout

        lay = triangular_grid_layout(rows)
        pos = {v: rc for rc, v in lay.coords.items()}
        if g.n != len(pos):
            raise NotApplicableError(f"{g.n} vertices do not form a triangular grid with {rows} rows")
        edges = {}
        for u, v, w in g.edges:
            key = frozenset((pos[u], pos[v]))
            if key in edges:
                raise NotApplicableError("parallel edges in a triangular grid")
            edges[key] = 1 / w
        if set(edges) != _trigrid_edge_keys(rows):
            raise NotApplicableError("edge set is not a triangular grid")
        zero = Fraction(0) if g.mode == EXACT else 0.0
        return cls(rows, edges, {"a": zero, "b": zero, "c": zero}, g.mode)

    def corner_resistance(self, first: str = "a", second: str = "b"):
        """Only defined once the grid has shrunk to a single vertex."""
        if self.rows != 0:
            raise ValueError("grid not fully reduced")
        return self.tails[first] + self.tails[second]


def _trigrid_edge_keys(rows: int) -> set:
    keys = set()
    for r in range(rows + 1):
        for k in range(r + 1):
            if k < r:
                keys.add(frozenset(((r, k), (r, k + 1))))
            if r < rows:
                keys.add(frozenset(((r, k), (r + 1, k))))
                keys.add(frozenset(((r, k), (r + 1, k + 1))))
    return keys


def triangular_grid_reduction(grid) -> tuple[TriGrid, list]:
    """One pass: delta-Y on every upright triangle, series on the non-corner
    boundary, Y-delta on the interior.  The star centres form a weighted grid
    with one fewer row; the corner legs join the pendant tails.
    """
    if isinstance(grid, WeightedMultigraph):
        rows = _rows_for(grid.n)
        grid = TriGrid.from_graph(grid, rows)
    m = grid.rows
    if m < 1:
        raise NotApplicableError("nothing left to reduce")
    c = Circuit(grid.mode)
    ids = {}
    for r in range(m + 1):
        for k in range(r + 1):
            ids[(r, k)] = c.add_vertex(r * (r + 1) // 2 + k)
    for key, R in grid.edges.items():
        p, q = sorted(key)
        c.add_edge(ids[p], ids[q], R)
    trace = []
    centers = {}
    for r in range(m):
        for k in range(r + 1):
            step = c.delta_y((ids[(r, k)], ids[(r + 1, k)], ids[(r + 1, k + 1)]))
            trace.append(step)
            centers[(r, k)] = step.added_vertices[0]
    corners = {"a": (0, 0), "b": (m, 0), "c": (m, m)}
    corner_ids = {ids[p] for p in corners.values()}
    for (r, k), v in ids.items():
        if v in corner_ids:
            continue
        on_boundary = k == 0 or k == r or r == m
        if on_boundary:
            trace.append(c.series(v))
    for (r, k), v in ids.items():
        if v in corner_ids:
            continue
        if not (k == 0 or k == r or r == m):
            trace.append(c.y_delta(v))
    tails = dict(grid.tails)
    for name, p in corners.items():
        v = ids[p]
        (eid,) = c.inc[v]
        tails[name] = tails[name] + c.edges[eid][2]
    new_pos = {cid: rc for rc, cid in centers.items()}
    new_edges = {}
    for u, v, R in c.edges.values():
        if u in new_pos and v in new_pos:
            key = frozenset((new_pos[u], new_pos[v]))
            if key in new_edges:  # never happens on a grid, kept for safety
                new_edges[key] = 1 / (1 / new_edges[key] + 1 / R)
            else:
                new_edges[key] = R
    if new_edges and set(new_edges) != _trigrid_edge_keys(m - 1):
        raise RuntimeError("pass did not produce a triangular grid")
    return TriGrid(m - 1, new_edges, tails, grid.mode), trace


def _rows_for(nv: int) -> int:
    r = 0
    while (r + 1) * (r + 2) // 2 < nv:
        r += 1
    if (r + 1) * (r + 2) // 2 != nv:
        raise NotApplicableError(f"{nv} vertices do not form a triangular grid")
    return r


def triangular_grid_corner_resistance(rows: int, mode: str = EXACT):
    """``r(a, b)`` between the top and bottom-left corners of the unit ``T_rows``."""
    from .families import triangular_grid

    grid = TriGrid.from_graph(triangular_grid(rows).to_mode(mode), rows)
    trace = []
    while grid.rows > 0:
        grid, steps = triangular_grid_reduction(grid)
        trace.extend(steps)
    return grid.corner_resistance("a", "b"), trace


def harmonic_lower_bound(rows: int) -> Fraction:
    """``(1/2)(1 + 1/2 + ... + 1/rows)``: shorting every horizontal edge of ``T_rows``."""
    return Fraction(1, 2) * sum(Fraction(1, k) for k in range(1, rows + 1))
