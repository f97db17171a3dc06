"""Single-edge weight updates of a full resistance matrix (Yang-Klein recursion)."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import (
    EXACT,
    FLOAT,
    DisconnectedError,
    GraphError,
    WeightedMultigraph,
    as_scalar,
    check_connected,
    check_vertex,
    require_connected,
)
from .report import ResistanceReport


class SingularPerturbationError(ArithmeticError):
    """``1 + delta * Omega(i, j)`` vanished, or the update would disconnect the graph."""


@dataclass(frozen=True)
class OmegaMatrix:
    """Resistance matrix together with the graph it belongs to.

    ``matrix`` is a tuple of Fraction rows in exact mode and an ndarray in
    float mode.
    """

    matrix: object
    graph: WeightedMultigraph

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def mode(self) -> str:
        return self.graph.mode

    def __getitem__(self, pair):
        i, j = pair
        return self.matrix[i][j]

    def to_report(self, backend: str = "incremental") -> ResistanceReport:
        return ResistanceReport.from_matrix(self.matrix, backend=backend, mode=self.mode)

    def is_metric(self, tol=0) -> bool:
        # integer default keeps exact matrices in exact arithmetic
        n = self.n
        M = self.matrix
        for p in range(n):
            if M[p][p] != 0:
                return False
            for q in range(n):
                if abs(M[p][q] - M[q][p]) > tol:
                    return False
                for r in range(n):
                    if M[p][q] > M[p][r] + M[r][q] + tol:
                        return False
        return True


def _freeze(rows, mode):
    if mode == EXACT:
        return tuple(tuple(r) for r in rows)
    return np.asarray(rows, dtype=float)


def _reweight(g: WeightedMultigraph, i: int, j: int, w_old, w_new) -> WeightedMultigraph:
    """Change the conductance on one ``i-j`` edge from ``w_old`` to ``w_new``."""
    edges = list(g.edges)
    for k, (a, b, w) in enumerate(edges):
        if {a, b} == {i, j} and w == w_old:
            edges[k] = (a, b, w_new)
            return WeightedMultigraph(g.n, tuple(edges), g.mode)
    if w_old == 0:
        return WeightedMultigraph(g.n, tuple(edges) + ((i, j, w_new),), g.mode)
    raise GraphError(f"no edge ({i}, {j}) with conductance {w_old}")


def perturb_edge(omega: OmegaMatrix, i: int, j: int, w_old, w_new) -> OmegaMatrix:
    """Resistance matrix after the conductance of edge ``i-j`` changes from ``w_old`` to ``w_new``.

    ``w_old = 0`` adds a new edge and ``w_new = 0`` deletes one.  Deletions
    are rejected up front if they disconnect the graph.
    """
    g = omega.graph
    check_vertex(g, i, j)
    if i == j:
        raise GraphError("perturbed edge needs two distinct endpoints")
    w_old = as_scalar(w_old, g.mode)
    w_new = as_scalar(w_new, g.mode)
    if w_new < 0:
        raise GraphError("negative conductance")
    g2 = _reweight(g, i, j, w_old, w_new)
    delta = w_new - w_old
    if delta == 0:
        return OmegaMatrix(omega.matrix, g2)
    if delta < 0 and not check_connected(g2):
        raise SingularPerturbationError(f"removing conductance from ({i}, {j}) disconnects the graph")
    M = omega.matrix
    denom = 4 * (1 + delta * M[i][j])
    if denom == 0 or (g.mode == FLOAT and abs(denom) < 1e-12):
        raise SingularPerturbationError("1 + delta * Omega(i, j) vanishes")
    if g.mode == FLOAT:
        A = np.asarray(M, dtype=float)
        D = A[:, [i]] - A[:, [j]]
        P = D - D.T  # P[p, q] = O(p,i) - O(p,j) - O(q,i) + O(q,j)
        return OmegaMatrix(A - delta * P * P / denom, g2)
    n = g.n
    di = [M[p][i] - M[p][j] for p in range(n)]
    rows = [[M[p][q] - delta * (di[p] - di[q]) ** 2 / denom for q in range(n)] for p in range(n)]
    return OmegaMatrix(_freeze(rows, EXACT), g2)


def path_omega(n_vertices: int, ordering: str = "ladder-interleaved", mode: str = EXACT) -> OmegaMatrix:
    """Resistance matrix of a labelled path, from its piecewise closed form.

    ``natural`` is the path ``1-2-...-N``.  ``ladder-interleaved`` visits
    ``1, 3, ..., 2n-1, 2n, 2n-2, ..., 2``, so that adding the rungs
    ``(1,2), (3,4), ...`` turns it into the ladder.
    """
    from .families import path

    N = n_vertices
    g = path(N, labeling=ordering).to_mode(mode)
    cast = Fraction if mode == EXACT else float
    rows = [[cast(0)] * N for _ in range(N)]
    for p in range(1, N + 1):
        for q in range(1, N + 1):
            if p == q:
                continue
            if ordering == "natural":
                x = abs(p - q)
            elif ordering == "ladder-interleaved":
                if N % 2:
                    raise GraphError("ladder-interleaved ordering needs an even vertex count")
                x = Fraction(abs(p - q), 2) if (p + q) % 2 == 0 else N - (p + q) // 2
            else:
                raise GraphError(f"unknown ordering {ordering!r}")
            rows[p - 1][q - 1] = cast(x)
    return OmegaMatrix(_freeze(rows, mode), g)


def ladder_tracked_count(n: int) -> int:
    """Resistance values a single-pair incremental ladder build has to carry."""
    return (5 * n * n + 5 * n) // 2


def build_ladder_incrementally(n: int, order=None, mode: str = EXACT) -> tuple[OmegaMatrix, int]:
    """Ladder ``L_n`` from the interleaved path by adding rungs ``(2k-1, 2k)``, ``k < n``.

    ``order`` permutes the rungs (0-based rung indices); the result does not
    depend on it.
    """
    if n < 2:
        raise GraphError("ladder needs n >= 2")
    om = path_omega(2 * n, "ladder-interleaved", mode)
    rungs = list(range(n - 1)) if order is None else list(order)
    if sorted(rungs) != list(range(n - 1)):
        raise GraphError("order must permute the rungs 0..n-2")
    for k in rungs:
        om = perturb_edge(om, 2 * k, 2 * k + 1, 0, 1)
    return om, ladder_tracked_count(n)


def _spanning_tree(g: WeightedMultigraph):
    """BFS tree as (parent, parent-edge conductance, order); remaining edges listed separately."""
    adj = [[] for _ in range(g.n)]
    for k, (a, b, w) in enumerate(g.edges):
        if w != 0:
            adj[a].append((b, w, k))
            adj[b].append((a, w, k))
    parent = [-1] * g.n
    pw = [None] * g.n
    seen = [False] * g.n
    seen[0] = True
    used = set()
    order = [0]
    dq = deque([0])
    while dq:
        x = dq.popleft()
        for y, w, k in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y], pw[y] = x, w
                used.add(k)
                order.append(y)
                dq.append(y)
    rest = [e for k, e in enumerate(g.edges) if k not in used and e[2] != 0]
    return parent, pw, order, rest


def incremental_omega(g: WeightedMultigraph) -> OmegaMatrix:
    """Resistance matrix built from a spanning tree plus one perturbation per remaining edge."""
    require_connected(g)
    parent, pw, order, rest = _spanning_tree(g)
    n = g.n
    zero = Fraction(0) if g.mode == EXACT else 0.0
    rows = [[zero] * n for _ in range(n)]
    # tree resistances: r(x, y) = r(parent(y), x) + 1/w(y) for y added after x
    for pos, y in enumerate(order[1:], start=1):
        p = parent[y]
        leg = 1 / pw[y]
        for x in order[:pos]:
            rows[x][y] = rows[y][x] = rows[x][p] + leg if x != p else leg
    tree_edges = tuple((parent[y], y, pw[y]) for y in order[1:])
    om = OmegaMatrix(_freeze(rows, g.mode), WeightedMultigraph(n, tree_edges, g.mode))
    for a, b, w in rest:
        om = perturb_edge(om, a, b, 0, w)
    return om


def resistance_matrix_incremental(g: WeightedMultigraph) -> ResistanceReport:
    if not check_connected(g):
        raise DisconnectedError("graph is disconnected")
    return incremental_omega(g).to_report("incremental")
