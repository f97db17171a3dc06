"""Generators for the named graph families, using their customary 1-based labelings.

Label ``k`` in a drawing becomes vertex id ``k - 1``.  All graphs are
unit-conductance and exact unless converted afterwards.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional, Sequence

from .graph import EXACT, GraphError, WeightedMultigraph, check_connected


class FamilyError(GraphError):
    pass


def _unit(n, pairs_1based, mode=EXACT):
    return WeightedMultigraph(n, tuple((u - 1, v - 1, 1) for u, v in pairs_1based), mode)


def _need(cond: bool, msg: str):
    if not cond:
        raise FamilyError(msg)


def path(n: int, labeling: str = "natural") -> WeightedMultigraph:
    """``P_n``.  ``labeling='ladder-interleaved'`` visits 1, 3, ..., 2k-1, 2k, 2k-2, ..., 2."""
    _need(n >= 1, "path needs n >= 1")
    if labeling == "natural":
        order = list(range(1, n + 1))
    elif labeling == "ladder-interleaved":
        _need(n % 2 == 0 and n >= 2, "ladder-interleaved path needs an even vertex count")
        order = list(range(1, n, 2)) + list(range(n, 0, -2))
    else:
        raise FamilyError(f"unknown path labeling {labeling!r}")
    return _unit(n, zip(order, order[1:]))


def cycle(n: int) -> WeightedMultigraph:
    _need(n >= 3, "cycle needs n >= 3")
    return _unit(n, [(i, i % n + 1) for i in range(1, n + 1)])


def complete(n: int) -> WeightedMultigraph:
    _need(n >= 2, "complete graph needs n >= 2")
    return _unit(n, combinations(range(1, n + 1), 2))


def ladder(n: int) -> WeightedMultigraph:
    """``L_n``: 2n vertices, rungs (2k-1, 2k), rails (2k-1, 2k+1) and (2k, 2k+2)."""
    _need(n >= 1, "ladder needs n >= 1")
    pairs = [(2 * k - 1, 2 * k) for k in range(1, n + 1)]
    for k in range(1, n):
        pairs += [(2 * k - 1, 2 * k + 1), (2 * k, 2 * k + 2)]
    return _unit(2 * n, sorted(pairs))


def fan(n: int) -> WeightedMultigraph:
    """``F_n``: path 1..n with every vertex joined to the hub n+1."""
    _need(n >= 1, "fan needs n >= 1")
    pairs = [(i, i + 1) for i in range(1, n)] + [(i, n + 1) for i in range(1, n + 1)]
    return _unit(n + 1, pairs)


def wheel(n: int) -> WeightedMultigraph:
    """``W_n``: cycle 1..n with every vertex joined to the hub n+1."""
    _need(n >= 3, "wheel needs n >= 3")
    pairs = [(i, i % n + 1) for i in range(1, n + 1)] + [(i, n + 1) for i in range(1, n + 1)]
    return _unit(n + 1, pairs)


def linear_ktree(n: int, k: int, straight: bool = True) -> WeightedMultigraph:
    """Straight linear k-tree: i ~ j whenever 1 <= |i - j| <= k."""
    _need(k >= 1, "k must be >= 1")
    _need(n >= k + 1, "a k-tree needs at least k+1 vertices")
    if not straight:
        raise FamilyError("only straight linear k-trees are generated; use bent_2tree for bends")
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, min(n, i + k) + 1)]
    return _unit(n, pairs)


def straight_2tree(n: int) -> WeightedMultigraph:
    """``S_n``: i ~ i+1 and i ~ i+2."""
    _need(n >= 3, "straight 2-tree needs n >= 3")
    return linear_ktree(n, 2)


def validate_bends(n: int, bends: Sequence[int]) -> tuple:
    bends = tuple(sorted(bends))
    for k in bends:
        _need(3 <= k <= n - 2, f"bend at {k} must satisfy 3 <= k <= n-2")
    for a, b in zip(bends, bends[1:]):
        _need(b - a >= 2, f"bends at {a} and {b} must be at least 2 apart")
    return bends


def bent_2tree(n: int, bends: Sequence[int]) -> WeightedMultigraph:
    """Straight 2-tree with edge (k, k+2) replaced by (k-1, k+2) at each bend ``k``."""
    _need(n >= 5, "a bent 2-tree needs n >= 5")
    bends = validate_bends(n, bends)
    edges = {frozenset((i, j)) for i in range(1, n + 1) for j in (i + 1, i + 2) if j <= n}
    for k in bends:
        edges.discard(frozenset((k, k + 2)))
        edges.add(frozenset((k - 1, k + 2)))
    return _unit(n, sorted(tuple(sorted(e)) for e in edges))


def cartesian_product(g: WeightedMultigraph, h: WeightedMultigraph) -> WeightedMultigraph:
    """``g □ h`` with vertex ``(i, j)`` numbered ``i * h.n + j``."""
    if g.mode != h.mode:
        raise FamilyError("product factors must share a numeric mode")
    edges = []
    for i in range(g.n):
        for a, b, w in h.edges:
            edges.append((i * h.n + a, i * h.n + b, w))
    for a, b, w in g.edges:
        for j in range(h.n):
            edges.append((a * h.n + j, b * h.n + j, w))
    return WeightedMultigraph(g.n * h.n, tuple(edges), g.mode)


def grid(n: int, m: int) -> WeightedMultigraph:
    _need(n >= 1 and m >= 1 and n * m >= 2, "grid needs at least two vertices")
    return cartesian_product(path(n), path(m))


def block_tower(n: int) -> WeightedMultigraph:
    """``C_4 □ P_n``: layer l (1-based) holds vertices 4l-3 .. 4l in cycle order."""
    _need(n >= 1, "block tower needs n >= 1")
    return cartesian_product(path(n), cycle(4))


@dataclass(frozen=True)
class FlowerLayout:
    """Where things sit in a generated flower.

    ``junctions[i]`` is the vertex shared by petals ``i`` and ``i+1``
    (cyclically); ``petals[i]`` lists all vertices of petal ``i``.
    """

    n: int
    junctions: tuple
    petals: tuple


def generalized_flower(n: int, base: WeightedMultigraph, x: int, y: int) -> tuple[WeightedMultigraph, FlowerLayout]:
    """``F_n(G, x, y)``: n copies of ``base`` glued in a ring, x of copy i to y of copy i+1."""
    _need(n >= 3, "flower needs n >= 3")
    _need(x != y and 0 <= x < base.n and 0 <= y < base.n, "x and y must be distinct base vertices")
    junction = list(range(n))  # junction i == x of petal i == y of petal i+1
    next_id = n
    petals = []
    edges = []
    for i in range(n):
        ids = {}
        for v in range(base.n):
            if v == x:
                ids[v] = junction[i]
            elif v == y:
                ids[v] = junction[(i - 1) % n]
            else:
                ids[v] = next_id
                next_id += 1
        petals.append(tuple(sorted(ids.values())))
        edges += [(ids[a], ids[b], w) for a, b, w in base.edges]
    g = WeightedMultigraph(next_id, tuple(edges), base.mode)
    return g, FlowerLayout(n, tuple(junction), tuple(petals))


def complete_flower(n: int, m: int) -> tuple[WeightedMultigraph, FlowerLayout]:
    _need(m >= 3, "complete flower needs m >= 3")
    return generalized_flower(n, complete(m), 1, 0)


@dataclass(frozen=True)
class TriangularLayout:
    """Lattice position of every vertex: ``coords[(row, k)]`` with ``0 <= k <= row``."""

    rows: int
    coords: dict

    @property
    def corners(self) -> tuple:
        n = self.rows
        return self.coords[(0, 0)], self.coords[(n, 0)], self.coords[(n, n)]


def triangular_grid_layout(rows: int) -> TriangularLayout:
    _need(rows >= 1, "triangular grid needs at least one row")
    coords = {}
    for r in range(rows + 1):
        for k in range(r + 1):
            coords[(r, k)] = r * (r + 1) // 2 + k
    return TriangularLayout(rows, coords)


def triangular_grid(rows: int) -> WeightedMultigraph:
    """``T_n``: rows 0..n, vertex (r, k) joined to (r, k+1), (r+1, k), (r+1, k+1).

    The top corner ``a`` is vertex 1 and the bottom-left corner ``b`` is the
    first vertex of the last row.
    """
    lay = triangular_grid_layout(rows)
    c = lay.coords
    pairs = []
    for (r, k), v in c.items():
        if k < r:
            pairs.append((v, c[(r, k + 1)]))
        if r < rows:
            pairs.append((v, c[(r + 1, k)]))
            pairs.append((v, c[(r + 1, k + 1)]))
    return WeightedMultigraph(len(c), tuple((u, v, 1) for u, v in pairs))


def triangular_corners(rows: int) -> tuple[int, int]:
    """0-based ids of the corners ``a`` (top) and ``b`` (bottom-left)."""
    return 0, rows * (rows + 1) // 2


# ---------------------------------------------------------------------------
# spec objects
# ---------------------------------------------------------------------------

_REGISTRY: dict[str, tuple[Callable, tuple]] = {
    "path": (path, ("n",)),
    "cycle": (cycle, ("n",)),
    "complete": (complete, ("n",)),
    "ladder": (ladder, ("n",)),
    "fan": (fan, ("n",)),
    "wheel": (wheel, ("n",)),
    "straight2tree": (straight_2tree, ("n",)),
    "bent2tree": (bent_2tree, ("n", "bends")),
    "linearktree": (linear_ktree, ("n", "k")),
    "flower": (lambda n, m: complete_flower(n, m)[0], ("n", "m")),
    "trigrid": (triangular_grid, ("rows",)),
    "grid": (grid, ("n", "m")),
    "blocktower": (block_tower, ("n",)),
}


@dataclass(frozen=True)
class FamilySpec:
    """A named family plus its parameters, e.g. ``FamilySpec("ladder", {"n": 3})``."""

    family: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in _REGISTRY:
            raise FamilyError(f"unknown family {self.family!r}; known: {', '.join(sorted(_REGISTRY))}")

    @classmethod
    def parse(cls, family: str, args: Sequence[str]) -> "FamilySpec":
        """Build from CLI-style positional strings; bends are comma separated."""
        family = family.lower().replace("-", "").replace("_", "")
        aliases = {"s": "straight2tree", "straight": "straight2tree", "bent": "bent2tree",
                   "ktree": "linearktree", "triangular": "trigrid", "tower": "blocktower", "k": "complete"}
        family = aliases.get(family, family)
        if family not in _REGISTRY:
            raise FamilyError(f"unknown family {family!r}")
        names = _REGISTRY[family][1]
        if len(args) != len(names):
            raise FamilyError(f"{family} takes parameters {', '.join(names)}")
        params = {}
        for name, raw in zip(names, args):
            if name == "bends":
                params[name] = tuple(int(t) for t in raw.split(",") if t)
            else:
                try:
                    params[name] = int(raw)
                except ValueError:
                    raise FamilyError(f"parameter {name} must be an integer, got {raw!r}") from None
        return cls(family, params)


def generate(spec: FamilySpec) -> WeightedMultigraph:
    fn, names = _REGISTRY[spec.family]
    missing = [k for k in names if k not in spec.params]
    if missing:
        raise FamilyError(f"{spec.family} is missing parameters {missing}")
    return fn(**{k: spec.params[k] for k in names})


def expected_counts(spec: FamilySpec) -> Optional[tuple[int, int]]:
    """(vertices, edges) dictated by the family definition."""
    p = spec.params
    f = spec.family
    if f == "path":
        return p["n"], p["n"] - 1
    if f == "cycle":
        return p["n"], p["n"]
    if f == "complete":
        return p["n"], p["n"] * (p["n"] - 1) // 2
    if f == "ladder":
        return 2 * p["n"], 3 * p["n"] - 2
    if f in ("fan",):
        return p["n"] + 1, 2 * p["n"] - 1
    if f == "wheel":
        return p["n"] + 1, 2 * p["n"]
    if f in ("straight2tree", "bent2tree"):
        return p["n"], 2 * p["n"] - 3
    if f == "linearktree":
        n, k = p["n"], p["k"]
        return n, k * (k + 1) // 2 + (n - k - 1) * k
    if f == "flower":
        n, m = p["n"], p["m"]
        return n * (m - 1), n * m * (m - 1) // 2
    if f == "trigrid":
        r = p["rows"]
        return (r + 1) * (r + 2) // 2, 3 * r * (r + 1) // 2
    if f == "grid":
        n, m = p["n"], p["m"]
        return n * m, n * (m - 1) + m * (n - 1)
    if f == "blocktower":
        return 4 * p["n"], 8 * p["n"] - 4
    return None


def degree_profile_check(g: WeightedMultigraph, spec: FamilySpec) -> tuple[bool, str]:
    """Structural checks the family definition promises; returns (ok, diagnostic)."""
    counts = expected_counts(spec)
    if counts is not None and (g.n, g.m) != counts:
        return False, f"expected {counts[0]} vertices / {counts[1]} edges, got {g.n} / {g.m}"
    if not check_connected(g):
        return False, "not connected"
    deg = [g.degree(v) for v in range(g.n)]
    f, p = spec.family, spec.params
    if f == "linearktree" or f == "straight2tree":
        k = p.get("k", 2)
        if g.n > k + 1 and deg.count(k) != 2:
            return False, f"expected exactly two vertices of degree {k}, got {deg.count(k)}"
    if f == "straight2tree":
        n = p["n"]
        want = [min(i - 1, 2) + min(n - i, 2) for i in range(1, n + 1)]
        if deg != want:
            return False, f"degree sequence {deg} != {want}"
    if f == "bent2tree":
        n = p["n"]
        base = [min(i - 1, 2) + min(n - i, 2) for i in range(1, n + 1)]
        for k in p["bends"]:
            if deg[k - 2] != base[k - 2] + 1 or deg[k - 1] != base[k - 1] - 1:
                return False, f"bend at {k}: deg({k - 1})={deg[k - 2]}, deg({k})={deg[k - 1]}"
        if deg.count(2) != 2:
            return False, "a linear 2-tree has exactly two vertices of degree 2"
    if f == "trigrid":
        if deg.count(2) != 3:
            return False, "triangular grid should have exactly three corners of degree 2"
    return True, "ok"
