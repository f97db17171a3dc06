"""Local sum rules, energy minimization and the simplex embedding.

Each one is a full backend for the resistance matrix and is checked against
the Laplacian backend in the test suite.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .graph import (
    EXACT,
    FLOAT,
    GraphError,
    WeightedMultigraph,
    build_laplacian,
    check_vertex,
    require_connected,
)
from .linalg import SingularMatrixError, exact_solve, pseudoinverse
from .report import ResistanceReport


class InconsistentSystemError(ArithmeticError):
    """The local-rule system is singular or contradicts itself under the given orbits."""


# ---------------------------------------------------------------------------
# orbit partitions
# ---------------------------------------------------------------------------

def _pair(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class OrbitPartition:
    """Classes of unordered vertex pairs known to share one resistance value."""

    n: int
    classes: tuple

    def __post_init__(self):
        seen = {}
        for k, cls in enumerate(self.classes):
            for i, j in cls:
                if i == j or not (0 <= i < self.n and 0 <= j < self.n):
                    raise GraphError(f"bad pair ({i}, {j}) in orbit class {k}")
                p = _pair(i, j)
                if p in seen:
                    raise GraphError(f"pair {p} appears in two orbit classes")
                seen[p] = k
        if len(seen) != self.n * (self.n - 1) // 2:
            raise GraphError("orbit classes must cover every vertex pair exactly once")
        object.__setattr__(self, "_index", seen)

    @classmethod
    def trivial(cls, n: int) -> "OrbitPartition":
        return cls(n, tuple(((i, j),) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def from_labels(cls, labels: dict, classes: Sequence[Sequence[str]]) -> "OrbitPartition":
        """``labels`` maps names to ids; each class is a list of two-letter names like ``"AB"``."""
        return cls(len(labels), tuple(tuple((labels[s[0]], labels[s[1]]) for s in c) for c in classes))

    def index(self, i: int, j: int) -> int:
        return self._index[_pair(i, j)]

    def __len__(self) -> int:
        return len(self.classes)


# Ladder L_3 drawn as A-B-C on the bottom rail, F-E-D on top (rungs AF, BE, CD),
# mapped onto families.ladder(3) ids.
LADDER6_LABELS = {"A": 0, "B": 2, "C": 4, "F": 1, "E": 3, "D": 5}
LADDER6_ORBITS = (
    ("AB", "BC", "DE", "EF"),
    ("AC", "DF"),
    ("AD", "CF"),
    ("AE", "BD", "BF", "CE"),
    ("AF", "CD"),
    ("BE",),
)


def ladder6_orbits() -> OrbitPartition:
    return OrbitPartition.from_labels(LADDER6_LABELS, LADDER6_ORBITS)


def cycle_orbits(n: int) -> OrbitPartition:
    """Rotation/reflection classes of ``C_n``: one class per cyclic distance."""
    by_d = {}
    for i in range(n):
        for j in range(i + 1, n):
            d = min(j - i, n - j + i)
            by_d.setdefault(d, []).append((i, j))
    return OrbitPartition(n, tuple(tuple(by_d[d]) for d in sorted(by_d)))


# ---------------------------------------------------------------------------
# local sum rules
# ---------------------------------------------------------------------------

def local_rule_rows(g: WeightedMultigraph, orbits: OrbitPartition):
    """One row per ordered pair ``(u, v)``.

    The row encodes ``sum_z w_uz [r(u,v) + r(u,z) - r(v,z)] = 2`` over edges
    ``u-z``, which on unit weights is ``deg(u) r(u,v) + sum_z (r(u,z) - r(v,z)) = 2``.
    """
    zero = Fraction(0) if g.mode == EXACT else 0.0
    inc = [[] for _ in range(g.n)]
    for a, b, w in g.edges:
        if w != 0:
            inc[a].append((b, w))
            inc[b].append((a, w))
    K = len(orbits)
    rows = []
    for u in range(g.n):
        for v in range(g.n):
            if u == v:
                continue
            row = [zero] * K
            for z, w in inc[u]:
                row[orbits.index(u, v)] += w
                row[orbits.index(u, z)] += w
                if z != v:
                    row[orbits.index(v, z)] -= w
            rows.append(row)
    return rows


def _independent_rows(A: np.ndarray) -> list[int]:
    # column-pivoted QR on A^T ranks the rows; the first rank pivots are independent
    _, R, piv = scipy.linalg.qr(A.T, pivoting=True, mode="economic")
    d = np.abs(np.diag(R))
    rank = int((d > 1e-9 * max(d.max(), 1.0)).sum()) if d.size else 0
    return sorted(piv[:rank].tolist())


def local_rules_solve(g: WeightedMultigraph, orbits: Optional[OrbitPartition] = None) -> ResistanceReport:
    """All pairwise resistances from the local sum rules.

    Exact mode picks a square full-rank subset of the over-determined system
    (selection by pivoted QR in floating point, solve in rationals) and then
    checks every equation exactly.  Float mode uses least squares.
    """
    require_connected(g)
    if orbits is None:
        orbits = OrbitPartition.trivial(g.n)
    if orbits.n != g.n:
        raise GraphError("orbit partition is for a different vertex count")
    K = len(orbits)
    if K == 0:
        return ResistanceReport(g.n, {}, "local-rules", g.mode)
    rows = local_rule_rows(g, orbits)
    A = np.array([[float(x) for x in r] for r in rows])
    if g.mode == FLOAT:
        x, *_ = np.linalg.lstsq(A, np.full(len(rows), 2.0), rcond=None)
        if np.linalg.matrix_rank(A) < K or np.abs(A @ x - 2).max() > 1e-8 * max(1.0, np.abs(x).max()):
            raise InconsistentSystemError("local-rule system is rank deficient or inconsistent")
        sol = [float(t) for t in x]
    else:
        pick = _independent_rows(A)
        if len(pick) < K:
            raise InconsistentSystemError(f"local-rule system has rank {len(pick)} < {K} unknowns")
        try:
            sol = exact_solve([rows[k] for k in pick[:K]], [Fraction(2)] * K)
        except SingularMatrixError:
            raise InconsistentSystemError("selected local-rule subsystem is singular") from None
        for r in rows:
            if sum(c * s for c, s in zip(r, sol)) != 2:
                raise InconsistentSystemError("orbit partition contradicts the local rules")
    values = {(i, j): sol[orbits.index(i, j)] for i in range(g.n) for j in range(i + 1, g.n)}
    return ResistanceReport(g.n, values, "local-rules", g.mode, meta={"unknowns": K, "equations": len(rows)})


# ---------------------------------------------------------------------------
# energy minimization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyResult:
    """Minimizing potentials with ``x_u = 1``, ``x_v = 0``; ``resistance = 1 / energy``."""

    resistance: object
    energy: object
    potentials: tuple


def energy_minimize(g: WeightedMultigraph, u: int, v: int) -> EnergyResult:
    check_vertex(g, u, v)
    if u == v:
        raise GraphError("energy minimization needs two distinct vertices")
    require_connected(g)
    L = build_laplacian(g)
    inner = [k for k in range(g.n) if k not in (u, v)]
    exact = g.mode == EXACT
    one = Fraction(1) if exact else 1.0
    zero = Fraction(0) if exact else 0.0
    x = [zero] * g.n
    x[u] = one
    if inner:
        A = [[L[a][b] for b in inner] for a in inner]
        rhs = [-L[a][u] for a in inner]
        sol = exact_solve(A, rhs) if exact else np.linalg.solve(np.array(A, float), np.array(rhs, float))
        for k, a in enumerate(inner):
            x[a] = sol[k] if exact else float(sol[k])
    energy = sum((w * (x[a] - x[b]) ** 2 for a, b, w in g.edges), zero)
    return EnergyResult(1 / energy, energy, tuple(x))


def energy_min_resistance(g: WeightedMultigraph, u: int, v: int):
    if u == v:
        return Fraction(0) if g.mode == EXACT else 0.0
    return energy_minimize(g, u, v).resistance


def resistance_matrix_energy(g: WeightedMultigraph) -> ResistanceReport:
    require_connected(g)
    vals = {(i, j): energy_min_resistance(g, i, j) for i in range(g.n) for j in range(i + 1, g.n)}
    return ResistanceReport(g.n, vals, "energy", g.mode)


# ---------------------------------------------------------------------------
# simplex embedding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SimplexEmbedding:
    """Row ``i`` of ``coords`` is vertex ``i``; column ``k`` is ``z_k / sqrt(mu_k)``."""

    coords: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    centered: bool = True

    @property
    def n(self) -> int:
        return self.coords.shape[0]


def simplex_embed(g: WeightedMultigraph) -> SimplexEmbedding:
    require_connected(g)
    L = np.asarray(build_laplacian(g.to_mode(FLOAT)))
    mu, Z = np.linalg.eigh(L)
    # drop the single zero eigenvalue (constant eigenvector)
    mu, Z = mu[1:], Z[:, 1:]
    if g.n > 1 and mu.min() <= 1e-12 * max(mu.max(), 1.0):
        raise np.linalg.LinAlgError("Laplacian has a repeated zero eigenvalue")
    return SimplexEmbedding(Z / np.sqrt(mu), mu, Z)


def simplex_resistance(emb: SimplexEmbedding, i: int, j: int) -> float:
    d = emb.coords[i] - emb.coords[j]
    return float(d @ d)


def resistance_matrix_simplex(g: WeightedMultigraph) -> ResistanceReport:
    emb = simplex_embed(g)
    S = emb.coords
    sq = (S * S).sum(axis=1)
    omega = sq[:, None] + sq[None, :] - 2 * S @ S.T
    np.fill_diagonal(omega, 0.0)
    return ResistanceReport.from_matrix(np.maximum(omega, 0.0), backend="simplex", mode=FLOAT)


@dataclass(frozen=True)
class FiedlerCheck:
    residual: float
    circumradius: float
    circumcenter: np.ndarray


def fiedler_identity_check(g: WeightedMultigraph) -> FiedlerCheck:
    """Elementwise residual of ``-1/2 [[0, u^T], [u, Omega]] = [[4R^2, -2r^T], [-2r, L]]^{-1}``.

    ``r = L zeta / 2 + u / n`` with ``zeta = diag(L^+)`` and
    ``R^2 = zeta . (r + u/n) / 2``.
    """
    require_connected(g)
    n = g.n
    L = np.asarray(build_laplacian(g.to_mode(FLOAT)))
    X = pseudoinverse(g)
    zeta = np.diag(X)
    d = zeta
    omega = d[:, None] + d[None, :] - 2 * X
    u = np.ones(n)
    r = 0.5 * L @ zeta + u / n
    R2 = 0.5 * zeta @ (r + u / n)
    left = -0.5 * np.block([[np.zeros((1, 1)), u[None, :]], [u[:, None], omega]])
    M = np.block([[np.array([[4 * R2]]), -2 * r[None, :]], [-2 * r[:, None], L]])
    right = np.linalg.inv(M)
    return FiedlerCheck(float(np.abs(left - right).max()), float(np.sqrt(R2)), r)
