"""Approximate resistances: spectral truncation, random-projection sketches, commute times.

Everything here is float-only and every randomized routine takes an explicit
seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .graph import FLOAT, GraphError, WeightedMultigraph, build_laplacian, check_vertex, require_connected


class ConvergenceError(ArithmeticError):
    """An iterative solve missed its residual target."""


def _float(g: WeightedMultigraph) -> WeightedMultigraph:
    return g.to_mode(FLOAT).without_zero_edges()


def sparse_laplacian(g: WeightedMultigraph) -> sp.csr_matrix:
    g = _float(g)
    if not g.edges:
        return sp.csr_matrix((g.n, g.n))
    u = np.array([e[0] for e in g.edges])
    v = np.array([e[1] for e in g.edges])
    w = np.array([e[2] for e in g.edges])
    A = sp.coo_matrix((np.r_[w, w], (np.r_[u, v], np.r_[v, u])), shape=(g.n, g.n)).tocsr()
    return (sp.diags(np.asarray(A.sum(axis=1)).ravel()) - A).tocsr()


# ---------------------------------------------------------------------------
# spectral truncation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralTruncation:
    """Nonzero Laplacian eigenpairs in ascending order."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def max_t(self) -> int:
        return len(self.eigenvalues)

    def estimate(self, t: int, i: int, j: int) -> float:
        if not 1 <= t <= self.max_t:
            raise GraphError(f"t must be in 1..{self.max_t}")
        d = self.eigenvectors[i, :t] - self.eigenvectors[j, :t]
        return float((d * d / self.eigenvalues[:t]).sum())

    def sweep(self, i: int, j: int) -> np.ndarray:
        """Estimates for t = 1..n-1 (a nondecreasing sequence)."""
        d = self.eigenvectors[i] - self.eigenvectors[j]
        return np.cumsum(d * d / self.eigenvalues)


def spectral_truncation(g: WeightedMultigraph) -> SpectralTruncation:
    require_connected(g)
    L = np.asarray(build_laplacian(g.to_mode(FLOAT)))
    mu, Z = np.linalg.eigh(L)
    return SpectralTruncation(mu[1:], Z[:, 1:])


def spectral_estimate(g: WeightedMultigraph, t: int, i: int, j: int) -> float:
    check_vertex(g, i, j)
    return spectral_truncation(g).estimate(t, i, j)


# ---------------------------------------------------------------------------
# random-projection sketch
# ---------------------------------------------------------------------------

DEFAULT_SKETCH_C = 2.0


@dataclass(frozen=True)
class ResistanceSketch:
    """Vertex ``i`` maps to ``vectors[i]`` with ``|y_i - y_j|^2`` close to ``r(i, j)``."""

    k: int
    vectors: np.ndarray
    seed: int
    epsilon: float

    def query(self, i: int, j: int) -> float:
        d = self.vectors[i] - self.vectors[j]
        return float(d @ d)


def sketch_dimension(n: int, epsilon: float, c: float = DEFAULT_SKETCH_C) -> int:
    if not 0 < epsilon < 1:
        raise GraphError("epsilon must be in (0, 1)")
    return max(1, math.ceil(c * math.log(max(n, 2)) / epsilon**2))


def sketch_build(g: WeightedMultigraph, epsilon: float, seed: int, c: float = DEFAULT_SKETCH_C,
                 solver: str = "lu") -> ResistanceSketch:
    """Solve ``L z = (Q W^{1/2} B)_row`` for each of the ``k`` sketch rows.

    ``Q`` has random entries ``+-1/sqrt(k)``.  ``solver='lu'`` factors the
    grounded Laplacian once; ``solver='cg'`` runs conjugate gradient per row
    to relative residual 1e-10.
    """
    require_connected(g)
    g = _float(g)
    n, m = g.n, g.m
    k = sketch_dimension(n, epsilon, c)
    rng = np.random.default_rng(seed)
    Q = (rng.integers(0, 2, size=(k, m)) * 2 - 1) / math.sqrt(k)
    u = np.array([e[0] for e in g.edges])
    v = np.array([e[1] for e in g.edges])
    sw = np.sqrt(np.array([e[2] for e in g.edges]))
    rows = np.r_[np.arange(m), np.arange(m)]
    WB = sp.csr_matrix((np.r_[sw, -sw], (rows, np.r_[u, v])), shape=(m, n))
    Y = np.asarray((WB.T @ Q.T))  # n x k, column s is row s of Q W^{1/2} B
    L = sparse_laplacian(g)
    if solver == "lu":
        keep = np.arange(n - 1)
        lu = spla.splu(L[keep][:, keep].tocsc())
        Z = np.zeros((n, k))
        Z[keep] = lu.solve(Y[keep])
    elif solver == "cg":
        Z = np.zeros((n, k))
        for s in range(k):
            b = Y[:, s]
            x, info = spla.cg(L, b, rtol=1e-10, atol=0.0, maxiter=10 * n)
            res = np.linalg.norm(L @ x - b) / max(np.linalg.norm(b), 1e-300)
            if info != 0 and res > 1e-10:
                raise ConvergenceError(f"CG stopped at relative residual {res:.3g} on sketch row {s}")
            Z[:, s] = x
    else:
        raise GraphError(f"unknown solver {solver!r}")
    return ResistanceSketch(k, Z, seed, epsilon)


def sketch_query(sk: ResistanceSketch, i: int, j: int) -> float:
    return sk.query(i, j)


# ---------------------------------------------------------------------------
# commute times
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommuteEstimate:
    commute_time: float
    commute_stderr: float
    resistance: float
    stderr: float
    walks: int


def _walk_tables(g: WeightedMultigraph):
    L = sparse_laplacian(g)
    A = (sp.diags(L.diagonal()) - L).tocsr()
    A.eliminate_zeros()
    cum = np.cumsum(A.data)
    start = np.r_[0.0, cum][A.indptr[:-1]]
    return A.indptr, A.indices, cum, start, L.diagonal()


def commute_time_walks(g: WeightedMultigraph, i: int, j: int, walks: int, seed: int) -> np.ndarray:
    """Lengths of ``walks`` independent round trips ``i -> j -> i``.

    All walkers advance together; each step picks a neighbour with
    probability proportional to the edge conductance.
    """
    check_vertex(g, i, j)
    require_connected(g)
    if walks < 1:
        raise GraphError("need at least one walk")
    if i == j:
        return np.zeros(walks)
    indptr, indices, cum, start, deg = _walk_tables(g)
    rng = np.random.default_rng(seed)
    pos = np.full(walks, i)
    target = np.full(walks, j)
    back = np.zeros(walks, dtype=bool)
    steps = np.zeros(walks, dtype=np.int64)
    active = np.arange(walks)
    while active.size:
        p = pos[active]
        x = start[p] + rng.random(active.size) * deg[p]
        idx = np.searchsorted(cum, x, side="right")
        idx = np.clip(idx, indptr[p], indptr[p + 1] - 1)
        q = indices[idx]
        pos[active] = q
        steps[active] += 1
        hit = q == target[active]
        turn = hit & ~back[active]
        done = hit & back[active]
        back[active[turn]] = True
        target[active[turn]] = i
        active = active[~done]
    return steps.astype(float)


def commute_time_estimate(g: WeightedMultigraph, i: int, j: int, walks: int, seed: int) -> CommuteEstimate:
    """Mean commute time with its standard error; resistance = C(i, j) / (2 sum w)."""
    lengths = commute_time_walks(g, i, j, walks, seed)
    mean = float(lengths.mean())
    se = float(lengths.std(ddof=1) / math.sqrt(walks)) if walks > 1 else float("inf")
    vol = 2 * float(_float(g).total_conductance())
    return CommuteEstimate(mean, se, mean / vol, se / vol, walks)
