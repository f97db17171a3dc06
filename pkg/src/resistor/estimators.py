"""scikit-learn style estimators: ``fit`` on a graph, then query vertex pairs.

``fit`` accepts a :class:`WeightedMultigraph`, a networkx graph (edge
attribute ``weight`` read as conductance) or an ``(m, 2)`` / ``(m, 3)``
array of 0-based edges.  ``predict`` and ``transform`` take an ``(k, 2)``
array of 0-based vertex pairs.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .approx import commute_time_estimate, sketch_build, spectral_truncation
from .backends import compute
from .graph import EXACT, FLOAT, GraphError, WeightedMultigraph, require_connected


def check_graph(X, mode: str | None = None) -> WeightedMultigraph:
    """Coerce ``X`` into a connected :class:`WeightedMultigraph`."""
    if isinstance(X, WeightedMultigraph):
        g = X if mode is None else X.to_mode(mode)
    elif hasattr(X, "nodes") and hasattr(X, "edges"):
        nodes = sorted(X.nodes())
        if nodes != list(range(len(nodes))):
            raise GraphError("networkx graphs must use vertex labels 0..n-1")
        edges = [(u, v, d.get("weight", 1)) for u, v, d in X.edges(data=True)]
        if mode is None:
            mode = FLOAT if any(isinstance(w, float) for *_, w in edges) else EXACT
        g = WeightedMultigraph(len(nodes), tuple(edges), mode)
    else:
        arr = np.asarray(X)
        if arr.ndim != 2 or arr.shape[1] not in (2, 3):
            raise GraphError("edge arrays must have shape (m, 2) or (m, 3)")
        if mode is None:
            mode = EXACT if arr.shape[1] == 2 or np.issubdtype(arr.dtype, np.integer) else FLOAT
        n = int(arr[:, :2].max()) + 1 if len(arr) else 1
        if arr.shape[1] == 2:
            edges = tuple((int(u), int(v), 1) for u, v in arr)
        else:
            cast = (lambda w: Fraction(int(w))) if mode == EXACT else float
            edges = tuple((int(u), int(v), cast(w)) for u, v, w in arr)
        g = WeightedMultigraph(n, edges, mode)
    require_connected(g)
    return g


def check_pairs(pairs, n: int) -> np.ndarray:
    P = np.asarray(pairs, dtype=int)
    if P.ndim == 1 and P.size == 2:
        P = P.reshape(1, 2)
    if P.ndim != 2 or P.shape[1] != 2:
        raise GraphError("pairs must have shape (k, 2)")
    if P.size and (P.min() < 0 or P.max() >= n):
        raise GraphError(f"pair index out of range for {n} vertices")
    return P


class _PairEstimator(TransformerMixin, BaseEstimator):
    def _pair_value(self, i: int, j: int):
        raise NotImplementedError

    def predict(self, pairs) -> np.ndarray:
        check_is_fitted(self, "n_vertices_")
        P = check_pairs(pairs, self.n_vertices_)
        return np.array([float(self._pair_value(int(i), int(j))) for i, j in P])

    def transform(self, pairs) -> np.ndarray:
        return self.predict(pairs).reshape(-1, 1)

    def fit_transform(self, X, y=None, pairs=None):
        self.fit(X)
        if pairs is None:
            pairs = [(i, j) for i in range(self.n_vertices_) for j in range(i + 1, self.n_vertices_)]
        return self.transform(pairs)


class ResistanceDistance(_PairEstimator):
    """Exact or float resistance matrix from any registered backend.

    ``resistance_`` holds the full :class:`ResistanceReport`; ``exact(i, j)``
    returns the raw Fraction in exact mode.
    """

    def __init__(self, backend: str = "pseudoinverse", mode: str | None = None):
        self.backend = backend
        self.mode = mode

    def fit(self, X, y=None):
        g = check_graph(X, self.mode)
        self.graph_ = g
        self.resistance_ = compute(g, self.backend)
        self.n_vertices_ = g.n
        self.kirchhoff_index_ = self.resistance_.kirchhoff_index()
        return self

    def _pair_value(self, i, j):
        return self.resistance_[i, j]

    def exact(self, i: int, j: int):
        check_is_fitted(self, "resistance_")
        return self.resistance_[i, j]

    def matrix(self):
        check_is_fitted(self, "resistance_")
        return self.resistance_.matrix()


class SpectralResistance(_PairEstimator):
    """Truncated eigen-expansion over the ``t`` smallest nonzero eigenpairs (all when None)."""

    def __init__(self, t: int | None = None):
        self.t = t

    def fit(self, X, y=None):
        g = check_graph(X, FLOAT)
        self.truncation_ = spectral_truncation(g)
        self.n_vertices_ = g.n
        self.t_ = self.truncation_.max_t if self.t is None else self.t
        return self

    def _pair_value(self, i, j):
        return self.truncation_.estimate(self.t_, i, j) if i != j else 0.0


class SketchResistance(_PairEstimator):
    """Random-projection sketch with ``k = ceil(c log n / epsilon^2)`` dimensions."""

    def __init__(self, epsilon: float = 0.1, seed: int = 0, c: float = 2.0, solver: str = "lu"):
        self.epsilon = epsilon
        self.seed = seed
        self.c = c
        self.solver = solver

    def fit(self, X, y=None):
        g = check_graph(X, FLOAT)
        self.sketch_ = sketch_build(g, self.epsilon, self.seed, self.c, self.solver)
        self.n_vertices_ = g.n
        return self

    def _pair_value(self, i, j):
        return self.sketch_.query(i, j)


class CommuteTimeResistance(_PairEstimator):
    """Monte Carlo commute times; ``stderr_`` is filled per pair on each predict."""

    def __init__(self, walks: int = 10000, seed: int = 0):
        self.walks = walks
        self.seed = seed

    def fit(self, X, y=None):
        self.graph_ = check_graph(X, FLOAT)
        self.n_vertices_ = self.graph_.n
        self.stderr_ = {}
        return self

    def _pair_value(self, i, j):
        if i == j:
            return 0.0
        est = commute_time_estimate(self.graph_, i, j, self.walks, self.seed)
        self.stderr_[(i, j)] = est.stderr
        return est.resistance
