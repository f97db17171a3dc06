"""Exact and float linear algebra for resistance queries.

Exact matrices are lists of lists of :class:`~fractions.Fraction`; float
matrices are numpy arrays.  The exact resistance path never forms the
Moore-Penrose inverse: it inverts the Laplacian with one vertex grounded,
which is a rational generalized inverse giving the same resistances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

import numpy as np

from .graph import (
    EXACT,
    FLOAT,
    DisconnectedError,
    GraphError,
    WeightedMultigraph,
    build_laplacian,
    check_vertex,
    require_connected,
)
from .report import ResistanceReport


class SingularMatrixError(ArithmeticError):
    pass


class PreconditionError(ValueError):
    pass


PINV_CUTOFF = 1e-9


def _is_exact(m) -> bool:
    return not isinstance(m, np.ndarray)


def delete_rows_cols(m, drop: Sequence[int]):
    drop = set(drop)
    keep = [i for i in range(len(m)) if i not in drop]
    if isinstance(m, np.ndarray):
        return m[np.ix_(keep, keep)]
    return [[m[i][j] for j in keep] for i in keep]


def bareiss_det(m) -> Fraction:
    """Fraction-free determinant of a square rational matrix.

    Rows are first scaled to integers by their denominator lcm, so the
    elimination itself runs on Python ints with exact divisions.
    """
    n = len(m)
    if n == 0:
        return Fraction(1)
    scale = 1
    a = []
    for row in m:
        row = [Fraction(x) for x in row]
        if len(row) != n:
            raise ValueError("matrix is not square")
        d = lcm(*(x.denominator for x in row))
        scale *= d
        a.append([int(x * d) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return Fraction(sign * a[n - 1][n - 1], scale)


def determinant(m):
    """Exact determinant for Fraction matrices, LU determinant for arrays."""
    if _is_exact(m):
        return bareiss_det(m)
    if m.shape[0] == 0:
        return 1.0
    return float(np.linalg.det(m))


def exact_solve(m, rhs):
    """Solve ``m x = rhs`` exactly.

    ``rhs`` is a vector or a list of vectors (solved together).  Raises
    :class:`SingularMatrixError` when ``m`` is singular.  Float inputs use
    partial-pivot LU.
    """
    if not _is_exact(m):
        A = np.asarray(m, dtype=float)
        B = np.asarray(rhs, dtype=float)
        try:
            lu = np.linalg.solve(A, B.T if B.ndim == 2 else B)
        except np.linalg.LinAlgError as exc:
            raise SingularMatrixError(str(exc)) from exc
        if not np.all(np.isfinite(lu)):
            raise SingularMatrixError("non-finite solution")
        return lu.T if B.ndim == 2 else lu
    n = len(m)
    multi = len(rhs) > 0 and isinstance(rhs[0], (list, tuple))
    cols = [list(map(Fraction, c)) for c in rhs] if multi else [list(map(Fraction, rhs))]
    k = len(cols)
    a = [[Fraction(x) for x in m[i]] + [cols[c][i] for c in range(k)] for i in range(n)]
    for p in range(n):
        piv = next((r for r in range(p, n) if a[r][p] != 0), None)
        if piv is None:
            raise SingularMatrixError(f"singular at column {p}")
        if piv != p:
            a[p], a[piv] = a[piv], a[p]
        rowp = a[p]
        inv = 1 / rowp[p]
        for j in range(p, n + k):
            if rowp[j]:
                rowp[j] *= inv
        nz = [j for j in range(p + 1, n + k) if rowp[j]]
        for r in range(n):
            if r == p:
                continue
            f = a[r][p]
            if f:
                rowr = a[r]
                for j in nz:
                    rowr[j] -= f * rowp[j]
                rowr[p] = Fraction(0)
    sols = [[a[i][n + c] for i in range(n)] for c in range(k)]
    return sols if multi else sols[0]


def exact_inverse(m):
    n = len(m)
    ident = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    cols = exact_solve(m, ident)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# grounded / pseudo inverse
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroundedInverse:
    """``H``: inverse of the Laplacian with row/column ``ground`` removed, zero-padded back to full size."""

    ground: int
    inverse: tuple  # full n x n, rows of Fractions (or an ndarray in float mode)

    def entry(self, i: int, j: int):
        return self.inverse[i][j]

    def resistance(self, u: int, v: int):
        H = self.inverse
        return H[u][u] + H[v][v] - 2 * H[u][v]


def grounded_inverse(g: WeightedMultigraph, ground: int = None) -> GroundedInverse:
    if ground is None:
        ground = g.n - 1
    check_vertex(g, ground)
    L = build_laplacian(g)
    Lw = delete_rows_cols(L, [ground])
    try:
        if g.mode == EXACT:
            inv = exact_inverse(Lw) if g.n > 1 else []
        else:
            inv = np.linalg.inv(Lw) if g.n > 1 else np.zeros((0, 0))
    except (SingularMatrixError, np.linalg.LinAlgError):
        raise DisconnectedError("grounded Laplacian is singular: graph is disconnected") from None
    keep = [i for i in range(g.n) if i != ground]
    if g.mode == EXACT:
        H = [[Fraction(0)] * g.n for _ in range(g.n)]
        for a, i in enumerate(keep):
            for b, j in enumerate(keep):
                H[i][j] = inv[a][b]
        return GroundedInverse(ground, tuple(tuple(r) for r in H))
    H = np.zeros((g.n, g.n))
    if keep:
        H[np.ix_(keep, keep)] = inv
    return GroundedInverse(ground, H)


def pseudoinverse(g: WeightedMultigraph, cutoff: float = PINV_CUTOFF) -> np.ndarray:
    """Moore-Penrose inverse of the (float) Laplacian by eigendecomposition."""
    L = np.asarray(build_laplacian(g.to_mode(FLOAT)))
    mu, Z = np.linalg.eigh(L)
    top = max(abs(mu).max(), 1e-300)
    keep = mu > cutoff * top
    return (Z[:, keep] / mu[keep]) @ Z[:, keep].T


def _omega_from_gram(X: np.ndarray) -> np.ndarray:
    d = np.diag(X)
    R = d[:, None] + d[None, :] - 2 * X
    np.fill_diagonal(R, 0.0)
    return R


def resistance_pseudoinverse(g: WeightedMultigraph, u: int, v: int, ground: Optional[int] = None):
    """``(e_u - e_v)^T X (e_u - e_v)`` for a generalized inverse ``X`` of the Laplacian."""
    check_vertex(g, u, v)
    require_connected(g)
    if u == v:
        return Fraction(0) if g.mode == EXACT else 0.0
    if g.mode == EXACT:
        if ground is None:
            ground = v
        return _grounded_resistance_solve(g, u, v, ground)
    X = pseudoinverse(g)
    return float(X[u, u] + X[v, v] - 2 * X[u, v])


def _grounded_resistance_solve(g, u, v, ground):
    # one solve against L(w|w) with rhs e_u - e_v, then read off the potential drop
    L = build_laplacian(g)
    keep = [i for i in range(g.n) if i != ground]
    Lw = delete_rows_cols(L, [ground])
    rhs = [Fraction(0)] * len(keep)
    pos = {x: k for k, x in enumerate(keep)}
    if u in pos:
        rhs[pos[u]] += 1
    if v in pos:
        rhs[pos[v]] -= 1
    try:
        x = exact_solve(Lw, rhs)
    except SingularMatrixError:
        raise DisconnectedError("grounded Laplacian is singular") from None
    pu = x[pos[u]] if u in pos else Fraction(0)
    pv = x[pos[v]] if v in pos else Fraction(0)
    return pu - pv


def resistance_matrix(g: WeightedMultigraph, ground: Optional[int] = None) -> ResistanceReport:
    """All-pairs resistance from one shared factorization."""
    require_connected(g)
    if g.mode == EXACT:
        H = grounded_inverse(g, g.n - 1 if ground is None else ground)
        omega = [[H.resistance(i, j) if i != j else Fraction(0) for j in range(g.n)] for i in range(g.n)]
        return ResistanceReport.from_matrix(omega, backend="pseudoinverse", mode=EXACT)
    omega = _omega_from_gram(pseudoinverse(g))
    return ResistanceReport.from_matrix(omega, backend="pseudoinverse", mode=FLOAT)


def omega_array(g: WeightedMultigraph):
    """Resistance matrix as nested Fraction lists (exact) or an ndarray (float)."""
    return resistance_matrix(g).matrix()


# ---------------------------------------------------------------------------
# tridiagonal inverses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TridiagonalSpec:
    """Symmetric tridiagonal ``T`` with diagonal ``a`` and off-diagonal ``b``.

    ``theta[k]`` is the leading k x k minor (``theta[0] = 1``); ``phi[k]``
    (1-based, ``phi[n+1] = 1``) is the trailing minor starting at row k.
    """

    a: tuple
    b: tuple
    theta: tuple
    phi: tuple

    @classmethod
    def from_diagonals(cls, a: Sequence, b: Sequence) -> "TridiagonalSpec":
        a = tuple(a)
        b = tuple(b)
        n = len(a)
        if len(b) != n - 1:
            raise ValueError("off-diagonal must have length n-1")
        one = a[0] ** 0
        theta = [one, a[0]]
        for i in range(2, n + 1):
            theta.append(a[i - 1] * theta[i - 1] - b[i - 2] ** 2 * theta[i - 2])
        phi = [None] * (n + 2)
        phi[n + 1] = one
        phi[n] = a[n - 1]
        for i in range(n - 1, 0, -1):
            phi[i] = a[i - 1] * phi[i + 1] - b[i - 1] ** 2 * phi[i + 2]
        return cls(a, b, tuple(theta), tuple(phi))

    @classmethod
    def from_matrix(cls, m) -> "TridiagonalSpec":
        n = len(m)
        for i in range(n):
            for j in range(n):
                if abs(i - j) > 1 and m[i][j] != 0:
                    raise PreconditionError(f"entry ({i}, {j}) outside the tridiagonal band")
                if abs(i - j) == 1 and m[i][j] != m[j][i]:
                    raise PreconditionError("matrix is not symmetric")
        return cls.from_diagonals([m[i][i] for i in range(n)], [m[i][i + 1] for i in range(n - 1)])

    @property
    def n(self) -> int:
        return len(self.a)

    def _bprod(self, i: int, j: int):
        out = self.a[0] ** 0
        for k in range(i, j):
            out *= self.b[k - 1]
        return out

    def inverse_entry(self, i: int, j: int):
        """``T^{-1}[i, j]`` with 1-based indices."""
        if self.theta[self.n] == 0:
            raise SingularMatrixError("theta_n vanishes")
        if i > j:
            i, j = j, i
        sign = -1 if (j - i) % 2 else 1
        return sign * self._bprod(i, j) * self.theta[i - 1] * self.phi[j + 1] / self.theta[self.n]


def tridiag_resistance(spec: TridiagonalSpec, i: int, j: Optional[int]):
    """Resistance between reduced-matrix rows ``i`` and ``j`` (1-based).

    ``j=None`` (or ``n+1``) names the grounded vertex, whose row of the
    generalized inverse is zero.
    """
    n = spec.n
    th, ph = spec.theta, spec.phi
    if th[n] == 0:
        raise SingularMatrixError("theta_n vanishes")
    if j is None or j == n + 1:
        return th[i - 1] * ph[i + 1] / th[n]
    if i == j:
        return 0 * th[n]
    if i > j:
        i, j = j, i
    sign = -1 if (j - i) % 2 else 1
    cross = sign * spec._bprod(i, j) * th[i - 1] * ph[j + 1]
    return (th[i - 1] * ph[i + 1] + th[j - 1] * ph[j + 1] - 2 * cross) / th[n]


def tridiagonal_from_graph(g: WeightedMultigraph, ground: int) -> tuple[TridiagonalSpec, list[int]]:
    """Grounded Laplacian as a tridiagonal spec; also returns the vertex order of its rows."""
    L = build_laplacian(g)
    order = [v for v in range(g.n) if v != ground]
    return TridiagonalSpec.from_matrix(delete_rows_cols(L, [ground])), order


# ---------------------------------------------------------------------------
# pentadiagonal determinant recurrence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PentadiagonalSpec:
    """Bandwidth-2 square matrix, stored densely, with the band products used by the recurrence.

    With 1-based ``i``: ``a_i = M[i,i]``, ``b_i = M[i,i+1] M[i+1,i]``,
    ``beta_i = M[i,i+2] M[i+2,i]``, ``c_i = M[i,i+1] M[i+1,i+2] M[i+2,i]``.
    """

    matrix: tuple

    def __post_init__(self):
        m = self.matrix
        n = len(m)
        for i in range(n):
            if len(m[i]) != n:
                raise ValueError("matrix is not square")
            for j in range(n):
                if abs(i - j) > 2 and m[i][j] != 0:
                    raise PreconditionError(f"entry ({i}, {j}) outside bandwidth 2")

    @classmethod
    def from_rows(cls, rows) -> "PentadiagonalSpec":
        return cls(tuple(tuple(Fraction(x) if not isinstance(x, float) else x for x in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.matrix)

    def e(self, i, j):
        return self.matrix[i - 1][j - 1]

    def a(self, i):
        return self.e(i, i)

    def b(self, i):
        return self.e(i, i + 1) * self.e(i + 1, i)

    def beta(self, i):
        return self.e(i, i + 2) * self.e(i + 2, i)

    def c(self, i):
        return self.e(i, i + 1) * self.e(i + 1, i + 2) * self.e(i + 2, i)

    def c_reverse(self, i):
        return self.e(i + 1, i) * self.e(i + 2, i + 1) * self.e(i, i + 2)

    def leading_minor(self, k):
        return [list(r[:k]) for r in self.matrix[:k]]


def sweet_pentadiagonal_det(spec: PentadiagonalSpec, seeds: Optional[Sequence] = None):
    """Determinant by the five-term pentadiagonal recurrence.

    Needs a nonzero first off-diagonal band and equal forward/reverse
    three-cycle products (always true for symmetric matrices); without the
    latter no recurrence with local coefficients exists.  The first five
    leading minors are seeded by dense determinants unless ``seeds`` gives
    them.  When every first- and second-band entry is -1 the shortened form
    ``(a_k+1)d_{k-1} - (1+a_{k-1})(d_{k-2}+d_{k-3}) + (1+a_{k-2})d_{k-4} - d_{k-5}``
    is used.
    """
    n = spec.n
    for i in range(1, n):
        if spec.e(i, i + 1) == 0 or spec.e(i + 1, i) == 0:
            raise PreconditionError(
                f"first off-diagonal entry at {i} is zero; use the dense determinant instead"
            )
    for i in range(1, n - 1):
        if spec.c(i) != spec.c_reverse(i):
            raise PreconditionError(
                "band cycle products differ (matrix not diagonally similar to a symmetric one); "
                "use the dense determinant instead"
            )
    d = [Fraction(1)]
    k0 = min(n, 5)
    if seeds is not None:
        d.extend(seeds[:k0])
    else:
        d.extend(bareiss_det(spec.leading_minor(k)) for k in range(1, k0 + 1))
    if n <= 5:
        return d[n]
    simple = all(
        spec.e(i, j) == -1 for i in range(1, n + 1) for j in range(1, n + 1) if 1 <= abs(i - j) <= 2
    )
    a, b, beta, c = spec.a, spec.b, spec.beta, spec.c
    for k in range(6, n + 1):
        if simple:
            dk = (
                (a(k) + 1) * d[k - 1]
                - (1 + a(k - 1)) * (d[k - 2] + d[k - 3])
                + (1 + a(k - 2)) * d[k - 4]
                - d[k - 5]
            )
        else:
            ck, bk = c(k - 2), b(k - 2)
            dk = (
                (a(k) - ck / bk) * d[k - 1]
                - (b(k - 1) - a(k - 1) * ck / bk) * d[k - 2]
                - (beta(k - 2) * a(k - 1) - ck) * d[k - 3]
                + beta(k - 3) * (beta(k - 2) - a(k - 2) * ck / bk) * d[k - 4]
                + beta(k - 3) * beta(k - 4) * ck / bk * d[k - 5]
            )
        d.append(dk)
    return d[n]


def straight_2tree_minor(n: int) -> PentadiagonalSpec:
    """``M_n``: Laplacian of the straight linear 2-tree on ``n`` vertices minus its last two rows/columns."""
    if n < 3:
        raise ValueError("M_n needs n >= 3")
    size = n - 2
    rows = []
    for i in range(1, size + 1):
        row = []
        for j in range(1, size + 1):
            if i == j:
                row.append(Fraction(2 if i == 1 else 3 if i == 2 else 4))
            elif abs(i - j) <= 2:
                row.append(Fraction(-1))
            else:
                row.append(Fraction(0))
        rows.append(tuple(row))
    return PentadiagonalSpec(tuple(rows))


def exact_dense_determinant(m):
    return determinant(m)


__all__ = [
    "GraphError",
    "GroundedInverse",
    "PentadiagonalSpec",
    "PreconditionError",
    "SingularMatrixError",
    "TridiagonalSpec",
    "bareiss_det",
    "determinant",
    "exact_dense_determinant",
    "exact_inverse",
    "exact_solve",
    "grounded_inverse",
    "pseudoinverse",
    "resistance_matrix",
    "resistance_pseudoinverse",
    "straight_2tree_minor",
    "sweet_pentadiagonal_det",
    "tridiag_resistance",
    "tridiagonal_from_graph",
]
