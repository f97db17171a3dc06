from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resistor.closed_forms import fib
from resistor.families import cycle, ladder, path, straight_2tree
from resistor.graph import FLOAT, DisconnectedError, WeightedMultigraph, build_laplacian
from resistor.linalg import (
    PentadiagonalSpec,
    PreconditionError,
    SingularMatrixError,
    TridiagonalSpec,
    bareiss_det,
    determinant,
    exact_inverse,
    exact_solve,
    grounded_inverse,
    pseudoinverse,
    resistance_matrix,
    resistance_pseudoinverse,
    straight_2tree_minor,
    sweet_pentadiagonal_det,
    tridiag_resistance,
    tridiagonal_from_graph,
)
from strategies import connected_graphs, vertex_pairs


def test_bareiss_matches_numpy():
    m = [[Fraction(2), Fraction(-1), 0], [Fraction(-1), Fraction(3), Fraction(1, 2)], [0, Fraction(1, 2), Fraction(5)]]
    assert bareiss_det(m) == Fraction(2 * (15 - Fraction(1, 4)) + (-5))
    assert abs(float(bareiss_det(m)) - np.linalg.det(np.array(m, dtype=float))) < 1e-12


def test_exact_solve_and_inverse():
    m = [[Fraction(4), Fraction(1)], [Fraction(2), Fraction(3)]]
    assert exact_solve(m, [Fraction(1), Fraction(2)]) == [Fraction(1, 10), Fraction(3, 5)]
    inv = exact_inverse(m)
    assert inv == [[Fraction(3, 10), Fraction(-1, 10)], [Fraction(-1, 5), Fraction(2, 5)]]
    with pytest.raises(SingularMatrixError):
        exact_solve([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]], [Fraction(1), Fraction(1)])


def test_single_edge_and_path():
    assert resistance_pseudoinverse(path(2), 0, 1) == 1
    assert resistance_pseudoinverse(path(5), 0, 4) == 4


def test_cycle_arc_formula():
    R = resistance_matrix(cycle(7))
    for k in range(1, 7):
        assert R[0, k] == Fraction(k * (7 - k), 7)


def test_ladder_six_values():
    R = resistance_matrix(ladder(3))
    # A=0, B=2, C=4 bottom rail; F=1, E=3, D=5 top rail
    assert [R[0, 2], R[0, 4], R[0, 5], R[0, 3], R[0, 1], R[2, 3]] == [
        Fraction(11, 15), Fraction(20, 15), Fraction(21, 15), Fraction(14, 15), Fraction(11, 15), Fraction(9, 15)
    ]


def test_disconnected_raises():
    g = WeightedMultigraph.unit(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedError):
        resistance_matrix(g)
    with pytest.raises(DisconnectedError):
        resistance_pseudoinverse(g, 0, 3)


@given(connected_graphs(weighted=True))
def test_ground_choice_does_not_matter(g):
    a = resistance_matrix(g, ground=0)
    b = resistance_matrix(g, ground=g.n - 1)
    assert a.values == b.values


@given(connected_graphs(weighted=True))
def test_exact_and_float_paths_agree(g):
    ex = resistance_matrix(g)
    fl = resistance_matrix(g.to_mode(FLOAT))
    assert ex.max_discrepancy(fl) < 1e-9 * max(1.0, max(map(float, ex.values.values()), default=1.0))


@given(connected_graphs(weighted=True))
def test_metric_properties(g):
    R = resistance_matrix(g)
    n = g.n
    for i in range(n):
        for j in range(n):
            assert R[i, j] == R[j, i]
            assert (R[i, j] > 0) == (i != j)
            for k in range(n):
                assert R[i, j] <= R[i, k] + R[k, j]


@given(connected_graphs(weighted=True))
def test_foster_sum(g):
    # sum over edges of w_e r(e) equals n - 1
    R = resistance_matrix(g.without_zero_edges())
    assert sum(w * R[u, v] for u, v, w in g.edges) == g.n - 1


@given(connected_graphs(weighted=True), st.data())
def test_rayleigh_monotonicity(g, data):
    # raising one conductance never raises any resistance
    k = data.draw(st.integers(0, g.m - 1))
    u, v, w = g.edges[k]
    h = WeightedMultigraph(g.n, g.edges[:k] + ((u, v, w + 1),) + g.edges[k + 1:], g.mode)
    a, b = resistance_matrix(g), resistance_matrix(h)
    assert all(b.values[p] <= a.values[p] for p in a.values)


def test_pseudoinverse_is_moore_penrose():
    g = ladder(4).to_mode(FLOAT)
    L = build_laplacian(g)
    X = pseudoinverse(g)
    assert np.allclose(L @ X @ L, L)
    assert np.allclose(X @ L @ X, X)
    assert np.allclose(X.sum(axis=1), 0)


def test_grounded_inverse_is_a_generalized_inverse():
    g = ladder(3)
    H = grounded_inverse(g, 2)
    L = np.array(build_laplacian(g), dtype=object)
    Hm = np.array(H.inverse, dtype=object)
    assert (L.dot(Hm).dot(L) == L).all()


# -- tridiagonal ---------------------------------------------------------------

def test_tridiagonal_inverse_entries():
    spec = TridiagonalSpec.from_diagonals([Fraction(2)] * 4, [Fraction(-1)] * 3)
    full = [[Fraction(2) if i == j else Fraction(-1) if abs(i - j) == 1 else Fraction(0) for j in range(4)]
            for i in range(4)]
    inv = exact_inverse(full)
    for i in range(1, 5):
        for j in range(1, 5):
            assert spec.inverse_entry(i, j) == inv[i - 1][j - 1]


@given(st.integers(2, 9), st.data())
def test_tridiagonal_resistance_on_weighted_paths(n, data):
    w = [Fraction(data.draw(st.integers(1, 5)), data.draw(st.integers(1, 3))) for _ in range(n - 1)]
    g = WeightedMultigraph(n, tuple((k, k + 1, w[k]) for k in range(n - 1)))
    spec, order = tridiagonal_from_graph(g, n - 1)
    R = resistance_matrix(g)
    for a in range(n - 1):
        assert tridiag_resistance(spec, a + 1, None) == R[order[a], n - 1]
        for b in range(a + 1, n - 1):
            assert tridiag_resistance(spec, a + 1, b + 1) == R[order[a], order[b]]


def test_tridiagonal_rejects_wide_band():
    m = [[Fraction(2), 0, Fraction(1)], [0, Fraction(2), 0], [Fraction(1), 0, Fraction(2)]]
    with pytest.raises(PreconditionError):
        TridiagonalSpec.from_matrix(m)


# -- pentadiagonal -------------------------------------------------------------

def test_sweet_values_on_straight_2tree_minors():
    assert [sweet_pentadiagonal_det(straight_2tree_minor(n)) for n in range(5, 10)] == [13, 34, 89, 233, 610]


def test_sweet_matches_fibonacci_to_thirty():
    for n in range(3, 31):
        assert sweet_pentadiagonal_det(straight_2tree_minor(n)) == fib(2 * n - 3)


def test_minor_determinant_counts_spanning_trees():
    for n in range(3, 10):
        assert determinant([list(r) for r in straight_2tree_minor(n).matrix]) == fib(2 * n - 3)
        L = build_laplacian(straight_2tree(n))
        assert determinant([row[:-1] for row in L[:-1]]) == fib(2 * n - 2)


@st.composite
def symmetric_pentadiagonal(draw):
    n = draw(st.integers(6, 10))
    nz = st.integers(-4, 4).filter(lambda x: x != 0)
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = Fraction(draw(st.integers(-6, 6)))
        if i + 1 < n:
            m[i][i + 1] = m[i + 1][i] = Fraction(draw(nz))
        if i + 2 < n:
            m[i][i + 2] = m[i + 2][i] = Fraction(draw(st.integers(-4, 4)))
    return PentadiagonalSpec(tuple(tuple(r) for r in m))


@given(symmetric_pentadiagonal())
def test_sweet_matches_dense_on_symmetric_bands(spec):
    assert sweet_pentadiagonal_det(spec) == determinant([list(r) for r in spec.matrix])


def test_sweet_preconditions():
    base = [list(r) for r in straight_2tree_minor(8).matrix]
    zero_band = [r[:] for r in base]
    zero_band[2][3] = zero_band[3][2] = Fraction(0)
    with pytest.raises(PreconditionError):
        sweet_pentadiagonal_det(PentadiagonalSpec(tuple(tuple(r) for r in zero_band)))
    skew = [r[:] for r in base]
    skew[0][2] = Fraction(2)
    with pytest.raises(PreconditionError):
        sweet_pentadiagonal_det(PentadiagonalSpec(tuple(tuple(r) for r in skew)))
    wide = [r[:] for r in base]
    wide[0][3] = Fraction(1)
    with pytest.raises(PreconditionError):
        PentadiagonalSpec(tuple(tuple(r) for r in wide))
