import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from resistor.families import complete, grid, ladder, linear_ktree, triangular_grid, wheel
from resistor.graph import FLOAT, WeightedMultigraph
from resistor.linalg import resistance_matrix
from resistor.transforms import (
    CUT_SPLIT,
    DELTA_Y,
    Circuit,
    NotApplicableError,
    TriGrid,
    cut_vertex_split,
    delta_y,
    harmonic_lower_bound,
    is_cut_vertex,
    ladder_reduction,
    ladder_x_closed_form,
    linear3tree_reduction,
    mesh4_admissible,
    mesh_star,
    mesh_star_admissible,
    parallel_reduce,
    reduce_two_terminal,
    series_reduce,
    star_mesh,
    trace_to_json,
    trace_to_text,
    triangular_grid_corner_resistance,
    triangular_grid_reduction,
    y_delta,
)

from oracles import circuit_resistances, replay_and_check
from strategies import connected_graphs

F = Fraction


def star(N, rs=None):
    rs = rs or [1] * N
    return WeightedMultigraph(N + 1, tuple((0, k + 1, F(1, rs[k]) if rs[k] else 1) for k in range(N)))


# --- single rewrites --------------------------------------------------------

def test_series_and_parallel_values():
    g = WeightedMultigraph(3, ((0, 1, 1), (1, 2, F(1, 2))))
    c, step = series_reduce(g, 1)
    assert c.resistance_between(0, 2) == 3
    assert step.removed_vertices == (1,)
    g = WeightedMultigraph(2, ((0, 1, 1), (0, 1, 1), (0, 1, 2)))
    c, _ = parallel_reduce(g, 0, 1)
    assert c.resistance_between(0, 1) == F(1, 4)


def test_series_rejects_bad_vertex():
    with pytest.raises(NotApplicableError):
        series_reduce(complete(4), 0)
    with pytest.raises(NotApplicableError):
        Circuit.from_graph(ladder(2)).series(0, protected={0})


def test_delta_y_on_unit_triangle():
    c, step = delta_y(complete(3), (0, 1, 2))
    assert step.kind == DELTA_Y
    assert sorted(r for *_, r in step.added_edges) == [F(1, 3)] * 3
    assert circuit_resistances(c, {0, 1, 2}) == {(0, 1): F(2, 3), (0, 2): F(2, 3), (1, 2): F(2, 3)}


def test_y_delta_on_unit_star():
    c, _ = y_delta(star(3), 0)
    assert sorted(r for *_, r in c.edges.values()) == [3, 3, 3]


def test_delta_y_needs_single_edges():
    g = WeightedMultigraph(3, ((0, 1, 1), (0, 1, 1), (1, 2, 1), (0, 2, 1)))
    with pytest.raises(NotApplicableError):
        delta_y(g, (0, 1, 2))


@given(connected_graphs(min_n=3, max_n=6, weighted=True))
def test_every_driver_step_is_sound(g):
    red = reduce_two_terminal(g, 0, g.n - 1, use_star_mesh=True)
    assert red.reduced
    assert red.resistance == resistance_matrix(g)[0, g.n - 1]
    replay_and_check(Circuit.from_graph(g), red.trace)


@given(st.lists(st.fractions(min_value=F(1, 5), max_value=5), min_size=3, max_size=3))
def test_delta_y_then_y_delta_is_identity(rs):
    tri = WeightedMultigraph(3, ((1, 2, 1 / rs[0]), (0, 2, 1 / rs[1]), (0, 1, 1 / rs[2])))
    c, step = delta_y(tri, (0, 1, 2))
    c.y_delta(step.added_vertices[0])
    assert c.edge_multiset() == Circuit.from_graph(tri).edge_multiset()


@given(st.lists(st.fractions(min_value=F(1, 5), max_value=5), min_size=3, max_size=3))
def test_y_delta_then_delta_y_is_identity(rs):
    g = WeightedMultigraph(4, tuple((0, k + 1, 1 / rs[k]) for k in range(3)))
    c = Circuit.from_graph(g)
    before = sorted(r for *_, r in c.edges.values())
    c.y_delta(0)
    step = c.delta_y((1, 2, 3))
    legs = {x: r for _, x, r in step.added_edges}
    assert [legs[k + 1] for k in range(3)] == list(rs)
    assert sorted(legs.values()) == before


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_star_mesh_on_unit_stars(N):
    g = star(N)
    c, _ = star_mesh(g, 0)
    R = circuit_resistances(c, range(1, N + 1))
    full = resistance_matrix(g)
    assert all(R[(a, b)] == full[a, b] == 2 for a, b in R)
    # every mesh edge is R_i R_j sum(1/R) = N on a unit star
    assert all(r == N for *_, r in c.edges.values())


def test_star_mesh_weighted_star():
    g = star(4, [1, 2, 3, 4])
    c, _ = star_mesh(g, 0)
    full = resistance_matrix(g)
    R = circuit_resistances(c, range(1, 5))
    assert all(R[(a, b)] == full[a, b] for a, b in R)


def test_mesh_star_roundtrip_on_k4_mesh():
    c, _ = star_mesh(star(4), 0)
    back = c.copy()
    back.mesh_star((1, 2, 3, 4))
    assert sorted(float(r) for *_, r in back.edges.values()) == pytest.approx([1.0] * 4)


def test_mesh_star_rejects_inadmissible_mesh():
    assert mesh4_admissible(1, 1, 1, 1, 1, 1)
    assert not mesh4_admissible(2, 1, 1, 1, 1, 1)
    g = WeightedMultigraph(4, tuple((u, v, 2 if (u, v) == (0, 3) else 1) for u in range(4) for v in range(u + 1, 4)))
    with pytest.raises(NotApplicableError):
        mesh_star(g, (0, 1, 2, 3))


def test_mesh_star_admissible_on_star_images():
    c, _ = star_mesh(star(4, [1, 2, 3, 5]), 0)
    R = {frozenset((u, v)): r for u, v, r in c.edges.values()}
    assert mesh_star_admissible(R, (1, 2, 3, 4))


def test_cut_vertex_split():
    # two triangles sharing vertex 2
    g = WeightedMultigraph(5, ((0, 1, 1), (1, 2, 1), (0, 2, 1), (2, 3, 1), (3, 4, 1), (2, 4, 1)))
    assert is_cut_vertex(g, 2) and not is_cut_vertex(g, 0)
    pieces = cut_vertex_split(g, 2)
    assert [verts for _, verts in pieces] == [[2, 0, 1], [2, 3, 4]]
    with pytest.raises(NotApplicableError):
        cut_vertex_split(g, 0)


def test_prune_drops_dangling_blocks():
    g = WeightedMultigraph(5, ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 1, 1), (0, 4, 1)))
    red = reduce_two_terminal(g, 0, 1)
    assert red.resistance == 1
    assert any(s.kind == CUT_SPLIT for s in red.trace)


# --- driver ------------------------------------------------------------------

@pytest.mark.parametrize("g", [ladder(4), wheel(6), linear_ktree(7, 3), grid(3, 3), triangular_grid(2)],
                         ids=["ladder4", "wheel6", "3tree7", "grid33", "trigrid2"])
def test_driver_matches_laplacian_all_pairs(g):
    R = resistance_matrix(g)
    for i in range(g.n):
        for j in range(i + 1, g.n):
            red = reduce_two_terminal(g, i, j, use_star_mesh=True)
            assert red.reduced and red.resistance == R[i, j]


def test_driver_without_star_mesh_reports_partial_trace():
    red = reduce_two_terminal(ladder(3), 0, 5, budget_factor=0)
    assert not red.reduced and red.resistance is None and red.steps_used == 0


def test_float_mode_driver():
    g = ladder(3).to_mode(FLOAT)
    red = reduce_two_terminal(g, 0, 5, use_star_mesh=True)
    assert red.resistance == pytest.approx(21 / 15)


# --- ladder ------------------------------------------------------------------

TABLE1 = [(F(5, 4), F(6, 4)), (F(20, 15), F(21, 15)), (F(76, 56), F(77, 56)),
          (F(285, 209), F(286, 209)), (F(1065, 780), F(1066, 780))]


def test_ladder_reduction_table():
    res = ladder_reduction(7)
    for st_, (a, b) in zip(res.states[1:6], TABLE1):
        assert (st_.a, st_.b, st_.t) == (a, b, F(1, 2))
        assert st_.a == F(st_.x, st_.d) and st_.b == F(st_.x + 1, st_.d)


@pytest.mark.parametrize("n", range(2, 8))
def test_ladder_reduction_end_values(n):
    res = ladder_reduction(n)
    R = resistance_matrix(ladder(n))
    assert res.r_1_2 == R[0, 1]
    assert res.r_1_2n == R[0, 2 * n - 1]
    assert res.r_1_2nm1 == R[0, 2 * n - 2]
    replay_and_check(Circuit.from_graph(ladder(n)), res.trace)


def test_ladder_x_closed_form():
    res = ladder_reduction(9)
    for s in res.states[1:]:
        assert ladder_x_closed_form(s.i) == pytest.approx(s.x)


# --- 3-tree and triangular grid ---------------------------------------------

# frozen from the Laplacian oracle
THREE_TREE = {4: F(1, 2), 5: F(2, 3), 6: F(5, 7), 7: F(24, 31), 8: F(161, 188)}
TRIGRID = {1: F(2, 3), 2: F(10, 9), 3: F(10, 7), 4: F(206, 123), 5: F(3326, 1773)}


@pytest.mark.parametrize("n", sorted(THREE_TREE))
def test_linear3tree_reduction(n):
    res = linear3tree_reduction(n)
    assert res.resistance == THREE_TREE[n] == resistance_matrix(linear_ktree(n, 3))[0, n - 1]
    assert len(res.cycles) == max(0, n - 4)
    replay_and_check(Circuit.from_graph(linear_ktree(n, 3)), res.trace)


@pytest.mark.parametrize("rows", sorted(TRIGRID))
def test_triangular_grid_corner(rows):
    r, trace = triangular_grid_corner_resistance(rows)
    assert r == TRIGRID[rows]
    assert r >= harmonic_lower_bound(rows)


def test_triangular_grid_pass_shrinks_rows():
    g = triangular_grid(3)
    nxt, steps = triangular_grid_reduction(g)
    assert nxt.rows == 2 and steps
    assert isinstance(TriGrid.from_graph(g, 3), TriGrid)
    with pytest.raises(NotApplicableError):
        TriGrid.from_graph(ladder(3), 2)


def test_harmonic_lower_bound():
    assert harmonic_lower_bound(1) == F(1, 2)
    assert harmonic_lower_bound(3) == F(11, 12)


# --- traces --------------------------------------------------------------------

def test_trace_serialization():
    red = reduce_two_terminal(ladder(3), 0, 5)
    text = trace_to_text(red.trace, offset=1)
    assert len(text.splitlines()) == len(red.trace)
    doc = json.loads(trace_to_json(red.trace, offset=1, s=1, t=6))
    assert doc["s"] == 1 and len(doc["steps"]) == len(red.trace)
    assert {"kind", "removed_vertices", "removed_edges", "added_vertices", "added_edges"} <= set(doc["steps"][0])
    assert trace_to_json(red.trace) == trace_to_json(reduce_two_terminal(ladder(3), 0, 5).trace)
