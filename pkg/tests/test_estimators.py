from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from sklearn.base import clone

from resistor import (
    BACKENDS,
    CommuteTimeResistance,
    ResistanceDistance,
    SketchResistance,
    SpectralResistance,
    compare,
    compute,
)
from resistor.backends import EXACT_BACKENDS, NotReducedError, transform_resistance
from resistor.families import complete, complete_flower, ladder, wheel
from resistor.graph import FLOAT, DisconnectedError, GraphError


def test_every_backend_on_ladder6():
    ref = compute(ladder(3))
    for name in BACKENDS:
        rep = compute(ladder(3), name)
        assert rep.backend == name
        tol = 1e-9 if name == "simplex" else 0
        assert ref.max_discrepancy(rep) <= tol, name


def test_compare_reports_exact_agreement():
    cmp = compare(complete_flower(3, 4)[0])
    assert set(cmp.reports) == set(EXACT_BACKENDS)
    assert cmp.agree()


def test_unknown_backend():
    with pytest.raises(GraphError):
        compute(ladder(2), "magic")


def test_transform_backend_records_star_mesh_pairs():
    rep = compute(complete(5), "transform")
    assert isinstance(rep.meta["star_mesh_pairs"], list)
    value, trace, _ = transform_resistance(ladder(3), 0, 5)
    assert value == Fraction(21, 15) and trace
    assert issubclass(NotReducedError, RuntimeError)


def test_resistance_distance_estimator():
    est = ResistanceDistance(backend="counts").fit(ladder(3))
    assert est.exact(0, 1) == Fraction(11, 15)
    assert est.predict([[0, 1], [0, 5]]) == pytest.approx([11 / 15, 21 / 15])
    assert est.transform([[0, 1]]).shape == (1, 1)
    assert est.kirchhoff_index_ == sum(est.resistance_.values.values())
    assert len(est.fit_transform(ladder(2))) == 6


def test_get_params_and_clone():
    est = SketchResistance(epsilon=0.2, seed=3)
    assert est.get_params() == {"epsilon": 0.2, "seed": 3, "c": 2.0, "solver": "lu"}
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


def test_networkx_and_array_input():
    G = nx.cycle_graph(5)
    a = ResistanceDistance().fit(G).predict([[0, 2]])
    b = ResistanceDistance().fit(np.array([[i, (i + 1) % 5] for i in range(5)])).predict([[0, 2]])
    assert a == pytest.approx([6 / 5]) and b == pytest.approx([6 / 5])
    G2 = nx.Graph()
    G2.add_edge(0, 1, weight=2.0)
    G2.add_edge(1, 2, weight=2.0)
    assert ResistanceDistance().fit(G2).predict([[0, 2]]) == pytest.approx([1.0])
    w = np.array([[0, 1, 2.0], [1, 2, 4.0]])
    assert ResistanceDistance().fit(w).predict([[0, 2]]) == pytest.approx([0.75])


def test_input_validation():
    with pytest.raises(DisconnectedError):
        ResistanceDistance().fit(np.array([[0, 1], [2, 3]]))
    with pytest.raises(GraphError):
        ResistanceDistance().fit(np.zeros((3, 4)))
    est = ResistanceDistance().fit(ladder(2))
    with pytest.raises(GraphError):
        est.predict([[0, 9]])
    G = nx.Graph([("a", "b")])
    with pytest.raises(GraphError):
        ResistanceDistance().fit(G)


def test_unfitted_estimator_raises():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        SpectralResistance().predict([[0, 1]])


def test_spectral_and_sketch_estimators():
    g = wheel(8)
    exact = ResistanceDistance(mode=FLOAT).fit(g).predict([[0, 4], [0, 8]])
    assert SpectralResistance().fit(g).predict([[0, 4], [0, 8]]) == pytest.approx(exact, rel=1e-8)
    assert SpectralResistance(t=2).fit(g).predict([[0, 4]])[0] <= exact[0] + 1e-12
    sk = SketchResistance(epsilon=0.3, seed=1).fit(g).predict([[0, 4]])
    assert sk[0] == pytest.approx(exact[0], rel=0.5)


def test_commute_estimator():
    est = CommuteTimeResistance(walks=5000, seed=2).fit(complete(4))
    val = est.predict([[0, 1]])[0]
    assert abs(val - 0.5) <= 4 * est.stderr_[(0, 1)]
    assert est.predict([[2, 2]])[0] == 0.0
