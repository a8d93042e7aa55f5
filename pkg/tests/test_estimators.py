from fractions import Fraction as F

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from sgpareto import geometry as geo
from sgpareto.corpus import builtin_game
from sgpareto.errors import PreconditionError, ValidationError
from sgpareto.estimators import DisjunctiveQuerySolver, ParetoSetEstimator, check_thresholds
from sgpareto.io import parse_document, render_game

H = F(1, 2)


@pytest.fixture
def fig1():
    return builtin_game("fig1")


def test_standard_and_ae_sets(fig1):
    g, t = fig1
    std = ParetoSetEstimator(horizon=2).fit(g, t)
    assert std.pareto_ == geo.dwc((H, 0), (0, H)) and std.exact_ and std.stats_ is None
    ae = ParetoSetEstimator(horizon=2, semantics="ae").fit(g, t)
    assert ae.pareto_ == geo.dwc((H, H)) and ae.stats_.counts[2][0] == 2
    X = [["1/4", "1/4"], ["1/2", "1/2"]]
    assert std.predict(X).tolist() == [True, False]
    assert ae.predict(X).tolist() == [True, True]
    assert std.n_features_in_ == 2


def test_transform_gives_slack(fig1):
    g, t = fig1
    est = ParetoSetEstimator(horizon=2, semantics="ae").fit(g, t)
    slack = est.transform([[0, 0], [H, H], [1, 0]])
    assert slack[:, 0].tolist() == [H, 0, -H]


def test_accepts_documents(fig1):
    g, t = fig1
    doc = parse_document(render_game(g, t))
    assert ParetoSetEstimator(horizon=2).fit(doc).pareto_ == geo.dwc((H, 0), (0, H))


def test_dq_solver(fig1):
    g, t = fig1
    solver = DisjunctiveQuerySolver(horizon=2).fit(g, t)
    X = [[H, 1], [1, H], ["3/5", "3/5"], ["3/4", "3/4"]]
    assert solver.predict(X).tolist() == [True, True, False, False]
    ae = DisjunctiveQuerySolver(horizon=2, semantics="ae").fit(g, t)
    assert ae.predict([["3/4", "3/4"], ["19/25", "19/25"]]).tolist() == [True, False]
    with pytest.raises(PreconditionError):
        DisjunctiveQuerySolver().fit(g, t.conjunctive())


def test_unfitted_and_bad_input(fig1):
    g, t = fig1
    with pytest.raises(NotFittedError):
        ParetoSetEstimator().predict([[0, 0]])
    est = ParetoSetEstimator(horizon=2).fit(g, t)
    with pytest.raises(TypeError):
        est.predict(np.array([[0.5, 0.5]]))
    with pytest.raises(ValueError):
        est.predict([0, 0])
    with pytest.raises(ValueError):
        est.predict([[0, 0, 0]])
    with pytest.raises(ValueError):
        est.predict([[2, 0]])
    with pytest.raises(ValidationError):
        ParetoSetEstimator().fit(g)
    with pytest.raises(TypeError):
        ParetoSetEstimator().fit("fig1", t)


def test_integer_arrays_are_fine(fig1):
    g, t = fig1
    est = ParetoSetEstimator(horizon=2).fit(g, t)
    assert est.predict(np.array([[0, 0], [1, 1]])).tolist() == [True, False]
    assert check_thresholds(np.array([[F(1, 3), 0]], dtype=object)) == [(F(1, 3), 0)]


def test_sklearn_protocol(fig1):
    est = ParetoSetEstimator(horizon=3, semantics="ae", use_mu=False)
    assert est.get_params() == {"horizon": 3, "semantics": "ae", "use_mu": False, "timeout": None}
    copy = clone(est).set_params(horizon=2)
    assert copy.horizon == 2 and est.horizon == 3
    assert "horizon=3" in repr(est)
