from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from helpers import safety_template, small_sink_games
from sgpareto import geometry as geo
from sgpareto.corpus import builtin_game
from sgpareto.cqvi import Deadline, apply_F, cq_achievable, initial_map, iterate_F, query_holds
from sgpareto.errors import PreconditionError, SolverTimeout
from sgpareto.model import Game, Kind, Objective, Query, QueryTemplate, lift_template, truncate_with_map
from sgpareto.oracles import MixedStrategyOracle, md_value, standard_cq_oracle

H = F(1, 2)
TRIANGLE = geo.dwc((1, 0), (0, 1))


@pytest.fixture
def fig1():
    g, t = builtin_game("fig1")
    return g, t.conjunctive()


def named(g, x):
    return {g.names[s]: p for s, p in enumerate(x)}


def test_initial_map_reach(fig1):
    g, t = fig1
    x = named(g, initial_map(g, t))
    assert x["T1"] == geo.dwc((1, 0)) and x["T2"] == geo.dwc((0, 1))
    assert x["s0"] == x["s1"] == x["s2"] == geo.zero(2)


def test_initial_map_safety(fig1):
    g, t = fig1
    x = named(g, initial_map(g, safety_template(g, t)))
    assert x["T1"] == geo.dwc((0, 1)) and x["T2"] == geo.dwc((1, 0))
    assert x["s0"] == geo.full(2)


def test_initial_map_whole_state_space(fig1):
    g, _ = fig1
    t = QueryTemplate((Objective(Kind.REACH, range(g.n_states)), Objective(Kind.REACH, {3})))
    assert all(p.generators[-1][0] == 1 for p in initial_map(g, t))


def test_one_and_two_sweeps(fig1):
    g, t = fig1
    x0 = initial_map(g, t)
    x1 = named(g, apply_F(g, x0))
    assert x1["s1"] == TRIANGLE and x1["s2"] == geo.zero(2) and x1["s0"] == geo.zero(2)
    assert x1["T1"] == geo.dwc((1, 0))
    x2 = named(g, apply_F(g, apply_F(g, x0)))
    assert x2["s0"] == geo.dwc((H, 0), (0, H))


def test_sinks_only_game_is_fixed():
    g = Game.build([("a", "prob"), ("b", "prob")], {}, "a")
    t = QueryTemplate((Objective(Kind.REACH, {0}),))
    x = initial_map(g, t)
    assert apply_F(g, x) == x


def test_iterate_converges(fig1):
    g, t = fig1
    trace = iterate_F(g, t, 2)
    assert trace.at(g.init) == geo.dwc((H, 0), (0, H))
    assert trace.converged and trace.horizon == 2
    assert iterate_F(g, t, 0).final == initial_map(g, t)


def test_non_closed_objectives_rejected():
    g, t = builtin_game("lemma4_mdp")
    with pytest.raises(PreconditionError):
        iterate_F(g, t, 2)
    with pytest.raises(PreconditionError):
        iterate_F(*builtin_game("fig1"), 2)  # disjunctive template


@pytest.mark.parametrize(
    "x, strict, expected",
    [((F(1, 4), F(1, 4)), (), True), ((F(1, 4), H), (), False), ((0, 0), (), True),
     ((F(1, 4), 0), (True, False), True), ((H, 0), (True, False), False),
     ((F(1, 4), F(1, 4)), (True, True), False)],
)
def test_cq_achievable(fig1, x, strict, expected):
    g, t = fig1
    d = cq_achievable(g, Query(t, x, strict), 2)
    assert d.verdict is expected and d.exact


def test_mixed_strictness_agrees_with_definition():
    p = geo.dwc((H, H), (1, 0))
    t = QueryTemplate((Objective(Kind.REACH, {0}), Objective(Kind.REACH, {1})))
    assert query_holds(p, Query(t, (F(3, 5), F(1, 4)), (True, False)))
    assert not query_holds(p, Query(t, (F(3, 4), F(1, 4)), (True, False)))
    assert not query_holds(p, Query(t, (1, 0), (True, False)))
    assert query_holds(p, Query(t, (F(3, 4), 0), (False, True)))


def test_deadline():
    with pytest.raises(SolverTimeout) as info:
        Deadline(0).check("partial")
    assert info.value.partial == "partial"


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_single_objective_matches_md_value(seed):
    (game, template), = small_sink_games(1, seed=seed, dims=1, max_states=5)
    k = 3
    trace = iterate_F(game, template, k)
    truncated, origin = truncate_with_map(game, k)
    lifted = lift_template(template, origin)
    v = md_value(truncated, lifted.objectives[0])
    assert trace.at(game.init) == geo.DcPolytope(1, ((v,),))
    # safety: surviving the horizon counts as safe
    keep = safety_template(game, template)
    trace = iterate_F(game, keep, k)
    v = md_value(truncated, lift_template(keep, origin).objectives[0])
    assert trace.at(game.init) == geo.DcPolytope(1, ((v,),))


def test_matches_mixed_strategy_oracle():
    checked = 0
    for game, template in small_sink_games(30, seed=3, max_states=5):
        for k in (1, 2):
            oracle = MixedStrategyOracle(game, template, k)
            assert oracle.equals(iterate_F(game, template, k).at(game.init)), (game, k)
            checked += 1
    assert checked == 60


def test_tree_recursion_matches(fig1):
    for game, template in small_sink_games(30, seed=4):
        for k in range(4):
            assert standard_cq_oracle(game, template, k) == iterate_F(game, template, k).at(game.init)
