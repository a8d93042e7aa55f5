"""Brute-force ground truth for the solvers.

Everything here enumerates: finite Markov chains are solved by exact
elimination, horizon-k questions are answered on the full history tree,
and strategies are listed one by one. Only use these on toy instances.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from . import geometry as geo
from .ae import run_algorithm1
from .cqvi import check_conjunctive
from .errors import PreconditionError, ResourceLimitError, ValidationError
from .lp import linprog_max
from .model import Combinator, Game, Kind, Objective, Owner, Query, QueryTemplate

ENUMERATION_LIMIT = 10**6


@dataclass(frozen=True)
class MarkovChain:
    """``rows[s]`` maps successor index to probability."""

    names: tuple
    rows: tuple

    def __post_init__(self):
        if len(self.names) != len(self.rows):
            raise ValidationError("chain has mismatched names and rows")
        for s, row in enumerate(self.rows):
            if not row or sum(row.values()) != 1:
                raise ValidationError(f"row of {self.names[s]!r} does not sum to 1")
            for t, p in row.items():
                if not 0 <= t < len(self.rows) or not 0 < p <= 1:
                    raise ValidationError(f"bad transition {self.names[s]!r} -> {t}")

    @property
    def n_states(self) -> int:
        return len(self.rows)


def induced_chain(game: Game, choice: dict) -> MarkovChain:
    """Chain obtained by fixing a memoryless choice at every player state."""
    rows = []
    for s in range(game.n_states):
        if game.owners[s] is Owner.PROB:
            rows.append(dict(zip(game.succ[s], game.probs[s])))
        else:
            rows.append({choice.get(s, game.succ[s][0]): Fraction(1)})
    return MarkovChain(game.names, tuple(rows))


def _cost(v: Fraction) -> int:
    return v.numerator.bit_length() + v.denominator.bit_length()


def solve_linear(a: list, b: list) -> list:
    """Exact Gauss-Jordan elimination, choosing the cheapest non-zero pivot."""
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for c in range(n):
        candidates = [r for r in range(c, n) if m[r][c] != 0]
        if not candidates:
            raise ArithmeticError("singular system in Markov chain solver")
        piv = min(candidates, key=lambda r: _cost(m[r][c]))
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for r in range(n):
            f = m[r][c]
            if r != c and f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def mc_reach_prob(mc: MarkovChain, target) -> list:
    """Exact probability of eventually visiting ``target`` from each state."""
    target = set(target)
    n = mc.n_states
    preds: list = [[] for _ in range(n)]
    for s, row in enumerate(mc.rows):
        for t in row:
            preds[t].append(s)
    positive = set(target)
    stack = list(target)
    while stack:
        t = stack.pop()
        for s in preds[t]:
            if s not in positive:
                positive.add(s)
                stack.append(s)
    unknown = sorted(positive - target)
    pos = {s: i for i, s in enumerate(unknown)}
    a = [[Fraction(0)] * len(unknown) for _ in unknown]
    b = [Fraction(0)] * len(unknown)
    for s in unknown:
        i = pos[s]
        a[i][i] += 1
        for t, p in mc.rows[s].items():
            if t in target:
                b[i] += p
            elif t in pos:
                a[i][pos[t]] -= p
    sol = solve_linear(a, b) if unknown else []
    out = [Fraction(0)] * n
    for s in target:
        out[s] = Fraction(1)
    for s, v in zip(unknown, sol):
        out[s] = v
    return out


# -- history trees ------------------------------------------------------------------


@dataclass(frozen=True)
class HistoryTreeStrategy:
    """Deterministic depth-k strategy: history (tuple of states) -> successor."""

    player: Owner
    depth: int
    choices: dict

    def __hash__(self):
        return hash((self.player, self.depth, tuple(sorted(self.choices.items()))))

    def render(self, game: Game) -> str:
        lines = []
        for hist in sorted(self.choices, key=lambda h: (len(h), h)):
            indent = "  " * (len(hist) - 1)
            path = " ".join(game.names[s] for s in hist)
            lines.append(f"{indent}{path} -> {game.names[self.choices[hist]]}")
        return "\n".join(lines) if lines else "(no decisions within the horizon)"


def _is_leaf(game: Game, hist: tuple, k: int) -> bool:
    return len(hist) - 1 >= k or game.is_sink(hist[-1])


def history_nodes(game: Game, k: int) -> Iterator[tuple]:
    """All histories of length <= k from init, stopping at sinks (preorder)."""
    stack = [(game.init,)]
    while stack:
        hist = stack.pop()
        yield hist
        if not _is_leaf(game, hist, k):
            for t in reversed(game.succ[hist[-1]]):
                stack.append(hist + (t,))


def player_nodes(game: Game, player: Owner, k: int) -> list:
    return [
        h for h in history_nodes(game, k)
        if game.owners[h[-1]] is player and not _is_leaf(game, h, k)
    ]


def count_tree_strategies(game: Game, player: Owner, k: int) -> int:
    n = 1
    for h in player_nodes(game, player, k):
        n *= len(game.succ[h[-1]])
    return n


def enumerate_player_tree_strategies(
    game: Game, player: Owner, k: int, limit: int = ENUMERATION_LIMIT
) -> Iterator[HistoryTreeStrategy]:
    if player is Owner.PROB:
        raise ValueError("only Eve and Adam have strategies")
    nodes = player_nodes(game, player, k)
    total = count_tree_strategies(game, player, k)
    if total > limit:
        raise ResourceLimitError(f"{total} tree strategies exceed the limit {limit}")
    options = [game.succ[h[-1]] for h in nodes]
    for pick in itertools.product(*options):
        yield HistoryTreeStrategy(player, k, dict(zip(nodes, pick)))


def path_bits(template: QueryTemplate, hist: tuple) -> tuple:
    """Objective satisfaction of a finished horizon-k path."""
    out = []
    for obj in template.objectives:
        if obj.kind is Kind.REACH:
            out.append(Fraction(int(any(s in obj.states for s in hist))))
        else:
            out.append(Fraction(int(all(s in obj.states for s in hist))))
    return tuple(out)


def _check_depth(strategy: HistoryTreeStrategy, k: int, player: Owner) -> None:
    if strategy.depth != k:
        raise ValueError(f"strategy depth {strategy.depth} does not match horizon {k}")
    if strategy.player is not player:
        raise ValueError(f"expected a strategy for {player.value}")


def finite_horizon_outcomes(
    game: Game,
    sigma: HistoryTreeStrategy,
    tau: HistoryTreeStrategy,
    template: QueryTemplate,
    k: int,
) -> tuple:
    """Per-objective probability of satisfaction within k steps."""
    _check_depth(sigma, k, Owner.EVE)
    _check_depth(tau, k, Owner.ADAM)
    total = [Fraction(0)] * template.dim
    frontier = [((game.init,), Fraction(1))]
    while frontier:
        hist, pr = frontier.pop()
        if _is_leaf(game, hist, k):
            for i, b in enumerate(path_bits(template, hist)):
                total[i] += pr * b
            continue
        s = hist[-1]
        owner = game.owners[s]
        if owner is Owner.PROB:
            for t, p in game.transitions(s):
                frontier.append((hist + (t,), pr * p))
        else:
            strategy = sigma if owner is Owner.EVE else tau
            frontier.append((hist + (strategy.choices[hist],), pr))
    return tuple(total)


def _tree_polytope(game, template, k, hist, pinned, pinned_owner, combine, bits) -> geo.DcPolytope:
    if _is_leaf(game, hist, k):
        return geo.DcPolytope(template.dim, (bits(hist),))
    s = hist[-1]
    owner = game.owners[s]

    def child(t):
        return _tree_polytope(game, template, k, hist + (t,), pinned, pinned_owner, combine, bits)

    if owner is pinned_owner:
        return child(pinned.choices[hist])
    if owner is Owner.PROB:
        return geo.weighted_sum([(p, child(t)) for t, p in game.transitions(s)])
    return combine([child(t) for t in game.succ[s]])


def eve_pareto_under_tau(
    game: Game, tau: HistoryTreeStrategy, template: QueryTemplate, k: int
) -> geo.DcPolytope:
    """Eve's horizon-k CQ Pareto set in the MDP left once Adam plays ``tau``."""
    _check_depth(tau, k, Owner.ADAM)
    return _tree_polytope(
        game, template, k, (game.init,), tau, Owner.ADAM, geo.convex_union,
        lambda h: path_bits(template, h),
    )


@dataclass
class Lemma15Report:
    holds: bool
    oracle: geo.DcPolytope
    with_mu: geo.DcPolytope
    without_mu: geo.DcPolytope
    witness: Optional[tuple] = None
    adam_strategies: int = 0

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "oracle": self.oracle.to_json(),
            "algorithm": self.with_mu.to_json(),
            "algorithm_without_mu": self.without_mu.to_json(),
            "witness": None if self.witness is None else [str(v) for v in self.witness],
            "adam_strategies": self.adam_strategies,
        }


def _separating_point(p: geo.DcPolytope, q: geo.DcPolytope) -> Optional[tuple]:
    for g in p.generators:
        if not geo.contains_point(q, g):
            return g
    for g in q.generators:
        if not geo.contains_point(p, g):
            return g
    return None


def adam_exposed_intersection(game: Game, template: QueryTemplate, k: int) -> tuple:
    """Intersection of Eve's sets over every Adam tree strategy."""
    sets: dict = {}
    count = 0
    for tau in enumerate_player_tree_strategies(game, Owner.ADAM, k):
        sets[eve_pareto_under_tau(game, tau, template, k)] = None
        count += 1
    return geo.intersect_all(list(sets)), count


def lemma15_check(game: Game, template: QueryTemplate, k: int) -> Lemma15Report:
    """Compare the set iteration (with and without pruning) against the
    explicit intersection over all of Adam's deterministic tree strategies."""
    check_conjunctive(game, template)
    oracle, count = adam_exposed_intersection(game, template, k)
    with_mu, _ = run_algorithm1(game, template, k, use_mu=True)
    without_mu, _ = run_algorithm1(game, template, k, use_mu=False)
    witness = _separating_point(oracle, with_mu) or _separating_point(oracle, without_mu)
    holds = oracle == with_mu == without_mu
    return Lemma15Report(holds, oracle, with_mu, without_mu, witness, count)


def standard_cq_oracle(game: Game, template: QueryTemplate, k: int) -> geo.DcPolytope:
    """Standard-semantics horizon-k set straight from the history tree:
    Eve maximises by convex union, Adam intersects, chance mixes."""
    check_conjunctive(game, template)

    def rec(hist):
        if _is_leaf(game, hist, k):
            return geo.DcPolytope(template.dim, (path_bits(template, hist),))
        s = hist[-1]
        kids = [rec(hist + (t,)) for t in game.succ[s]]
        owner = game.owners[s]
        if owner is Owner.EVE:
            return geo.convex_union(kids)
        if owner is Owner.ADAM:
            return geo.intersect_all(kids)
        return geo.weighted_sum(list(zip(game.probs[s], kids)))

    return rec((game.init,))


class MixedStrategyOracle:
    """Standard-semantics horizon-k set through explicit strategy mixtures.

    ``x`` is achievable iff some distribution over Eve's deterministic tree
    strategies meets ``x`` against every Adam tree strategy. By Kuhn's
    theorem such mixtures are as strong as behaviour strategies. The set is
    queried by LP: membership of a point and the support value along a
    non-negative direction.
    """

    def __init__(self, game: Game, template: QueryTemplate, k: int):
        check_conjunctive(game, template)
        self.dim = template.dim
        taus = list(enumerate_player_tree_strategies(game, Owner.ADAM, k))
        sigmas = list(enumerate_player_tree_strategies(game, Owner.EVE, k))
        # outcomes[tau][sigma] is a vector
        self.outcomes = [
            [finite_horizon_outcomes(game, sg, tau, template, k) for sg in sigmas]
            for tau in taus
        ]
        self.n_sigma = len(sigmas)

    def _constraints(self):
        m, n = self.n_sigma, self.dim
        A_ub, b_ub = [], []
        for row in self.outcomes:
            for i in range(n):
                line = [-o[i] for o in row] + [Fraction(int(j == i)) for j in range(n)]
                A_ub.append(line)
                b_ub.append(Fraction(0))
        return A_ub, b_ub, [[Fraction(1)] * m + [Fraction(0)] * n], [Fraction(1)]

    def support(self, w) -> Fraction:
        """max w.x over the achievable set (w >= 0)."""
        A_ub, b_ub, A_eq, b_eq = self._constraints()
        c = [Fraction(0)] * self.n_sigma + [Fraction(v) for v in w]
        res = linprog_max(c, A_ub, b_ub, A_eq, b_eq)
        return res.value

    def contains(self, x) -> bool:
        A_ub, b_ub, A_eq, b_eq = self._constraints()
        m, n = self.n_sigma, self.dim
        for i in range(n):
            A_eq.append([Fraction(0)] * m + [Fraction(int(j == i)) for j in range(n)])
            b_eq.append(Fraction(x[i]))
        return linprog_max([Fraction(0)] * (m + n), A_ub, b_ub, A_eq, b_eq).feasible

    def equals(self, p: geo.DcPolytope) -> bool:
        """Same set as ``p``: every generator is achievable and no achievable
        point crosses a facet of ``p`` (box facets hold automatically)."""
        if not all(self.contains(g) for g in p.generators):
            return False
        return all(self.support(h.normal) <= h.offset for h in p.facets)


# -- MD strategy values -----------------------------------------------------------


def _md_choices(game: Game, owner: Owner) -> list:
    states = [s for s in game.states_of(owner) if len(game.succ[s]) > 1]
    return [dict(zip(states, pick)) for pick in itertools.product(*(game.succ[s] for s in states))]


def md_value_vector(game: Game, obj: Objective, limit: int = ENUMERATION_LIMIT) -> list:
    """Per-state max over Eve MD strategies of min over Adam MD strategies."""
    eves = _md_choices(game, Owner.EVE)
    adams = _md_choices(game, Owner.ADAM)
    if len(eves) * len(adams) > limit:
        raise ResourceLimitError(f"{len(eves) * len(adams)} MD strategy pairs exceed {limit}")
    bad = obj.unsafe_or_target(game)
    best = None
    for e in eves:
        worst = None
        for a in adams:
            chain = induced_chain(game, {**e, **a})
            v = mc_reach_prob(chain, bad)
            if obj.kind is Kind.SAFE:
                v = [1 - x for x in v]
            worst = v if worst is None else [min(x, y) for x, y in zip(worst, v)]
        best = worst if best is None else [max(x, y) for x, y in zip(best, worst)]
    return best


def md_value(game: Game, obj: Objective, start: Optional[int] = None) -> Fraction:
    s = game.init if start is None else start
    return md_value_vector(game, obj)[s]


def dual_pinned_polytope(
    game: Game, sigma: HistoryTreeStrategy, template: QueryTemplate, k: int
) -> geo.DcPolytope:
    """Adam's horizon-k set for the complementary objectives once Eve is
    pinned to ``sigma`` (Adam maximises by convex union)."""
    _check_depth(sigma, k, Owner.EVE)
    return _tree_polytope(
        game, template, k, (game.init,), sigma, Owner.EVE, geo.convex_union,
        lambda h: tuple(1 - b for b in path_bits(template, h)),
    )


def dq_witness_search(
    game: Game, query: Query, k: int, limit: int = ENUMERATION_LIMIT
) -> Optional[HistoryTreeStrategy]:
    """First Eve tree strategy that Adam cannot spoil, i.e. against which
    no Adam strategy keeps every objective strictly below its threshold."""
    if query.combinator is not Combinator.DISJUNCTIVE:
        raise PreconditionError("dq_witness_search needs a disjunctive query")
    bound = tuple(1 - x for x in query.thresholds)
    for sigma in enumerate_player_tree_strategies(game, Owner.EVE, k, limit):
        if not geo.contains_strictly(dual_pinned_polytope(game, sigma, query.template, k), bound):
            return sigma
    return None
