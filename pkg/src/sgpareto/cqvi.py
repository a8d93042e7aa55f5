"""Value iteration for conjunctive queries in the standard semantics.

One sweep of the operator maps every state to a polytope built from its
successors' polytopes: intersection at Adam states, convex union at Eve
states, weighted sum at probabilistic states. Started from the indicator
map, k sweeps give the horizon-k Pareto set at every state.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from . import geometry as geo
from .errors import PreconditionError, SolverTimeout
from .lp import OPTIMAL, linprog_max
from .model import (
    Combinator,
    Game,
    Owner,
    Query,
    QueryTemplate,
    require_closed_objectives,
    structural_depth,
)


class Deadline:
    """Cooperative wall-clock budget; ``None`` seconds means unlimited."""

    def __init__(self, seconds: Optional[float] = None):
        self.seconds = seconds
        self.expires = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.expires is not None and time.monotonic() > self.expires

    def check(self, partial=None) -> None:
        if self.expired():
            raise SolverTimeout(f"time budget of {self.seconds}s exhausted", partial)


NO_DEADLINE = Deadline(None)


def check_conjunctive(game: Game, template: QueryTemplate) -> None:
    if template.combinator is not Combinator.CONJUNCTIVE:
        raise PreconditionError(
            "value iteration needs a conjunctive template; use .conjunctive() "
            "or the disjunctive-query deciders"
        )
    require_closed_objectives(game, template)


def initial_map(game: Game, template: QueryTemplate) -> tuple:
    """Each state's polytope is the downward closure of its indicator vector."""
    check_conjunctive(game, template)
    return tuple(
        geo.DcPolytope(template.dim, (template.indicator(s),)) for s in range(game.n_states)
    )


def _update(game: Game, x: tuple, s: int) -> geo.DcPolytope:
    row = game.succ[s]
    if len(row) == 1:
        return x[row[0]]
    owner = game.owners[s]
    if owner is Owner.ADAM:
        return geo.intersect_all([x[t] for t in row])
    if owner is Owner.EVE:
        return geo.convex_union([x[t] for t in row])
    return geo.weighted_sum([(p, x[t]) for t, p in zip(row, game.probs[s])])


def apply_F(game: Game, x: tuple) -> tuple:
    if len(x) != game.n_states:
        raise ValueError("value map does not cover every state")
    return tuple(_update(game, x, s) for s in range(game.n_states))


@dataclass
class IterationTrace:
    maps: list
    converged: bool = False
    converged_at: Optional[int] = None
    millis: list = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.maps) - 1

    @property
    def final(self) -> tuple:
        return self.maps[-1]

    def at(self, s: int, j: Optional[int] = None) -> geo.DcPolytope:
        j = self.horizon if j is None else j
        return self.maps[j][s]


def iterate_F(
    game: Game,
    template: QueryTemplate,
    k: int,
    timeout: Optional[float] = None,
    keep: bool = True,
) -> IterationTrace:
    """``k`` sweeps from the initial map. Once two consecutive maps agree the
    remaining iterates are copies. With ``keep=False`` only the first and
    last maps are retained."""
    if k < 0:
        raise ValueError("horizon must be non-negative")
    deadline = Deadline(timeout)
    x = initial_map(game, template)
    trace = IterationTrace([x])
    for j in range(1, k + 1):
        if trace.converged:
            nxt = x
        else:
            start = time.perf_counter()
            nxt = apply_F(game, x)
            trace.millis.append((time.perf_counter() - start) * 1000)
            if nxt == x:
                trace.converged = True
                trace.converged_at = j - 1
        if keep:
            trace.maps.append(nxt)
        else:
            trace.maps[1:] = [nxt]
        x = nxt
        deadline.check(trace)
    if not trace.converged and k > 0 and apply_F(game, x) == x:
        trace.converged = True
        trace.converged_at = k
    return trace


@dataclass(frozen=True)
class Decision:
    """A horizon-k verdict. ``exact`` means it also holds for the untruncated game."""

    verdict: bool
    exact: bool
    horizon: int
    notes: tuple = ()

    def __bool__(self) -> bool:
        return self.verdict

    def to_json(self) -> dict:
        return {
            "verdict": "yes" if self.verdict else "no",
            "exact": self.exact,
            "horizon": self.horizon,
            "notes": list(self.notes),
        }


def is_exact_at(game: Game, k: int) -> bool:
    depth = structural_depth(game)
    return depth is not None and depth <= k


def query_holds(p: geo.DcPolytope, query: Query) -> bool:
    """Threshold test on a closed polytope with per-component strictness."""
    x = query.thresholds
    if not any(query.strict):
        return geo.contains_point(p, x)
    if all(query.strict):
        return geo.contains_strictly(p, x)
    return _mixed_strict(p, x, query.strict)


def _mixed_strict(p: geo.DcPolytope, x, strict) -> bool:
    # some y in p with y_i > x_i on strict components and y_i >= x_i on the
    # rest: maximise a common slack t added on the strict ones only
    gens = p.generators
    m = len(gens)
    A_ub = [[-g[i] for g in gens] + [geo.ONE if st else geo.ZERO] for i, st in enumerate(strict)]
    b_ub = [-xi for xi in x]
    res = linprog_max([geo.ZERO] * m + [geo.ONE], A_ub, b_ub, [[geo.ONE] * m + [geo.ZERO]], [geo.ONE])
    return res.status == OPTIMAL and res.value > 0


def cq_achievable(game: Game, query: Query, k: int, timeout: Optional[float] = None) -> Decision:
    """Standard-semantics CQ test at horizon ``k``."""
    if query.combinator is not Combinator.CONJUNCTIVE:
        raise PreconditionError("cq_achievable needs a conjunctive query")
    trace = iterate_F(game, query.template, k, timeout=timeout, keep=False)
    verdict = query_holds(trace.final[game.init], query)
    exact = is_exact_at(game, k) or trace.converged
    return Decision(verdict, exact, k)
