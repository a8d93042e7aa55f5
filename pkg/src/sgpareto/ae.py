"""Asserted-exposure Pareto sets by iterating over sets of polytopes.

When Adam reveals his strategy first, Eve's horizon-k achievable set is the
intersection, over Adam's choices, of the sets she achieves against each
choice. Intersection does not commute with the Eve and Prob operators, so
instead of one polytope per state we carry a finite set of polytopes, one
per combination of Adam choices below that state, and intersect only at the
very end at the initial state:

* Adam state: the union of the successors' sets (each choice stays apart);
* Eve state: convex union of one polytope per successor, for every selection;
* Prob state: weighted sum of one polytope per successor, for every selection.

Dropping every polytope that strictly contains another one of the same set
never changes the final intersection and keeps the sets small.

Disjunctive queries are decided by duality: Eve fails a DQ exactly when Adam,
with roles swapped, achieves the complementary strict CQ.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
import time
from dataclasses import dataclass, field
from typing import Optional

from . import geometry as geo
from .cqvi import Deadline, Decision, check_conjunctive, initial_map, is_exact_at, iterate_F
from .errors import PreconditionError, ResourceLimitError, SolverTimeout
from .model import (
    Combinator,
    Game,
    Kind,
    Owner,
    Query,
    QueryTemplate,
    Semantics,
    dualize,
)

DEFAULT_SET_CAP = 10_000


@dataclass
class AeRunStats:
    """``counts[j][s]`` is the number of polytopes kept at state s after j steps."""

    use_mu: bool
    counts: list = field(default_factory=list)
    millis: list = field(default_factory=list)
    state_names: tuple = ()

    @property
    def iterations(self) -> int:
        return len(self.counts) - 1

    def n_bar(self) -> list:
        return [Fraction(sum(row), len(row)) for row in self.counts]

    def per_state_max(self) -> dict:
        return {
            name: max(row[s] for row in self.counts)
            for s, name in enumerate(self.state_names)
        }

    def all_singletons(self) -> bool:
        return all(c == 1 for row in self.counts for c in row)

    def to_json(self) -> dict:
        return {
            "n_bar": [str(v) for v in self.n_bar()],
            "per_state": {
                name: [row[s] for row in self.counts]
                for s, name in enumerate(self.state_names)
            },
            "use_mu": self.use_mu,
        }


def polyhedra_counts(stats: AeRunStats) -> dict:
    """Mean count per iteration and the per-state maxima."""
    return {"n_bar": stats.n_bar(), "max_per_state": stats.per_state_max()}


def lift_initial(game: Game, template: QueryTemplate) -> tuple:
    return tuple((p,) for p in initial_map(game, template))


class _Memo:
    """Per-run caches of operator results; polytopes hash by generators."""

    def __init__(self):
        self.union: dict = {}
        self.wsum: dict = {}

    def convex_union(self, ps: tuple) -> geo.DcPolytope:
        key = frozenset(ps)
        hit = self.union.get(key)
        if hit is None:
            hit = self.union[key] = geo.convex_union(list(key))
        return hit

    def weighted_sum(self, probs: tuple, ps: tuple) -> geo.DcPolytope:
        key = (probs, ps)
        hit = self.wsum.get(key)
        if hit is None:
            hit = self.wsum[key] = geo.weighted_sum(list(zip(probs, ps)))
        return hit


def _selection_count(sets) -> int:
    n = 1
    for s in sets:
        n *= len(s)
    return n


def _state_update(game, x, s, memo, cap, deadline) -> tuple:
    row = game.succ[s]
    if len(row) == 1:
        return x[row[0]]
    owner = game.owners[s]
    if owner is Owner.ADAM:
        out = geo.dedupe(p for t in row for p in x[t])
    else:
        sets = [x[t] for t in row]
        if _selection_count(sets) > cap * cap:
            raise ResourceLimitError(
                f"state {game.names[s]!r} would combine {_selection_count(sets)} selections"
            )
        found: dict = {}
        probs = game.probs[s]
        for i, sel in enumerate(itertools.product(*sets)):
            if i % 256 == 255:
                deadline.check()
            if owner is Owner.EVE:
                p = memo.convex_union(sel)
            else:
                p = memo.weighted_sum(probs, sel)
            found[p] = None
            if len(found) > cap:
                break
        out = tuple(found)
    if len(out) > cap:
        raise ResourceLimitError(
            f"state {game.names[s]!r} holds more than {cap} polytopes"
        )
    return out


def apply_Phi(
    game: Game,
    x: tuple,
    cap: int = DEFAULT_SET_CAP,
    deadline: Deadline = None,
    memo: Optional[_Memo] = None,
) -> tuple:
    if len(x) != game.n_states:
        raise ValueError("set map does not cover every state")
    deadline = deadline or Deadline(None)
    memo = memo or _Memo()
    out = []
    for s in range(game.n_states):
        out.append(_state_update(game, x, s, memo, cap, deadline))
    return tuple(out)


def minimize_map(x: tuple) -> tuple:
    return tuple(geo.minimize_antichain(ps) for ps in x)


def iterate_Phi(
    game: Game,
    template: QueryTemplate,
    k: int,
    use_mu: bool = True,
    timeout: Optional[float] = None,
    cap: int = DEFAULT_SET_CAP,
) -> tuple[tuple, AeRunStats]:
    """``k`` applications of the set operator (followed by pruning when
    ``use_mu``). Returns the final set map and the run statistics. On
    timeout, :class:`SolverTimeout` carries the statistics gathered so far."""
    if k < 0:
        raise ValueError("horizon must be non-negative")
    deadline = Deadline(timeout)
    stats = AeRunStats(use_mu, state_names=game.names)
    x = lift_initial(game, template)
    stats.counts.append([len(ps) for ps in x])
    memo = _Memo()
    for _ in range(k):
        start = time.perf_counter()
        try:
            nxt = apply_Phi(game, x, cap, deadline, memo)
            if use_mu:
                nxt = minimize_map(nxt)
        except SolverTimeout as exc:
            raise SolverTimeout(str(exc), stats) from None
        except ResourceLimitError as exc:
            exc.partial = stats
            raise
        stats.millis.append((time.perf_counter() - start) * 1000)
        stats.counts.append([len(ps) for ps in nxt])
        x = nxt
        deadline.check(stats)
    return x, stats


def run_algorithm1(
    game: Game,
    template: QueryTemplate,
    k: int,
    use_mu: bool = True,
    timeout: Optional[float] = None,
    cap: int = DEFAULT_SET_CAP,
) -> tuple[geo.DcPolytope, AeRunStats]:
    """Horizon-k asserted-exposure Pareto set at the initial state."""
    x, stats = iterate_Phi(game, template, k, use_mu, timeout, cap)
    return geo.intersect_all(x[game.init]), stats


def certify_determinacy(game: Game, template: QueryTemplate, k: int) -> bool:
    """True when both semantics give the same horizon-k set at every state,
    i.e. the game is determined for this template at horizon k."""
    trace = iterate_F(game, template, k, keep=False)
    sets, _ = iterate_Phi(game, template, k)
    return all(geo.intersect_all(ps) == p for ps, p in zip(sets, trace.final))


# -- disjunctive queries -----------------------------------------------------


def _dq_notes(query: Query) -> tuple:
    kinds = {o.kind for o in query.template.objectives}
    notes = []
    if kinds == {Kind.REACH}:
        notes.append("reach-only DQ: a 'yes' stays 'yes' at every larger horizon")
    if kinds == {Kind.SAFE}:
        notes.append("safety-only DQ: a 'no' stays 'no' at every larger horizon")
    return tuple(notes)


def dq_achievable(
    game: Game,
    query: Query,
    semantics: Semantics = Semantics.STANDARD,
    k: int = 0,
    timeout: Optional[float] = None,
) -> Decision:
    """Decide a non-strict DQ at horizon ``k`` through the dual strict CQ."""
    if query.combinator is not Combinator.DISJUNCTIVE:
        raise PreconditionError("dq_achievable needs a disjunctive query")
    if any(query.strict):
        raise PreconditionError("dq_achievable takes non-strict thresholds")
    dual_game, dual_query = dualize(game, query)
    check_conjunctive(dual_game, dual_query.template)
    bound = dual_query.thresholds
    if semantics is Semantics.STANDARD:
        # Eve commits first, so Adam answers: his side is asserted exposure
        polytope, _ = run_algorithm1(dual_game, dual_query.template, k, timeout=timeout)
    else:
        trace = iterate_F(dual_game, dual_query.template, k, timeout=timeout, keep=False)
        polytope = trace.final[dual_game.init]
    adam_spoils = geo.contains_strictly(polytope, bound)
    return Decision(not adam_spoils, is_exact_at(game, k), k, _dq_notes(query))


def dual_polytope(
    game: Game,
    template: QueryTemplate,
    semantics: Semantics,
    k: int,
    timeout: Optional[float] = None,
) -> geo.DcPolytope:
    """Adam's dual CQ set used by :func:`dq_achievable`; ``x`` is a DQ
    'yes' iff this polytope does not strictly contain ``1 - x``."""
    if template.combinator is not Combinator.DISJUNCTIVE:
        raise PreconditionError("dual_polytope needs a disjunctive template")
    thresholds = (geo.ONE,) * template.dim
    dual_game, dual_query = dualize(game, Query(template, thresholds))
    if semantics is Semantics.STANDARD:
        return run_algorithm1(dual_game, dual_query.template, k, timeout=timeout)[0]
    trace = iterate_F(dual_game, dual_query.template, k, timeout=timeout, keep=False)
    return trace.final[dual_game.init]
