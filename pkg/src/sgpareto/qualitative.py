"""Almost-sure winning regions and qualitative disjunctive queries."""
from __future__ import annotations

from dataclasses import dataclass

from .model import Game, Kind, Objective, Owner, QueryTemplate


@dataclass(frozen=True)
class WinningSet:
    states: frozenset
    objective: Objective

    def __contains__(self, s) -> bool:
        return s in self.states

    def names(self, game: Game) -> list:
        return [game.names[s] for s in sorted(self.states)]


def _positive_attractor(game: Game, region: set, goal: set, eve_side: bool) -> set:
    """States of ``region`` from which ``goal`` is reached with positive
    probability when the named side cooperates with chance. The cooperating
    player needs one successor in the set, the other player must have all of
    his successors there (successors outside ``region`` are not available)."""
    helper = Owner.EVE if eve_side else Owner.ADAM
    attr = set(goal & region)
    changed = True
    while changed:
        changed = False
        for s in region:
            if s in attr:
                continue
            row = game.succ[s]
            owner = game.owners[s]
            if owner is helper or owner is Owner.PROB:
                ok = any(t in attr for t in row)
            else:
                inside = [t for t in row if t in region]
                ok = bool(inside) and all(t in attr for t in inside)
            if ok:
                attr.add(s)
                changed = True
    return attr


def _adam_trap(game: Game, region: set, bad: set, protected: set) -> set:
    """States of ``region`` from which Adam (helped by chance) forces a visit
    to ``bad``; protected states are never added."""
    attr = set(bad)
    changed = True
    while changed:
        changed = False
        for s in region:
            if s in attr or s in protected:
                continue
            row = game.succ[s]
            owner = game.owners[s]
            if owner is Owner.EVE:
                ok = all(t in attr or t not in region for t in row)
            else:
                ok = any(t in attr for t in row)
            if ok:
                attr.add(s)
                changed = True
    return attr


def almost_sure_reach(game: Game, target) -> WinningSet:
    """States where Eve reaches ``target`` with probability 1 against every
    Adam strategy."""
    target = frozenset(target)
    region = set(range(game.n_states))
    while True:
        positive = _positive_attractor(game, region, set(target), eve_side=True)
        losing = region - positive
        if not losing:
            break
        region -= _adam_trap(game, region, losing, set(target))
    return WinningSet(frozenset(region), Objective(Kind.REACH, target))


def almost_sure_safe(game: Game, safe) -> WinningSet:
    """Greatest subset of ``safe`` that Eve can keep the play in surely."""
    safe = frozenset(safe)
    win = set(safe)
    changed = True
    while changed:
        changed = False
        for s in list(win):
            row = game.succ[s]
            if game.owners[s] is Owner.EVE:
                ok = any(t in win for t in row)
            else:
                ok = all(t in win for t in row)
            if not ok:
                win.discard(s)
                changed = True
    return WinningSet(frozenset(win), Objective(Kind.SAFE, safe))


def almost_sure(game: Game, obj: Objective) -> WinningSet:
    if obj.kind is Kind.REACH:
        out = almost_sure_reach(game, obj.states)
    else:
        out = almost_sure_safe(game, obj.states)
    return WinningSet(out.states, obj)


def qualitative_dq(game: Game, template: QueryTemplate, start=None) -> bool:
    """Can Eve make at least one objective hold with probability 1?

    For threshold 1 on every component, satisfying the disjunction with a
    single strategy amounts to satisfying one fixed objective almost surely.
    """
    s = game.init if start is None else (game.index(start) if isinstance(start, str) else start)
    return any(s in almost_sure(game, obj) for obj in template.objectives)
