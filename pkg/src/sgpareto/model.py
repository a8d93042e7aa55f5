"""Game and query data model.

States are integer indices into ``Game.names``; names only matter at the
text boundary. Every probability and threshold is a :class:`fractions.Fraction`.
"""
from __future__ import annotations

import enum
import warnings
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import PreconditionError, ValidationError

Rational = Fraction

ERROR_SINK = "__error__"


class Owner(enum.Enum):
    EVE = "eve"
    ADAM = "adam"
    PROB = "prob"

    def swapped(self) -> "Owner":
        if self is Owner.EVE:
            return Owner.ADAM
        if self is Owner.ADAM:
            return Owner.EVE
        return self


class Kind(enum.Enum):
    REACH = "reach"
    SAFE = "safe"

    def dual(self) -> "Kind":
        return Kind.SAFE if self is Kind.REACH else Kind.REACH


class Combinator(enum.Enum):
    CONJUNCTIVE = "cq"
    DISJUNCTIVE = "dq"

    def dual(self) -> "Combinator":
        if self is Combinator.CONJUNCTIVE:
            return Combinator.DISJUNCTIVE
        return Combinator.CONJUNCTIVE


class Semantics(enum.Enum):
    STANDARD = "standard"
    ASSERTED_EXPOSURE = "ae"


def as_fraction(value) -> Fraction:
    """Convert ints, strings and Fractions exactly. Floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError(
            f"float {value!r} is not exact; pass a string like '3/5' or a Fraction"
        )
    # numpy integers and similar
    try:
        import numbers

        if isinstance(value, numbers.Integral):
            return Fraction(int(value))
        if isinstance(value, numbers.Rational):
            return Fraction(value.numerator, value.denominator)
    except Exception:  # pragma: no cover - defensive
        pass
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Game:
    """Turn-based stochastic game.

    ``succ[s]`` lists the actions of an Eve/Adam state, or the support of a
    probabilistic state, in which case ``probs[s]`` holds the matching
    probabilities (``probs[s]`` is ``None`` for player states).
    """

    names: tuple[str, ...]
    owners: tuple[Owner, ...]
    init: int
    succ: tuple[tuple[int, ...], ...]
    probs: tuple[Optional[tuple[Fraction, ...]], ...]
    name: str = "game"

    def __post_init__(self):
        n = len(self.names)
        if n == 0:
            raise ValidationError("a game needs at least one state")
        if len(set(self.names)) != n:
            raise ValidationError("duplicate state names")
        if not (len(self.owners) == len(self.succ) == len(self.probs) == n):
            raise ValidationError("per-state tables have inconsistent lengths")
        if not 0 <= self.init < n:
            raise ValidationError(f"initial state {self.init} is not declared")
        for s in range(n):
            row = self.succ[s]
            if not row:
                raise ValidationError(f"state {self.names[s]!r} has no successor")
            if len(set(row)) != len(row):
                raise ValidationError(f"state {self.names[s]!r} lists a successor twice")
            for t in row:
                if not 0 <= t < n:
                    raise ValidationError(
                        f"state {self.names[s]!r} references unknown state {t}"
                    )
            p = self.probs[s]
            if self.owners[s] is Owner.PROB:
                if p is None or len(p) != len(row):
                    raise ValidationError(f"state {self.names[s]!r} lacks a distribution")
                for w in p:
                    if not isinstance(w, Fraction) or not 0 < w <= 1:
                        raise ValidationError(
                            f"probability {w} of state {self.names[s]!r} not in (0,1]"
                        )
                if sum(p) != 1:
                    raise ValidationError(
                        f"distribution of state {self.names[s]!r} sums to {sum(p)}, not 1"
                    )
            elif p is not None:
                raise ValidationError(f"player state {self.names[s]!r} carries probabilities")

    # -- construction helpers -------------------------------------------------
    @classmethod
    def build(
        cls,
        states: Sequence[tuple[str, Owner | str]],
        edges: dict,
        init: str,
        name: str = "game",
    ) -> "Game":
        """Build from names. ``edges[name]`` is a list of names (player
        states) or a list of ``(name, probability)`` pairs (prob states).
        Probabilistic states without an entry become sinks."""
        names = tuple(s for s, _ in states)
        index = {s: i for i, s in enumerate(names)}
        owners = tuple(o if isinstance(o, Owner) else Owner(o) for _, o in states)
        succ, probs = [], []
        for s, owner in zip(names, owners):
            row = edges.get(s)
            if owner is Owner.PROB:
                if row is None:
                    row = [(s, 1)]
                succ.append(tuple(index[t] for t, _ in row))
                probs.append(tuple(as_fraction(p) for _, p in row))
            else:
                succ.append(tuple(index[t] for t in (row or ())))
                probs.append(None)
        return cls(names, owners, index[init], tuple(succ), tuple(probs), name)

    # -- queries --------------------------------------------------------------
    @property
    def n_states(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown state {name!r}") from None

    def is_sink(self, s: int) -> bool:
        return self.succ[s] == (s,)

    def states_of(self, owner: Owner) -> list[int]:
        return [s for s in range(self.n_states) if self.owners[s] is owner]

    def transitions(self, s: int) -> list[tuple[int, Optional[Fraction]]]:
        p = self.probs[s]
        if p is None:
            return [(t, None) for t in self.succ[s]]
        return list(zip(self.succ[s], p))

    def reachable(self, start: Optional[int] = None) -> list[int]:
        start = self.init if start is None else start
        seen = {start}
        order = [start]
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for t in self.succ[s]:
                if t not in seen:
                    seen.add(t)
                    order.append(t)
                    queue.append(t)
        return order

    def with_init(self, s: int | str) -> "Game":
        if isinstance(s, str):
            s = self.index(s)
        return replace(self, init=s)

    def swap_roles(self) -> "Game":
        return replace(self, owners=tuple(o.swapped() for o in self.owners))


@dataclass(frozen=True)
class Objective:
    """``kind`` REACH targets ``states``; SAFE keeps play inside ``states``."""

    kind: Kind
    states: frozenset
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "states", frozenset(self.states))

    def unsafe_or_target(self, game: Game) -> frozenset:
        """The set whose visit flips the objective's bit (target or unsafe set)."""
        if self.kind is Kind.REACH:
            return self.states
        return frozenset(range(game.n_states)) - self.states

    def dual(self, game: Game) -> "Objective":
        complement = frozenset(range(game.n_states)) - self.states
        return Objective(self.kind.dual(), complement, self.name)

    def check(self, game: Game) -> None:
        for s in self.states:
            if not isinstance(s, int) or not 0 <= s < game.n_states:
                raise ValidationError(f"objective {self.name!r} references unknown state {s}")


def reach(game: Game, names: Iterable[str], name: str = "") -> Objective:
    return Objective(Kind.REACH, frozenset(game.index(n) for n in names), name)


def safe(game: Game, names: Iterable[str], name: str = "") -> Objective:
    return Objective(Kind.SAFE, frozenset(game.index(n) for n in names), name)


@dataclass(frozen=True)
class QueryTemplate:
    objectives: tuple[Objective, ...]
    combinator: Combinator = Combinator.CONJUNCTIVE

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        if not self.objectives:
            raise ValidationError("a query needs at least one objective")

    @property
    def dim(self) -> int:
        return len(self.objectives)

    def conjunctive(self) -> "QueryTemplate":
        return replace(self, combinator=Combinator.CONJUNCTIVE)

    def disjunctive(self) -> "QueryTemplate":
        return replace(self, combinator=Combinator.DISJUNCTIVE)

    def check(self, game: Game) -> None:
        for obj in self.objectives:
            obj.check(game)

    def indicator(self, s: int) -> tuple[Fraction, ...]:
        """Zero-one vector with bit i set iff ``s`` lies in objective i's set."""
        return tuple(Fraction(int(s in obj.states)) for obj in self.objectives)

    def dual(self, game: Game) -> "QueryTemplate":
        return QueryTemplate(
            tuple(o.dual(game) for o in self.objectives), self.combinator.dual()
        )


@dataclass(frozen=True)
class Query:
    template: QueryTemplate
    thresholds: tuple[Fraction, ...]
    strict: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        th = tuple(as_fraction(x) for x in self.thresholds)
        object.__setattr__(self, "thresholds", th)
        strict = tuple(self.strict) if self.strict else (False,) * len(th)
        object.__setattr__(self, "strict", strict)
        if len(th) != self.template.dim or len(strict) != len(th):
            raise ValidationError(
                f"query has {len(th)} thresholds for {self.template.dim} objectives"
            )
        for x in th:
            if not 0 <= x <= 1:
                raise ValidationError(f"threshold {x} outside [0,1]")

    @property
    def combinator(self) -> Combinator:
        return self.template.combinator

    @property
    def dim(self) -> int:
        return self.template.dim

    def check_user_dq(self) -> None:
        """Warn about zero thresholds in a non-strict DQ (trivially satisfied)."""
        if self.combinator is Combinator.DISJUNCTIVE:
            for x, st in zip(self.thresholds, self.strict):
                if x == 0 and not st:
                    warnings.warn(
                        "DQ threshold 0 is trivially satisfied", UserWarning, stacklevel=3
                    )


# -- structural analyses ------------------------------------------------------


def is_sink_query(game: Game, template: QueryTemplate) -> bool:
    """True iff every target and every unsafe state is a sink."""
    for obj in template.objectives:
        for s in obj.unsafe_or_target(game):
            if not game.is_sink(s):
                return False
    return True


def has_closed_objectives(game: Game, template: QueryTemplate) -> bool:
    """True iff no transition leaves a target set or an unsafe set.

    Sink queries and goal-unfolded queries both satisfy this; it is exactly
    what makes "in the set after k steps" coincide with "visited within k
    steps", which the horizon-k value iterations rely on.
    """
    for obj in template.objectives:
        closed = obj.unsafe_or_target(game)
        for s in closed:
            if any(t not in closed for t in game.succ[s]):
                return False
    return True


def require_closed_objectives(game: Game, template: QueryTemplate) -> None:
    template.check(game)
    if not has_closed_objectives(game, template):
        raise PreconditionError(
            "query is not a sink query (targets/unsafe states must be absorbing); "
            "apply goal_unfolding first"
        )


def structural_depth(game: Game) -> Optional[int]:
    """Longest number of steps from init before a sink, or None if the
    non-sink part reachable from init contains a cycle."""
    depth: dict[int, int] = {}
    on_stack: set[int] = set()

    # iterative DFS with explicit post-order
    stack: list[tuple[int, int]] = [(game.init, 0)]
    while stack:
        s, i = stack.pop()
        if i == 0:
            if s in depth:
                continue
            if game.is_sink(s):
                depth[s] = 0
                continue
            on_stack.add(s)
        row = game.succ[s]
        if i < len(row):
            stack.append((s, i + 1))
            t = row[i]
            if t in on_stack:
                return None
            if t not in depth:
                stack.append((t, 0))
        else:
            on_stack.discard(s)
            depth[s] = 1 + max(depth[t] for t in row)
    return depth[game.init]


# -- constructions ------------------------------------------------------------


def _bits(game: Game, template: QueryTemplate, s: int) -> tuple[int, ...]:
    return tuple(int(s in obj.unsafe_or_target(game)) for obj in template.objectives)


def goal_unfolding(
    game: Game, template: QueryTemplate
) -> tuple[Game, QueryTemplate, list[tuple[int, tuple[int, ...]]]]:
    """Reachable part of the product with visited-set bit vectors.

    Returns the unfolded game, the template re-expressed over bit-set
    states, and ``mapping[i] = (original state, bits)``.
    """
    template.check(game)
    start = (game.init, _bits(game, template, game.init))
    index = {start: 0}
    mapping = [start]
    queue = deque([start])
    rows: list[list[int]] = []
    while queue:
        s, v = queue.popleft()
        row = []
        for t in game.succ[s]:
            u = tuple(a | b for a, b in zip(v, _bits(game, template, t)))
            key = (t, u)
            if key not in index:
                index[key] = len(mapping)
                mapping.append(key)
                queue.append(key)
            row.append(index[key])
        rows.append(row)
    names = tuple(f"{game.names[s]}[{''.join(map(str, v))}]" for s, v in mapping)
    owners = tuple(game.owners[s] for s, _ in mapping)
    probs = tuple(game.probs[s] for s, _ in mapping)
    unfolded = Game(names, owners, 0, tuple(map(tuple, rows)), probs, game.name)
    objectives = []
    for i, obj in enumerate(template.objectives):
        flipped = frozenset(j for j, (_, v) in enumerate(mapping) if v[i])
        if obj.kind is Kind.REACH:
            objectives.append(Objective(Kind.REACH, flipped, obj.name))
        else:
            objectives.append(
                Objective(Kind.SAFE, frozenset(range(len(mapping))) - flipped, obj.name)
            )
    return unfolded, QueryTemplate(tuple(objectives), template.combinator), mapping


def truncate_with_map(
    game: Game, k: int
) -> tuple[Game, list[tuple[Optional[int], Optional[int]]]]:
    """Product with a step counter; moves past step k enter a fresh error sink.

    Original sinks are kept as single absorbing copies (origin counter
    ``None``); the error sink has origin ``(None, None)`` and is the last state.
    """
    if k < 0:
        raise ValueError("horizon must be non-negative")

    def key_of(t: int, c: int):
        if c > k:
            return (None, None)
        if game.is_sink(t):
            return (t, None)
        return (t, c)

    start = key_of(game.init, 0)
    index = {start: 0}
    origin = [start]
    queue = deque([start])
    edges: dict = {}
    while queue:
        key = queue.popleft()
        s, c = key
        if s is None or c is None:
            continue
        merged: dict = {}
        for t, p in game.transitions(s):
            tk = key_of(t, c + 1)
            if tk not in index:
                index[tk] = len(origin)
                origin.append(tk)
                if tk != (None, None):
                    queue.append(tk)
            j = index[tk]
            merged[j] = (merged.get(j, Fraction(0)) + p) if p is not None else None
        edges[index[key]] = merged
    if (None, None) not in index:
        index[(None, None)] = len(origin)
        origin.append((None, None))
    # keep the error sink last for readability
    err = index[(None, None)]
    order = [i for i in range(len(origin)) if i != err] + [err]
    renum = {old: new for new, old in enumerate(order)}

    names, owners, succ, probs = [], [], [], []
    for old in order:
        s, c = origin[old]
        new = renum[old]
        if s is None:
            names.append(ERROR_SINK)
            owners.append(Owner.PROB)
            succ.append((new,))
            probs.append((Fraction(1),))
            continue
        names.append(game.names[s] if c is None else f"{game.names[s]}@{c}")
        owners.append(game.owners[s])
        if c is None:
            succ.append((new,))
            probs.append((Fraction(1),) if game.owners[s] is Owner.PROB else None)
            continue
        row = edges[old]
        succ.append(tuple(renum[j] for j in row))
        if game.owners[s] is Owner.PROB:
            probs.append(tuple(row.values()))
        else:
            probs.append(None)
    truncated = Game(
        tuple(names), tuple(owners), renum[0], tuple(succ), tuple(probs),
        f"{game.name}<={k}",
    )
    return truncated, [origin[old] for old in order]


def truncate(game: Game, k: int) -> Game:
    return truncate_with_map(game, k)[0]


def lift_template(
    template: QueryTemplate, origin: Sequence[tuple[Optional[int], Optional[int]]]
) -> QueryTemplate:
    """Carry a template to a truncated game: the error sink is outside every
    reach target and inside every safety set."""
    objectives = []
    for obj in template.objectives:
        members = {
            i for i, (s, _) in enumerate(origin) if s is not None and s in obj.states
        }
        if obj.kind is Kind.SAFE:
            members |= {i for i, (s, _) in enumerate(origin) if s is None}
        objectives.append(Objective(obj.kind, frozenset(members), obj.name))
    return QueryTemplate(tuple(objectives), template.combinator)


def dualize(game: Game, query: Query) -> tuple[Game, Query]:
    """Swap Eve and Adam and turn the query into its dual.

    Each objective flips kind and complements its set, the combinator flips,
    thresholds become ``1 - x`` and strictness flips.
    """
    template = query.template.dual(game)
    thresholds = tuple(1 - x for x in query.thresholds)
    strict = tuple(not s for s in query.strict)
    return game.swap_roles(), Query(template, thresholds, strict)
