"""Built-in games, the CQ-to-DQ reduction and binary-expansion strategy values."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .model import (
    Combinator,
    Game,
    Kind,
    Objective,
    Owner,
    Query,
    QueryTemplate,
    reach,
)

HALF = Fraction(1, 2)


def fig1() -> tuple[Game, QueryTemplate]:
    """Coin flip at s0 hands control to Eve (s1) or Adam (s2); either picks
    one of two absorbing targets. Targets T1 and T2, combined disjunctively."""
    g = Game.build(
        [("s0", "prob"), ("s1", "eve"), ("s2", "adam"), ("T1", "prob"), ("T2", "prob")],
        {"s0": [("s1", HALF), ("s2", HALF)], "s1": ["T1", "T2"], "s2": ["T1", "T2"]},
        "s0",
        name="fig1",
    )
    t = QueryTemplate(
        (reach(g, ["T1"], "T1"), reach(g, ["T2"], "T2")), Combinator.DISJUNCTIVE
    )
    return g, t


def lemma4_mdp() -> tuple[Game, QueryTemplate]:
    """Eve at s0 visits t1 or t2, each of which returns to s0 surely. The
    targets {t1} and {t2} are not absorbing."""
    g = Game.build(
        [("s0", "eve"), ("t1", "prob"), ("t2", "prob")],
        {"s0": ["t1", "t2"], "t1": [("s0", 1)], "t2": [("s0", 1)]},
        "s0",
        name="lemma4_mdp",
    )
    return g, QueryTemplate((reach(g, ["t1"], "T1"), reach(g, ["t2"], "T2")))


def lemma8_mdp() -> tuple[Game, QueryTemplate]:
    """Eve at s picks t1 or t2; from t_i a fair coin either ends in the sink
    T_i or returns to s. The strategy reading a 0/1 word (1 = t1) reaches T1
    with the probability given by the word as a binary fraction."""
    g = Game.build(
        [("s", "eve"), ("t1", "prob"), ("t2", "prob"), ("T1", "prob"), ("T2", "prob")],
        {
            "s": ["t1", "t2"],
            "t1": [("T1", HALF), ("s", HALF)],
            "t2": [("T2", HALF), ("s", HALF)],
        },
        "s",
        name="lemma8_mdp",
    )
    return g, QueryTemplate((reach(g, ["T1"], "T1"), reach(g, ["T2"], "T2")))


BUILTINS = {"fig1": fig1, "lemma4_mdp": lemma4_mdp, "lemma8_mdp": lemma8_mdp}


def builtin_names() -> list[str]:
    return list(BUILTINS)


def builtin_game(name: str) -> tuple[Game, QueryTemplate]:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(
            f"unknown built-in game {name!r}; choose from {', '.join(BUILTINS)}"
        ) from None


def _fresh(names, base: str) -> str:
    name = base
    while name in names:
        name += "'"
    return name


def lemma3_reduction(
    game: Game, template: QueryTemplate, variant: str = "quantitative"
) -> tuple[Game, Query]:
    """Turn a reachability CQ into a DQ.

    A new fair coin at the start either plays the original game or hands
    Adam a choice among n fresh sinks d_1..d_n, with d_i added to target i.
    Eve wins the CQ iff she wins the DQ with thresholds 1 (qualitative) or
    1/2 + 1/(2n) (quantitative).
    """
    if variant not in ("quantitative", "qualitative"):
        raise ValueError("variant must be 'quantitative' or 'qualitative'")
    if any(o.kind is not Kind.REACH for o in template.objectives):
        raise ValidationError("the reduction needs reachability objectives only")
    n = template.dim
    names = list(game.names)
    start = _fresh(names, "start")
    names.append(start)
    split = _fresh(names, "split")
    names.append(split)
    sinks = []
    for i in range(n):
        d = _fresh(names, f"d{i + 1}")
        names.append(d)
        sinks.append(d)
    base = game.n_states
    i_start, i_split = base, base + 1
    i_sinks = list(range(base + 2, base + 2 + n))
    owners = game.owners + (Owner.PROB, Owner.ADAM) + (Owner.PROB,) * n
    succ = game.succ + ((game.init, i_split), tuple(i_sinks)) + tuple((d,) for d in i_sinks)
    probs = game.probs + ((HALF, HALF), None) + ((Fraction(1),),) * n
    reduced = Game(tuple(names), owners, i_start, succ, probs, f"{game.name}_dq")
    objectives = tuple(
        Objective(Kind.REACH, o.states | {i_sinks[i]}, o.name or f"T{i + 1}")
        for i, o in enumerate(template.objectives)
    )
    if variant == "qualitative":
        x = Fraction(1)
    else:
        x = HALF + Fraction(1, 2 * n)
    query = Query(QueryTemplate(objectives, Combinator.DISJUNCTIVE), (x,) * n)
    return reduced, query


# -- binary expansions -------------------------------------------------------------


@dataclass(frozen=True)
class BinaryPattern:
    """The infinite word ``prefix + period + period + ...`` over {0,1}."""

    prefix: str
    period: str

    def __post_init__(self):
        if not self.period:
            raise ValidationError("period must be non-empty")
        if set(self.prefix + self.period) - {"0", "1"}:
            raise ValidationError("patterns use the letters 0 and 1 only")

    def letter(self, i: int) -> str:
        if i < len(self.prefix):
            return self.prefix[i]
        return self.period[(i - len(self.prefix)) % len(self.period)]


def binary_strategy_value(p: BinaryPattern) -> Fraction:
    """The binary fraction 0.prefix(period)(period)... exactly."""
    num_prefix = int(p.prefix, 2) if p.prefix else 0
    k = len(p.period)
    tail = Fraction(int(p.period, 2), 2**k - 1)
    return (num_prefix + tail) / 2 ** len(p.prefix)


def pattern_strategy_chain(p: BinaryPattern):
    """Markov chain of lemma8_mdp under the strategy that, on its i-th visit
    to s, chooses t1 if letter i is 1 and t2 otherwise. Returns the chain
    and the index set of T1 copies."""
    from .oracles import MarkovChain

    m = len(p.prefix) + len(p.period)

    def after(i: int) -> int:
        i += 1
        if i < m:
            return i
        return len(p.prefix)

    # states: s@i and t@i for each memory position i, then T1, T2
    rows: list = []
    names: list = []
    T1, T2 = 2 * m, 2 * m + 1
    for i in range(m):
        names.append(f"s@{i}")
        rows.append({2 * i + 1: Fraction(1)})
        names.append(f"t{p.letter(i) == '1' and 1 or 2}@{i}")
        target = T1 if p.letter(i) == "1" else T2
        rows.append({target: HALF, 2 * after(i): HALF})
    names += ["T1", "T2"]
    rows += [{T1: Fraction(1)}, {T2: Fraction(1)}]
    return MarkovChain(tuple(names), tuple(rows)), {T1}
