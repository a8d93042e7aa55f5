"""Seeded instance generators shared by the test modules."""
from __future__ import annotations

import random
from fractions import Fraction

from sgpareto import geometry as geo
from sgpareto.bench import GenParams, random_game
from sgpareto.model import Game, Kind, Objective, Owner, QueryTemplate


def small_sink_games(count, seed=0, max_states=6, dims=2):
    """Random sink-query games with 3..max_states states and reach targets."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(dims + 1, max_states)
        weights = rng.choice([(1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 2)])
        branching = rng.choice([2, 2, 3])
        p = GenParams(rng.getrandbits(32), n, dims, branching, 8, weights)
        game, query = random_game(p)
        out.append((game, query.template))
    return out


def safety_template(game, template):
    """Keep away from each target: safe set = complement of the target."""
    everything = frozenset(range(game.n_states))
    return QueryTemplate(
        tuple(Objective(Kind.SAFE, everything - o.states, o.name) for o in template.objectives)
    )


def random_arena(seed, max_states=6):
    """Unrestricted random game (cycles, self-loops, non-sink targets) plus
    a random state set."""
    rng = random.Random(seed)
    n = rng.randint(1, max_states)
    owners, succ, probs = [], [], []
    for s in range(n):
        owner = rng.choice([Owner.EVE, Owner.ADAM, Owner.PROB])
        b = rng.randint(1, min(3, n))
        row = tuple(sorted(rng.sample(range(n), b)))
        owners.append(owner)
        succ.append(row)
        if owner is Owner.PROB:
            w = [rng.randint(1, 4) for _ in row]
            total = sum(w)
            probs.append(tuple(Fraction(x, total) for x in w))
        else:
            probs.append(None)
    game = Game(tuple(f"q{i}" for i in range(n)), tuple(owners), rng.randrange(n),
                tuple(succ), tuple(probs), f"arena{seed}")
    states = frozenset(s for s in range(n) if rng.random() < 0.4)
    return game, states


def random_point(rng, dim, den=6):
    return tuple(Fraction(rng.randint(0, den), den) for _ in range(dim))


def random_polytope(rng, dim, max_points=6, den=6):
    pts = [random_point(rng, dim, den) for _ in range(rng.randint(1, max_points))]
    return geo.canonicalize(pts, dim=dim)
