"""scikit-learn style front end.

``fit`` solves a game once; ``predict`` answers many threshold vectors
against the stored result. Threshold matrices must hold exact values
(ints, Fractions or 'p/q' strings); floats are refused.
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from . import geometry as geo
from .ae import dual_polytope, run_algorithm1
from .cqvi import is_exact_at, iterate_F
from .errors import PreconditionError, ValidationError
from .io import GameDocument
from .lp import max_uniform_slack
from .model import Combinator, Game, QueryTemplate, Semantics, as_fraction


def check_game(game, template=None) -> tuple[Game, QueryTemplate]:
    """Accept a Game with a template, or a parsed document carrying one."""
    if isinstance(game, GameDocument):
        template = template or game.template
        game = game.game
    if not isinstance(game, Game):
        raise TypeError(f"expected a Game, got {type(game).__name__}")
    if template is None:
        raise ValidationError("no query template given")
    check_template(game, template)
    return game, template


def check_template(game: Game, template) -> QueryTemplate:
    if not isinstance(template, QueryTemplate):
        raise TypeError(f"expected a QueryTemplate, got {type(template).__name__}")
    template.check(game)
    return template


def check_thresholds(X, dim: Optional[int] = None) -> list:
    """Rows of exact thresholds in [0,1], as tuples of Fractions."""
    if isinstance(X, np.ndarray) and X.dtype.kind == "f":
        raise TypeError("threshold arrays must not be floating point; use Fractions or 'p/q' strings")
    rows = list(X)
    if rows and (isinstance(rows[0], str) or not hasattr(rows[0], "__len__")):
        raise ValueError("expected a 2-D collection of thresholds; wrap a single vector in a list")
    out = []
    for row in rows:
        vec = tuple(as_fraction(v) for v in row)
        if dim is not None and len(vec) != dim:
            raise ValueError(f"threshold row has {len(vec)} entries, expected {dim}")
        if any(not 0 <= v <= 1 for v in vec):
            raise ValueError(f"threshold row {vec} leaves [0,1]")
        out.append(vec)
    return out


def _semantics(value) -> Semantics:
    return value if isinstance(value, Semantics) else Semantics(value)


class ParetoSetEstimator(BaseEstimator):
    """Horizon-k Pareto set of a conjunctive query.

    ``semantics='standard'`` runs the polytope value iteration,
    ``'ae'`` the set iteration with Adam committing first.
    """

    def __init__(self, horizon=10, semantics="standard", use_mu=True, timeout=None):
        self.horizon = horizon
        self.semantics = semantics
        self.use_mu = use_mu
        self.timeout = timeout

    def fit(self, game, template=None):
        game, template = check_game(game, template)
        template = template.conjunctive()
        sem = _semantics(self.semantics)
        if sem is Semantics.STANDARD:
            trace = iterate_F(game, template, self.horizon, timeout=self.timeout, keep=False)
            self.pareto_ = trace.final[game.init]
            self.stats_ = None
            self.exact_ = is_exact_at(game, self.horizon) or trace.converged
        else:
            self.pareto_, self.stats_ = run_algorithm1(
                game, template, self.horizon, use_mu=self.use_mu, timeout=self.timeout
            )
            self.exact_ = is_exact_at(game, self.horizon)
        self.n_features_in_ = template.dim
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "pareto_")
        rows = check_thresholds(X, self.n_features_in_)
        return np.array([geo.contains_point(self.pareto_, x) for x in rows], dtype=bool)

    def transform(self, X) -> np.ndarray:
        """Largest uniform slack of each threshold row inside the set (as
        Fractions, object dtype); negative means outside."""
        check_is_fitted(self, "pareto_")
        rows = check_thresholds(X, self.n_features_in_)
        return np.array(
            [[max_uniform_slack(x, self.pareto_.generators)] for x in rows], dtype=object
        )


class DisjunctiveQuerySolver(BaseEstimator):
    """Decides a disjunctive query at many thresholds after one dual solve."""

    def __init__(self, horizon=10, semantics="standard", timeout=None):
        self.horizon = horizon
        self.semantics = semantics
        self.timeout = timeout

    def fit(self, game, template=None):
        game, template = check_game(game, template)
        if template.combinator is not Combinator.DISJUNCTIVE:
            raise PreconditionError("DisjunctiveQuerySolver needs a disjunctive template")
        self.dual_ = dual_polytope(
            game, template, _semantics(self.semantics), self.horizon, timeout=self.timeout
        )
        self.exact_ = is_exact_at(game, self.horizon)
        self.n_features_in_ = template.dim
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "dual_")
        rows = check_thresholds(X, self.n_features_in_)
        return np.array(
            [not geo.contains_strictly(self.dual_, tuple(1 - v for v in x)) for x in rows],
            dtype=bool,
        )
