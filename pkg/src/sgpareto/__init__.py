"""Exact multi-objective reachability and safety analysis of stochastic games.

Pareto sets are downward-closed polytopes with rational generators. The
standard semantics uses polytope value iteration, the asserted-exposure
semantics iterates over sets of polytopes, and disjunctive queries are
decided through the dual conjunctive query with roles swapped.
"""
from .ae import dq_achievable, iterate_Phi, run_algorithm1
from .corpus import builtin_game, lemma3_reduction
from .cqvi import cq_achievable, iterate_F
from .errors import (
    DimensionError,
    InfeasibleSystemError,
    ParseError,
    PreconditionError,
    ResourceLimitError,
    SolverError,
    SolverTimeout,
    ValidationError,
)
from .geometry import DcPolytope, canonicalize, dwc
from .io import parse_document, parse_game, render_game
from .model import (
    Combinator,
    Game,
    Kind,
    Objective,
    Owner,
    Query,
    QueryTemplate,
    Semantics,
    dualize,
    goal_unfolding,
    truncate,
)
from .qualitative import almost_sure_reach, almost_sure_safe, qualitative_dq

__version__ = "0.1.0"
