"""Command-line interface.

Exit status: 0 when the analysis ran (the verdict is in the JSON on stdout),
1 for usage, parse and precondition errors, 2 when a guardrail or time
budget stopped the computation.
"""
from __future__ import annotations

import argparse
import sys

from . import geometry as geo
from .ae import dq_achievable, iterate_Phi, run_algorithm1
from .bench import BenchConfig, GenParams, bench_csv, format_table, hard_random_game, random_game, run_bench, summarize
from .corpus import builtin_game, builtin_names
from .cqvi import Decision, cq_achievable, is_exact_at, iterate_F, query_holds
from .errors import ResourceLimitError, SolverError, SolverTimeout
from .export import ParetoResult, dumps, svg
from .io import load_document, render_game
from .model import Combinator, Query, Semantics, goal_unfolding, has_closed_objectives, structural_depth
from .oracles import dq_witness_search, lemma15_check
from .qualitative import almost_sure, qualitative_dq


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _load(path, unfold=False):
    doc = load_document(path)
    game, template, query = doc.game, doc.template, doc.query
    if template is None:
        raise SolverError(f"{path}: the file declares no objectives")
    if unfold and not has_closed_objectives(game, template):
        game, template, _ = goal_unfolding(game, template)
        if query is not None:
            query = Query(template, query.thresholds, query.strict)
    return game, template, query


def _horizon(args, game) -> int:
    if getattr(args, "auto", False):
        depth = structural_depth(game)
        if depth is None:
            raise SolverError("--auto needs an acyclic game; pass --horizon")
        return depth
    if args.horizon is None:
        raise SolverError("pass --horizon K")
    return args.horizon


def _emit(data, out=None) -> None:
    text = dumps(data)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    game, template, query = _load(args.file, args.unfold)
    if query is None:
        raise SolverError(f"{args.file}: no 'query:' line to check")
    k = _horizon(args, game)
    sem = Semantics(args.semantics)
    if query.combinator is Combinator.DISJUNCTIVE:
        decision = dq_achievable(game, query, sem, k, timeout=args.timeout)
    elif sem is Semantics.STANDARD:
        decision = cq_achievable(game, query, k, timeout=args.timeout)
    else:
        p, _ = run_algorithm1(game, query.template, k, timeout=args.timeout)
        decision = Decision(query_holds(p, query), is_exact_at(game, k), k)
    out = {"game": game.name, "semantics": sem.value, "query": query.combinator.value}
    out.update(decision.to_json())
    _emit(out)
    return 0


def cmd_pareto(args) -> int:
    game, template, _ = _load(args.file, args.unfold)
    template = template.conjunctive()
    k = args.horizon
    if args.mode == "cq":
        trace = iterate_F(game, template, k, timeout=args.timeout, keep=False)
        result = ParetoResult(trace.final[game.init], k, is_exact_at(game, k) or trace.converged)
    else:
        sets, stats = iterate_Phi(game, template, k, use_mu=not args.no_mu, timeout=args.timeout)
        comps = sets[game.init]
        result = ParetoResult(geo.intersect_all(comps), k, is_exact_at(game, k),
                              stats if args.stats else None, comps)
    _emit(result.to_json(), args.out)
    if args.plot:
        polys = [result.pareto] + [p for p in result.components if p != result.pareto]
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(svg(polys))
    return 0


def cmd_qualitative(args) -> int:
    doc = load_document(args.file)
    game, template = doc.game, doc.template
    if template is None:
        raise SolverError(f"{args.file}: the file declares no objectives")
    names = {}
    sets = []
    for i, obj in enumerate(template.objectives):
        win = almost_sure(game, obj)
        sets.append(win)
        names[obj.name or f"o{i + 1}"] = win.names(game)
    per_state = {
        game.names[s]: qualitative_dq(game, template.disjunctive(), s)
        for s in range(game.n_states)
    }
    _emit({"game": game.name, "almost_sure": names, "dq": per_state})
    return 0


def cmd_random(args) -> int:
    params = GenParams(args.seed, args.states, args.dims)
    if args.hard_only:
        game, query, _ = hard_random_game(params)
    else:
        game, query = random_game(params)
    text = render_game(game, query=query)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    params = GenParams(args.seed, args.states, args.dims)
    config = BenchConfig(
        games=args.games, params=params,
        horizons=[int(h) for h in args.horizons.split(",") if h],
        timeout=args.timeout, modes=[m for m in args.modes.split(",") if m],
        hard_only=args.hard_only, jobs=args.jobs,
    )
    rows = run_bench(config)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(bench_csv(rows, params))
    if rows:
        print(format_table(summarize(rows)))
    else:
        print("no instances")
    return 0


def cmd_oracle(args) -> int:
    game, template, query = _load(args.file)
    k = args.horizon
    if args.which == "lemma15":
        report = lemma15_check(game, template.conjunctive(), k)
        _emit(report.to_json())
        return 0
    if query is None or query.combinator is not Combinator.DISJUNCTIVE:
        raise SolverError("dq-witness needs a 'query: dq ...' line")
    sigma = dq_witness_search(game, query, k)
    if sigma is None:
        print("no witness: Adam spoils every Eve strategy at this horizon")
    else:
        print("witness strategy:")
        print(sigma.render(game))
    return 0


def cmd_examples(args) -> int:
    if args.action == "list":
        for name in builtin_names():
            game, _ = builtin_game(name)
            print(f"{name}\t{game.n_states} states")
        return 0
    if not args.name:
        raise SolverError("examples emit needs a game name")
    game, template = builtin_game(args.name)
    text = render_game(game, template)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sgpareto", description="Exact multi-objective analysis of stochastic games")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="decide the query stored in a game file")
    c.add_argument("file")
    c.add_argument("--semantics", choices=["standard", "ae"], default="standard")
    h = c.add_mutually_exclusive_group()
    h.add_argument("--horizon", type=int)
    h.add_argument("--auto", action="store_true", help="use the structural depth as horizon")
    c.add_argument("--unfold", action="store_true", help="goal-unfold non-absorbing targets first")
    c.add_argument("--timeout", type=float)
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("pareto", help="horizon-k Pareto set of the conjunctive query")
    c.add_argument("file")
    c.add_argument("--mode", choices=["cq", "cq-ae"], default="cq")
    c.add_argument("--horizon", type=int, required=True)
    c.add_argument("--no-mu", action="store_true")
    c.add_argument("--stats", action="store_true")
    c.add_argument("--out")
    c.add_argument("--plot")
    c.add_argument("--unfold", action="store_true")
    c.add_argument("--timeout", type=float)
    c.set_defaults(func=cmd_pareto)

    c = sub.add_parser("qualitative", help="almost-sure winning sets")
    c.add_argument("file")
    c.set_defaults(func=cmd_qualitative)

    c = sub.add_parser("random", help="write a seeded random game")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--states", type=int, default=10)
    c.add_argument("--dims", type=int, default=2)
    c.add_argument("--hard-only", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_random)

    c = sub.add_parser("bench", help="polytope counts on random games")
    c.add_argument("--games", type=int, default=100)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--states", type=int, default=10)
    c.add_argument("--dims", type=int, default=2)
    c.add_argument("--horizons", default="1,5,10,20")
    c.add_argument("--timeout", type=float, default=10.0)
    c.add_argument("--modes", default="phi,muphi")
    c.add_argument("--hard-only", action="store_true")
    c.add_argument("--jobs", type=int, default=1)
    c.add_argument("--csv")
    c.set_defaults(func=cmd_bench)

    c = sub.add_parser("oracle", help="brute-force cross-checks")
    c.add_argument("which", choices=["lemma15", "dq-witness"])
    c.add_argument("file")
    c.add_argument("--horizon", type=int, required=True)
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("examples", help="built-in games")
    c.add_argument("action", choices=["list", "emit"])
    c.add_argument("name", nargs="?")
    c.add_argument("--out")
    c.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ResourceLimitError, SolverTimeout) as exc:
        print(f"aborted: {exc}", file=sys.stderr)
        return 2
    except (SolverError, KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
