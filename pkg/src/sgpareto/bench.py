"""Seeded random games and the polytope-count benchmark."""
from __future__ import annotations

import csv
import io
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .ae import iterate_Phi
from .errors import ResourceLimitError, SolverTimeout, ValidationError
from .model import Game, Kind, Objective, Owner, Query, QueryTemplate

MODES = {"phi": False, "muphi": True}
CSV_COLUMNS = ["instance", "seed", "k", "mode", "n_bar", "timeout", "millis"]


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    num_states: int = 10
    num_objectives: int = 2
    branching: int = 2
    denominator: int = 8
    owner_weights: tuple = (1, 1, 1)  # eve, adam, prob

    def check(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.num_objectives < 1:
            raise ValidationError("need at least one objective")
        if self.num_states < self.num_objectives + 1:
            raise ValidationError("num_states must exceed num_objectives")
        if self.branching < 1:
            raise ValidationError("branching must be positive")
        if self.denominator < min(self.branching, self.num_states - 1):
            raise ValidationError("denominator bound too small for the branching")
        if len(self.owner_weights) != 3 or min(self.owner_weights) < 0 or not any(self.owner_weights):
            raise ValidationError("owner_weights needs three non-negative weights")

    def describe(self) -> str:
        return (
            f"dedicated target sinks; owners by weights eve:adam:prob="
            f"{':'.join(map(str, self.owner_weights))}; branching={self.branching} "
            f"distinct non-self successors; probabilities k/{self.denominator}"
        )


def instance_seed(seed: int, i: int) -> int:
    return random.Random(f"{seed}:{i}").getrandbits(64)


def random_game(p: GenParams) -> tuple[Game, Query]:
    """Random sink-query game: objective i reaches its own absorbing target."""
    p.check()
    rng = random.Random(p.seed)
    n_inner = p.num_states - p.num_objectives
    names = [f"s{i}" for i in range(n_inner)] + [f"T{i + 1}" for i in range(p.num_objectives)]
    owners = []
    succ = []
    probs = []
    kinds = (Owner.EVE, Owner.ADAM, Owner.PROB)
    b = min(p.branching, p.num_states - 1)
    for s in range(n_inner):
        owner = rng.choices(kinds, weights=p.owner_weights)[0]
        others = [t for t in range(p.num_states) if t != s]
        row = tuple(sorted(rng.sample(others, b)))
        owners.append(owner)
        succ.append(row)
        if owner is Owner.PROB:
            cuts = sorted(rng.sample(range(1, p.denominator), b - 1))
            parts = [hi - lo for lo, hi in zip([0] + cuts, cuts + [p.denominator])]
            probs.append(tuple(Fraction(x, p.denominator) for x in parts))
        else:
            probs.append(None)
    for i in range(p.num_objectives):
        t = n_inner + i
        owners.append(Owner.PROB)
        succ.append((t,))
        probs.append((Fraction(1),))
    game = Game(tuple(names), tuple(owners), 0, tuple(succ), tuple(probs), f"random_{p.seed}")
    objectives = tuple(
        Objective(Kind.REACH, frozenset({n_inner + i}), f"T{i + 1}")
        for i in range(p.num_objectives)
    )
    thresholds = (Fraction(1, 2),) * p.num_objectives
    return game, Query(QueryTemplate(objectives), thresholds)


def is_hard(game: Game, template: QueryTemplate, horizon: int = 10, timeout: float = 10.0) -> bool:
    """Some state keeps more than one polytope under pruning within the horizon
    (a timeout counts as hard)."""
    try:
        _, stats = iterate_Phi(game, template, horizon, use_mu=True, timeout=timeout)
    except (SolverTimeout, ResourceLimitError):
        return True
    return not stats.all_singletons()


def hard_random_game(p: GenParams, horizon: int = 10, attempts: int = 10_000) -> tuple[Game, Query, int]:
    """First hard instance among seeds p.seed, p.seed+1, ...; returns the seed used."""
    for j in range(attempts):
        seed = (p.seed + j) % 2**64
        q = GenParams(seed, p.num_states, p.num_objectives, p.branching, p.denominator, p.owner_weights)
        game, query = random_game(q)
        if is_hard(game, query.template, horizon):
            return game, query, seed
    raise ResourceLimitError(f"no hard instance within {attempts} seeds")


@dataclass
class BenchRow:
    instance: int
    seed: int
    k: int
    mode: str
    n_bar: Optional[Fraction]
    timeout: bool
    millis: float
    singletons: bool = True  # all counts up to k equal 1

    def csv_fields(self) -> list:
        return [
            self.instance, self.seed, self.k, self.mode,
            "" if self.n_bar is None else f"{float(self.n_bar):.4f}",
            int(self.timeout), f"{self.millis:.1f}",
        ]


@dataclass
class BenchConfig:
    games: int = 100
    params: GenParams = field(default_factory=GenParams)
    horizons: Sequence[int] = (1, 5, 10, 20)
    timeout: float = 10.0
    modes: Sequence[str] = ("phi", "muphi")
    hard_only: bool = False
    jobs: int = 1


def _run_instance(args) -> list:
    i, seed, params, horizons, timeout, modes, hard_only = args
    p = GenParams(seed, params.num_states, params.num_objectives, params.branching,
                  params.denominator, params.owner_weights)
    if hard_only:
        game, query, seed = hard_random_game(p, max(horizons))
    else:
        game, query = random_game(p)
    rows = []
    top = max(horizons)
    for mode in modes:
        use_mu = MODES[mode]
        start = time.perf_counter()
        try:
            _, stats = iterate_Phi(game, query.template, top, use_mu=use_mu, timeout=timeout)
            timed_out = False
        except (SolverTimeout, ResourceLimitError) as exc:
            stats = getattr(exc, "partial", None)
            timed_out = True
        done = stats.iterations if stats is not None else -1
        for k in sorted(horizons):
            if k <= done:
                counts = stats.counts[: k + 1]
                n_bar = Fraction(sum(counts[k]), len(counts[k]))
                ones = all(c == 1 for row in counts for c in row)
                millis = sum(stats.millis[:k])
                rows.append(BenchRow(i, seed, k, mode, n_bar, False, millis, ones))
            else:
                elapsed = (time.perf_counter() - start) * 1000
                rows.append(BenchRow(i, seed, k, mode, None, timed_out, elapsed, False))
    return rows


def run_bench(config: BenchConfig) -> list:
    """One row per instance, horizon and mode, ordered by instance id.

    Each (instance, mode) pair is iterated once up to the largest horizon;
    the row for horizon k reports the state after k steps and counts as a
    timeout when those k steps did not finish within the budget.
    """
    config.params.check()
    for m in config.modes:
        if m not in MODES:
            raise ValidationError(f"unknown mode {m!r}; use phi or muphi")
    if config.games == 0:
        return []
    tasks = [
        (i, instance_seed(config.params.seed, i), config.params, tuple(config.horizons),
         config.timeout, tuple(config.modes), config.hard_only)
        for i in range(config.games)
    ]
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            chunks = list(pool.map(_run_instance, tasks))
    else:
        chunks = [_run_instance(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


def bench_csv(rows: Sequence[BenchRow], params: Optional[GenParams] = None) -> str:
    buf = io.StringIO()
    if params is not None:
        buf.write(f"# generator: {params.describe()}; base seed {params.seed}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def read_bench_csv(text: str) -> list:
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        out.append(BenchRow(
            int(rec["instance"]), int(rec["seed"]), int(rec["k"]), rec["mode"],
            Fraction(rec["n_bar"]) if rec["n_bar"] else None,
            rec["timeout"] == "1", float(rec["millis"]),
        ))
    return out


@dataclass
class TableCell:
    mean_n_bar: Optional[float]
    timeouts: int
    completed: int


def summarize(rows: Sequence[BenchRow]) -> dict:
    """Per horizon and mode: mean n_bar over completed instances and the
    number of timeouts, plus the share of instances whose counts stay 1."""
    cells: dict = {}
    for row in rows:
        cells.setdefault((row.k, row.mode), []).append(row)
    table = {}
    for key, group in sorted(cells.items()):
        done = [r.n_bar for r in group if r.n_bar is not None]
        mean = float(sum(done) / len(done)) if done else None
        table[key] = TableCell(mean, sum(r.timeout for r in group), len(done))
    singleton_share = None
    mu_rows = [r for r in rows if r.mode == "muphi"]
    if mu_rows:
        top = max(r.k for r in mu_rows)
        last = [r for r in mu_rows if r.k == top]
        singleton_share = sum(r.singletons for r in last) / len(last)
    return {"table": table, "singleton_share": singleton_share}


def format_table(summary: dict) -> str:
    table = summary["table"]
    horizons = sorted({k for k, _ in table})
    modes = [m for m in ("muphi", "phi") if any(mm == m for _, mm in table)]
    label = {"muphi": "mu.Phi", "phi": "Phi"}
    head = ["k"] + [f"{label[m]} {col}" for m in modes for col in ("E[n_bar]", "T/O")]
    lines = ["  ".join(f"{h:>14}" for h in head)]
    for k in horizons:
        cells = [str(k)]
        for m in modes:
            c = table.get((k, m))
            cells.append("-" if c is None or c.mean_n_bar is None else f"{c.mean_n_bar:.2f}")
            cells.append("-" if c is None else str(c.timeouts))
        lines.append("  ".join(f"{v:>14}" for v in cells))
    share = summary.get("singleton_share")
    if share is not None:
        lines.append(f"instances with every count equal to 1 (mu.Phi): {share:.0%}")
    return "\n".join(lines)


def summary_json(summary: dict) -> dict:
    return {
        "table": [
            {"k": k, "mode": m, **asdict(c)} for (k, m), c in summary["table"].items()
        ],
        "singleton_share": summary["singleton_share"],
    }
