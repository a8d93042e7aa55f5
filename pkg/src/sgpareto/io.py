"""Reading and writing the line-oriented game format.

    game <name>
    states: <id>:<eve|adam|prob> ...
    init: <id>
    edges:
      <id> -> <id>:<p/q>, <id>:<p/q>     # prob state
      <id> -> <id> | <id> | ...          # eve/adam state
    objectives:
      <oname>: reach { <id> ... } | safe { <id> ... }
    query: dq|cq <oname> >= <p/q>, ...

Probabilistic states without an edge line are sinks (implied self-loop).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ParseError, ValidationError
from .model import Combinator, Game, Kind, Objective, Owner, Query, QueryTemplate

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\[\]@']*")
_FRACTION = re.compile(r"^[0-9]+(/[0-9]+)?$")
_SECTIONS = ("game", "states", "init", "edges", "objectives", "query")


@dataclass
class GameDocument:
    game: Game
    objectives: dict = field(default_factory=dict)
    query: Optional[Query] = None

    @property
    def template(self) -> Optional[QueryTemplate]:
        if self.query is not None:
            return self.query.template
        if self.objectives:
            return QueryTemplate(tuple(self.objectives.values()))
        return None


def _fraction(text: str, line: int, col: int) -> Fraction:
    text = text.strip()
    if not _FRACTION.match(text):
        raise ParseError(f"expected a fraction p/q, got {text!r}", line, col)
    value = Fraction(text)
    return value


def _strip_comment(raw: str) -> str:
    pos = raw.find("#")
    return raw if pos < 0 else raw[:pos]


class _Parser:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.name = "game"
        self.states: list[tuple[str, Owner, int, int]] = []  # name, owner, line, col
        self.index: dict[str, int] = {}
        self.init: Optional[tuple[str, int, int]] = None
        self.edges: dict[str, tuple[list, int, int]] = {}
        self.objectives: dict[str, tuple[Kind, list, int, int]] = {}
        self.query_line: Optional[tuple[str, int, int]] = None
        self.seen: set[str] = set()

    def run(self) -> GameDocument:
        section = None
        for lineno, raw in enumerate(self.lines, start=1):
            line = _strip_comment(raw)
            if not line.strip():
                continue
            stripped = line.strip()
            col0 = len(line) - len(line.lstrip()) + 1
            head, _, rest = stripped.partition(" ")
            key = head.rstrip(":")
            if key in _SECTIONS and (head.endswith(":") or key == "game"):
                if key in self.seen:
                    raise ParseError(f"section {key!r} appears twice", lineno, col0)
                self.seen.add(key)
                section = key
                rest_col = col0 + len(head) + 1
                if key == "game":
                    self.name = rest.strip() or "game"
                elif key == "states":
                    self._states(rest, lineno, rest_col)
                elif key == "init":
                    self.init = (rest.strip(), lineno, rest_col)
                elif key == "query":
                    self.query_line = (rest, lineno, rest_col)
                elif rest.strip():
                    if key == "edges":
                        self._edge(rest, lineno, rest_col)
                    else:
                        self._objective(rest, lineno, rest_col)
                continue
            if section == "edges":
                self._edge(stripped, lineno, col0)
            elif section == "objectives":
                self._objective(stripped, lineno, col0)
            elif section == "states":
                self._states(stripped, lineno, col0)
            else:
                raise ParseError(f"unexpected line {stripped!r}", lineno, col0)
        return self._build()

    def _states(self, text: str, line: int, col: int) -> None:
        for m in re.finditer(r"\S+", text):
            tok = m.group(0)
            c = col + m.start()
            name, sep, owner = tok.partition(":")
            if not sep or not _IDENT.fullmatch(name):
                raise ParseError(f"bad state declaration {tok!r}", line, c)
            try:
                o = Owner(owner)
            except ValueError:
                raise ParseError(f"unknown owner {owner!r}", line, c + len(name) + 1) from None
            if name in self.index:
                raise ParseError(f"duplicate state name {name!r}", line, c)
            self.index[name] = len(self.states)
            self.states.append((name, o, line, c))

    def _ref(self, name: str, line: int, col: int) -> str:
        if name not in self.index:
            raise ParseError(f"unknown state {name!r}", line, col)
        return name

    def _edge(self, text: str, line: int, col: int) -> None:
        src, arrow, rhs = text.partition("->")
        if not arrow:
            raise ParseError("expected '<id> -> ...'", line, col)
        src = src.strip()
        self._ref(src, line, col)
        if src in self.edges:
            raise ParseError(f"second edge line for state {src!r}", line, col)
        owner = self.states[self.index[src]][1]
        rhs_col = col + text.index("->") + 2
        row = []
        if owner is Owner.PROB:
            total = Fraction(0)
            for m in re.finditer(r"[^,]+", rhs):
                part = m.group(0)
                c = rhs_col + m.start() + (len(part) - len(part.lstrip()))
                tgt, sep, weight = part.strip().partition(":")
                if not sep:
                    raise ParseError(
                        f"probabilistic successor {part.strip()!r} needs ':p/q'", line, c
                    )
                tgt = tgt.strip()
                self._ref(tgt, line, c)
                p = _fraction(weight, line, c + len(tgt) + 1)
                if not 0 < p <= 1:
                    raise ParseError(f"probability {p} not in (0,1]", line, c)
                if any(t == tgt for t, _ in row):
                    raise ParseError(f"successor {tgt!r} listed twice", line, c)
                row.append((tgt, p))
                total += p
            if total != 1:
                raise ParseError(
                    f"probabilities of {src!r} sum to {total}, not 1", line, col
                )
        else:
            for m in re.finditer(r"[^|]+", rhs):
                part = m.group(0)
                c = rhs_col + m.start() + (len(part) - len(part.lstrip()))
                tgt = part.strip()
                if ":" in tgt:
                    raise ParseError(
                        f"{owner.value} state {src!r} takes alternatives 'a | b', "
                        "not probabilities", line, c,
                    )
                if not tgt:
                    raise ParseError("empty alternative", line, c)
                self._ref(tgt, line, c)
                if tgt in row:
                    raise ParseError(f"successor {tgt!r} listed twice", line, c)
                row.append(tgt)
        if not row:
            raise ParseError(f"state {src!r} has an empty action list", line, col)
        self.edges[src] = (row, line, col)

    def _objective(self, text: str, line: int, col: int) -> None:
        m = re.fullmatch(r"\s*(\S+?)\s*:\s*(reach|safe)\s*\{([^}]*)\}\s*", text)
        if not m:
            raise ParseError("expected '<name>: reach|safe { ids }'", line, col)
        oname, kind, body = m.groups()
        if oname in self.objectives:
            raise ParseError(f"duplicate objective {oname!r}", line, col)
        members = []
        body_col = col + m.start(3)
        for mm in re.finditer(r"\S+", body):
            members.append(self._ref(mm.group(0), line, body_col + mm.start()))
        self.objectives[oname] = (Kind(kind), members, line, col)

    def _build(self) -> GameDocument:
        if not self.states:
            raise ParseError("no states declared", None)
        if self.init is None:
            raise ParseError("missing 'init:' line", None)
        init, iline, icol = self.init
        self._ref(init, iline, icol)
        names = [s for s, *_ in self.states]
        succ, probs = [], []
        for name, owner, line, col in self.states:
            entry = self.edges.get(name)
            if entry is None:
                if owner is Owner.PROB:
                    succ.append((self.index[name],))
                    probs.append((Fraction(1),))
                    continue
                raise ParseError(
                    f"{owner.value} state {name!r} has no outgoing edge "
                    "(action sets must be non-empty)", line, col,
                )
            row = entry[0]
            if owner is Owner.PROB:
                succ.append(tuple(self.index[t] for t, _ in row))
                probs.append(tuple(p for _, p in row))
            else:
                succ.append(tuple(self.index[t] for t in row))
                probs.append(None)
        try:
            game = Game(
                tuple(names), tuple(o for _, o, *_ in self.states), self.index[init],
                tuple(succ), tuple(probs), self.name,
            )
        except ValidationError as exc:  # pragma: no cover - parser checks first
            raise ParseError(str(exc)) from exc
        objectives = {
            oname: Objective(kind, frozenset(self.index[s] for s in members), oname)
            for oname, (kind, members, _, _) in self.objectives.items()
        }
        query = None
        if self.query_line is not None:
            query = self._query(objectives, *self.query_line)
        return GameDocument(game, objectives, query)

    def _query(self, objectives: dict, text: str, line: int, col: int) -> Query:
        head, _, rest = text.strip().partition(" ")
        try:
            comb = Combinator(head)
        except ValueError:
            raise ParseError(f"query must start with 'dq' or 'cq', got {head!r}", line, col) from None
        objs, thresholds, strict = [], [], []
        rest_col = col + text.index(head) + len(head) + 1
        for m in re.finditer(r"[^,]+", rest):
            part = m.group(0)
            c = rest_col + m.start()
            mm = re.fullmatch(r"\s*(\S+)\s*(>=|>)\s*(\S+)\s*", part)
            if not mm:
                raise ParseError(f"expected '<objective> >= p/q', got {part.strip()!r}", line, c)
            oname, op, value = mm.groups()
            if oname not in objectives:
                raise ParseError(f"unknown objective {oname!r}", line, c)
            x = _fraction(value, line, c)
            if x > 1:
                raise ParseError(f"threshold {x} exceeds 1", line, c)
            objs.append(objectives[oname])
            thresholds.append(x)
            strict.append(op == ">")
        if not objs:
            raise ParseError("query lists no objectives", line, col)
        q = Query(QueryTemplate(tuple(objs), comb), tuple(thresholds), tuple(strict))
        q.check_user_dq()
        return q


def parse_document(text: str) -> GameDocument:
    return _Parser(text).run()


def parse_game(text: str) -> tuple[Game, Optional[Query]]:
    """Parse a game file; returns the game and its query clause, if any."""
    doc = parse_document(text)
    return doc.game, doc.query


def load_document(path) -> GameDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def _objective_names(template: QueryTemplate) -> list[str]:
    names, seen = [], set()
    for i, obj in enumerate(template.objectives):
        name = obj.name or f"o{i + 1}"
        while name in seen:
            name += "_"
        seen.add(name)
        names.append(name)
    return names


def render_game(
    game: Game,
    template: Optional[QueryTemplate] = None,
    query: Optional[Query] = None,
) -> str:
    """Canonical text form; ``parse_document(render_game(g))`` rebuilds ``g``."""
    if query is not None:
        template = query.template
    out = [f"game {game.name}"]
    out.append("states: " + " ".join(f"{n}:{o.value}" for n, o in zip(game.names, game.owners)))
    out.append(f"init: {game.names[game.init]}")
    out.append("edges:")
    for s in range(game.n_states):
        if game.owners[s] is Owner.PROB:
            if game.is_sink(s):
                continue
            row = ", ".join(f"{game.names[t]}:{p}" for t, p in game.transitions(s))
        else:
            row = " | ".join(game.names[t] for t in game.succ[s])
        out.append(f"  {game.names[s]} -> {row}")
    if template is not None:
        names = _objective_names(template)
        out.append("objectives:")
        for name, obj in zip(names, template.objectives):
            members = " ".join(game.names[s] for s in sorted(obj.states))
            out.append(f"  {name}: {obj.kind.value} {{ {members} }}")
        if query is not None:
            parts = [
                f"{name} {'>' if st else '>='} {x}"
                for name, x, st in zip(names, query.thresholds, query.strict)
            ]
            out.append(f"query: {query.combinator.value} " + ", ".join(parts))
    return "\n".join(out) + "\n"
