"""JSON, CSV and SVG output."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from . import geometry as geo
from .ae import AeRunStats
from .bench import BenchRow, bench_csv
from .errors import DimensionError


@dataclass
class ParetoResult:
    pareto: geo.DcPolytope
    horizon: int
    exact: bool
    stats: Optional[AeRunStats] = None
    components: tuple = ()  # for plots: the polytopes intersected at init

    def to_json(self) -> dict:
        out = {"pareto": self.pareto.to_json(), "horizon": self.horizon, "exact": self.exact}
        if self.stats is not None:
            stats = self.stats.to_json()
            out["stats"] = {"n_bar": stats["n_bar"], "per_state": stats["per_state"]}
        return out


def dumps(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def read_polytope(path) -> geo.DcPolytope:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "pareto" in data:
        data = data["pareto"]
    return geo.DcPolytope.from_json(data)


def svg(polytopes: Sequence[geo.DcPolytope], size: int = 320, highlight: int = 0) -> str:
    """Draw 2-D polytopes in the unit square; generators of the highlighted
    polytope get labelled markers, the others are outlined only."""
    polytopes = list(polytopes)
    if any(p.dim != 2 for p in polytopes):
        raise DimensionError("svg export needs 2-dimensional polytopes")
    pad = 40
    scale = size

    def xy(pt):
        return pad + float(pt[0]) * scale, pad + (1 - float(pt[1])) * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" '
        f'height="{size + 2 * pad}" viewBox="0 0 {size + 2 * pad} {size + 2 * pad}">',
        f'<rect x="{pad}" y="{pad}" width="{scale}" height="{scale}" fill="none" stroke="#999"/>',
    ]
    for i, p in enumerate(polytopes):
        gens = list(p.generators)
        outline = [(geo.ZERO, geo.ZERO), (geo.ZERO, gens[0][1])] + gens + [(gens[-1][0], geo.ZERO)]
        points = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(xy, outline))
        style = 'fill="#4a7ebb" fill-opacity="0.35" stroke="#1f4e79"' if i == highlight else \
            'fill="none" stroke="#888" stroke-dasharray="4 3"'
        parts.append(f'<polygon class="polytope" points="{points}" {style}/>')
    if polytopes:
        for g in polytopes[highlight].generators:
            x, y = xy(g)
            label = escape(f"({g[0]}, {g[1]})")
            parts.append(f'<circle class="generator" cx="{x:.2f}" cy="{y:.2f}" r="3.5" fill="#1f4e79"/>')
            parts.append(f'<text class="label" x="{x + 6:.2f}" y="{y - 6:.2f}" font-size="11">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def export(result, fmt: str, path) -> None:
    """Write a result (polytope, ParetoResult or bench rows) as json, csv or svg."""
    if fmt == "json":
        if isinstance(result, geo.DcPolytope):
            text = dumps(result.to_json())
        elif isinstance(result, (list, tuple)) and all(isinstance(p, geo.DcPolytope) for p in result):
            text = dumps(geo.set_to_json(result))
        else:
            text = dumps(result.to_json())
    elif fmt == "csv":
        if not all(isinstance(r, BenchRow) for r in result):
            raise TypeError("csv export takes benchmark rows")
        text = bench_csv(result)
    elif fmt == "svg":
        if isinstance(result, ParetoResult):
            polys = [result.pareto] + [p for p in result.components if p != result.pareto]
        elif isinstance(result, geo.DcPolytope):
            polys = [result]
        else:
            polys = list(result)
        text = svg(polys)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
