import json
import random
import re

import pytest
from hypothesis import given, strategies as st

from helpers import random_polytope
from sgpareto import geometry as geo
from sgpareto.ae import run_algorithm1
from sgpareto.bench import BenchConfig, read_bench_csv, run_bench
from sgpareto.corpus import builtin_game
from sgpareto.errors import DimensionError
from sgpareto.export import ParetoResult, export, read_polytope, svg


def fig1_result():
    g, t = builtin_game("fig1")
    p, stats = run_algorithm1(g, t.conjunctive(), 2)
    return ParetoResult(p, 2, True, stats)


def test_result_json(tmp_path):
    result = fig1_result()
    data = result.to_json()
    assert data["pareto"] == {"dim": 2, "generators": [["1/2", "1/2"]]}
    assert data["horizon"] == 2 and data["exact"] is True
    assert data["stats"]["n_bar"] == ["1", "6/5", "7/5"]
    assert data["stats"]["per_state"]["s2"] == [1, 2, 2]
    path = tmp_path / "r.json"
    export(result, "json", path)
    assert json.loads(path.read_text()) == data
    assert read_polytope(path) == result.pareto


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_polytope_round_trip(seed, dim):
    p = random_polytope(random.Random(seed), dim)
    assert geo.DcPolytope.from_json(json.loads(json.dumps(p.to_json()))) == p


def test_svg_markers():
    text = svg([geo.dwc((1, 0), (0, 1))])
    assert len(re.findall(r'<circle class="generator"', text)) == 2
    assert len(re.findall(r'<text class="label"', text)) == 2
    assert "(1, 0)" in text and "(0, 1)" in text


def test_svg_needs_two_dimensions(tmp_path):
    with pytest.raises(DimensionError):
        svg([geo.full(3)])
    with pytest.raises(DimensionError):
        export(geo.full(1), "svg", tmp_path / "x.svg")


def test_csv_and_set_exports(tmp_path):
    rows = run_bench(BenchConfig(games=2, horizons=(1, 2)))
    export(rows, "csv", tmp_path / "b.csv")
    assert len(read_bench_csv((tmp_path / "b.csv").read_text())) == len(rows)
    export([geo.full(2), geo.zero(2)], "json", tmp_path / "s.json")
    assert geo.set_from_json(json.loads((tmp_path / "s.json").read_text())) == (geo.full(2), geo.zero(2))
    with pytest.raises(ValueError):
        export(geo.full(2), "png", tmp_path / "p.png")
    with pytest.raises(TypeError):
        export([geo.full(2), 3], "csv", tmp_path / "p.csv")
