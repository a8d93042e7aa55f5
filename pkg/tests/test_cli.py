import json

import pytest

from sgpareto.cli import main
from sgpareto.io import load_document


@pytest.fixture
def game_file(tmp_path, capsys):
    def write(name="fig1", query=None):
        path = tmp_path / f"{name}.game"
        assert main(["examples", "emit", name, "--out", str(path)]) == 0
        if query:
            path.write_text(path.read_text() + f"query: {query}\n")
        return str(path)
    return write


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "examples", "list")
    assert code == 0 and out.splitlines()[0].startswith("fig1\t5 states")
    code, out, _ = run(capsys, "examples", "emit", "fig1")
    path = tmp_path / "f.game"
    path.write_text(out)
    assert load_document(str(path)).game.n_states == 5
    assert run(capsys, "examples", "emit")[0] == 1
    assert run(capsys, "examples", "emit", "nope")[0] == 1


@pytest.mark.parametrize("query, semantics, verdict", [
    ("dq T1 >= 3/4, T2 >= 3/4", "standard", "no"),
    ("dq T1 >= 3/4, T2 >= 3/4", "ae", "yes"),
    ("dq T1 >= 1/2, T2 >= 1", "standard", "yes"),
    ("cq T1 >= 1/4, T2 >= 1/4", "standard", "yes"),
    ("cq T1 >= 1/2, T2 >= 1/2", "standard", "no"),
    ("cq T1 >= 1/2, T2 >= 1/2", "ae", "yes"),
])
def test_check(capsys, game_file, query, semantics, verdict):
    path = game_file(query=query)
    code, out, _ = run(capsys, "check", path, "--semantics", semantics, "--auto")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == verdict and data["horizon"] == 2
    assert data["semantics"] == semantics and data["game"] == "fig1"


def test_check_errors(capsys, game_file):
    assert run(capsys, "check", game_file())[0] == 1
    path = game_file(query="cq T1 >= 1/2, T2 >= 1/2")
    assert run(capsys, "check", path)[0] == 1
    assert run(capsys, "check", path, "--horizon", "2", "--auto")[0] == 1
    assert run(capsys, "check", "/nonexistent.game", "--horizon", "1")[0] == 1
    code, _, err = run(capsys, "check", path, "--semantics", "ae", "--horizon", "30", "--timeout", "0")
    assert code == 2 and "aborted" in err


def test_check_open_targets_need_unfolding(capsys, game_file):
    path = game_file("lemma4_mdp", query="cq T1 >= 1/2, T2 >= 1/2")
    assert run(capsys, "check", path, "--horizon", "3")[0] == 1
    code, out, _ = run(capsys, "check", path, "--horizon", "3", "--unfold")
    assert code == 0 and json.loads(out)["verdict"] in ("yes", "no")


def test_pareto(capsys, game_file, tmp_path):
    path = game_file()
    code, out, _ = run(capsys, "pareto", path, "--horizon", "2")
    assert code == 0 and json.loads(out)["pareto"]["generators"] == [["0", "1/2"], ["1/2", "0"]]
    plot = tmp_path / "p.svg"
    out_file = tmp_path / "p.json"
    code, _, _ = run(capsys, "pareto", path, "--horizon", "2", "--mode", "cq-ae", "--stats",
                     "--out", str(out_file), "--plot", str(plot))
    data = json.loads(out_file.read_text())
    assert code == 0 and data["pareto"]["generators"] == [["1/2", "1/2"]] and "stats" in data
    assert plot.read_text().startswith("<svg")
    assert run(capsys, "pareto", path)[0] == 1


def test_qualitative(capsys, game_file):
    code, out, _ = run(capsys, "qualitative", game_file())
    data = json.loads(out)
    assert code == 0 and sorted(data["almost_sure"]["T1"]) == ["T1", "s1"]
    assert data["dq"]["s1"] is True and data["dq"]["s0"] is False


def test_random_is_byte_identical(capsys, tmp_path):
    _, a, _ = run(capsys, "random", "--seed", "5")
    _, b, _ = run(capsys, "random", "--seed", "5")
    _, c, _ = run(capsys, "random", "--seed", "6")
    assert a == b != c and "query: cq" in a
    path = tmp_path / "r.game"
    assert main(["random", "--seed", "5", "--out", str(path)]) == 0
    assert path.read_text() == a
    assert run(capsys, "random", "--states", "2")[0] == 1


def test_bench_csv_is_deterministic(capsys, tmp_path):
    def strip(path):
        # the wall-clock column is the only varying one
        return [line.rsplit(",", 1)[0] for line in path.read_text().splitlines()]

    files = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for f in files:
        code, out, _ = run(capsys, "bench", "--games", "3", "--horizons", "1,3", "--csv", str(f))
        assert code == 0 and "T/O" in out
    assert strip(files[0]) == strip(files[1])
    assert len(strip(files[0])) == 2 + 3 * 2 * 2
    code, out, _ = run(capsys, "bench", "--games", "0")
    assert code == 0 and "no instances" in out
    assert run(capsys, "bench", "--games", "1", "--modes", "fast")[0] == 1


def test_oracles(capsys, game_file):
    path = game_file(query="dq T1 >= 1/2, T2 >= 1")
    code, out, _ = run(capsys, "oracle", "lemma15", path, "--horizon", "2")
    assert code == 0 and json.loads(out)["holds"] is True
    code, out, _ = run(capsys, "oracle", "dq-witness", path, "--horizon", "2")
    assert code == 0 and "s1 -> T1" in out
    path = game_file(query="dq T1 >= 3/5, T2 >= 3/5")
    code, out, _ = run(capsys, "oracle", "dq-witness", path, "--horizon", "2")
    assert code == 0 and out.startswith("no witness")
    assert run(capsys, "oracle", "dq-witness", game_file(), "--horizon", "2")[0] == 1


def test_usage_errors_exit_one(capsys):
    assert run(capsys, "nonsense")[0] == 1
    code, _, err = run(capsys, "check")
    assert code == 1 and "usage:" in err
