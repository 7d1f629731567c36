import json

import pytest

from holoperc import io
from holoperc.cli import main
from holoperc.netmodel import Graph, PercParams, Scenario


@pytest.fixture
def scenario_file(tmp_path):
    def write(nf=(), k1=1, k2=1, code=0b1011010101, n=5, **extra):
        g = Graph.from_code(n, code) if n == 5 else Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])
        doc = io.scenario_to_dict(Scenario(g, PercParams(k1, k2), frozenset(nf)))
        doc.update(extra)
        path = tmp_path / f"scen_{len(list(tmp_path.iterdir()))}.json"
        path.write_text(json.dumps(doc))
        return path
    return write


def test_run_writes_outputs(scenario_file, tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--scenario", str(scenario_file()), "--k1", "1", "--k2", "1", "--out", str(out)]) == 0
    assert {p.name for p in out.iterdir()} >= {"report.json", "skeleton.dot", "cycles.txt", "skeleton.json"}
    doc = json.loads((out / "report.json").read_text())
    assert doc["params"]["k1"] == 1 and doc["height_complexity"] == len(doc["levels"])
    assert (out / "skeleton.dot").read_text().startswith("digraph")
    assert all(line.startswith("period ") for line in (out / "cycles.txt").read_text().splitlines())


def test_run_with_graph_file(tmp_path):
    gpath = tmp_path / "g.txt"
    gpath.write_text(io.format_edge_list(Graph.from_code(5, 77)))
    rc = main(["run", "--graph", str(gpath), "--k1", "2", "--k2", "1", "--non-forceable", "11,19",
               "--out", str(tmp_path / "o")])
    assert rc == 0
    doc = json.loads((tmp_path / "o" / "report.json").read_text())
    assert doc["params"]["non_forceable"] == [11, 19]


def test_all_states_non_forceable(scenario_file, tmp_path):
    path = scenario_file(nf=range(1, 33))
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path / "o")]) == 0
    skel = json.loads((tmp_path / "o" / "skeleton.json").read_text())
    assert skel["generators"] == ["t"]


def test_missing_graph_file(tmp_path):
    assert main(["run", "--graph", str(tmp_path / "nope.txt"), "--k1", "1", "--k2", "1",
                 "--out", str(tmp_path / "o")]) == 2


@pytest.mark.parametrize("field,value", [("k1", "x"), ("edges", [[1, 9]]), ("format", 2), ("non_forceable", [99])])
def test_malformed_field(scenario_file, tmp_path, capsys, field, value):
    path = scenario_file(**{field: value}) if field != "k1" else scenario_file()
    if field == "k1":
        doc = json.loads(path.read_text())
        doc["k1"] = value
        path.write_text(json.dumps(doc))
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path / "o")]) == 2
    assert field in capsys.readouterr().err


def test_capacity(scenario_file, tmp_path):
    path = scenario_file(n=7)
    assert main(["run", "--scenario", str(path), "--out", str(tmp_path / "o")]) == 3
    assert main(["run", "--scenario", str(scenario_file()), "--max-n", "4", "--out", str(tmp_path / "o")]) == 3


def test_sweep_grid(scenario_file, tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--scenario", str(scenario_file(nf=(11, 19, 20, 25))), "--k1-range", "1:5",
                 "--k2-range", "1:5", "--out", str(out), "--format", "json"]) == 0
    for name in ("kr_upper", "height_complexity", "irreversibility"):
        rows = (out / f"{name}.csv").read_text().splitlines()
        assert len(rows) == 6 and all(len(r.split(",")) == 6 for r in rows)
        assert rows[0] == "k2\\k1,1,2,3,4,5"
        assert [r.split(",")[0] for r in rows[1:]] == ["5", "4", "3", "2", "1"]
    kr = io.parse_heatmap_csv((out / "kr_upper.csv").read_text())
    hc = io.parse_heatmap_csv((out / "height_complexity.csv").read_text())
    assert all(kr[c] <= hc[c] for c in kr)
    doc = json.loads((out / "sweep.json").read_text())
    assert len(doc["cells"]) == 25


def test_sweep_uneven_ranges(scenario_file, tmp_path):
    out = tmp_path / "sw"
    assert main(["sweep", "--scenario", str(scenario_file()), "--k1-range", "2:4", "--k2-range", "1:2",
                 "--out", str(out)]) == 0
    rows = (out / "kr_upper.csv").read_text().splitlines()
    assert len(rows) == 3 and rows[0] == "k2\\k1,2,3,4"


@pytest.mark.parametrize("rng_flag", [["--k1-range", "0:3"], ["--k2-range", "1:6"], ["--k1-range", "4:2"]])
def test_sweep_bad_range(scenario_file, tmp_path, rng_flag):
    assert main(["sweep", "--scenario", str(scenario_file()), *rng_flag, "--out", str(tmp_path / "o")]) == 2


def test_sweep_jobs_independent(scenario_file, tmp_path):
    path = str(scenario_file(nf=(8, 15, 20, 22, 29)))
    main(["sweep", "--scenario", path, "--out", str(tmp_path / "a"), "--format", "json"])
    main(["sweep", "--scenario", path, "--out", str(tmp_path / "b"), "--format", "json", "--jobs", "2"])
    for name in ("kr_upper.csv", "height_complexity.csv", "irreversibility.csv", "sweep.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_reconstruct_no_constraints(tmp_path):
    out = tmp_path / "rc"
    assert main(["reconstruct", "--constraints", "none", "--no-signatures", "--out", str(out)]) == 0
    doc = json.loads((out / "candidates.json").read_text())
    assert doc["count"] == 1024 and len(list((out / "candidates").iterdir())) == 1024
    g = io.read_edge_list(out / "candidates" / "1023.txt")
    assert len(g.edges()) == 10


def test_reconstruct_degree_constraint(tmp_path):
    out = tmp_path / "rc"
    assert main(["reconstruct", "--constraints", "max_degree_3", "--no-signatures", "--out", str(out)]) == 0
    assert json.loads((out / "candidates.json").read_text())["count"] < 1024


def test_reconstruct_signatures(tmp_path):
    out = tmp_path / "rc"
    assert main(["reconstruct", "--constraints", "max_degree_3,s2_levels", "--out", str(out)]) == 0
    doc = json.loads((out / "candidates.json").read_text())
    for cand in doc["candidates"]:
        assert cand["signatures"]["scenario2"]["height_at_1_1"] == 8


def test_reconstruct_unknown_constraint(tmp_path):
    assert main(["reconstruct", "--constraints", "bogus", "--out", str(tmp_path)]) == 2


def test_export_dot(scenario_file, tmp_path, capsys):
    assert main(["export-dot", "--scenario", str(scenario_file()), "--k1", "2", "--k2", "2"]) == 0
    assert capsys.readouterr().out.startswith("digraph")
    target = tmp_path / "s.dot"
    assert main(["export-dot", "--scenario", str(scenario_file()), "--out", str(target)]) == 0
    assert "->" in target.read_text()


def test_edge_list_roundtrip(tmp_path):
    for code in (0, 5, 777, 1023):
        g = Graph.from_code(5, code)
        assert io.parse_edge_list(io.format_edge_list(g)) == g


@pytest.mark.parametrize("text", ["n 3\n1 2\n", "#v1\n1 2\n", "#v1\nn 3\n1 2 3\n", "#v1\nn 3\n1 4\n"])
def test_edge_list_errors(text):
    from holoperc.errors import InvalidInputError
    with pytest.raises(InvalidInputError):
        io.parse_edge_list(text)
