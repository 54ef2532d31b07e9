from __future__ import annotations

import json

import pytest

from torichodge.cli import run
from torichodge.poisson import PoissonStructure, an_structure, determinant_form

A1 = {"lattice_rank": 2, "rays": [[1, 0], [-1, 2]]}
CONIFOLD = {"lattice_rank": 3, "rays": [[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]]}


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data))
        return str(path)

    return write


def _run(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_t1(files, capsys):
    code, out = _run(capsys, ["t1", "--cone", files("a1.json", A1), "--degree", "2,2"])
    assert code == 0
    assert out["dims"] == {"1": 1, "2": 1}
    code, out = _run(capsys, ["t1", "--cone", files("c.json", CONIFOLD), "--degree=-1,0,2", "--hodge-index", "1"])
    assert code == 0 and set(out["dims"]) == {"1"}


def test_scan(files, capsys):
    code, out = _run(capsys, ["scan", "--cone", files("a1.json", A1), "--degree-box=-4..4,-4..4"])
    assert code == 0
    assert [row["degree"] for row in out["table"] if row["dims"].get("2")] == [[2, 2]]
    code, out = _run(capsys, ["scan", "--cone", files("a1.json", A1)])
    assert code == 0 and out["table"]


def test_empty_scan(files, capsys):
    orth = {"lattice_rank": 2, "rays": [[1, 0], [0, 1]]}
    code, out = _run(capsys, ["scan", "--cone", files("o.json", orth), "--degree-box=-2..2,-2..2"])
    assert code == 0 and out == {"table": []}


def test_analyze_and_hilbert(files, capsys):
    path = files("a1.json", A1)
    code, out = _run(capsys, ["analyze", "--cone", path])
    assert code == 0
    assert out["canonical_degree"] == [1, 1] and out["class_group"]["torsion"] == [2]
    code, out = _run(capsys, ["hilbert", "--cone", path])
    assert sorted(out["hilbert_basis"]) == [[0, 1], [1, 1], [2, 1]]


def test_oracle_compare(files, capsys):
    x73 = {"lattice_rank": 2, "rays": [[1, 0], [-3, 7]]}
    code, out = _run(capsys, ["oracle-compare", "--cone", files("x.json", x73)])
    assert code == 0 and out["oracle"] == "surface" and out["all_equal"]
    code, out = _run(capsys, ["oracle-compare", "--cone", files("c.json", CONIFOLD), "--degree-box=-1..1,-1..1,-1..2"])
    assert code == 0 and out["oracle"] == "threefold" and out["all_equal"]


def test_poisson_check(files, capsys):
    cone = files("a1.json", A1)
    good = files("p.json", an_structure(1).to_json())
    code, out = _run(capsys, ["poisson-check", "--cone", cone, "--poisson", good, "--samples", "20"])
    assert code == 0 and out["well_defined"] and out["jacobi"]["pass"]
    bad = files("m.json", PoissonStructure([((-3, -3), determinant_form())]).to_json())
    code, out = _run(capsys, ["poisson-check", "--cone", cone, "--poisson", bad, "--samples", "20"])
    assert code == 0 and not out["well_defined"] and not out["jacobi"]["pass"]


def test_quantize(files, capsys, tmp_path):
    cone = files("a1.json", A1)
    p = files("p.json", PoissonStructure([((0, 0), determinant_form())]).to_json())
    target = tmp_path / "q.json"
    argv = ["quantize", "--cone", cone, "--poisson", p, "--samples", "10", "--order", "2", "--output", str(target)]
    assert run(argv) == 0
    first = target.read_text()
    report = json.loads(first)
    assert report["mc_report"]["pass"] and all(report["lift_frame"]["checks"].values())
    assert run(argv) == 0
    assert target.read_text() == first
    code, out = _run(capsys, ["quantize", "--cone", cone, "--poisson", files("n.json", an_structure(1).to_json())])
    assert code == 1 and "degree-0" in out["error"]


def test_errors(files, capsys):
    code, out = _run(capsys, ["t1", "--cone", files("bad.json", '{"rays": [[1, 0],'), "--degree", "1,1"])
    assert code == 1 and "line 1" in out["error"]
    code, out = _run(capsys, ["t1", "--cone", files("a1.json", A1), "--degree", "2,2", "--k", "2"])
    assert code == 1 and "smooth codimension" in out["error"]
    code, out = _run(capsys, ["t1", "--cone", files("np.json", {"lattice_rank": 2, "rays": [[1, 0], [-1, 0]]}), "--degree", "1,1"])
    assert code == 1 and "pointed" in out["error"]
    assert run(["t1", "--cone", files("a1.json", A1)]) == 2
    capsys.readouterr()
