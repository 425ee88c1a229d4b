from __future__ import annotations

import csv
import io
import json
import re
from pathlib import Path

import pytest

from patronet.cli import read_layout, run
from patronet.formats import load_network


@pytest.fixture
def pair_files(tmp_path: Path) -> tuple[Path, Path]:
    edges = tmp_path / "edges.csv"
    edges.write_text("from,to,weight\na,b,2\nc,b,3\nd,c,1\n", encoding="utf-8")
    actors = tmp_path / "actors.csv"
    actors.write_text(
        "id,display_name,rank,status,diocese\n"
        "a,Alder,Bishop,Active,Aldmoor\n"
        "b,Birch,Archbishop,Active,Brackwell\n"
        "c,Cedar,Auxiliary Bishop,Active,Brackwell\n"
        "d,Dogwood,Bishop Emeritus,Retired,Caddon\n",
        encoding="utf-8",
    )
    return edges, actors


@pytest.fixture
def generated(tmp_path: Path) -> tuple[Path, Path]:
    edges, actors = tmp_path / "gen.csv", tmp_path / "gen_actors.csv"
    assert run(["generate", "--preset", "cbcew", "--seed", "97", "-o", str(edges), "-a", str(actors)]) == 0
    return edges, actors


def test_validate_nonzero_diagonal_names_the_cell(tmp_path, capsys):
    matrix = tmp_path / "m.csv"
    matrix.write_text(",a,b\na,0,1\nb,0,2\n", encoding="utf-8")
    assert run(["validate", str(matrix), "--format", "matrix"]) == 1
    err = capsys.readouterr().err
    assert "validate: error" in err and "[b, b]" in err


def test_validate_ok(pair_files, capsys):
    edges, actors = pair_files
    assert run(["validate", str(edges), "--actors", str(actors)]) == 0
    out = capsys.readouterr()
    assert out.out == "ok: 4 actors, 3 ties\n"
    assert out.err.startswith("manifest: {")


@pytest.mark.parametrize(
    "argv",
    [[], ["frobnicate"], ["degrees"], ["degrees", "x.csv", "--key", "bogus"], ["ego", "x.csv"]],
)
def test_usage_errors_exit_two(argv, capsys):
    assert run(argv) == 2
    assert "usage:" in capsys.readouterr().err


def test_missing_file_exits_one(tmp_path, capsys):
    assert run(["stats", str(tmp_path / "absent.csv")]) == 1
    assert "error" in capsys.readouterr().err


def test_degrees_top_k_shape(pair_files, capsys):
    edges, actors = pair_files
    assert run(["degrees", str(edges), "--actors", str(actors), "--top", "10", "--key", "in_w"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["id", "name", "rank", "diocese", "in_w"]
    assert rows[1] == ["b", "Birch", "Archbishop", "Brackwell", "5"]
    assert rows[2] == ["c", "Cedar", "Auxiliary Bishop", "Brackwell", "1"]
    assert len(rows) == 5


def test_degrees_rank_distribution(pair_files, capsys):
    edges, actors = pair_files
    assert run(["degrees", str(edges), "--actors", str(actors), "--ranks"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert sum(int(r["count"]) for r in rows) == 4
    assert sum(float(r["percentage"]) for r in rows) == pytest.approx(100.0, abs=0.1)


def test_include_filter(pair_files, capsys):
    edges, actors = pair_files
    assert run(["validate", str(edges), "--actors", str(actors), "--include", "active"]) == 0
    assert capsys.readouterr().out == "ok: 3 actors, 2 ties\n"


def test_report_json(pair_files, tmp_path):
    edges, actors = pair_files
    out = tmp_path / "report.json"
    assert run(["report", str(edges), "--actors", str(actors), "--seed", "1", "-o", str(out)]) == 0
    report = json.loads(out.read_text())
    assert set(report) == {"stats", "top_degrees", "cores", "communities"}
    assert report["stats"]["actors"] == 4 and report["stats"]["ties"] == 3
    assert report["top_degrees"][0]["id"] == "b"
    assert report["cores"]["sizes"] == {"1": 4}
    assert report["communities"]["seed"] == 1
    manifest = json.loads((tmp_path / "report.json.manifest.json").read_text())
    assert manifest["command"] == "report" and manifest["seeds"] == {"seed": 1}
    assert set(manifest["inputs"]) == {str(edges), str(actors)}


def test_generated_seed_is_recorded(tmp_path, capsys):
    out = tmp_path / "g.csv"
    assert run(["generate", "-o", str(out)]) == 0
    manifest = json.loads((tmp_path / "g.csv.manifest.json").read_text())
    seed = manifest["seeds"]["seed"]
    again = tmp_path / "again.csv"
    assert run(["generate", "--seed", str(seed), "-o", str(again)]) == 0
    assert again.read_bytes() == out.read_bytes()


@pytest.mark.parametrize(
    "command",
    [
        ["communities", "--seed", "4"],
        ["layout", "--seed", "4"],
        ["render", "--seed", "4"],
        ["report", "--seed", "4"],
        ["stats", "--json"],
        ["kcore", "--assign"],
        ["ingest", "--to", "net"],
    ],
)
def test_same_manifest_same_bytes(generated, tmp_path, command):
    edges, actors = generated
    outputs = []
    for i in range(2):
        out = tmp_path / f"{command[0]}-{i}.out"
        argv = [command[0], str(edges), "--actors", str(actors), *command[1:], "-o", str(out)]
        assert run(argv) == 0
        outputs.append(out.read_bytes())
        manifest = json.loads(Path(str(out) + ".manifest.json").read_text())
        manifest.pop("outputs")
        manifest["arguments"].pop("output")
        outputs.append(json.dumps(manifest, sort_keys=True).encode())
    assert outputs[0] == outputs[2] and outputs[1] == outputs[3]


def test_ego_outputs(pair_files, tmp_path, capsys):
    edges, actors = pair_files
    ties = tmp_path / "ego_ties.csv"
    argv = ["ego", str(edges), "--actors", str(actors), "--actor", "a", "--radius", "2", "--ties", str(ties)]
    assert run(argv) == 0
    out = capsys.readouterr().out
    assert out.startswith("# ego=a radius=2 members=3 members_excluding_ego=2 ties=2\n")
    assert load_network(ties).n_ties == 2
    assert run(["ego", str(edges), "--actor", "zz"]) == 1


def test_kcore_modes(pair_files, capsys):
    edges, _ = pair_files
    assert run(["kcore", str(edges), "--k", "1"]) == 0
    assert capsys.readouterr().out == "# k=1 members=4 ties=3\na\nb\nc\nd\n"
    assert run(["kcore", str(edges), "--k", "2", "--filter"]) == 0
    assert json.loads(capsys.readouterr().out)["actors"] == []
    assert run(["kcore", str(edges), "--assign", "--filter"]) == 2


def test_full_pipeline(generated, tmp_path, capsys):
    edges, actors = generated
    common = [str(edges), "--actors", str(actors), "--include", "living"]
    assert run(["stats", *common, "--json", "-o", str(tmp_path / "stats.json")]) == 0
    stats = json.loads((tmp_path / "stats.json").read_text())
    assert stats["actors"] == 58
    assert run(["degrees", *common, "--top", "10", "-o", str(tmp_path / "top.csv")]) == 0
    assert run(["kcore", *common, "--k", "3", "-o", str(tmp_path / "core.txt")]) == 0
    assert run(["communities", *common, "--seed", "2", "-o", str(tmp_path / "comm.csv")]) == 0
    hub = next(csv.DictReader((tmp_path / "top.csv").open()))["id"]
    assert run(["ego", *common, "--actor", hub, "-o", str(tmp_path / "ego.txt")]) == 0
    assert run(["layout", *common, "--seed", "2", "-o", str(tmp_path / "xy.csv")]) == 0
    coords = read_layout(str(tmp_path / "xy.csv"))
    assert len(coords) == 58
    svg = tmp_path / "map.svg"
    assert run(["render", *common, "--layout", str(tmp_path / "xy.csv"), "-o", str(svg)]) == 0
    assert svg.read_text().count("<circle") + svg.read_text().count("<rect") == 58
    assert run(["render", *common, "--layout", str(tmp_path / "xy.csv"), "--to", "dot"]) == 0
    assert re.search(r'-> ".*" \[weight=3', capsys.readouterr().out)
