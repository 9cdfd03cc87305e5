import json
import os

import numpy as np
import pytest

from hbl import cli, lab
from hbl.io import (
    InputError,
    config_hash,
    load_json,
    parse_instance,
    read_grid_csv,
    read_triple,
    write_grid_csv,
    write_triple,
)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_grid_csv_roundtrip(tmp_path):
    u = lab.gaussian(0.7, mass=2.5, L=4, N=64)
    write_grid_csv(tmp_path / "u.csv", u)
    assert (tmp_path / "u.csv").read_text().startswith("# spacing=0.125\nx_left,value\n")
    assert read_grid_csv(tmp_path / "u.csv") == u
    assert not [p for p in os.listdir(tmp_path) if p.endswith(".tmp")]


def test_triple_manifest(tmp_path):
    t = lab.gaussian_triple((1, 0.5, 1.5), (1, 2, 3), L=8, N=128)
    m = write_triple(tmp_path, t, "t")
    back = read_triple(m)
    assert back.masses == t.masses and all(a == b for a, b in zip(back.parts(), t.parts()))


def test_bad_csv(tmp_path):
    (tmp_path / "x.csv").write_text("x_left,value\n0,1\n")
    with pytest.raises(InputError):
        read_grid_csv(tmp_path / "x.csv")


def test_config_hash_is_stable():
    assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_parse_errors(tmp_path):
    with pytest.raises(InputError, match="maps"):
        parse_instance({"d": 2, "maps": [[[1, "q"]]]})
    with pytest.raises(InputError, match="m"):
        parse_instance({"bundled": "young", "m": [-1, 0, 0]})
    with pytest.raises(InputError, match="bundled"):
        parse_instance({"bundled": "nope"})
    (tmp_path / "bad.json").write_text("{oops")
    with pytest.raises(InputError):
        load_json(tmp_path / "bad.json")


def test_polytope_command(tmp_path):
    out = tmp_path / "out.json"
    assert cli.main(["polytope", "-c", write(tmp_path, "y.json", {"bundled": "young"}), "-o", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["vertices"] == [["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]]
    assert "config_hash" in rep and rep["seed"] == 0
    lw = write(tmp_path, "lw.json", {"bundled": "loomis_whitney"})
    assert cli.main(["polytope", "-c", lw, "-o", str(out)]) == 0
    assert json.loads(out.read_text())["vertices"] == [["1", "1"]]


def test_polytope_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"d": 2, "maps": [[[1, "x"]]]})
    assert cli.main(["polytope", "-c", bad]) == 1
    assert "maps" in capsys.readouterr().err
    empty = write(tmp_path, "e.json", {"d": 2, "maps": [[[1, 0]]], "E": [[], [[0, 1]], [[1, 0], [0, 1]]]})
    assert cli.main(["polytope", "-c", empty, "-o", str(tmp_path / "o.json")]) == 2


def test_certify_command(tmp_path):
    cfg = write(tmp_path, "y.json", {"bundled": "young", "m": [2, 1, 0]})
    out = tmp_path / "c.json"
    assert cli.main(["certify", "-c", cfg, "-o", str(out)]) == 0
    c = json.loads(out.read_text())["certificates"][0]
    assert c["primal"] == c["dual"] == "1"
    assert c["box_edges"] == [[["0", "1"], "1"], [["1", "0"], "0"]]
    csv_out = tmp_path / "s.csv"
    assert cli.main(["certify", "-c", cfg, "--sweep", "m=0..12", "-o", str(csv_out)]) == 0
    lines = csv_out.read_text().splitlines()
    assert lines[0].startswith("# config_hash=") and len(lines) == 2 + 13
    neg = write(tmp_path, "n.json", {"bundled": "young", "m": [-1, 0, 0]})
    assert cli.main(["certify", "-c", neg]) == 1
    assert cli.main(["certify", "-c", cfg, "--sweep", "m=zero"]) == 1


def test_check_b_command(tmp_path):
    cfg = write(tmp_path, "y.json", {"bundled": "young"})
    good = write(tmp_path, "g.json", {"kind": "monomial", "s": ["2/3", "2/3", "2/3"]})
    bad = write(tmp_path, "b.json", {"kind": "monomial", "s": [1, 1, 1]})
    out = tmp_path / "r.json"
    assert cli.main(["check-b", "-c", cfg, "-b", good, "--samples", "500", "-o", str(out)]) == 0
    assert json.loads(out.read_text())["passed"] is True
    assert cli.main(["check-b", "-c", cfg, "-b", bad, "--samples", "500", "--checks", "condition2",
                     "-o", str(out)]) == 4
    rep = json.loads(out.read_text())
    assert rep["checks"][0]["witness"]["lambda"]
    assert cli.main(["check-b", "-c", cfg, "-b", good, "--checks", "bogus"]) == 1


def test_reports_are_reproducible(tmp_path):
    cfg = write(tmp_path, "y.json", {"bundled": "young"})
    good = write(tmp_path, "g.json", {"kind": "sum", "terms": [{"kind": "monomial", "s": [1, 1, 0]},
                                                                {"kind": "monomial", "s": [0, 1, 1]}]})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        cli.main(["--seed", "7", "check-b", "-c", cfg, "-b", good, "--samples", "300", "-o", str(p)])
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 7


def test_extremize_command(tmp_path):
    B = write(tmp_path, "b.json", {"kind": "monomial", "s": ["2/3", "2/3", "2/3"]})
    out = tmp_path / "ex"
    rc = cli.main(["extremize", "-b", B, "--masses", "1,1,1", "--grid", "L=8,N=256",
                   "--sigmas", "0.8:1.2:3", "--iters", "0", "-o", str(out)])
    assert rc == 0
    rep = json.loads((out / "report.json").read_text())
    assert rep["ascent"]["history"] == [rep["gaussian"]["value"]]
    assert rep["gaussian"]["flatness"] < 1e-4
    assert rep["flatness_table"]["size"] == 27
    final = read_triple(out / "final.json")
    start = read_triple(out / "gaussian.json")
    assert all(a == b for a, b in zip(final.parts(), start.parts()))


def test_extremize_input_errors(tmp_path):
    B = write(tmp_path, "b.json", {"kind": "monomial", "s": [1, 1, 0]})
    assert cli.main(["extremize", "-b", B, "--masses", "1,1"]) == 1
    assert cli.main(["extremize", "-b", B, "--grid", "L=2,N=16", "--sigmas", "1:2:2"]) == 1


def test_threads_env(tmp_path, monkeypatch):
    monkeypatch.setenv("HBL_THREADS", "zero")
    cfg = write(tmp_path, "y.json", {"bundled": "young"})
    assert cli.main(["polytope", "-c", cfg]) == 1
