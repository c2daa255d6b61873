import json

import numpy as np
import pytest

from isoread.cli import main
from isoread.graph import parse_graph6


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_and_wl_check(capsys):
    code, out, _ = run(capsys, "gen", "cycles", "--k", "3")
    assert code == 0
    a, b = out.split()
    assert parse_graph6(a).n == 6
    code, out, _ = run(capsys, "wl-check", a, b)
    assert json.loads(out) == {"wl_equivalent": True, "isomorphic": False}


def test_gen_families(capsys):
    for fam, count in [("cfi-k3", 2), ("srg16", 2), ("petersen", 1), ("er", 1)]:
        code, out, _ = run(capsys, "gen", fam)
        assert code == 0 and len(out.split()) == count
    code, _, err = run(capsys, "gen", "gm-petersen")
    assert code == 2 and "Godsil-McKay" in err


def test_decompose_examples(capsys):
    c6 = "EhEG"
    code, out, _ = run(capsys, "decompose", "--graph", c6, "--coeffs", "1,5,3,2")
    d = json.loads(out)
    assert [o["pair"] for o in d["orbits"]] == [[0, 0], [0, 3], [0, 2], [0, 1]]
    assert np.allclose(d["eigenvalues"], [16, 1, 1, -2, -5, -5], atol=1e-9)
    assert d["block_sizes"] == [1, 2, 1, 2]
    assert [b["size"] for b in d["sorted_blocks"]] == [2, 2, 1, 1]
    code, out, _ = run(capsys, "decompose", "--graph", "EwCW", "--coeffs", "5,2,1")
    d = json.loads(out)
    assert np.allclose(d["eigenvalues"], [12, 6, 3, 3, 3, 3], atol=1e-9)
    assert d["block_sizes"] == [1, 1, 4]


def test_decompose_errors(capsys):
    code, _, err = run(capsys, "decompose", "--graph", "EhEG", "--coeffs", "1,2")
    assert code == 2 and "coefficients" in err
    code, _, err = run(capsys, "decompose", "--graph", "E")
    assert code == 2 and "edge bytes" in err


def test_readout(tmp_path, capsys):
    g = tmp_path / "c6.g6"
    g.write_text("EhEG\n")
    m = tmp_path / "m.csv"
    m.write_text("\n".join("1,2" for _ in range(6)) + "\n")
    code, out, _ = run(capsys, "readout", "--graph", str(g), "--features", str(m), "--kind", "sum")
    assert json.loads(out) == [6.0, 12.0]
    code, out, _ = run(capsys, "readout", "--graph", str(g), "--features", str(m), "--kind", "isotypic",
                       "--max-blocks", "4", "--rp-dim", "2")
    assert len(json.loads(out)) == 4 * 5
    code, out, _ = run(capsys, "readout", "--graph", str(g), "--features", str(m), "--kind", "sum", "--center")
    assert np.allclose(json.loads(out), 0)


def test_separate(capsys):
    code, out, _ = run(capsys, "separate", "--pair", "EwCW", "EhEG", "--seeds", "2")
    r = json.loads(out)[0]
    assert r["separated"] and "total_seconds" not in r
    code, out, _ = run(capsys, "separate", "--family", "cfi-k3", "--seeds", "1", "--readout", "sum")
    assert [x["separated"] for x in json.loads(out)] == [False] * 3


def test_suite_output_deterministic(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("ISOREAD_SEED", "11")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "suite", "--seeds", "1", "--out", str(a), "--quiet")
    run(capsys, "suite", "--seeds", "1", "--out", str(b), "--quiet", "--workers", "4")
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["config"]["master_seed"] == 11
    c = tmp_path / "c.csv"
    code, out, _ = run(capsys, "suite", "--seeds", "1", "--readout", "sum", "--out", str(c))
    assert c.read_text().startswith("pair_id,")
    assert "cycles" in out


def test_sweep_and_bench(tmp_path, capsys):
    code, out, _ = run(capsys, "sweep", "--blocks", "1,8")
    lines = out.split()
    assert lines[0] == "max_blocks,separated" and len(lines) == 3
    code, out, _ = run(capsys, "bench-er", "--ns", "8,16", "--count", "2")
    assert len(out.split()) == 3
