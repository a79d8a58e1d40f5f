import json

import pytest

from sortheap import workload as wl
from sortheap.bench import CSV_FIELDS, RunConfig, bench
from sortheap.cli import main
from sortheap.rank import RankParams


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(heap="fib")
    with pytest.raises(ValueError):
        RunConfig(workload="chaos")
    with pytest.raises(ValueError):
        RunConfig(audit=True, strategy="model")
    with pytest.raises(ValueError):
        RunConfig(vm=True, strategy="eager")


def test_csv_header_and_rows(forest_cls):
    res = bench(RunConfig(n=32, rounds=10, audit=True, forest_cls=forest_cls))
    lines = res.csv_text().splitlines()
    assert lines[0] == ",".join(CSV_FIELDS)
    assert len(lines) == 1 + res.summary["ops"]
    assert res.summary["ok"] and res.summary["chain_violations"] == 0
    assert all(float(r["ratio"]) <= 1 for r in res.rows)


def test_plain_run_leaves_audit_columns_empty():
    res = bench(RunConfig(n=16, rounds=4))
    assert res.rows[0]["delta_phi"] == "" and res.rows[0]["subops"] == ""


def test_vm_subops_column():
    res = bench(RunConfig(strategy="model", vm=True, n=64, rounds=20))
    xs = [r for r in res.rows if r["kind"] == "extract_min"]
    assert all(r["subops"] >= 4 for r in xs)
    assert res.summary["vm_subops"] == sum(r["subops"] for r in xs)


def test_heapsort_and_dijkstra_modes():
    assert bench(RunConfig(workload="heapsort", n=500, heap="pairing")).summary["sorted"]
    s = bench(RunConfig(workload="dijkstra", n=200)).summary
    assert s["dijkstra_matches_reference"] and s["ok"]


def test_file_workload(tmp_path):
    p = tmp_path / "w.txt"
    wl.write_workload(wl.gen_rounds(20, 5, 1), p)
    res = bench(RunConfig(workload=f"file:{p}", heap="pairing"))
    assert res.summary["matches_reference"]


def test_rank_tracking_with_vm():
    res = bench(RunConfig(strategy="model", vm=True, n=64, rounds=20, rank=RankParams(1, 2)))
    assert res.summary["ok"] and "rank_drops" in res.summary


@pytest.mark.parametrize("cfg", [
    dict(audit=True),
    dict(strategy="model", vm=True, rank=RankParams(2, 3)),
    dict(heap="pairing", workload="dijkstra"),
])
def test_determinism(tmp_path, cfg):
    outs = []
    for k in range(2):
        c = RunConfig(n=64, rounds=30, seed=5, csv_path=str(tmp_path / f"{k}.csv"),
                      workload_out=None if cfg.get("workload") else str(tmp_path / f"{k}.w"), **cfg)
        bench(c)
        outs.append(tmp_path / f"{k}.csv")
    assert outs[0].read_bytes() == outs[1].read_bytes()
    if not cfg.get("workload"):
        assert (tmp_path / "0.w").read_bytes() == (tmp_path / "1.w").read_bytes()


def test_cli_bench(tmp_path, capsys):
    csv_path = tmp_path / "out.csv"
    rc = main(["bench", "--n", "64", "--rounds", "10", "--audit", "--csv", str(csv_path),
               "--save-workload", str(tmp_path / "w.txt")])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["ok"] and csv_path.exists() and (tmp_path / "w.txt").exists()


def test_cli_rejects_bad_combo(tmp_path, capsys):
    assert main(["bench", "--strategy", "eager", "--vm", "--csv", str(tmp_path / "x")]) == 2
    with pytest.raises(SystemExit):
        main(["bench", "--rank", "1", "--csv", "x"])


def test_cli_gen_and_dijkstra(tmp_path, capsys):
    out = tmp_path / "w.txt"
    assert main(["gen", "--n", "16", "--rounds", "1", "--out", str(out)]) == 0
    assert len(wl.read_workload(out)) == 22
    gr = tmp_path / "g.gr"
    gr.write_text("p sp 3 1\na 1 2 5\n")
    assert main(["dijkstra", str(gr), "--heap", "pairing"]) == 0
    assert capsys.readouterr().out.split("\n")[:3] == ["1 0", "2 5", "3 inf"]
