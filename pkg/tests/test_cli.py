import csv
import io
import shutil
from pathlib import Path

import pytest

from helpers import DATA
from quadcut.cli import main
from quadcut.model import load_instance, parse_instance


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(text):
    return dict(line.split(": ", 1) for line in text.strip().splitlines())


def test_gen_density_zero(capsys):
    code, out, _ = run_cli(capsys, "gen", "--n", 5, "--density", 0, "--seed", 1)
    assert code == 0
    inst = parse_instance(out)
    assert not inst.B.any()


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.qp", tmp_path / "b.qp"
    for path in (a, b):
        assert run_cli(capsys, "gen", "--n", 8, "--density", 0.4, "--seed", 9, "--constraint", "card:eq:half", "--out", path)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_pinned_output(tmp_path, capsys):
    out = tmp_path / "g.qp"
    run_cli(capsys, "gen", "--n", 4, "--density", 0.5, "--seed", 1, "--constraint", "knap:le:0.5", "--out", out)
    assert out.read_bytes() == (DATA / "gen_n4_seed1_knap.qp").read_bytes()


def test_gen_full_density(capsys):
    _, out, _ = run_cli(capsys, "gen", "--n", 3, "--density", 1, "--seed", 2)
    assert sum(1 for line in out.splitlines() if line.startswith("b ")) == 6


@pytest.mark.parametrize("cls", ["box", "card:ge:2", "card:eq:half", "knap:le:0.4", "knap:ge:0.3"])
def test_gen_round_trip(tmp_path, capsys, cls):
    out = tmp_path / "g.qp"
    run_cli(capsys, "gen", "--n", 7, "--density", 0.5, "--seed", 3, "--constraint", cls, "--out", out)
    inst = load_instance(out)
    from quadcut.model import format_instance

    assert parse_instance(format_instance(inst)) == inst


def test_gen_invalid_spec(capsys):
    code, _, err = run_cli(capsys, "gen", "--n", 3, "--seed", 1, "--constraint", "card:eq:9")
    assert code == 2
    assert "invalid spec" in err


def test_solve_e1_bml_trace(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    code, out, _ = run_cli(capsys, "solve", DATA / "e1.qp", "--algo", "bml", "--eps", 0, "--trace", trace)
    assert code == 0
    r = report(out)
    assert r["value"] == "-2"
    assert r["iterations"] == "2"
    assert r["x"] == "001"
    assert trace.read_bytes() == (DATA / "e1_bml_trace.csv").read_bytes()


@pytest.mark.parametrize("algo", ["brute", "improved"])
def test_solve_e1_other_algos(capsys, algo):
    code, out, _ = run_cli(capsys, "solve", DATA / "e1.qp", "--algo", algo)
    assert code == 0
    assert report(out)["value"] == "-2"


def test_solve_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.qp"
    bad.write_text("n 3\nc 0 0 0\nb 0 0 1\n")
    code, _, err = run_cli(capsys, "solve", bad)
    assert code == 2
    assert "nonzero diagonal" in err


def test_solve_infeasible(tmp_path, capsys):
    path = tmp_path / "inf.qp"
    path.write_text("n 2\nc 0 0\nconstraint knap le 1 2 2\nconstraint knap ge 1 2 2\n")
    assert run_cli(capsys, "solve", path, "--algo", "bml")[0] == 3
    assert run_cli(capsys, "solve", path, "--algo", "brute")[0] == 3


def test_solve_iteration_cap_nonzero(tmp_path, capsys):
    path = tmp_path / "g.qp"
    run_cli(capsys, "gen", "--n", 8, "--density", 0.7, "--seed", 3, "--constraint", "card:eq:half", "--out", path)
    code, out, _ = run_cli(capsys, "solve", path, "--algo", "bml", "--max-iter", 1)
    assert code == 1
    assert report(out)["status"] == "iteration-cap"


def test_bound_commands(capsys):
    _, a, _ = run_cli(capsys, "bound", DATA / "e1.qp", "--relax", "pl1")
    _, b, _ = run_cli(capsys, "bound", DATA / "e1.qp", "--relax", "pl2")
    assert a == b
    _, a, _ = run_cli(capsys, "bound", DATA / "e2.qp", "--relax", "pl1")
    _, b, _ = run_cli(capsys, "bound", DATA / "e2.qp", "--relax", "pl2")
    assert float(a) <= float(b) + 1e-9


def test_bound_zero_matrix(tmp_path, capsys):
    path = tmp_path / "z.qp"
    path.write_text("n 3\nc 1 -2 -0.5\nconstraint card le 1\n")
    _, out, _ = run_cli(capsys, "bound", path)
    assert float(out) == pytest.approx(-2.0, abs=1e-9)


def read_csv(path):
    return list(csv.DictReader(io.StringIO(Path(path).read_text())))


def test_bench(tmp_path, capsys):
    d = tmp_path / "inst"
    d.mkdir()
    shutil.copy(DATA / "e1.qp", d)
    shutil.copy(DATA / "e2.qp", d)
    out = tmp_path / "bench.csv"
    assert run_cli(capsys, "bench", d, "--out", out)[0] == 0
    rows = read_csv(out)
    assert len(rows) == 6
    assert [r["instance"] for r in rows] == ["e1"] * 3 + ["e2"] * 3
    assert all(r["iterations"] == "0" for r in rows if r["algo"] == "brute")
    for name in ("e1", "e2"):
        assert len({float(r["value"]) for r in rows if r["instance"] == name}) == 1


def test_bench_parallel_matches_serial(tmp_path, capsys):
    d = tmp_path / "inst"
    d.mkdir()
    for seed in range(4):
        run_cli(capsys, "gen", "--n", 6, "--seed", seed, "--constraint", "card:eq:half", "--out", d / f"g{seed}.qp")
    run_cli(capsys, "bench", d, "--out", tmp_path / "s.csv")
    run_cli(capsys, "bench", d, "--out", tmp_path / "p.csv", "--jobs", 2)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "time_s"} for r in rows]
    assert strip(read_csv(tmp_path / "s.csv")) == strip(read_csv(tmp_path / "p.csv"))


def test_bench_missing_dir(tmp_path, capsys):
    assert run_cli(capsys, "bench", tmp_path / "nope")[0] == 2


def test_bench_mismatch_exit_code(tmp_path, capsys, monkeypatch):
    d = tmp_path / "inst"
    d.mkdir()
    shutil.copy(DATA / "e1.qp", d)
    import quadcut.cli as cli

    real = cli.solve_one

    def broken(inst, algo, eps=1e-9, max_iter=None):
        res = real(inst, algo, eps, max_iter)
        if algo == "improved":
            res["value"] += 1.0
        return res

    monkeypatch.setattr(cli, "solve_one", broken)
    assert run_cli(capsys, "bench", d, "--out", tmp_path / "b.csv")[0] == 4
