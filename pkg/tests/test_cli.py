import json
import subprocess
import sys
import time

import pytest

import swarmform.selfcheck as selfcheck
from swarmform.cli import (EXIT_BUDGET, EXIT_CONFIG, EXIT_OK, InputError, RunConfig, batch_table, execute, main,
                           parse_n, parse_points)
from swarmform.geometry import Circle
from swarmform.simulator import ConfigError

INIT = "0 0\n1 0\n0 1\n1 1.2\n0.4 0.5\n0.9 0.3\n0.2 0.8\n"
PAT = "# seven points\n0 1\n1 0\n\n2 1\n1.5 1.7\n0.4 0.3  # inner\n0.7 0.9\n1.2 1.1\n"


@pytest.fixture
def files(tmp_path):
    i, p = tmp_path / "init.txt", tmp_path / "pat.txt"
    i.write_text(INIT)
    p.write_text(PAT)
    return str(i), str(p), tmp_path


def test_parse_points_comments_and_multiplicity():
    pts = parse_points("# c\n\n1 2\n3 4 3  # triple\n-1e-3 5\n")
    assert pts == [(1.0, 2.0), (3.0, 4.0), (3.0, 4.0), (3.0, 4.0), (-0.001, 5.0)]


@pytest.mark.parametrize("bad,line", [("1 2\nx 3\n", 2), ("1\n", 1), ("1 2 0\n", 1), ("1 2 3 4\n", 1),
                                      ("0 0\nnan 1\n", 2), ("1 2 1.5\n", 1)])
def test_parse_points_rejects_with_line_number(bad, line):
    with pytest.raises(InputError, match=f"f.txt:{line}:"):
        parse_points(bad, "f.txt")


def test_parse_n():
    assert parse_n("5-8,10") == [5, 6, 7, 8, 10]
    assert parse_n("7") == [7]
    with pytest.raises(InputError):
        parse_n("a-b")


def test_run_formed(files, capsys):
    i, p, tmp = files
    trace = tmp / "trace.jsonl"
    code = main(["run", "--init", i, "--pattern", p, "--seed", "42", "--trace", str(trace)])
    out = capsys.readouterr().out.strip()
    assert code == EXIT_OK
    assert out.startswith("FORMED events=") and " bits=" in out
    assert float(out.split("residual=")[1]) < 1e-7
    head = json.loads(trace.read_text().splitlines()[0])
    assert head["seed"] == 42 and head["n"] == 7


def test_run_budget(files, capsys):
    i, p, _ = files
    assert main(["run", "--init", i, "--pattern", p, "--max-events", "1"]) == EXIT_BUDGET
    assert capsys.readouterr().out.startswith("BUDGET_EXCEEDED")


def test_run_size_mismatch(files, capsys):
    i, _, tmp = files
    p = tmp / "six.txt"
    p.write_text("0 0\n1 0\n0 1\n1 1\n2 2\n3 0\n")
    assert main(["run", "--init", i, "--pattern", str(p)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "7" in err and "6" in err


def test_run_bad_inputs(files, capsys):
    i, p, tmp = files
    bad = tmp / "bad.txt"
    bad.write_text("0 0\n1 zero\n")
    assert main(["run", "--init", str(bad), "--pattern", p]) == EXIT_CONFIG
    assert "bad.txt:2:" in capsys.readouterr().err
    assert main(["run", "--init", str(tmp / "missing.txt"), "--pattern", p]) == EXIT_CONFIG
    g = tmp / "gather.txt"
    g.write_text("1 1 7\n")
    assert main(["run", "--init", i, "--pattern", str(g)]) == EXIT_CONFIG
    assert main(["run", "--init", i, "--pattern", p, "--delta", "0"]) == EXIT_CONFIG
    assert main(["run", "--init", i, "--pattern", p, "--seed", "-1"]) == EXIT_CONFIG


def test_random_init(files, capsys):
    _, p, _ = files
    assert main(["run", "--init", "random:n=7", "--pattern", p, "--seed", "3"]) == EXIT_OK
    assert main(["run", "--init", "random:n=4", "--pattern", "random:n=4"]) == EXIT_CONFIG


def test_config_round_trip(files):
    i, p, tmp = files
    cfg = RunConfig(p, i, seed=11, policy="stutter")
    cfg.dump(str(tmp / "cfg.json"))
    back = RunConfig.load(str(tmp / "cfg.json"))
    assert back == cfg
    assert execute(cfg).trace.events == execute(back).trace.events
    with pytest.raises(ConfigError):
        RunConfig(p, i, policy="nope")


def test_batch_zero_trials(capsys):
    assert main(["batch", "--n", "7", "--trials", "0"]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("n\ttrials") and lines[-1].startswith("total\t0\t0")
    assert len(lines) == 2


def test_batch_is_deterministic(capsys):
    assert main(["batch", "--n", "5-6", "--trials", "2", "--seed", "4"]) == EXIT_OK
    a = capsys.readouterr().out
    assert main(["batch", "--n", "5-6", "--trials", "2", "--seed", "4"]) == EXIT_OK
    assert capsys.readouterr().out == a
    rows = a.strip().splitlines()
    assert [r.split("\t")[0] for r in rows] == ["n", "5", "6", "total"]


def test_batch_table_parallel_matches_serial():
    rows1, t1 = batch_table([5], 2, seed=8, workers=1)
    rows2, t2 = batch_table([5], 2, seed=8, workers=2)
    assert rows1 == rows2 and t1 == t2


def test_batch_needs_n(capsys):
    assert main(["batch", "--trials", "1"]) == EXIT_CONFIG
    assert main(["batch", "--n", "3", "--trials", "1"]) == EXIT_CONFIG


def test_check_passes_and_is_quick(capsys):
    t = time.time()
    assert main(["check"]) == EXIT_OK
    assert time.time() - t < 60
    out = capsys.readouterr().out
    assert all(f"{k}: ok" in out for k in selfcheck.CHECKS)


def test_check_names_injected_sec_regression(monkeypatch, capsys):
    real = selfcheck.smallest_enclosing_circle

    def broken(P):
        c = real(P)
        return Circle(c.center, c.radius * (1 + 1e-6))

    monkeypatch.setattr(selfcheck, "smallest_enclosing_circle", broken)
    assert main(["check"]) != EXIT_OK
    out = capsys.readouterr().out
    assert "sec: FAIL" in out and "weber: ok" in out


def test_swarm_tol_env(files, monkeypatch):
    i, p, _ = files
    monkeypatch.setenv("SWARM_TOL", "1e-8")
    assert main(["run", "--init", i, "--pattern", p, "--seed", "42"]) == EXIT_OK


def test_module_entry_point(files):
    i, p, _ = files
    r = subprocess.run([sys.executable, "-m", "swarmform", "run", "--init", i, "--pattern", p, "--max-events", "2"],
                       capture_output=True, text=True)
    assert r.returncode == EXIT_BUDGET and r.stdout.startswith("BUDGET_EXCEEDED")
