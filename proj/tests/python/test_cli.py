"""End-to-end checks of the dvsched command-line tool."""

import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("DVSCHED_BIN", "dvsched")
FIXTURES = Path(os.environ.get("DVSCHED_FIXTURES", Path(__file__).parent.parent / "fixtures"))


def run(*args, expect=0):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True)
    assert proc.returncode == expect, (
        f"{args}: exit {proc.returncode}, stdout={proc.stdout!r}, stderr={proc.stderr!r}"
    )
    return proc


def test_solve_continuous_two_jobs(tmp_path):
    out = tmp_path / "sched.json"
    proc = run("solve", "-i", str(FIXTURES / "two_jobs.json"), "--alpha", "2", "-o", str(out))
    assert "energy 10" in proc.stdout
    assert "job 1 speed 2" in proc.stdout
    assert "job 2 speed 4" in proc.stdout
    doc = json.loads(out.read_text())
    assert doc["energy"] == "10"
    assert int(doc["stats"]["sschedule_calls"]) <= 2

    verify = run("verify", "--schedule", str(out), "--jobset", str(FIXTURES / "two_jobs.json"))
    assert "ok" in verify.stdout


def test_solve_discrete_two_jobs(tmp_path):
    out = tmp_path / "sched.json"
    proc = run("solve", "-i", str(FIXTURES / "two_jobs.json"), "--model", "discrete",
               "--speeds", "3,5", "--alpha", "2", "-o", str(out))
    assert "energy 11.5" in proc.stdout
    run("verify", "--schedule", str(out), "--jobset", str(FIXTURES / "two_jobs.json"))


def test_solve_discrete_infeasible():
    proc = subprocess.run(
        [BIN, "solve", "-i", str(FIXTURES / "two_jobs.json"), "--model", "discrete",
         "--speeds", "1,2", "--alpha", "2"],
        capture_output=True, text=True)
    assert proc.returncode == 2
    assert "violating job" in proc.stderr


def test_malformed_document_exits_1():
    proc = subprocess.run([BIN, "solve", "-i", str(FIXTURES / "malformed.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 1
    assert "parse error" in proc.stderr


def test_verify_detects_violations():
    proc = subprocess.run(
        [BIN, "verify", "--schedule", str(FIXTURES / "bad_schedule.json"),
         "--jobset", str(FIXTURES / "two_jobs.json")],
        capture_output=True, text=True)
    assert proc.returncode == 3
    assert "outside" in proc.stdout or "deadline" in proc.stdout


def test_sschedule_worked_example(tmp_path):
    out = tmp_path / "ss.json"
    proc = run("sschedule", "-i", str(FIXTURES / "example_grid.json"),
               "--speed", "1", "-o", str(out))
    doc = json.loads(out.read_text())
    assert doc["residuals"]["4"] == "0.02"
    assert doc["unfinished"] == [4]
    segs = [(s["start"], s["end"]) for s in doc["segments"] if s["job"] == 4]
    assert segs == [("0.35", "0.4"), ("0.4", "0.5"), ("0.5", "0.6"),
                    ("0.86", "0.9"), ("0.92", "0.96")]
    stats = doc["stats"]
    m, n = int(stats["m"]), int(stats["n"])
    assert int(stats["unions"]) <= m - 2
    assert int(stats["finds"]) <= (m - 2) + n
    assert "bound" in proc.stdout


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        run("gen", "--n", "10", "--seed", "7", "--structure", "laminar", "-o", str(out))
    assert a.read_text() == b.read_text()


@pytest.mark.parametrize("structure", ["uniform", "nested", "laminar", "disjoint-clusters"])
@pytest.mark.parametrize("model", ["continuous", "discrete"])
def test_gen_solve_verify_roundtrip(tmp_path, structure, model):
    jobs = tmp_path / "jobs.json"
    sched = tmp_path / "sched.json"
    run("gen", "--n", "9", "--seed", "13", "--structure", structure,
        "--workload-min", "1", "-o", str(jobs))
    args = ["solve", "-i", str(jobs), "--alpha", "2", "-o", str(sched)]
    if model == "discrete":
        # a ladder wide enough for any generated instance
        args += ["--model", "discrete", "--speeds", "1,2,4,8,16,32,64,128,256,512"]
    run(*args)
    run("verify", "--schedule", str(sched), "--jobset", str(jobs))


def test_solve_output_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        run("solve", "-i", str(FIXTURES / "two_jobs.json"), "--alpha", "2", "-o", str(out))
    assert a.read_text() == b.read_text()


def test_bench_csv_header(tmp_path):
    out = tmp_path / "bench.csv"
    proc = run("bench", "--suite", "sschedule", "--sizes", "200,400", "--reps", "2",
               "--out", str(out))
    lines = out.read_text().splitlines()
    assert lines[0] == "n,reps,mean_ns,unions,finds,sschedule_calls"
    assert len(lines) == 3
    assert "soft check" in proc.stdout


def test_float_numeric_path(tmp_path):
    out = tmp_path / "sched.json"
    proc = run("solve", "-i", str(FIXTURES / "two_jobs.json"), "--alpha", "2",
               "--numeric", "float", "-o", str(out))
    assert "energy 10" in proc.stdout
    run("verify", "--schedule", str(out), "--jobset", str(FIXTURES / "two_jobs.json"),
        "--numeric", "float")
