import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from workbench.cli import main
from workbench.corpus import (
    EXIT_USAGE,
    GROUPS,
    PRIMES,
    JobSpec,
    UsageError,
    corpus_jobs,
    dumps,
    parse_filter,
)

SRC = str(Path(__file__).resolve().parents[1] / "src")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture(autouse=True)
def _no_env_cache(monkeypatch):
    monkeypatch.delenv("WORKBENCH_CACHE", raising=False)


def test_square_check_s3_p3(capsys):
    code, out, _ = run(capsys, "square-check", "--group", "S3", "--p", "3", "--seed", "1", "--no-cache")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass" and rep["schema"] == "v1"
    assert rep["payload"]["C"] == [[2, 1], [1, 2]]
    assert rep["job"]["seed"] == 1


def test_iwasawa_c4_inversion(capsys):
    code, out, _ = run(capsys, "iwasawa-certify", "--group", "C4:inv", "--p", "2", "--no-cache")
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "pass"
    assert rep["payload"]["p_cartan"]["cartan_entry"] == 4


def test_swan_s3_p2_50_trials(capsys):
    code, out, _ = run(capsys, "swan-check", "--group", "S3", "--p", "2", "--trials", "50", "--seed", "7", "--no-cache")
    rep = json.loads(out)
    assert code == 0 and rep["payload"]["consistent"] == 50 == len(rep["payload"]["pairs"])


def test_mixed_iwasawa_spec_exit_2(capsys):
    code, out, _ = run(capsys, "iwasawa-certify", "--group", "S3-conj-p2", "--no-cache")
    assert code == 2 and json.loads(out)["status"] == "unsupported-mixed"


@pytest.mark.parametrize(
    "argv",
    [
        ["nonsense"],
        ["cartan", "--group", "S3"],
        ["cartan", "--group", "S3", "--p", "4"],
        ["cartan", "--group", "Nope", "--p", "2"],
        ["square-check", "--group", "S3", "--p", "3", "--precision", "x"],
        ["swan-check", "--group", "S3", "--p", "3", "--trials", "0"],
        ["corpus-run", "--filter", "size=3"],
    ],
)
def test_usage_errors_exit_64(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv + ["--no-cache"])
        raise SystemExit(code)
    assert exc.value.code == EXIT_USAGE


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "cartan", "--group", "C3", "--p", "3", "--out", str(target), "--no-cache")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["payload"]["C"] == [[3]]


def test_filter_parsing():
    assert parse_filter("p=3") == {"p": "3"}
    assert parse_filter("group=Q8, command=cartan") == {"group": "Q8", "command": "cartan"}
    assert parse_filter("") == {}
    with pytest.raises(UsageError):
        parse_filter("bogus")


def test_corpus_matrix_contents():
    jobs = corpus_jobs()
    cells = {(j.target, j.p) for j in jobs if j.command == "cartan"}
    assert cells == {(g, p) for g in GROUPS for p in PRIMES}
    assert sum(1 for j in jobs if j.command == "iwasawa-certify") == 8
    assert all(JobSpec(**{**j.__dict__}).canonical() == j.canonical() for j in jobs)


def test_corpus_filter_group(capsys):
    code, out, _ = run(capsys, "corpus-run", "--filter", "group=Q8", "--no-cache")
    rep = json.loads(out)
    rows = rep["payload"]["rows"]
    assert code == 0 and {r["target"] for r in rows} == {"Q8"}
    assert {r["p"] for r in rows} == {2, 3} and len(rows) == 8


def test_corpus_filter_prime(capsys):
    code, out, _ = run(capsys, "corpus-run", "--filter", "p=3,command=cartan", "--no-cache")
    rows = json.loads(out)["payload"]["rows"]
    assert code == 0 and len(rows) == len(GROUPS) and all(r["p"] == 3 for r in rows)


def test_cache_hit_gives_identical_report(capsys, tmp_path):
    argv = ["square-check", "--group", "S3", "--p", "2", "--cache", str(tmp_path)]
    c1, fresh, err1 = run(capsys, *argv)
    c2, cached, err2 = run(capsys, *argv)
    assert c1 == c2 == 0 and fresh == cached
    assert "0 hit(s), 1 miss(es)" in err1 and "1 hit(s), 0 miss(es)" in err2
    _, nocache, _ = run(capsys, "square-check", "--group", "S3", "--p", "2", "--no-cache")
    assert nocache == fresh


def test_env_cache_overrides(capsys, tmp_path, monkeypatch):
    env_dir, cli_dir = tmp_path / "env", tmp_path / "cli"
    env_dir.mkdir(), cli_dir.mkdir()
    monkeypatch.setenv("WORKBENCH_CACHE", str(env_dir))
    run(capsys, "cartan", "--group", "C2", "--p", "2", "--cache", str(cli_dir))
    assert list(env_dir.glob("*.json")) and not list(cli_dir.glob("*.json"))


def test_cartan_payload_independent_of_seed(capsys):
    _, a, _ = run(capsys, "cartan", "--group", "S3", "--p", "2", "--seed", "0", "--no-cache")
    _, b, _ = run(capsys, "cartan", "--group", "S3", "--p", "2", "--seed", "5", "--no-cache")
    assert json.loads(a)["payload"] == json.loads(b)["payload"]


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})


def test_module_entry_point():
    env = {**os.environ, "PYTHONPATH": SRC}
    env.pop("WORKBENCH_CACHE", None)
    res = subprocess.run(
        [sys.executable, "-m", "workbench.cli", "cartan", "--group", "C2", "--p", "2", "--no-cache"],
        capture_output=True, text=True, env=env,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["payload"]["C"] == [[2]]
