import csv
import io
import json

import pytest
from click.testing import CliRunner

from wallcross.cli import guard, main
from wallcross.scenarios import BY_CRITERION, REGISTRY, get
from _paths import DATA


@pytest.fixture
def cli(monkeypatch):
    monkeypatch.delenv("WALLCROSS_BUDGET", raising=False)
    monkeypatch.delenv("WALLCROSS_THREADS", raising=False)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, [str(a) for a in args])

    return invoke


def test_identities_report(cli):
    r = cli("identities", "--deg", 6)
    assert r.exit_code == 0, r.output
    rep = json.loads(r.output)
    assert rep["passed"]
    assert {c["identity"] for c in rep["checks"]} >= {"pentagon", "exp_sum", "functional_equation"}
    assert all(c["N"] == 6 and c["residual_is_zero"] for c in rep["checks"])


def test_kronecker_csv(cli):
    r = cli("kronecker", "--k", 2, "--deg", 12, "--format", "csv")
    assert r.exit_code == 0, r.output
    rows = list(csv.reader(io.StringIO(r.output)))
    assert rows[0] == ["a", "b", "omega"]
    table = {(int(a), int(b)): w for a, b, w in rows[1:]}
    assert table[(1, 1)] == "-2"
    assert all(table[(n, n + 1)] == "1" == table[(n + 1, n)] for n in range(6))


def test_kronecker_json_classifies_entries(cli):
    rep = json.loads(cli("kronecker", "--k", 3, "--deg", 6).output)
    assert rep["recomposes"] and rep["all_integral"]
    assert all(e["integral"] for e in rep["entries"])
    assert {(e["a"], e["b"]): e["omega"] for e in rep["entries"]}[(2, 2)] == "-6"


def test_kronecker_quantum(cli, tmp_path):
    out = tmp_path / "q.csv"
    r = cli("kronecker", "--k", 1, "--deg", 6, "--quantum", "--format", "csv", "--out", out)
    assert r.exit_code == 0, r.output
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["a", "b", "omega_q", "omega_limit"]
    assert r.output == ""
    assert cli("kronecker", "--k", 1, "--deg", 4, "--quantum", "--direction", "decreasing").exit_code == 2


def test_output_is_byte_identical(cli):
    for args in (
        ("kronecker", "--k", 3, "--deg", 7),
        ("cluster-check", "--quiver", DATA / "kronecker2.json", "--trials", 20, "--seed", 9, "--deg", 5),
        ("transport", "--input", DATA / "d0d6_chi2.json"),
    ):
        a, b = cli(*args), cli(*args)
        assert a.exit_code == 0, a.output
        assert a.output == b.output


@pytest.mark.parametrize(
    "args",
    [
        ("fk", "--k", 3, "--deg", 10, "--exp-deg", 8),
        ("loops", "--m", 2, "--deg", 8),
        ("one-loop", "--d", 3),
        ("macmahon", "--chi", 2, "--deg", 4),
        ("mutate", "--quiver", DATA / "a3.json", "--vertex", 1),
        ("cluster-check", "--quiver", DATA / "a2.json", "--deg", 5, "--trials", 10),
        ("hall", "--spec", DATA / "f2x3.json", "--deg", 3),
        ("gln", "--config", DATA / "gl3_wall.json"),
        ("gln", "--config", DATA / "gl3_braid.json"),
        ("transport", "--input", DATA / "kronecker2_quantum.json"),
        ("info",),
    ],
    ids=lambda a: a[0] if isinstance(a, tuple) else None,
)
def test_subcommands_succeed(cli, args):
    r = cli(*args)
    assert r.exit_code == 0, r.output
    rep = json.loads(r.output)
    assert rep.get("passed", True)


def test_mutate_output(cli):
    rep = json.loads(cli("mutate", "--quiver", DATA / "kronecker2.json", "--vertex", 0).output)
    assert rep["quiver"]["arrows"] == [[0, 0], [2, 0]]
    assert rep["classes"] == [[-1, 0], [2, 1]]


def test_hall_report_shape(cli):
    rep = json.loads(cli("hall", "--spec", DATA / "f2x3.json", "--deg", 3).output)
    assert rep["per_degree"] == {str(n): True for n in range(4)}
    assert rep["cyclic_classes"]


def test_gln_log(cli):
    rep = json.loads(cli("gln", "--config", DATA / "gl3_braid.json").output)
    assert len(rep["crossings"]) == 2
    assert rep["final_a"] != rep["initial"]["a"]


def test_scenario_listing(cli):
    r = cli("scenarios")
    assert r.exit_code == 0
    for name in ("pentagon", "seiberg-witten-k2", "macmahon-d0d6", "gl3-identity"):
        assert name in r.output
    rows = json.loads(cli("scenarios", "--format", "json").output)
    assert [s["name"] for s in rows] == list(REGISTRY)
    assert sorted(s["criterion"] for s in rows if s["criterion"]) == list(range(1, 14))
    assert all(s["anchor"] for s in rows)


def test_run_scenarios(cli):
    r = cli("run", "pentagon", "3")
    assert r.exit_code == 0, r.output
    rep = json.loads(r.output)
    assert set(rep["scenarios"]) == {"pentagon", "seiberg-witten-k2"}
    assert get("criterion-10") is BY_CRITERION[10]


def test_run_unknown_scenario_is_a_usage_error(cli):
    r = cli("run", "no-such-scenario")
    assert r.exit_code == 2
    assert "unknown scenario" in r.output


def test_usage_errors(cli, tmp_path):
    assert cli("kronecker", "--deg", 4).exit_code == 2
    assert cli("kronecker", "--k", 0).exit_code == 2
    assert cli("mutate", "--quiver", tmp_path / "missing.json", "--vertex", 0).exit_code == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": 2, "arrows": [[0, 1], [1, 0]]}))
    assert cli("mutate", "--quiver", bad, "--vertex", 0).exit_code == 2
    assert cli("mutate", "--quiver", DATA / "a2.json", "--vertex", 5).exit_code == 2
    assert cli("hall", "--spec", DATA / "free2.json", "--deg", 4, "--hall-budget", 1000).exit_code == 2


def test_verification_failure_exits_one(cli, monkeypatch):
    from wallcross import scenarios

    monkeypatch.setitem(REGISTRY, "pentagon", scenarios.Scenario("pentagon", "x", lambda: {"passed": False}, 1))
    r = cli("run", "pentagon")
    assert r.exit_code == 1


def test_degree_guard(cli, monkeypatch):
    r = cli("kronecker", "--k", 2, "--deg", 80)
    assert r.exit_code == 2 and "budget" in r.output
    assert cli("--budget", 10, "loops", "--m", 1, "--deg", 5).exit_code == 2
    monkeypatch.setenv("WALLCROSS_BUDGET", "10")
    assert cli("identities", "--deg", 4).exit_code == 2
    assert cli("--budget", 10**9, "identities", "--deg", 4).exit_code == 0
    with pytest.raises(Exception):
        guard(100, 10, 1000)
    guard(10, 1, 1000)


def test_module_entry_point_reports_on_stderr():
    import subprocess
    import sys

    r = subprocess.run([sys.executable, "-m", "wallcross", "run", "nope"], capture_output=True, text=True)
    assert r.returncode == 2
    assert r.stdout == "" and "unknown scenario" in r.stderr
    ok = subprocess.run([sys.executable, "-m", "wallcross", "scenarios"], capture_output=True, text=True)
    assert ok.returncode == 0 and "pentagon" in ok.stdout
