import io
import json
import sys

import pytest

from crat.cli import COMMANDS, execute, main, run_job, verify_result
from crat.serialize import canonical, digest

P7 = {"kind": "padic", "p": 7}
P3 = {"kind": "padic", "p": 3}
POLY = {"kind": "poly", "R": "1"}

JOBS = {
    "crt": {"command": "crt", "ring": P7, "ideals": [3, 5, 7], "targets": [2, 3, 2], "epsilon": "0"},
    "crt-approx": {"command": "crt", "ring": P3, "ideals": [2, 3], "targets": [1, 0], "epsilon": "1/81"},
    "crt-infinite": {"command": "crt", "ring": POLY, "method": "infinite", "epsilon": "1/100",
                     "ideals": [{"factors": [[0, 2]]}, {"factors": [[5, 1]]}, {"factors": [[7, 1]]}],
                     "targets": [[1, 2], [0], [0]]},
    "crt-quad": {"command": "crt", "ring": {"kind": "quad"}, "ideals": [{"a": 3}, {"a": 0, "b": 1}],
                 "targets": [{"a": 1}, {"a": 0}], "epsilon": "1/100"},
    "tcm": {"command": "tcm-check", "ring": P3, "ideals": [3, 9]},
    "tcm-witness": {"command": "tcm-check", "ring": P3, "ideals": [2, 3], "epsilon": "1/27"},
    "lagrange": {"command": "interp-lagrange", "points": [0, 3], "values": [1, 0], "epsilon": "1/100"},
    "hermite": {"command": "interp-hermite", "points": [0, 1], "jets": [[0, 0], [1, 0]]},
    "gap": {"command": "hyper-gap", "ring": P3, "pairs": [[6, 15], [6, 2]], "epsilon": "1/9"},
    "net": {"command": "hyper-net", "ring": P3, "generators": [1, 3, 9, 27]},
    "densify": {"command": "densify-demo", "ring": P3, "ideal": 2, "a": 4, "r": 1, "epsilon": "1/243"},
    "divergence": {"command": "divergence-demo", "z0": "1/2", "R": "1", "n_max": 3, "samples": 5, "seed": 1},
    "density": {"command": "density-demo", "point": 2, "m": 1, "epsilon": "1/100"},
}


def test_every_command_has_a_job():
    assert {job["command"] for job in JOBS.values()} == set(COMMANDS)


@pytest.mark.parametrize("name", sorted(JOBS))
def test_run_verify_round_trip(name):
    code, out = execute(JOBS[name])
    assert code == 0, out
    assert verify_result(out) == []
    assert out["digest"] == digest(out)


@pytest.mark.parametrize("name", sorted(JOBS))
def test_deterministic_bytes(name):
    assert canonical(run_job(JOBS[name])) == canonical(run_job(json.loads(json.dumps(JOBS[name]))))


def test_crt_example_values():
    res = run_job(JOBS["crt"])["result"]
    assert res["solution"] == 23
    assert [r["bound"] for r in res["residuals"]] == ["0", "0", "0"]


def test_crt_infinite_records_exceptional_set():
    res = run_job(JOBS["crt-infinite"])["result"]
    assert res["exceptional"] == [{"factors": [[{"im": "0", "re": "0"}, 2]]}]


def test_tcm_example():
    assert run_job(JOBS["tcm"])["result"] == {"tcm": False}


def test_schema_errors_exit_2():
    for bad in ({"command": "crt", "ring": P7, "ideals": [], "targets": []},
                {"command": "crt", "ring": P7, "ideals": [3], "targets": [1, 2]},
                {"command": "nope"},
                {"command": "crt", "ring": {"kind": "padic", "p": 6}, "ideals": [3], "targets": [1]},
                {"command": "crt", "ring": P7, "ideals": [3], "targets": [1], "epsilon": 0.5}):
        code, body = execute(bad)
        assert code == 2 and body["error"] == "schema"


def test_solver_errors_exit_3():
    code, body = execute({"command": "crt", "ring": P3, "ideals": [3, 9], "targets": [0, 1],
                          "epsilon": "1/9"})
    assert code == 3 and body["error"] == "not-tcm"
    code, body = execute({"command": "divergence-demo", "z0": "1", "n_max": 2})
    assert code == 3 and body["error"] == "degenerate-disk"
    code, body = execute({"command": "interp-lagrange", "points": [1, 1], "values": [0, 0],
                          "epsilon": "1/2"})
    assert code == 3 and body["error"] == "duplicate-points"


def test_tampered_solution_with_resealed_digest_fails():
    out = run_job(JOBS["crt"])
    out["result"]["solution"] = 24
    out["digest"] = digest(out)
    assert any("V =" in p for p in verify_result(out))


def test_tampered_bound_fails():
    out = run_job(JOBS["crt-approx"])
    out["result"]["residuals"][0]["bound"] = "1/1000"
    assert verify_result(out)
    out["digest"] = digest(out)
    assert verify_result(out)


def test_tampered_lagrange_upper_fails():
    out = run_job(JOBS["lagrange"])
    out["result"]["residuals"][0]["upper"] = "1/200"
    out["digest"] = digest(out)
    assert verify_result(out)


def run_main(argv, payload, monkeypatch, capsys):
    monkeypatch.setattr(sys, "stdin", io.StringIO(json.dumps(payload)))
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_main_crt_and_verify(monkeypatch, capsys):
    spec = {k: v for k, v in JOBS["crt"].items() if k != "command"}
    code, out = run_main(["crt"], spec, monkeypatch, capsys)
    assert code == 0 and out["result"]["solution"] == 23
    code, rep = run_main(["verify"], out, monkeypatch, capsys)
    assert code == 0 and rep["ok"]
    out["result"]["residuals"][1]["bound"] = "1/2"
    code, rep = run_main(["verify"], out, monkeypatch, capsys)
    assert code == 4 and not rep["ok"]


def test_main_subcommand_groups(monkeypatch, capsys):
    spec = {k: v for k, v in JOBS["hermite"].items() if k != "command"}
    code, out = run_main(["interp", "hermite"], spec, monkeypatch, capsys)
    assert code == 0 and out["result"]["degree"] == 3
    code, _ = run_main(["crt"], {"ring": P7, "ideals": [], "targets": []}, monkeypatch, capsys)
    assert code == 2


def test_main_input_file(tmp_path, capsys):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(JOBS["tcm"]))
    assert main(["tcm", "--input", str(path)]) == 0
    assert json.loads(capsys.readouterr().out)["result"] == {"tcm": False}


def test_main_batch_jobs(tmp_path, capsys):
    path = tmp_path / "jobs.json"
    path.write_text(json.dumps([JOBS["crt"], JOBS["tcm"], JOBS["hermite"]]))
    assert main(["run", "--jobs", "2", "-i", str(path)]) == 0
    outs = json.loads(capsys.readouterr().out)
    assert [o["command"] for o in outs] == ["crt", "tcm-check", "interp-hermite"]
    path.write_text(json.dumps(outs))
    assert main(["verify", "-i", str(path)]) == 0


def test_degree_budget_env(monkeypatch):
    monkeypatch.setenv("CRAT_DEGREE_BUDGET", "4")
    code, body = execute(JOBS["density"])
    assert code == 3 and body["error"] == "degree-budget"
