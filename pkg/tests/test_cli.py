import json
import subprocess
import sys

import pytest

from qpbl.cli import main, run
from qpbl.reproduce import REGISTRY


def test_min_s_sec2():
    code, rep = run(["min-s", "--space", "sec2-counterexample"])
    assert code == 0 and rep["status"] == "pass"
    assert rep["payload"]["value"] == 1
    assert rep["schema_version"] == 1 and isinstance(rep["elapsed_ms"], int)


def test_verify_statuses():
    code, rep = run(["verify", "--space", "ex2.2"])
    assert code == 0 and rep["status"] == "evidence-only"
    code, rep = run(["verify", "--space", "ex5.10", "--s", "1"])
    assert code == 1 and rep["status"] == "fail"
    assert rep["payload"]["reports"][3]["witness"] == [2, 0, 1]


def test_reproduce_examples():
    code, rep = run(["reproduce", "remark1-topology"])
    assert code == 0
    names = {c["name"]: c for c in rep["payload"]["checks"]}
    assert names["open sets"]["actual"] == [[], [0], [0, 1, 2]]
    assert names["separation class"]["actual"] == "not-T0"
    code, rep = run(["reproduce", "ex5.10-inequalities"])
    assert code == 0
    pairs = [c for c in rep["payload"]["checks"] if c["name"].startswith("pair") and "rhs" in c["name"]]
    assert len(pairs) == 9
    assert all(c["provenance"] in {"published", "derived", "trivial"} for c in rep["payload"]["checks"])


def test_reproduce_all():
    code, rep = run(["reproduce", "--all"])
    assert code == 0
    assert rep["payload"]["count"] == len(REGISTRY)
    assert [e["id"] for e in rep["payload"]["examples"]] == list(REGISTRY)


def test_unknown_example_is_domain_error():
    code, rep = run(["reproduce", "ex9.99"])
    assert code == 1 and rep["payload"]["error"] == "unknown-example"


def test_usage_errors():
    assert run(["verify"])[0] == 2
    assert run(["frobnicate"])[0] == 2
    assert run(["ball", "--space", "ex5.10", "--center", "7", "--eps", "1"])[0] == 2
    assert run(["fix", "solve", "--theorem", "phi", "--map", "map-half", "--x0", "1"])[0] == 2


def test_domain_error_codes():
    code, rep = run(["catalog", "show", "nope"])
    assert code == 1 and rep["payload"]["error"] == "unknown-id"
    code, rep = run(["topology", "ex2.2"])
    assert code == 1 and rep["payload"]["error"] == "infinite-domain"
    code, rep = run(["ball", "--space", "ex2.2", "--center", "0", "--eps", "-1"])
    assert rep["payload"]["error"] == "nonpositive-radius"


def test_ball_and_topology_commands():
    code, rep = run(["ball", "--space", "ex3.9", "--center", "0", "--eps", "1", "--point", "0.499999",
                     "--point", "0.5"])
    assert [m["member"] for m in rep["payload"]["membership"]] == [True, False]
    code, rep = run(["separation", "remark1"])
    assert rep["payload"] == {"space": "remark1", "class": "not-T0", "witness": [1, 2]}


def test_seq_profile():
    code, rep = run(["seq", "profile", "--space", "remark1", "--seq", "const:1", "--target", "2",
                     "--tol", "1e-12"])
    assert code == 0 and rep["payload"]["limit"]["converged"]
    code, rep = run(["seq", "profile", "--space", "ex2.2", "--seq", "orbit:map-half:1", "--horizon", "50"])
    assert rep["payload"]["cauchy"]["is_zero_cauchy"]
    assert run(["seq", "profile", "--space", "ex2.2", "--seq", "spiral"])[0] == 2


@pytest.mark.parametrize("argv", [
    ["fix", "solve", "--theorem", "phi", "--space", "ex2.2", "--map", "map-quarter", "--phi", "linear:1/16",
     "--x0", "1"],
    ["fix", "solve", "--theorem", "lambda", "--map", "map-quarter", "--lambda", "1/16", "--x0", "1"],
    ["fix", "solve", "--theorem", "phi-psi", "--map", "map-ex5.10", "--phi", "linear:1/2", "--psi",
     "psi-ex5.10", "--x0", "2"],
    ["fix", "solve", "--theorem", "expansive-k", "--map", "map-expansive", "--K", "9/2", "--x0", "1"],
])
def test_fix_solve(argv):
    code, rep = run(argv)
    assert code == 0, rep
    assert abs(float(rep["payload"]["point"])) < 1e-3


def test_fix_solve_hypothesis_failure():
    code, rep = run(["fix", "solve", "--theorem", "expansive", "--map", "map-expansive", "--a1", "3", "--a2",
                     "3", "--a3", "1/2", "--a4", "1/4", "--x0", "1"])
    assert code == 1 and rep["payload"]["error"] == "hypothesis-failed"


def test_catalog_listing():
    code, rep = run(["catalog", "list"])
    assert len(rep["payload"]["entries"]) == 14
    code, rep = run(["catalog", "show", "ex5.10"])
    assert rep["payload"]["s"] == "8/7"


def test_space_file(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps({"name": "t", "points": ["a", "b"], "matrix": [[0, 1], [2, 0]], "s": 1}))
    code, rep = run(["classify", "--space-file", str(path)])
    assert code == 0 and not rep["payload"]["symmetric"]
    code, rep = run(["topology", str(path)])
    assert rep["payload"]["open_sets"] == [[], ["a"], ["b"], ["a", "b"]]


def test_params():
    code, rep = run(["verify", "--space", "ex2.5", "--param", "q=3"])
    assert code == 0 and rep["payload"]["s"] == 4.0
    assert run(["verify", "--space", "ex2.5", "--param", "q"])[0] == 2


def test_seed_determinism(monkeypatch):
    argv = ["min-s", "--space", "ex2.3"]
    a = run(argv + ["--seed", "3"])[1]["payload"]
    b = run(argv + ["--seed", "3"])[1]["payload"]
    assert json.dumps(a) == json.dumps(b)
    monkeypatch.setenv("QPBL_SEED", "3")
    assert json.dumps(run(argv)[1]["payload"]) == json.dumps(a)
    monkeypatch.setenv("QPBL_SEED", "x")
    assert run(argv)[0] == 2


def test_main_writes_out_and_text(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["min-s", "--space", "ex5.10", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["payload"]["value"] == "8/7"
    assert main(["min-s", "--space", "ex5.10", "--format", "text"]) == 0
    assert "value: \"8/7\"" in capsys.readouterr().out


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "qpbl.cli", "reproduce", "ex3.9-ball"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
