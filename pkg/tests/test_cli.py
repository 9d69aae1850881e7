import json

import pytest

from combindep.cli import main


def run(tmp_path, *argv, name="out.json"):
    out = tmp_path / name
    code = main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_verify_sauer_smoke(tmp_path):
    code, rep = run(tmp_path, "verify", "sauer", "--n", "3", "--k", "2")
    assert code == 0 and rep["status"] == "ok"
    assert rep["result"]["instances"] == 256 and rep["result"]["failures"] == 0


def test_malformed_config_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["entropy", "--config", str(bad)]) == 2
    assert "cannot read config" in capsys.readouterr().err


def test_schema_violation_exits_two(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"version": 2, "command": "entropy"}))
    assert main(["entropy", "--config", str(cfg)]) == 2
    cfg.write_text(json.dumps({"version": 1, "command": "entropy", "surprise": 1}))
    assert main(["entropy", "--config", str(cfg)]) == 2


def test_unknown_suite_parameter_exits_two(tmp_path):
    assert main(["verify", "separated", "--k", "3", "--out", str(tmp_path / "x.json")]) == 2


def test_budget_exhaustion_reports_partial(tmp_path):
    code, rep = run(tmp_path, "independence", "--budget", "8", "--param", "window=[0,10]")
    assert code == 3
    assert rep["status"] == "budget_exhausted" and rep["partial"] is True
    assert rep["result"]["lower_bound"] is True and rep["result"]["J"] == [0, 2, 4]


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"version": 1, "command": "entropy",
                               "spec": {"alphabet": 2, "kind": "full"},
                               "measure": {"kind": "bernoulli", "weights": [0.5, 0.5]},
                               "parameters": {"windows": [1, 2, 3]}}))
    code, rep = run(tmp_path, "entropy", "--config", str(cfg), "--param", "windows=[4]")
    assert code == 0
    assert rep["config"]["parameters"]["windows"] == [4]
    assert rep["config"]["parameters"]["mode"] == "curve"


@pytest.mark.parametrize("argv", [
    ["example", "--param", "name=\"tame\"", "--param", "L=500"],
    ["shatter", "--param", "patterns=[\"12\",\"21\",\"11\"]"],
    ["l1", "--param", "mode=\"perturb\"", "--seed", "3"],
    ["verify", "density-lemma", "--instances", "20"],
])
def test_reruns_are_byte_identical(tmp_path, argv):
    texts = []
    out, tab = tmp_path / "r.json", tmp_path / "r.csv"
    for _ in range(2):
        assert main([*argv, "--out", str(out), "--csv", str(tab)]) == 0
        texts.append((out.read_bytes(), tab.read_bytes()))
    assert texts[0] == texts[1]
    assert texts[0][0].endswith(b"\n")


def test_stdout_when_no_out(capsys):
    assert main(["example", "--param", "name=\"golden-mean\""]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["result"]["entropy_rate"] == pytest.approx(rep["result"]["log_golden_ratio"], abs=1e-12)
