import json

import pytest

from catalytic.cli import main, parse_vector


def run(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_parse_vector():
    assert [str(v) for v in parse_vector("1/2, 1/4,1/4")] == ["1/2", "1/4", "1/4"]
    assert parse_vector("0.9,0.1") == [0.9, 0.1]


def test_counterexample_then_verify_and_scan(tmp_path, capsys):
    cert = tmp_path / "fig2.json"
    plot = tmp_path / "fig2.png"
    code, out = run(capsys, "fig2", "--out", str(cert), "--plot", str(plot), "--csv", str(tmp_path / "s.csv"))
    assert code == 0 and out["verification"]["pass"]
    assert plot.stat().st_size > 0
    code, out = run(capsys, "verify", str(cert))
    assert code == 0 and out["exact_residuals"] == {"transition": "0/1", "catalyst": "0/1"}
    code, out = run(capsys, "scan-monotones", str(cert))
    assert code == 1
    assert ["inf", out["rows"][-1]["before"], out["rows"][-1]["after"]] in out["violations"]


def test_search_classical_exit_codes(capsys):
    code, out = run(capsys, "search-classical", "0,1/2,1/2", "1/6,1/6,2/3", "--max-dim", "2", "--max-den", "3")
    assert code == 0 and out["found"]
    code, out = run(capsys, "search-classical", "1/2,1/2", "3/4,1/4")
    assert code == 1 and out["conjecture_search"]["status"] == "impossible"


def test_majorize_and_trumping(capsys, tmp_path):
    code, out = run(capsys, "majorize", "1,0", "1/2,1/2")
    assert code == 0 and out["a_majorizes_b"] and not out["b_majorizes_a"]
    code, out = run(capsys, "trumping", "0,1/2,1/2", "1/6,1/6,2/3", "--csv", str(tmp_path / "t.csv"))
    assert code == 1 and not out["pass"]
    assert (tmp_path / "t.csv").read_text().startswith("alpha,")


def test_quantum_builders_from_state_files(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps({"diagonal": ["0", "1/2", "1/2"]}))
    b.write_text(json.dumps({"diagonal": ["1/6", "1/6", "2/3"]}))
    for cmd in ("build-thm1", "build-lemma2"):
        code, out = run(capsys, cmd, str(a), str(b))
        assert code == 0 and out["verification"]["pass"]


def test_bad_input_exits_2(capsys, tmp_path):
    code, out = run(capsys, "majorize", "1/2,x", "1,0")
    assert code == 2 and out["error"]
    code, out = run(capsys, "verify", str(tmp_path / "missing.json"))
    assert code == 2


def test_cool_csv(tmp_path, capsys):
    csv_path = tmp_path / "rate.csv"
    code, out = run(capsys, "cool", "--state", "0.9,0.1", "--eps", "0.3", "--pairs", "1", "--csv", str(csv_path))
    assert code == 0 and out["report"]["pass"]
    assert csv_path.read_text().splitlines()[0].startswith("n,cold_qubits")


def test_unknown_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
