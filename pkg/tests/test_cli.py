import json
import subprocess
import sys

import pytest

from conftest import CASE1, CASE2_22, CASE3_222, CASE5_EX, NOMATCH
from k3zariski import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_hilbert(capsys):
    assert run(["hilbert", "7", "-1", "7"], capsys)[:2] == (0, "-1\n")
    assert run(["hilbert", "57", "3", "19"], capsys)[:2] == (0, "-1\n")
    assert run(["hilbert", "1", "5", "inf"], capsys)[:2] == (0, "+1\n")
    assert run(["hilbert", "1/4", "5", "inf"], capsys)[:2] == (0, "+1\n")


def test_hilbert_table(capsys):
    code, out, _ = run(["hilbert", "7", "-1", "7", "--table"], capsys)
    assert code == 0
    assert out.splitlines() == ["-1", "inf\t+1", "2\t-1", "7\t-1", "product\t+1"]


@pytest.mark.parametrize("argv", [["hilbert", "x", "1", "3"], ["hilbert", "0", "1", "3"], ["hilbert", "2", "3", "9"]])
def test_hilbert_bad_input(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["hilbert", "1"])
    assert e.value.code == 1
    with pytest.raises(SystemExit) as e:
        cli.main(["nope"])
    assert e.value.code == 1


def test_form_analyze(write_json, capsys):
    code, out, _ = run(["form-analyze", write_json({"diag": [7, -1, -1]})], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["isotropy"]["isotropic"] is False
    assert rep["isotropy"]["certificate_place"] == "7"
    code, out, _ = run(["form", write_json({"gram": [[1, 0], [0, -4]]})], capsys)
    rep = json.loads(out)
    assert rep["isotropy"]["isotropic"] is True and rep["isotropy"]["witness"] == [2, 1]


def test_form_analyze_case5(write_json, capsys):
    g = [[-1 if i == j else x // 2 for j, x in enumerate(r)] for i, r in enumerate(CASE5_EX)]
    _, out, _ = run(["form", write_json({"gram": g})], capsys)
    rep = json.loads(out)
    at7 = next(li for li in rep["local_invariants"] if li["place"] == "7")
    assert at7["d_square"] is True
    assert rep["isotropy"]["isotropic"] is False and "7" in rep["isotropy"]["failing_places"]


@pytest.mark.parametrize(
    "obj", [{"diag": []}, {"gram": [[1, 2], [3, 4]]}, {"foo": 1}, {"diag": ["a"]}, {"diag": [1, 0]}, [1, 2]]
)
def test_form_bad_input(obj, write_json, capsys):
    assert run(["form", write_json(obj)], capsys)[0] == 2


def test_form_missing_file(capsys, tmp_path):
    assert run(["form", str(tmp_path / "missing.json")], capsys)[0] == 2


@pytest.mark.parametrize(
    "g,answer,cert",
    [(CASE1, "D1", []), (CASE2_22, "D1", [7]), (CASE3_222, "D1", [3]), (NOMATCH, "NotD1", [])],
)
def test_classify(g, answer, cert, write_json, capsys):
    code, out, _ = run(["k3-classify", write_json({"gram": g})], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["answer"] == answer
    if answer == "D1":
        assert rep["condition"]["certificate_primes"] == cert


@pytest.mark.parametrize("obj", [{"gram": [[-2, 4]]}, {"gram": [[-2, 4], [3, -2]]}, {"gram": [["a"]]}, {}])
def test_classify_malformed(obj, write_json, capsys):
    assert run(["classify", write_json(obj)], capsys)[0] == 2


def test_classify_inconsistent_exit_three(write_json, capsys, monkeypatch):
    from k3zariski import classify

    real = classify.decide_d1

    def broken(*a, **k):
        v = real(*a, **k)
        v.answer = "Inconsistent"
        return v

    monkeypatch.setattr(classify, "decide_d1", broken)
    assert run(["classify", write_json({"gram": CASE1})], capsys)[0] == 3


def test_zariski(write_json, capsys):
    code, out, _ = run(["zariski", write_json({"labels": ["H", "C"], "gram": [[2, 1], [1, -2]]}), "--divisor", "1,1"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["N"] == ["0", "1/2"] and rep["denominator"] == 2 and rep["labels"] == ["H", "C"]
    _, out, _ = run(["zariski", write_json({"gram": CASE1}), "--divisor", "3,1"], capsys)
    rep = json.loads(out)
    assert rep["N"] == ["1", "0"] and rep["denominator"] == 1
    assert run(["zariski", write_json({"gram": CASE1}), "--divisor", "1,-1"], capsys)[0] == 2
    assert run(["zariski", write_json({"gram": CASE1}), "--divisor", "a"], capsys)[0] == 2


def test_search(tmp_path, capsys):
    out_csv = tmp_path / "cat.csv"
    code, _, _ = run(["search", "--rho", "3", "--max-entry", "2", "--case", "2", "--out", str(out_csv)], capsys)
    assert code == 0
    data = out_csv.read_bytes()
    assert b"\r" not in data
    lines = data.decode().splitlines()
    assert lines[0] == "canonical_gram,rho,case,verdict,certificate_primes,strongly_primitive"
    assert len(lines) == 2 and ",D1," in lines[1]


def test_search_stdout(capsys):
    code, out, _ = run(["search", "--rho", "2", "--max-entry", "3"], capsys)
    assert code == 0 and len(out.splitlines()) == 3


def test_selfcheck_quick(capsys):
    code, out, _ = run(["selfcheck", "--quick"], capsys)
    assert code == 0
    assert "(-1,-1)_2 = -1" in out and "23" in out
    assert "FAIL" not in out


def test_output_deterministic(write_json):
    path = write_json({"gram": CASE2_22})
    cmd = [sys.executable, "-m", "k3zariski", "classify", path]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and b"\r\n" not in a
