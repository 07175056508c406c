import io
import json
import subprocess
import sys

import pytest

from cesaro.cli import main, parse_grid, split_top_level

DOCUMENTED = [
    ["mean", "--b", "1", "--f", "x^2", "--p", "1", "--grid", "1e2:1e6:x10"],
    ["counterexample", "blocks", "--grid", "auto"],
    ["limit", "--b", "1", "--f", "(1-x)^2", "--p", "1"],
]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_mean_example():
    code, out, _ = run(DOCUMENTED[0])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,value_re,value_im,rounding_bound"
    assert len(lines) == 6
    values = [float(line.split(",")[1]) for line in lines[1:]]
    errors = [abs(v - 1 / 3) for v in values]
    assert all(y < x for x, y in zip(errors, errors[1:]))
    assert errors[-1] < 1e-6


def test_blocks_example():
    code, out, _ = run(DOCUMENTED[1])
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    for n, label, re, im, target in rows:
        if label.startswith("h_"):
            assert abs(float(re) + 1 / 3) < 1e-12
        if label.startswith("m_") or label.startswith("h_"):
            assert float(re) == pytest.approx(float(target), abs=1e-12)
    assert any(r[1] == "oscillates:even_subsequence_limit" for r in rows)


def test_limit_example_prints_three_values():
    code, out, err = run(DOCUMENTED[2] + ["--f-monotone", "dec", "--format", "json"])
    assert code == 0, err
    rows = {r["quantity"]: r for r in json.loads(out)["rows"]}
    for key in ("mean", "estimate", "oracle"):
        assert rows[key]["value_re"] == pytest.approx(1 / 3, abs=1e-6)
    assert "verdict=converges" in rows["estimate"]["detail"]
    for pair in ("abs_diff(mean,estimate)", "abs_diff(mean,oracle)", "abs_diff(estimate,oracle)"):
        assert pair in rows


def test_undeclared_monotonicity_warns():
    code, _, err = run(DOCUMENTED[2])
    assert code == 2
    assert "monotonicity" in err


def test_json_round_trips():
    _, out, _ = run(DOCUMENTED[0][:-2] + ["--grid", "10:1000:x10", "--b", "(1-0.5*i)*(1+1/k)", "--format", "json"])
    doc = json.loads(out)
    assert doc["spec"]["command"] == "mean"
    for row in doc["rows"]:
        for key in ("value_re", "value_im", "rounding_bound"):
            assert float(repr(row[key])) == row[key]
    assert json.loads(json.dumps(doc)) == doc


def test_csv_values_round_trip():
    _, out, _ = run(["mean", "--b", "1+1/k", "--f", "x^0.5", "--grid", "10,20,40"])
    for line in out.splitlines()[1:]:
        value = float(line.split(",")[1])
        assert format(value, ".17g") == line.split(",")[1]


@pytest.mark.parametrize("argv", DOCUMENTED)
def test_byte_stable(argv):
    cmd = [sys.executable, "-m", "cesaro", *argv]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.stdout and first.stdout == second.stdout
    assert b"\r" not in first.stdout


def test_multi_commands():
    code, out, _ = run(["multi", "nested", "--a-factors", "1,1", "--grid", "500:4000:x2",
                        "--a-limit", "1", "--b-limit", "1"])
    assert code == 0
    last = out.splitlines()[-1].split(",")
    assert abs(float(last[1]) - 1 / 3) < 2e-3
    assert float(last[3]) == pytest.approx(1 / 3)
    code, out, _ = run(["multi", "tail", "--a", "1", "--m", "2", "--a-structure", "translation-invariant",
                        "--grid", "500:4000:x2"])
    assert code == 0
    assert abs(float(out.splitlines()[-1].split(",")[1]) - 1 / 3) < 2e-3


def test_multi_rejects_false_invariance():
    code, _, err = run(["multi", "tail", "--a", "k1*k2", "--m", "2", "--a-structure", "translation-invariant",
                        "--grid", "10,20"])
    assert code == 1 and "translation invariant" in err


def test_hypotheses_command():
    code, out, _ = run(["hypotheses", "--f", "x^-0.5", "--f-monotone", "dec"])
    assert code == 0 and out.count("pass") == 2
    code, out, _ = run(["hypotheses", "--f", "x^-1", "--f-monotone", "dec"])
    assert code == 2 and "fail" in out


def test_oracle_command():
    code, out, _ = run(["oracle", "--f=-log(x)", "--f-monotone", "dec", "--p", "0.5", "--b-limit", "1-0.5*i"])
    assert code == 0
    re, im = (float(v) for v in out.splitlines()[1].split(",")[:2])
    assert re == pytest.approx(2.0, abs=1e-9) and im == pytest.approx(-1.0, abs=1e-9)


def test_counterexamples():
    for name in ("riemann-failure", "noninvariant-tail", "family:pow-2:complex"):
        code, out, err = run(["counterexample", name])
        assert code == 0, err
    code, out, _ = run(["counterexample", "riemann-failure"])
    assert "verdict=diverges" in out


def test_errors_exit_one():
    assert run(["mean", "--f", "log(x-1)"])[0] == 1
    assert run(["mean", "--grid", "10:1:x2"])[0] == 1
    assert run(["counterexample", "nope"])[0] == 1
    assert run(["mean", "--p", "-1"])[0] == 1
    code, _, err = run(["mean", "--b", "1+"])
    assert code == 1 and "offset 2" in err


def test_grid_parsing():
    assert parse_grid("1e2:1e4:x10") == [100, 1000, 10000]
    assert parse_grid("3,5,9") == [3, 5, 9]
    with pytest.raises(ValueError):
        parse_grid("5,3")


def test_split_top_level():
    assert split_top_level("pow(k,2), 1/k") == ["pow(k,2)", "1/k"]
