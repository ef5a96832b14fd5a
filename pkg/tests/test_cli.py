import json

import pytest

from chfn.cli import main
from chfn.serialize import fmt_float, to_csv, to_json

COMMANDS = [
    ["verify-kac", "--laplace", "0.3", "0.7"],
    ["verify-kac", "--kind", "mixture", "--a", "0.45"],
    ["counterexample", "--kind", "exp-diff", "--mc-n", "20000"],
    ["counterexample", "--kind", "mixture", "--a", "0.25", "--mc-n", "20000"],
    ["counterexample", "--kind", "gamma-drift", "--beta", "4", "--a1", "1", "--a2", "1", "--b", "3.9"],
    ["counterexample", "--kind", "power", "--a", "2", "--n", "50", "--theta", "0.1"],
    ["classify", "--preset", "exp-diff"],
    ["indecomposable", "lk", "--atom", "2:1"],
    ["indecomposable", "bernstein", "--b", "1", "--atom", "1:1"],
    ["invert", "--a", "0.25"],
    ["montecarlo", "--law", "gamma-normal-drift", "--target", "gamma-drift-f1", "--n", "20000"],
    ["pgf", "--lambda", "1", "--theta", "0.25"],
    ["limit-scan", "--family", "power"],
    ["recover", "discrete", "--kernel", "gamma", "--beta", "3"],
]


def run(args, tmp_path, name="out", fmt="json"):
    path = tmp_path / f"{name}.{fmt}"
    code = main(["--format", fmt, "--out", str(path), *args])
    return code, path.read_bytes()


@pytest.mark.parametrize("args", COMMANDS, ids=lambda a: " ".join(a[:3]))
def test_golden_determinism(args, tmp_path):
    for fmt in ("json", "csv"):
        c1, b1 = run(args, tmp_path, "a", fmt)
        c2, b2 = run(args, tmp_path, "b", fmt)
        assert c1 == c2 == 0
        assert b1 == b2


def test_mixture_report(tmp_path):
    code, data = run(["counterexample", "--kind", "mixture", "--a", "0.25"], tmp_path)
    rep = json.loads(data)
    assert code == 0 and rep["pass"]
    assert rep["identity"]["max_residual"] < 1e-10
    assert rep["density_f2"]["grid_min"] >= 0
    assert abs(rep["density_f2"]["mass"] - 1) < 1e-9


def test_gamma_drift_bound_exit(capsys):
    code = main(["counterexample", "--kind", "gamma-drift", "--beta", "4", "--a1", "1", "--a2", "1", "--b", "4.1"])
    assert code == 2
    assert "= 4" in capsys.readouterr().err


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["pgf", "--bogus"])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err
    assert main(["verify-kac", "--laplace", "0.3", "0.7", "--grid", "0", "1", "2"]) == 2


def test_failed_check_exit(capsys):
    assert main(["invert", "--num", "1", "--den", "1", "0", "0", "0", "1"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["numeric"]["grid_min"] < -1e-3 and rep["pass"] is False


def test_classify_verdicts(capsys):
    main(["classify", "--preset", "mixture"])
    assert json.loads(capsys.readouterr().out)["verdict"] == "not-gid"
    main(["classify", "--preset", "laplace", "--a1", "0.3", "--symmetry", "even"])
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "laplace" and rep["a1"] == pytest.approx(0.3)
    main(["classify", "--f1-num", "1", "--f1-den", "1", "0", "0.4", "--f2-num", "1", "--f2-den", "1", "0", "0.6"])
    assert json.loads(capsys.readouterr().out)["verdict"] == "drifted"


def test_seed_from_environment(tmp_path, monkeypatch):
    args = ["montecarlo", "--law", "laplace", "--n", "10000"]
    monkeypatch.setenv("CHFN_SEED", "7")
    _, a = run(args, tmp_path, "a")
    _, b = run(["--seed", "7", *args], tmp_path, "b")
    _, c = run(["--seed", "8", *args], tmp_path, "c")
    assert a == b and a != c


def test_csv_schemas(tmp_path):
    _, data = run(["verify-kac", "--laplace", "0.3", "0.7"], tmp_path, fmt="csv")
    assert data.decode().splitlines()[0] == "xi,re_f1,im_f1,re_f2,im_f2,re_target,im_target,residual"
    _, data = run(["invert", "--a", "0.25"], tmp_path, fmt="csv")
    assert data.decode().splitlines()[0] == "x,p"
    _, data = run(["pgf"], tmp_path, fmt="csv")
    lines = data.decode().splitlines()
    assert lines[0] == "k,coeff" and len(lines) == 202


def test_float_round_trip():
    for x in (0.1, 1 / 3, 2.0**-1074, 1e300, -0.0):
        assert float(fmt_float(x)) == x
    text = to_json({"b": 1 / 3, "a": [1.0, complex(0, 2)], "c": None})
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text)["b"] == 1 / 3
    assert to_csv(["x"], [[0.1]]) == "x\n0.10000000000000001\n"
