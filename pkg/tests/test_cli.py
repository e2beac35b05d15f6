import json
import pytest

from symbern import CountPMF, expand_to_full, f_max, f_min, parse_rational
from symbern.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "5")
    data = json.loads(out)
    assert code == 0
    assert data["gap"] == "1/40" and data["rho_min_binary"] == "-1/5" and data["parity"] == "odd"
    data = json.loads(run(capsys, "bounds", "--n", "4")[1])
    assert data["gap"] == "0/1"
    data = json.loads(run(capsys, "bounds", "--n", "2")[1])
    assert data["rho_min_psd"] == data["rho_min_binary"] == "-1/1"


def test_bounds_decimal(capsys):
    data = json.loads(run(capsys, "bounds", "--n", "5", "--decimal")[1])
    assert data["decimal"]["gap"] == pytest.approx(0.025)


def test_bounds_bad_n(capsys):
    code, _, err = run(capsys, "bounds", "--n", "1")
    assert code == 2 and "n must be" in err


def test_feasible(capsys):
    code, out, _ = run(capsys, "feasible", "--n", "5", "--rho", "-0.22")
    data = json.loads(out)
    assert code == 1 and data["good"] and not data["symmetric_binary_good"]
    assert data["p"] == "39/100"
    code, out, _ = run(capsys, "feasible", "--n", "6", "--rho", "-0.2")
    data = json.loads(out)
    assert code == 0 and data["good"] and data["symmetric_binary_good"]
    code, out, _ = run(capsys, "feasible", "--n", "3", "--p", "1")
    assert code == 0 and json.loads(out)["symmetric_binary_good"]


def test_feasible_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["feasible", "--n", "5", "--p", "1/2", "--rho", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["feasible", "--n", "5", "--p", "1e-1"])
    assert exc.value.code == 2
    assert run(capsys, "feasible", "--n", "5", "--rho", "3/2")[0] == 2


def test_construct(capsys, tmp_path):
    out = tmp_path / "c.json"
    assert run(capsys, "construct", "--n", "4", "--p", "1/2", "--out", str(out))[0] == 0
    assert json.loads(out.read_text()) == {"n": 4, "f": ["1/8", "0/1", "1/8", "0/1", "1/8"]}
    code, stdout, _ = run(capsys, "construct", "--n", "5", "--p", "2/5")
    assert code == 0 and CountPMF.from_json(json.loads(stdout)) == f_min(5)
    code, stdout, err = run(capsys, "construct", "--n", "5", "--p", "0.39")
    assert code == 1 and stdout == ""
    assert json.loads(err)["p_min_binary"] == "2/5"


def test_construct_then_cov_round_trip(capsys, tmp_path):
    for n, p in [(5, "7/10"), (4, "1/3"), (7, "0.55"), (2, "0")]:
        path = tmp_path / f"{n}.json"
        run(capsys, "construct", "--n", str(n), "--p", p, "--out", str(path))
        code, out, _ = run(capsys, "cov", "--in", str(path))
        data = json.loads(out)
        rho = 2 * parse_rational(p) - 1
        assert code == 0 and parse_rational(data["rho"]) == rho
        assert all(data["matrix"][i][i] == "1/4" for i in range(n))


def test_cov_example(capsys, tmp_path):
    path = tmp_path / "c.json"
    run(capsys, "construct", "--n", "5", "--p", "7/10", "--out", str(path))
    data = json.loads(run(capsys, "cov", "--in", str(path))[1])
    assert data["matrix"][0][0] == "1/4" and data["matrix"][0][1] == "1/10"


def test_cov_rejects_bad_input(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"n": 2, "f": ["1/1", "0/1", "0/1"]}))
    assert run(capsys, "cov", "--in", str(path))[0] == 2
    path.write_text("{not json")
    assert run(capsys, "cov", "--in", str(path))[0] == 2
    assert run(capsys, "cov", "--in", str(tmp_path / "missing.json"))[0] == 2


def test_sample(capsys, tmp_path):
    path = tmp_path / "fmax.json"
    path.write_text(json.dumps(f_max(3).to_json()))
    code, out, _ = run(capsys, "sample", "--in", str(path), "--count", "4", "--seed", "1")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 4 and set(rows) <= {"0,0,0", "1,1,1"}


def test_sample_to_file_with_stats(capsys, tmp_path):
    path = tmp_path / "fmin.json"
    path.write_text(json.dumps(f_min(4).to_json()))
    csv1, csv2, stats = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "s.json"
    args = ["sample", "--in", str(path), "--count", "1000", "--seed", "3", "--header"]
    assert run(capsys, *args, "--out", str(csv1), "--stats", str(stats))[0] == 0
    assert run(capsys, *args, "--out", str(csv2), "--workers", "2")[0] == 0
    assert csv1.read_bytes() == csv2.read_bytes()
    assert csv1.read_text().startswith("x1,x2,x3,x4\n")
    data = json.loads(stats.read_text())
    assert len(data["means"]) == 4 and len(data["agreement"]) == 4


def test_sample_bad_args(capsys, tmp_path):
    path = tmp_path / "fmin.json"
    path.write_text(json.dumps(f_min(4).to_json()))
    assert run(capsys, "sample", "--in", str(path), "--count", "0", "--seed", "1")[0] == 2
    assert run(capsys, "sample", "--in", str(path), "--count", "5", "--seed", "-1")[0] == 2


def test_symmetrize(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"n": 2, "g": ["0/1", "0/1", "1/1", "0/1"]}))
    code, out, err = run(capsys, "symmetrize", "--in", str(path))
    assert code == 0 and json.loads(out) == {"n": 2, "f": ["0/1", "1/2", "0/1"]}
    path.write_text(json.dumps(expand_to_full(f_min(4)).to_json()))
    code, out, _ = run(capsys, "symmetrize", "--in", str(path))
    assert CountPMF.from_json(json.loads(out)) == f_min(4)
    path.write_text(json.dumps({"n": 2, "g": ["1/1", "0/1", "0/1", "0/1"]}))
    assert run(capsys, "symmetrize", "--in", str(path))[0] == 2


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--n-max", "6", "--full")
    data = json.loads(out)
    assert code == 0 and data["pass"]
    assert [r["lp_optimum"] for r in data["records"]] == ["0/1", "1/3", "1/3", "2/5", "2/5"]
    assert all("full_lp_optimum" in r for r in data["records"])
    code, out, _ = run(capsys, "oracle", "--n-max", "4")
    assert code == 0 and "full_lp_optimum" not in json.loads(out)["records"][0]


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "symbern", "bounds", "--n", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["p_min_binary"] == "1/3"
