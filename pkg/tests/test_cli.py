"""Command-line interface: exit codes, CSV schemas, file round trips."""

import csv
import io
import math
import subprocess

import pytest

from qbfmp import parse_qdimacs
from qbfmp.cli import main

SAT_QBF = "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 2 0\n"
UNSAT_QBF = "p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n1 -2 0\n"


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_generate_round_trip(tmp_path, capsys):
    out = tmp_path / "f.qdimacs"
    argv = ["generate", "--model", "lk", "--L", "1", "--K", "2",
            "--nu", "2", "--ne", "3", "--M", "8", "--seed", "3"]
    assert main(argv + ["-o", str(out)]) == 0
    f = parse_qdimacs(out.read_text())
    assert f.num_clauses == 8
    assert f.num_universal == 2 and f.num_existential == 3
    assert main(argv) == 0
    assert capsys.readouterr().out == out.read_text()


def test_generate_alpha_sets_clause_count(tmp_path):
    out = tmp_path / "f.qdimacs"
    assert main(["generate", "--model", "model_b", "--t", "2", "--n", "4",
                 "--U", "1", "--V", "2", "--alpha", "2.5", "--seed", "1",
                 "-o", str(out)]) == 0
    f = parse_qdimacs(out.read_text())
    assert f.num_clauses == 10  # round(2.5 * 4 existentials)
    assert f.num_alternations == 2


def test_generate_requires_m_or_alpha():
    with pytest.raises(SystemExit):
        main(["generate", "--model", "lk", "--nu", "2", "--ne", "2"])


def test_solve_exit_codes(tmp_path, capsys):
    sat = _write(tmp_path, "sat.qdimacs", SAT_QBF)
    unsat = _write(tmp_path, "unsat.qdimacs", UNSAT_QBF)
    assert main(["solve", sat]) == 10
    assert capsys.readouterr().out.splitlines()[0] == "sat"
    assert main(["solve", "--heuristic", "bph", unsat]) == 20
    assert capsys.readouterr().out.splitlines()[0] == "unsat"

    big = tmp_path / "big.qdimacs"
    assert main(["generate", "--model", "lk", "--L", "1", "--K", "3",
                 "--nu", "14", "--ne", "14", "--M", "40", "--seed", "0",
                 "-o", str(big)]) == 0
    assert main(["solve", "--timeout", "1e-4", str(big)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "unknown"


def test_solve_stats_csv(tmp_path, capsys):
    path = _write(tmp_path, "f.qdimacs", SAT_QBF)
    assert main(["solve", "--stats", "csv", path]) == 10
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "status,decisions,conflicts,solutions,propagations,wall_time"
    fields = lines[2].split(",")
    assert fields[0] == "sat"
    assert [int(x) >= 0 for x in fields[1:5]] == [True] * 4
    assert float(fields[5]) >= 0.0
    assert int(fields[3]) == 2  # both universal branches verified


def test_prove_unsat_exit_codes(tmp_path, capsys):
    unsat = _write(tmp_path, "unsat.qdimacs", UNSAT_QBF)
    sat = _write(tmp_path, "sat.qdimacs", SAT_QBF)
    assert main(["prove-unsat", unsat]) == 20
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "unsat_proved"
    assert lines[1] == "v -1 0"
    assert main(["prove-unsat", "--method", "greedy", unsat]) == 20
    capsys.readouterr()
    assert main(["prove-unsat", "--method", "bpspdu", sat]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "unknown"


def test_sat_exit_codes(tmp_path, capsys):
    sat = _write(tmp_path, "sat.cnf", "p cnf 2 2\n1 -2 0\n2 0\n")
    unsat = _write(tmp_path, "unsat.cnf", "p cnf 1 2\n1 0\n-1 0\n")
    assert main(["sat", sat]) == 10
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "s SATISFIABLE"
    model = {abs(int(t)): int(t) > 0 for t in lines[1].split()[1:-1]}
    for clause in parse_qdimacs((tmp_path / "sat.cnf").read_text()).matrix:
        assert any(model[abs(l)] == (l > 0) for l in clause)
    assert main(["sat", unsat]) == 20
    assert capsys.readouterr().out.splitlines()[0] == "s UNSATISFIABLE"


def test_marginals_bp_csv(tmp_path):
    path = _write(tmp_path, "f.qdimacs", UNSAT_QBF)
    out = tmp_path / "m.csv"
    assert main(["marginals", "--method", "bp", path, "-o", str(out)]) == 0
    rows = _rows(out.read_text())
    assert list(rows[0]) == ["variable", "psi_plus", "converged"]
    by_var = {int(r["variable"]): r for r in rows}
    assert set(by_var) == {1, 2}
    assert float(by_var[1]["psi_plus"]) == pytest.approx((2 + math.sqrt(2)) / 4)
    assert float(by_var[2]["psi_plus"]) == pytest.approx(0.5)
    assert all(r["converged"] == "True" for r in rows)


def test_marginals_sp_csv(tmp_path, capsys):
    path = _write(tmp_path, "f.qdimacs", UNSAT_QBF)
    assert main(["marginals", "--method", "sp", "--restarts", "2", path]) == 0
    rows = _rows(capsys.readouterr().out)
    assert list(rows[0]) == [
        "variable", "psi_plus", "psi_star", "psi_minus", "converged", "nontrivial",
    ]
    for r in rows:
        triple = [float(r["psi_plus"]), float(r["psi_star"]), float(r["psi_minus"])]
        assert sum(triple) == pytest.approx(1.0, abs=1e-9)
        assert all(x >= 0 for x in triple)
        assert r["converged"] in ("True", "False")
        assert r["nontrivial"] in ("True", "False")


def test_order_csv_bph(tmp_path, capsys):
    path = _write(tmp_path, "f.qdimacs", UNSAT_QBF)
    assert main(["order", "--heuristic", "bph", path]) == 0
    rows = _rows(capsys.readouterr().out)
    assert list(rows[0]) == ["rank", "variable", "first_sign", "bias"]
    assert [int(r["rank"]) for r in rows] == [1, 2]
    assert [int(r["variable"]) for r in rows] == [1, 2]
    assert rows[0]["first_sign"] == "False"  # universal plays against its bias
    assert float(rows[0]["bias"]) == pytest.approx((2 + math.sqrt(2)) / 4)
    assert float(rows[1]["bias"]) == pytest.approx(0.5)


def test_order_csv_vsids(tmp_path, capsys):
    path = _write(tmp_path, "f.qdimacs", UNSAT_QBF)
    assert main(["order", "--heuristic", "vsids", path]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [int(r["variable"]) for r in rows] == [1, 2]
    assert float(rows[0]["bias"]) == 2.0  # literal occurrence count
    assert float(rows[1]["bias"]) == 1.0
    assert rows[0]["first_sign"] == "True"


def test_error_exit_codes(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.qdimacs")]) == 2
    assert "error:" in capsys.readouterr().err
    bad = _write(tmp_path, "bad.qdimacs", "p cnf 1 1\n1\n")
    assert main(["solve", bad]) == 2
    assert main(["generate", "--model", "lk", "--nu", "0", "--ne", "0",
                 "--M", "3"]) == 2


def test_bench_smoke(tmp_path, capsys):
    toml = _write(
        tmp_path, "sweep.toml",
        '[sweep]\naxis = "alpha_e"\nvalues = [2.0]\ninstances = 2\n'
        'methods = ["greedy", "qdpll:index"]\n\n'
        '[generator]\nmodel = "lk"\nl = 1\nk = 2\nn_u = 3\nn_e = 3\n',
    )
    out = tmp_path / "results"
    assert main(["bench", "--spec", toml, "-o", str(out)]) == 0
    assert (out / "raw.csv").exists() and (out / "summary.csv").exists()
    assert "summary rows" in capsys.readouterr().out


def test_kernel_bench_smoke(capsys):
    assert main(["kernel-bench", "--n", "150", "--alpha", "3.0",
                 "--sweeps", "2", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "backend" in out and "edge updates/s" in out


def test_installed_script(tmp_path):
    out = tmp_path / "f.qdimacs"
    proc = subprocess.run(
        ["qbfmp", "generate", "--model", "lk", "--L", "1", "--K", "2",
         "--nu", "2", "--ne", "2", "--M", "4", "-o", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert parse_qdimacs(out.read_text()).num_clauses == 4
