"""Command-line front-end: goldens, exit codes, determinism."""

from __future__ import annotations

import json

import pytest

from pathlab import cli, jointrees as jt
from pathlab.paths import full_path, sequence_to_json, single_edge


@pytest.fixture()
def seq_file(tmp_path):
    def write(name, seq):
        path = tmp_path / name
        path.write_text(json.dumps(sequence_to_json(seq)))
        return str(path)

    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_measure_vecdelta_orders(seq_file, capsys):
    path = seq_file("ex.json", [single_edge(i) for i in range(1, 26)])
    code, out = run(capsys, "measure", "vecdelta", "--seq", path, "--format", "json")
    assert code == 0 and json.loads(out)["value"] == 1
    code, out = run(
        capsys, "measure", "vecdelta", "--seq", path, "--order", "odd-even", "--format", "json"
    )
    assert code == 0 and json.loads(out)["value"] == 13


def test_measure_psi_overlap(tmp_path, capsys):
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(jt.maximally_overlapping(5).to_json()))
    code, out = run(capsys, "measure", "psi", "--tree", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["value"] == 1


def test_measure_gap(seq_file, capsys):
    path = seq_file("p.json", [full_path(10)])
    code, out = run(capsys, "measure", "gap", "--seq", path, "--format", "json")
    assert code == 0 and json.loads(out)["value"] == "5"


def test_measure_shift_order(seq_file, capsys):
    stride = [single_edge(i) for j in range(1, 6) for i in range(j, 26, 5)]
    path = seq_file("s.json", stride)
    code, out = run(
        capsys, "measure", "vecdelta", "--seq", path, "--order", "I:15,25", "--format", "json"
    )
    assert code == 0 and json.loads(out)["value"] == 7


def test_shipped_data_files(capsys):
    import pathlib

    root = pathlib.Path(__file__).resolve().parent.parent / "data"
    code, out = run(
        capsys, "measure", "vecdelta", "--seq", str(root / "stride25.json"),
        "--order", "I:15,25", "--format", "json",
    )
    assert code == 0 and json.loads(out)["value"] == 7
    code, out = run(
        capsys, "measure", "depths", "--tree", str(root / "block_tree16.json"),
        "--format", "json",
    )
    assert code == 0 and json.loads(out)["sem"] == 2


def test_verify_lp(capsys):
    code, out = run(capsys, "verify", "lp", "--t", "3", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["ok"] and report["gamma"] == "31/10"


def test_verify_suites_pass(capsys):
    for suite, extra in [
        ("delta-props", ["--trials", "30"]),
        ("tradeoff-I", ["--enumerate-k", "3", "--trials", "30"]),
        ("tradeoff-II", ["--enumerate-k", "3", "--trials", "30"]),
        ("psi-recurrences", ["--trials", "5"]),
        ("chain-rules", ["--trials", "30"]),
        ("minterms", ["--n", "2", "--k", "3"]),
        ("strict-counts", []),
    ]:
        code, _ = run(capsys, "verify", suite, "--format", "json", *extra)
        assert code == 0, suite


def test_verify_formulas_exhaustive(capsys):
    code, out = run(
        capsys,
        "verify", "formulas", "--n", "2", "--k", "5", "--kind", "C", "--exhaustive",
        "--format", "json",
    )
    assert code == 0 and json.loads(out)["checked"] == 7**5


def test_measure_best_shift(seq_file, capsys):
    stride9 = [single_edge(i) for j in range(1, 4) for i in range(j, 10, 3)]
    path = seq_file("s9.json", stride9)
    code, out = run(capsys, "measure", "best-shift", "--seq", path, "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["value"] == 4
    assert report["witness"]["m"] == 9


def test_missing_file_is_input_error(capsys):
    code = cli.main(["measure", "vecdelta", "--seq", "/nonexistent/x.json"])
    assert code == cli.EXIT_INPUT_ERROR


def test_resource_limit_exit_code(seq_file, capsys):
    path = seq_file("big.json", [single_edge(i) for i in range(1, 26)])
    code = cli.main(["measure", "best-shift", "--seq", path, "--limit-shift", "4"])
    assert code == cli.EXIT_RESOURCE_LIMIT


def test_experiment_requires_seed(capsys):
    code = cli.main(["experiment", "eps1", "--k", "2", "--t", "4"])
    assert code == cli.EXIT_INPUT_ERROR


def test_failing_suite_exits_one(capsys, monkeypatch):
    monkeypatch.setitem(
        cli._SUITES, "lp", lambda args: {"suite": "lp", "ok": False, "violated": ["demo"]}
    )
    code = cli.main(["verify", "lp", "--format", "json"])
    assert code == cli.EXIT_CHECK_FAILED


def test_experiment_eps1_runs_and_is_deterministic(capsys):
    args = ["experiment", "eps1", "--k", "2", "--t-range", "2..4", "--trials", "200",
            "--seed", "5", "--format", "json"]
    code, out1 = run(capsys, *args)
    assert code == 0
    code, out2 = run(capsys, *args)
    assert out1 == out2
    payload = json.loads(out1)
    assert len(payload["rows"]) == 3


def test_experiment_restriction_csv(capsys):
    code, out = run(
        capsys,
        "experiment", "restriction", "--n", "8", "--k", "2", "--trials", "4",
        "--seed", "3", "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 5  # header + 4 rows
    assert "density" in lines[0]


def test_experiment_randomized_conversion(capsys):
    code, out = run(
        capsys,
        "experiment", "randomized-conversion", "--n", "2", "--k", "4", "--trials", "60",
        "--seed", "2", "--format", "json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["agreement"] >= 0.95


def test_verify_deterministic_output(capsys):
    args = ["verify", "chain-rules", "--trials", "25", "--seed", "9", "--format", "json"]
    _, out1 = run(capsys, *args)
    _, out2 = run(capsys, *args)
    assert out1 == out2


def test_measure_formula_stats_sexpr(tmp_path, capsys):
    from pathlab import formulas as F

    phi = F.build_matrix_formula("D", 2, 3)
    path = tmp_path / "d.sexpr"
    path.write_text(F.to_sexpr(phi))
    code, out = run(capsys, "measure", "formula-stats", "--formula", str(path), "--format", "json")
    report = json.loads(out)
    assert code == 0
    assert report["size"] == F.size(phi) and report["monotone"]


def test_measure_formula_stats_json(tmp_path, capsys):
    from pathlab import formulas as F

    phi = F.conj([F.lit(1), F.lit(2, neg=True)])
    path = tmp_path / "f.json"
    path.write_text(json.dumps(F.to_json_dict(phi)))
    code, out = run(capsys, "measure", "formula-stats", "--formula", str(path), "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["size"] == 2 and not report["monotone"]
