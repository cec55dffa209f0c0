import json
from pathlib import Path

import jsonschema
import pytest

from bsrinf.cli import main

SCHEMA = json.loads((Path(__file__).parent.parent / "schema" / "output.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    rec = json.loads(out)
    jsonschema.validate(rec, SCHEMA)
    return code, rec


def test_degree_text(capsys):
    code, out, _ = run(capsys, "degree", "1", "3")
    assert code == 0
    assert "Exact 4" in out and "diff_eq_2d" in out and "p=2" in out


def test_degree_negative_n(capsys):
    code, out, _ = run(capsys, "degree", "1", "-2")
    assert code == 0 and "Exact 2" in out
    code, out, _ = run(capsys, "degree", "--", "-2", "1")
    assert code == 0 and "Exact 2" in out and "from input (-2, 1)" in out


def test_degree_both_json(capsys):
    code, rec = run_json(capsys, "degree", "2", "6", "--method", "both", "--c-max", "8")
    assert code == 0
    res = rec["result"]
    assert res["kind"] == "interval" and (res["lower"], res["upper"]) == (2, 4)
    assert res["gc_threshold"] == 4
    assert rec["timing_ms"] is None


def test_degree_search_infinite(capsys):
    code, rec = run_json(capsys, "degree", "1", "2", "--method", "search", "--c-max", "6")
    assert code == 0
    assert rec["result"]["search"] == {"kind": "not_found", "c_max": 6}


def test_zero_parameter_exit_2(capsys):
    code, _, err = run(capsys, "degree", "0", "3")
    assert code == 2 and "invalid input" in err


def test_quotient(capsys):
    code, rec = run_json(capsys, "quotient", "1", "3", "2")
    res = rec["result"]
    assert code == 0
    assert res["torsion_invariant_factors"] == [4] and res["nu"] == 3
    assert res["gamma_orders"]["2"] == 2 and res["rinf"]["has_rinf"] is False
    code, rec = run_json(capsys, "quotient", "2", "6", "2")
    assert rec["result"]["torsion_invariant_factors"] == [2, 8]
    code, rec = run_json(capsys, "quotient", "1", "2", "5")
    assert rec["result"]["torsion_order"] == 1


def test_reidemeister(capsys):
    code, rec = run_json(capsys, "reidemeister", "1", "3", "2", "--mu", "1", "--eps", "-1")
    assert code == 0
    assert rec["result"]["fast"] == {"kind": "finite", "count": 6}
    assert rec["result"]["agree"] is True
    code, rec = run_json(capsys, "reidemeister", "1", "3", "2", "--eps", "+1")
    assert code == 0 and rec["result"]["fast"] == {"kind": "infinite"}
    code, rec = run_json(capsys, "reidemeister", "1", "3", "2", "--mu", "2")
    assert code == 2 and rec["result"]["reason"] == "NotBijective"


def test_reidemeister_matrix_and_cap(capsys, monkeypatch):
    code, rec = run_json(capsys, "reidemeister", "2", "6", "2", "--matrix", "[[1,0],[4,3]]", "--beta-coords", "[1,3]")
    assert code == 0 and rec["result"]["agree"] is True
    code, _, err = run(capsys, "reidemeister", "2", "6", "2", "--matrix", "[[1,0],[2,5]]")
    assert code == 2 and "not well defined" in err
    monkeypatch.setenv("BSRINF_ORACLE_CAP", "2")
    code, rec = run_json(capsys, "reidemeister", "1", "3", "2")
    assert code == 0 and "oracle" not in rec["result"]
    code, rec = run_json(capsys, "reidemeister", "1", "3", "2", "--oracle-cap", "16")
    assert rec["result"]["agree"] is True


def test_bound_exceeded_exit_3(capsys, monkeypatch):
    from bsrinf import cli
    from bsrinf.errors import BoundExceeded

    def boom(*args, **kwargs):
        raise BoundExceeded("too many", 10, 1)

    monkeypatch.setattr(cli, "_degree_payload", boom)
    code, _, err = run(capsys, "degree", "1", "3")
    assert code == 3 and "bound exceeded" in err


def test_verify_snf(capsys):
    code, rec = run_json(capsys, "verify", "snf", "--samples", "50")
    assert code == 0 and rec["result"]["passed"]
    names = [c["name"] for c in rec["result"]["checks"]]
    assert names == ["snf_random_matrices", "bidiagonal_closed_form"]


def test_verify_failure_exit_1(capsys, monkeypatch):
    from bsrinf import cli
    from bsrinf.verify import Check

    bad = Check("always_fails")
    bad.record(False, "forced")
    monkeypatch.setattr(cli, "run_scope", lambda scope, **kw: [bad])
    code, out, _ = run(capsys, "verify", "snf")
    assert code == 1 and out.startswith("FAIL")


def test_sweep_md_contains_known_row(capsys):
    code, out, _ = run(capsys, "sweep", "5", "5")
    assert code == 0
    assert "| 1 | 3 | 1 | diff_eq_2d | exact | 4 |" in out


def test_sweep_intervals_carry_threshold(capsys):
    code, rec = run_json(capsys, "sweep", "6", "6", "--c-max", "8")
    rows = {(r["m"], r["n"]): r for r in rec["result"]["rows"]}
    assert rows[2, 6]["kind"] == "interval" and rows[2, 6]["gc_threshold"] == 4
    keys = [(r["m"], r["n"]) for r in rec["result"]["rows"]]
    assert keys == sorted(keys)


def test_sweep_csv_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sweep", "10", "10", "--format", "csv", "--out", str(a)]) == 0
    assert main(["sweep", "10", "10", "--format", "csv", "--out", str(b), "--workers", "3"]) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0].startswith("m,n,d,case")
    # pairs 1 <= m <= |n| <= 10, both signs of n
    assert len(lines) == 1 + 2 * sum(range(1, 11))


def test_sweep_formats_carry_same_data(capsys):
    _, rec = run_json(capsys, "sweep", "4", "4")
    _, csv_out, _ = run(capsys, "sweep", "4", "4", "--format", "csv")
    rows = rec["result"]["rows"]
    csv_rows = csv_out.splitlines()[1:]
    assert len(rows) == len(csv_rows)
    for r, line in zip(rows, csv_rows):
        cells = line.split(",")
        assert cells[0] == str(r["m"]) and cells[1] == str(r["n"]) and cells[4] == r["kind"]


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "bsrinf", "degree", "3", "5"], capture_output=True, text=True)
    assert proc.returncode == 0 and "Exact 5" in proc.stdout
