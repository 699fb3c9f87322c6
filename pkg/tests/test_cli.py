import csv
import io
import json

import jsonschema
import numpy as np
import pytest

from lsid.cli import main
from lsid.formats import report_schema, write_matrix_csv, write_vector_csv


@pytest.fixture
def files(tmp_path, worked):
    a, b = worked
    write_matrix_csv(a, tmp_path / "A.csv")
    write_vector_csv(b, tmp_path / "b.csv")
    return str(tmp_path / "A.csv"), str(tmp_path / "b.csv")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_subset_worked(capsys, files):
    a, b = files
    code, out, _ = run(capsys, "solve", "--matrix", a, "--rhs", b, "--method", "subset")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, report_schema())
    assert rep["solution"] == [1.0, 2.0]
    assert rep["residual_l2"] == 0.0
    assert rep["det_gram"] == pytest.approx(3.0, rel=1e-15)
    assert (rep["subsets_total"], rep["subsets_singular"]) == (3, 0)
    # the QR baseline carries rounding; the subset route is exact here
    assert rep["discrepancy"] <= 1e-15


def test_solve_pseudo_to_file(capsys, files, tmp_path):
    a, b = files
    out_path = tmp_path / "rep.json"
    code, out, _ = run(capsys, "solve", "--matrix", a, "--rhs", b, "--method", "pseudo", "--out", str(out_path))
    assert code == 0 and out == ""
    rep = json.loads(out_path.read_text())
    np.testing.assert_allclose(rep["solution"], [1.0, 2.0], atol=1e-15)


def test_solve_monte_carlo_deterministic(capsys, files):
    a, b = files
    argv = ("solve", "--matrix", a, "--rhs", b, "--method", "monte-carlo", "--samples", "1000", "--seed", "42")
    r1 = json.loads(run(capsys, *argv)[1])
    r2 = json.loads(run(capsys, *argv)[1])
    r1.pop("elapsed_ms"), r2.pop("elapsed_ms")
    assert r1 == r2
    assert (r1["samples"], r1["seed"]) == (1000, 42)


def test_monte_carlo_requires_samples(files):
    a, b = files
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--matrix", a, "--rhs", b, "--method", "monte-carlo"])
    assert exc.value.code == 2


def test_exit_codes(capsys, tmp_path, files, monkeypatch):
    a, b = files
    missing = str(tmp_path / "missing.csv")
    assert run(capsys, "solve", "--matrix", missing, "--rhs", b)[0] == 2

    (tmp_path / "ragged.csv").write_text("1,2\n3\n")
    code, _, err = run(capsys, "solve", "--matrix", str(tmp_path / "ragged.csv"), "--rhs", b)
    assert code == 2 and "line 2" in err

    (tmp_path / "short.csv").write_text("1\n2\n")
    assert run(capsys, "solve", "--matrix", a, "--rhs", str(tmp_path / "short.csv"))[0] == 2

    write_matrix_csv(np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]]), tmp_path / "rd.csv")
    for method in ("subset", "pseudo"):
        code, _, err = run(capsys, "solve", "--matrix", str(tmp_path / "rd.csv"), "--rhs", b, "--method", method)
        assert code == 3 and "rank-deficient" in err

    rng = np.random.default_rng(0)
    write_matrix_csv(rng.uniform(-1, 1, (12, 4)), tmp_path / "big.csv")
    write_vector_csv(rng.uniform(-1, 1, 12), tmp_path / "big_b.csv")
    monkeypatch.setenv("LSID_SUBSET_CAP", "100")
    code, _, err = run(capsys, "solve", "--matrix", str(tmp_path / "big.csv"), "--rhs", str(tmp_path / "big_b.csv"))
    assert code == 4 and "monte-carlo" in err
    code, out, _ = run(capsys, "solve", "--matrix", str(tmp_path / "big.csv"),
                       "--rhs", str(tmp_path / "big_b.csv"), "--method", "monte-carlo", "--samples", "50")
    assert code == 0


def test_solve_discrepancy_exit_one(capsys, tmp_path):
    # an absurdly tight tolerance forces the cross-route check to fail
    rng = np.random.default_rng(1)
    write_matrix_csv(rng.uniform(-1, 1, (9, 3)), tmp_path / "A.csv")
    write_vector_csv(rng.uniform(-1, 1, 9), tmp_path / "b.csv")
    code, out, err = run(capsys, "solve", "--matrix", str(tmp_path / "A.csv"), "--rhs", str(tmp_path / "b.csv"),
                         "--tol", "0")
    rep = json.loads(out)
    assert rep["discrepancy"] > 0
    assert code == 1 and "disagree" in err and rep["passed"] is False


def test_verify_worked(capsys, files):
    a, _ = files
    code, out, _ = run(capsys, "verify", "--matrix", a, "--checks", "identity,cauchy-binet")
    assert code == 0
    rep = json.loads(out)
    jsonschema.validate(rep, report_schema())
    assert rep["max_identity_diff"] == 0.0 and rep["f_value"] == 0.0
    assert rep["solution"] is None and rep["passed"] is True
    assert [c["name"] for c in rep["checks"]] == ["identity", "cauchy-binet"]


def test_verify_lemmas_square_and_gram(capsys, tmp_path, files):
    rng = np.random.default_rng(3)
    write_matrix_csv(rng.uniform(-1, 1, (4, 4)) + 2 * np.eye(4), tmp_path / "sq.csv")
    code, out, _ = run(capsys, "verify", "--matrix", str(tmp_path / "sq.csv"), "--checks", "lemmas")
    assert code == 0
    assert all(c["passed"] for c in json.loads(out)["checks"])

    a, _ = files
    code, out, err = run(capsys, "verify", "--matrix", a, "--checks", "lemmas")
    assert code == 0 and "Gram matrix" in err
    notes = [c.get("note", "") for c in json.loads(out)["checks"]]
    assert any("Gram matrix" in n for n in notes)


def test_verify_failures(capsys, tmp_path, files):
    a, _ = files
    assert run(capsys, "verify", "--matrix", a, "--checks", "bogus")[0] == 2
    write_matrix_csv(np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]]), tmp_path / "rd.csv")
    # Cauchy-Binet holds without full rank; the identity needs it
    assert run(capsys, "verify", "--matrix", str(tmp_path / "rd.csv"), "--checks", "cauchy-binet")[0] == 0
    assert run(capsys, "verify", "--matrix", str(tmp_path / "rd.csv"), "--checks", "identity")[0] == 3
    rng = np.random.default_rng(5)
    write_matrix_csv(rng.uniform(-1, 1, (7, 3)), tmp_path / "r.csv")
    code, out, err = run(capsys, "verify", "--matrix", str(tmp_path / "r.csv"), "--checks", "identity", "--tol", "0")
    rep = json.loads(out)
    assert rep["max_identity_diff"] > 0
    assert code == 1 and "FAILED identity" in err and rep["passed"] is False


def test_bench(capsys, tmp_path):
    argv = ("bench", "--m", "10", "--n", "3", "--trials", "5", "--seed", "7")
    code, out, _ = run(capsys, *argv)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10
    assert {r["route"] for r in rows} == {"pseudo", "subset"}
    assert all(int(r["elapsed_ns"]) > 0 for r in rows)
    assert all(float(r["discrepancy"]) <= 1e-8 for r in rows)
    again = list(csv.DictReader(io.StringIO(run(capsys, *argv)[1])))
    strip = lambda rs: [{k: v for k, v in r.items() if k != "elapsed_ns"} for r in rs]
    assert strip(rows) == strip(again)


def test_bench_cap_and_dump(capsys, tmp_path, monkeypatch):
    code, _, _ = run(capsys, "bench", "--m", "6", "--n", "2", "--trials", "1", "--dump", str(tmp_path / "d"))
    assert code == 0 and (tmp_path / "d" / "A_0.csv").exists()
    monkeypatch.setenv("LSID_SUBSET_CAP", "10")
    assert run(capsys, "bench", "--m", "10", "--n", "3", "--trials", "1")[0] == 4
