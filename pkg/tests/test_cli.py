import csv
import io
import json
import shutil
import subprocess
import sys

import mpmath
import pytest

from kwise import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture
def measure_file(tmp_path, capsys):
    def make(kind, n):
        path = tmp_path / f"{kind}{n}.json"
        code, _, _ = run(capsys, "construct", kind, "--n", str(n), "--out", str(path))
        assert code == 0
        return path

    return make


# construct -----------------------------------------------------------------


def test_construct_extremal(measure_file):
    doc = json.loads(measure_file("extremal-pairwise", 6).read_text())
    assert doc["weights"] == {"0": "1/12", "3": "5/6", "6": "1/12"}


def test_construct_antipodal_odd(measure_file):
    doc = json.loads(measure_file("antipodal", 3).read_text())
    assert doc["weights"] == {"0": "1/2", "3": "1/2"}


def test_construct_rejects_odd_balanced(capsys):
    code, _, err = run(capsys, "construct", "balanced", "--n", "5")
    assert code == 2
    assert "requires even n" in err


def test_construct_summary(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "extremal-pairwise", "--n", "8", "--out", str(tmp_path / "m.json"), "--format", "json")
    assert code == 0
    summary = json.loads(out)["results"]
    assert summary["independence_level"] == 3
    assert summary["support_size"] == 2 + 70
    assert summary["independence_scan_limit"] == 6


def test_construct_to_stdout(capsys):
    code, out, err = run(capsys, "construct", "independent", "--n", "2")
    assert code == 0
    assert json.loads(out)["weights"] == {"0": "1/4", "1": "1/2", "2": "1/4"}
    assert "independent up to k=2" in err


def test_construct_io_failure(capsys, tmp_path):
    code, _, _ = run(capsys, "construct", "independent", "--n", "2", "--out", str(tmp_path / "missing" / "m.json"))
    assert code == 1


# verify --------------------------------------------------------------------


def test_verify_ok(capsys, measure_file):
    code, out, _ = run(capsys, "verify", str(measure_file("extremal-pairwise", 6)), "--k", "3")
    assert code == 0
    assert out.startswith("ok")


def test_verify_fail_with_witness(capsys, measure_file):
    code, out, _ = run(capsys, "--format", "json", "verify", str(measure_file("extremal-pairwise", 6)), "--k", "4")
    assert code == 4
    result = json.loads(out)["results"]
    assert result["ok"] is False
    assert result["witness_correlation"] == "1/3"
    assert result["witness"] == [1, 2, 3, 4]


def test_verify_antipodal_fails(capsys, measure_file):
    code, out, _ = run(capsys, "verify", str(measure_file("antipodal", 4)), "--k", "2")
    assert code != 0
    assert out.startswith("fail")


@pytest.mark.parametrize("content", ["{", '{"kind": "orbit", "n": 2, "weights": {"0": "2/4", "2": "1/2"}}'])
def test_verify_parse_failure(capsys, tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    code, _, err = run(capsys, "verify", str(path), "--k", "2")
    assert code == 2
    assert "invalid measure file" in err


def test_verify_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", str(tmp_path / "nope.json"), "--k", "2")
    assert code == 1


def test_verify_k_out_of_range(capsys, measure_file):
    code, _, _ = run(capsys, "verify", str(measure_file("independent", 3)), "--k", "5")
    assert code == 2


# solve ---------------------------------------------------------------------


def test_solve_orbit_quarter_power(capsys):
    code, out, _ = run(capsys, "solve", "--n", "8", "--p", "4", "--k", "2", "--mode", "orbit", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    cell = doc["results"][0]
    assert cell["moment_exact"] == "512"
    assert cell["constant_approx"]["precision"] == "~80-bit"
    assert cell["constant_approx"]["approx"].startswith("1.68179")
    assert cell["optimizer_is_paper_measure"] is True
    assert doc["provenance"]["exact"] is True


def test_solve_full_folklore(capsys):
    code, out, _ = run(capsys, "solve", "--n", "4", "--p", "4", "--k", "4", "--mode", "full", "--format", "csv")
    assert code == 0
    row = rows_of(out)[0]
    assert row["moment_exact"] == "40"
    assert list(row) == cli.TABLE_COLUMNS


def test_solve_p2_identity(capsys):
    code, out, _ = run(capsys, "solve", "--n", "4", "--p", "2", "--k", "2", "--format", "csv")
    assert code == 0
    row = rows_of(out)[0]
    assert (row["moment_exact"], row["constant_approx"]) == ("4", "1")


def test_solve_text_mentions_support(capsys):
    code, out, _ = run(capsys, "solve", "--n", "6", "--p", "4", "--k", "2")
    assert code == 0
    assert "0:1/12, 3:5/6, 6:1/12" in out
    assert "~80-bit" in out


def test_solve_custom_coefficients(capsys):
    code, out, _ = run(capsys, "solve", "--n", "3", "--p", "2", "--k", "2", "--mode", "full", "--a", "3/5,4/5,0", "--format", "csv")
    assert code == 0
    assert rows_of(out)[0]["moment_exact"] == "1"


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--n", "4", "--p", "4", "--k", "2", "--a", "1,2"],
        ["solve", "--n", "4", "--p", "4", "--k", "2", "--a", "1,2,1,1"],
        ["solve", "--n", "4", "--p", "1", "--k", "2"],
        ["solve", "--n", "4", "--p", "4", "--k", "9"],
        ["solve", "--n", "15", "--p", "4", "--k", "2", "--mode", "full"],
        ["solve", "--n", "4", "--p", "4", "--k", "2", "--a", "x,y,z,w"],
    ],
)
def test_solve_validation(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_solve_infeasible_exit_code(capsys, monkeypatch):
    from kwise.extremal import InfeasibleLPError

    def boom(*args, **kwargs):
        raise InfeasibleLPError("builder bug")

    monkeypatch.setattr(cli, "khintchine_cell", boom)
    code, _, err = run(capsys, "solve", "--n", "4", "--p", "4", "--k", "2")
    assert code == 3
    assert "builder bug" in err


def test_solve_odd_n_is_labelled(capsys):
    code, out, _ = run(capsys, "solve", "--n", "5", "--p", "4", "--k", "2")
    assert code == 0
    assert "outside" in out


def test_solve_approximate_order(capsys):
    code, out, _ = run(capsys, "solve", "--n", "6", "--p", "5/2", "--k", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["provenance"]["exact"] is False
    assert doc["results"][0]["moment_exact"].startswith("~")


# certify -------------------------------------------------------------------


def test_certify_six_four(capsys):
    code, out, _ = run(capsys, "certify", "--n", "6", "--p", "4", "--format", "json")
    assert code == 0
    result = json.loads(out)["results"]
    assert result["equality_weights"] == [0, 3, 6]
    assert result["certified_value"] == "216"
    assert result["matches_primal"] is True
    assert len(result["slacks"]) == 7


def test_certify_p2_all_tight(capsys):
    code, out, _ = run(capsys, "certify", "--n", "4", "--p", "2", "--format", "csv")
    assert code == 0
    rows = rows_of(out)
    assert [r["tight"] for r in rows] == ["True"] * 5
    code, out, _ = run(capsys, "certify", "--n", "4", "--p", "2")
    assert "certified value: 4" in out


def test_certify_odd(capsys):
    code, _, _ = run(capsys, "certify", "--n", "5", "--p", "4")
    assert code == 2


def test_certify_negative_verdict(capsys, monkeypatch):
    from dataclasses import replace
    from fractions import Fraction

    from kwise import extremal

    honest = extremal.paper_certificate
    monkeypatch.setattr(cli, "paper_certificate", lambda n, p: replace(honest(n, p), u1m=Fraction(0), um1=Fraction(0)))
    code, out, _ = run(capsys, "certify", "--n", "4", "--p", "4")
    assert code == 4
    assert "match: False" in out


# table ---------------------------------------------------------------------


def test_table_one_wise_is_holder(capsys):
    code, out, _ = run(capsys, "table", "--n", "4..8:2", "--p", "4", "--k", "1", "--format", "csv", "--jobs", "1")
    assert code == 0
    rows = rows_of(out)
    assert [r["n"] for r in rows] == ["4", "6", "8"]
    assert all(r["constant_approx"] == r["holder_ref"] for r in rows)


def test_table_pairwise_is_quarter_power(capsys):
    code, out, _ = run(capsys, "table", "--n", "4..10:2", "--p", "4", "--k", "2", "--format", "csv")
    assert code == 0
    for r in rows_of(out):
        assert r["constant_approx"] == r["lower_bound_ref"]
        assert r["optimizer_is_paper_measure"] == "True"
        assert r["is_vertex"] == "True"


def test_table_monotone_in_k(capsys):
    code, out, _ = run(capsys, "table", "--n", "6", "--p", "4", "--k", "1..4", "--format", "csv")
    assert code == 0
    consts = [mpmath.mpf(r["constant_approx"]) for r in rows_of(out)]
    assert all(x >= y for x, y in zip(consts, consts[1:]))
    assert consts[0] > consts[-1]


def test_table_order_independent_of_jobs(capsys):
    argv = ["table", "--n", "4,6,8", "--p", "2,4", "--k", "1..3", "--format", "csv"]
    _, serial, _ = run(capsys, *argv, "--jobs", "1")
    _, parallel, _ = run(capsys, *argv, "--jobs", "3")
    assert serial == parallel
    assert len(rows_of(serial)) == 18


def test_table_partial_failure(capsys):
    code, out, err = run(capsys, "table", "--n", "4", "--p", "4", "--k", "2,7", "--format", "json", "--jobs", "1")
    assert code == 0
    cells = json.loads(out)["results"]
    assert cells[0]["moment_exact"] == "64"
    assert cells[1]["moment_exact"] == "error"
    assert "k must lie" in cells[1]["error"]
    assert "k=7" in err


def test_table_json_real_annotations(capsys):
    code, out, _ = run(capsys, "table", "--n", "4", "--p", "3", "--k", "2", "--format", "json")
    assert code == 0
    cell = json.loads(out)["results"][0]
    for key in ("constant_approx", "lower_bound_ref", "holder_ref"):
        assert cell[key]["precision"] == "~80-bit"
    assert cell["moment_exact"] == "16"


def test_table_text_and_out(capsys, tmp_path):
    path = tmp_path / "t.txt"
    code, out, _ = run(capsys, "table", "--n", "4", "--p", "4", "--k", "2", "--out", str(path))
    assert code == 0
    assert out == ""
    assert "moment_exact" in path.read_text()


def test_table_bad_range(capsys):
    code, _, _ = run(capsys, "table", "--n", "4..x", "--p", "4", "--k", "2")
    assert code == 2


@pytest.mark.parametrize(
    "text, expected",
    [("4,6,8", [4, 6, 8]), ("4..8", [4, 5, 6, 7, 8]), ("4..12:4", [4, 8, 12]), ("3, 5", [3, 5])],
)
def test_parse_int_list(text, expected):
    assert cli.parse_int_list(text) == expected


# decompose -----------------------------------------------------------------


def test_decompose_extremal(capsys, measure_file):
    code, out, _ = run(capsys, "--format", "json", "decompose", str(measure_file("extremal-pairwise", 6)), "--a", "ones")
    assert code == 0
    result = json.loads(out)["results"]
    assert (result["c"], result["total"]) == ("1/3", "216")
    assert result["reconstruction_ok"] is True


def test_decompose_independent(capsys, measure_file):
    code, out, _ = run(capsys, "decompose", str(measure_file("independent", 4)), "--a", "1/2,1/2,1/2,1/2", "--format", "csv")
    assert code == 0
    fields = {r["field"]: r["value"] for r in rows_of(out)}
    assert fields["c"] == "0"


def test_decompose_antipodal_rejected(capsys, measure_file):
    code, _, err = run(capsys, "decompose", str(measure_file("antipodal", 4)), "--a", "1,2,3,4")
    assert code == 2
    assert "(1, 2)" in err


def test_decompose_atomic_file_rejected(capsys, tmp_path):
    path = tmp_path / "a.json"
    path.write_text('{"kind": "atomic", "n": 1, "atoms": {"+": "1/2", "-": "1/2"}}')
    code, _, _ = run(capsys, "decompose", str(path))
    assert code == 2


# round trip and entry point ------------------------------------------------


def test_round_trip_bytes(capsys, measure_file, tmp_path):
    from kwise.measure_io import dumps, load

    path = measure_file("extremal-pairwise", 10)
    raw = path.read_bytes()
    assert dumps(load(path)).encode() == raw
    code, _, _ = run(capsys, "verify", str(path), "--k", "3")
    assert code == 0


def test_global_flags_before_and_after_subcommand(capsys):
    _, before, _ = run(capsys, "--format", "csv", "solve", "--n", "4", "--p", "4", "--k", "2")
    _, after, _ = run(capsys, "solve", "--n", "4", "--p", "4", "--k", "2", "--format", "csv")
    assert before == after
    assert before.startswith("n,p,k,mode")


def test_console_script():
    exe = shutil.which("kwise")
    argv = [exe] if exe else [sys.executable, "-m", "kwise.cli"]
    proc = subprocess.run(argv + ["certify", "--n", "4", "--p", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "equality weights: {0, 2, 4}" in proc.stdout
