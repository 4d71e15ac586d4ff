import json

import pytest

from lowdeg.cli import main
from lowdeg.poly import format_boolfn, parse_polynomial, random_polynomial, table_from_anf


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out else None, err


@pytest.fixture
def quad(tmp_path):
    path = tmp_path / "f.poly"
    path.write_text("p=2 n=4\nx1*x2 + x3*x4\n")
    return path


def test_count(capsys, tmp_path):
    path = tmp_path / "g.poly"
    path.write_text("p=2 n=2\nx1*x2\n")
    code, data, _ = run_json(capsys, "count", path, "--value", 1)
    assert code == 0
    assert data["count"] == 1
    assert data["command"] == "count"


def test_find_reports_verified_subspace(capsys, quad):
    code, data, _ = run_json(capsys, "find", quad)
    assert code == 0
    assert data["dim"] >= 1
    assert data["verified"]
    assert data["bound"] == 1


def test_find_then_verify(capsys, quad, tmp_path):
    _, out, _ = run(capsys, "find", quad, "--u0", "1,0,1,1")
    res = tmp_path / "res.json"
    res.write_text(out)
    code, data, _ = run_json(capsys, "verify", res)
    assert code == 0 and data["pass"]


def test_tampered_result_fails_verification(capsys, quad, tmp_path):
    _, out, _ = run(capsys, "find", quad)
    data = json.loads(out)
    data["subspace"]["basis"] = [[1, 0, 0, 0], [0, 1, 0, 0]]
    res = tmp_path / "res.json"
    res.write_text(json.dumps(data))
    code, data, _ = run_json(capsys, "verify", res)
    assert code == 1
    assert not data["pass"]


def test_partition_then_verify(capsys, quad, tmp_path):
    code, out, _ = run(capsys, "partition", quad)
    assert code == 0
    assert json.loads(out)["total"] == 16
    res = tmp_path / "part.json"
    res.write_text(out)
    assert run_json(capsys, "verify", res)[1]["pass"]


def test_disperser_failure_exit_code_and_witness(capsys, quad, tmp_path):
    code, out, _ = run(capsys, "disperser", quad, "--k", 2)
    assert code == 1
    res = tmp_path / "w.json"
    res.write_text(out)
    assert run_json(capsys, "verify", res)[0] == 0
    assert run(capsys, "disperser", quad, "--k", 3)[0] == 0


def test_extractor_and_verify(capsys, quad, tmp_path):
    code, out, _ = run(capsys, "extractor", quad, "--k", 3, "--eps", "1/4")
    assert code == 0
    assert json.loads(out)["value"] == "1/4"
    res = tmp_path / "e.json"
    res.write_text(out)
    assert run_json(capsys, "verify", res)[1]["pass"]


def test_spectral_commands(capsys, quad, tmp_path):
    assert run_json(capsys, "bias", quad)[1]["bias"] == "1/4"
    assert run_json(capsys, "dist", quad)[1]["counts"] == [10, 6]
    assert run_json(capsys, "cor", quad, quad)[1]["correlation"] == "1/1"
    assert run_json(capsys, "fourier", quad, "--beta", "0,0,0,0")[1]["coefficient"] == "1/4"
    data = run_json(capsys, "fourier", quad, "--granularity")[1]
    assert data["pass"] and data["parseval"]


def test_boolfn_input(capsys, tmp_path):
    path = tmp_path / "F.hex"
    path.write_text(format_boolfn(table_from_anf(random_polynomial(8, 3, 2, 1))))
    code, data, _ = run_json(capsys, "reduce", path, "--d", 3)
    assert code == 0 and data["verified"]
    assert data["queries"] <= data["query_bound"]
    code, data, _ = run_json(capsys, "reduce", path, "--d", 3, "--constant")
    assert code == 0 and data["verified"]


def test_variety_commands(capsys, tmp_path):
    f = tmp_path / "f.poly"
    f.write_text("p=2 n=3\nx2\n")
    g1 = tmp_path / "g1.poly"
    g1.write_text("p=2 n=3\nx1\n")
    g2 = tmp_path / "g2.poly"
    g2.write_text("p=2 n=3\nx1 + 1\n")
    code, data, _ = run_json(capsys, "variety", "--check", f, g1, g2)
    assert code == 0 and data["vacuous"]
    code, data, _ = run_json(capsys, "variety", "--approx", g1, "--ell", 1)
    assert code == 0 and data["contained"]


def test_construction_commands(capsys, tmp_path):
    data = run_json(capsys, "injector", "--n", 4, "--k", 2)[1]
    assert data["m"] == 8
    data = run_json(capsys, "extractor-build", "--n", 6, "--k", 2, "--seed", 3)[1]
    assert data["degree"] <= 3
    f = tmp_path / "s.poly"
    f.write_text("p=2 n=16\nx1*x2*x3 + x4*x5 + x6\n")
    data = run_json(capsys, "restrict-sparse", f, "--c", 1)[1]
    assert parse_polynomial(data["polynomial"]).degree <= 2


def test_oracle_commands(capsys, quad):
    assert run_json(capsys, "oracle", "max-const-dim", quad)[1]["dim"] == 2
    assert run_json(capsys, "oracle", "count", quad, "--value", 1)[1]["count"] == 6
    assert run_json(capsys, "oracle", "enum", "--n", 2, "--k", 1)[1]["count"] == 6


def test_gen_random_is_deterministic(capsys):
    a = run(capsys, "gen-random", "--n", 6, "--d", 3, "--seed", 7)[1]
    b = run(capsys, "gen-random", "--n", 6, "--d", 3, "--seed", 7)[1]
    assert a == b
    assert parse_polynomial(a).n == 6


def test_text_format(capsys, quad):
    code, out, _ = run(capsys, "count", quad, "--value", 1, "--format", "text")
    assert code == 0
    assert "count: 6" in out.splitlines()


def test_parse_error_reports_position(capsys, tmp_path):
    path = tmp_path / "bad.poly"
    path.write_text("p=2 n=2\nx1 + + x2\n")
    code, out, err = run(capsys, "count", path, "--value", 0)
    assert code == 2
    assert out == ""
    assert "line 2, column 6" in err


def test_resource_guard_is_named(capsys, quad):
    code, _, err = run(capsys, "count", quad, "--value", 0, "--max-bytes", 8)
    assert code == 2
    assert "max-bytes" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "count", tmp_path / "nope.poly", "--value", 0)
    assert code == 2
    assert err.startswith("error:")
