import json
import subprocess
import sys

import pytest

from homcover.cli import EXIT_ERROR, EXIT_EXHAUSTED, EXIT_OK, main
from homcover.words import format_aut, parse_aut

PC = "rank: 2\na -> a\nb -> Aba\n"
FIB = "rank: 2\na -> ab\nb -> a\n"
ID = "rank: 2\na -> a\nb -> b\n"


@pytest.fixture
def auts(tmp_path):
    paths = {}
    for name, text in (("pc", PC), ("fib", FIB), ("id", ID)):
        p = tmp_path / f"{name}.aut"
        p.write_text(text)
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_matrix_and_trace(auts, capsys):
    code, out, _ = run(capsys, "matrix", auts["pc"])
    assert code == EXIT_OK and "-x^-1 + x^-1*y" in out and "x^-1" in out
    code, out, _ = run(capsys, "trace", auts["pc"], "--power", "2")
    assert out.strip() == "1 + x^-2"
    code, out, _ = run(capsys, "matrix", auts["pc"], "--json")
    data = json.loads(out)
    assert data["matrix"][1][1] == "x^-1" and "hash" in data and "toolversion" in data


def test_shadow_extremal_enfeoff(auts, capsys, tmp_path):
    code, out, _ = run(capsys, "shadow", auts["pc"])
    assert out.strip() == "(0,0) (-1,0)"
    plot = tmp_path / "plot.json"
    code, out, _ = run(capsys, "shadow", auts["pc"], "--empirical", "8", "--word", "b", "--plot", str(plot))
    assert "hausdorff^2=" in out and "(-1,0): heuristic" in out and json.loads(plot.read_text())["edges"] == [[0, 1]]
    code, out, _ = run(capsys, "extremal", auts["pc"], "--vertex", "1")
    assert "edges: 1->1@1" in out and "enfeoffed: true" in out
    code, out, _ = run(capsys, "enfeoff", auts["pc"], "--vertex", "1", "--class", "2", "--kmax", "3")
    assert out.startswith("level 1 witness k=1") and "1 - X1" in out
    code, _, err = run(capsys, "extremal", auts["pc"], "--vertex", "5")
    assert code == EXIT_ERROR and "out of range" in err


def test_covers_specialize_order(auts, capsys, tmp_path):
    code, out, _ = run(capsys, "covers", auts["pc"], "--p", "2")
    assert "vertices: 4" in out and "edges: 8" in out and "rank: 5" in out and "order: finite(" in out
    code, out, _ = run(capsys, "specialize", auts["pc"], "--char", "1/2,0")
    assert "character order 2" in out and "spectral radius 1.0000000000" in out and "trace check ok" in out
    m = tmp_path / "m.json"
    m.write_text(json.dumps({"matrix": [[1, 1], [1, 0]]}))
    assert run(capsys, "order", str(m))[1].strip() == "infinite (non-cyclotomic factor)"
    m.write_text(json.dumps([[0, -1], [1, 0]]))
    assert run(capsys, "order", str(m))[1].strip() == "finite(4)"


def test_search_certify_roundtrip(auts, capsys, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "search", auts["fib"], "--out", str(cert))
    assert code == EXIT_OK and out.startswith("certificate:")
    code, out, _ = run(capsys, "certify", str(cert))
    assert code == EXIT_OK and out.strip() == "verified"
    data = json.loads(cert.read_text())
    data["power"] = 2
    cert.write_text(json.dumps(data))
    code, _, err = run(capsys, "certify", str(cert))
    assert code == EXIT_ERROR and "hash mismatch" in err


def test_search_exhausted_exit_code(auts, capsys):
    code, out, _ = run(capsys, "search", auts["id"], "--stages", "1")
    assert code == EXIT_EXHAUSTED and "identity automorphism" in out


def test_report(auts, capsys, tmp_path):
    cov = tmp_path / "cov.json"
    cov.write_text(json.dumps({"stages": [{"p": 2}]}))
    code, out, _ = run(capsys, "report", auts["pc"], "--cover", str(cov))
    assert "edges: 8" in out and "orbits_needed: 3" in out
    code, out, _ = run(capsys, "report", auts["id"], "--cover", str(cov), "--json")
    assert "flag" in json.loads(out)


def test_errors(auts, capsys, tmp_path):
    bad = tmp_path / "bad.aut"
    bad.write_text("a -> ab\n")
    assert run(capsys, "matrix", str(bad))[0] == EXIT_ERROR
    assert run(capsys, "matrix", str(tmp_path / "missing.aut"))[0] == EXIT_ERROR
    nonaut = tmp_path / "n.aut"
    nonaut.write_text("rank: 2\na -> a\nb -> a\n")
    code, _, err = run(capsys, "search", str(nonaut))
    assert code == EXIT_ERROR and "not an automorphism" in err


def test_parse_format_roundtrip():
    for text in (PC, FIB, ID):
        f = parse_aut(text)
        assert parse_aut(format_aut(f)) == f


def test_module_entry_point(auts):
    res = subprocess.run([sys.executable, "-m", "homcover", "trace", auts["pc"]],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "1 + x^-1"
