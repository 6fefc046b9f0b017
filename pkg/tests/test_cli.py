import json

import pytest

from rmac.certio import read_certificate, read_certificates
from rmac.cli import main, parse_levels, parse_range


def test_parse_levels():
    assert parse_levels("2..6") == (2, 3, 4, 5, 6)
    assert parse_levels("2..4,7") == (2, 3, 4, 7)
    assert parse_levels("3") == (3,)
    with pytest.raises(ValueError):
        parse_levels("5..2")


def test_parse_range():
    assert parse_range("4..21") == (4, 21)
    assert parse_range("7") == (7, 7)
    assert parse_range("none") is None


def test_bounds_json(capsys):
    assert main(["bounds", "--r", "3", "--n", "8", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n0_exact"] == 8 and data["n0_upper"] == 24 and data["g_upper"] == 5


def test_bounds_text(capsys):
    assert main(["bounds", "--r", "4"]) == 0
    out = capsys.readouterr().out
    assert "n0 lower bound: 10" in out and "n0 upper bound: 28" in out


def test_bounds_bad_r(capsys):
    assert main(["bounds", "--r", "1"]) == 2


def test_construct_to_file_and_verify(tmp_path, capsys):
    out = tmp_path / "c.txt"
    assert main(["construct", "--n", "21", "--r", "2", "-o", str(out)]) == 0
    cert = read_certificate(out)
    assert cert.provenance == "constructed-strict"
    assert len(cert.levels) == 18
    assert main(["verify", str(out)]) == 0
    assert "ok" in capsys.readouterr().out


def test_construct_inapplicable(capsys):
    assert main(["construct", "--n", "8", "--r", "3"]) == 1
    assert "inapplicable" in capsys.readouterr().err


def test_construct_strict_mode_refuses_relaxed(capsys):
    assert main(["construct", "--n", "16", "--r", "2", "--mode", "strict"]) == 1
    assert main(["construct", "--n", "16", "--r", "2"]) == 0


def test_search_profile_exit_codes(tmp_path, capsys):
    out = tmp_path / "w.txt"
    assert main(["search", "profile", "--n", "6", "--r", "2",
                 "--levels", "2..4", "-o", str(out)]) == 0
    cert = read_certificate(out)
    assert cert.provenance == "search" and cert.levels == (2, 3, 4)
    capsys.readouterr()
    assert main(["search", "profile", "--n", "3", "--r", "2",
                 "--levels", "1..2"]) == 1
    assert "infeasible" in capsys.readouterr().out
    assert main(["search", "profile", "--n", "8", "--r", "3",
                 "--levels", "2..6", "--budget-nodes", "5"]) == 2


def test_search_profile_stats_json(capsys):
    code = main(["search", "profile", "--n", "5", "--r", "2",
                 "--levels", "2..3", "--json", "--stats-json"])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    report = json.loads(lines[-2])
    stats = json.loads(lines[-1])
    assert report["verdict"] == "feasible"
    assert stats["nodes"] > 0


def test_search_gmax(capsys):
    assert main(["search", "gmax", "--n", "3", "--r", "2", "--json"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    data = json.loads(lines[0])
    assert data == {"kind": "exact", "value": 1, "stats": data["stats"]}


def test_search_certify(tmp_path, capsys):
    out = tmp_path / "r2.txt"
    assert main(["search", "certify", "--r", "2", "--from", "4", "--to", "6",
                 "-o", str(out)]) == 0
    assert len(read_certificates(out)) == 3
    text = capsys.readouterr().out
    assert "n=4: achieved" in text


def test_search_certify_refuted_exit(capsys):
    assert main(["search", "certify", "--r", "4", "--from", "10", "--to", "10"]) == 1


def test_verify_failure_exit(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("instance n=3 r=2\nlevels 1 2\nset 1\nset 2\nset 1 2\nend\n")
    assert main(["verify", str(bad)]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("instance n=3 r=2\nlevels 1\nset 0\nend\n")
    assert main(["verify", str(bad)]) == 2


def test_corpus_cli(tmp_path, capsys):
    assert main(["corpus", "--out", str(tmp_path / "c"), "--r2-range", "4..6",
                 "--r3-range", "none", "--extra-r", "", "--json"]) == 0
    manifest = json.loads(capsys.readouterr().out)
    assert manifest["files"] == ["r2_n_4_to_6.txt"]
    assert len(read_certificates(tmp_path / "c" / "r2_n_4_to_6.txt")) == 3


def test_budget_env_default(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("RMAC_BUDGET_SECS", "0.000001")
    code = main(["search", "profile", "--n", "8", "--r", "3", "--levels", "2..6"])
    assert code == 2
    monkeypatch.setenv("RMAC_BUDGET_SECS", "60")
    code = main(["search", "profile", "--n", "4", "--r", "2", "--levels", "2"])
    assert code == 0
