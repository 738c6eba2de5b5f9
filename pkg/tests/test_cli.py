import json

import pytest

from snhecke.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_klbasis_table_lists_s3_rows(capsys):
    code, out = run_cli(capsys, "--no-cache", "klbasis", "--n", "3")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("KL[")]
    assert len(lines) == 6
    assert "KL[321] = H[321] + v*H[312] + v*H[231] + v^2*H[213] + v^2*H[132] + v^3*H[123]" in lines


def test_klbasis_single_element_json(capsys):
    code, out = run_cli(capsys, "--no-cache", "--format", "json", "klbasis", "--n", "2", "--w", "21")
    payload = json.loads(out)
    assert code == 0
    assert payload["version"] == 1
    assert payload["elements"]["21"]["kl"] == {"21": {"0": 1}, "12": {"1": 1}}


def test_klbasis_n1(capsys):
    code, out = run_cli(capsys, "--no-cache", "klbasis", "--n", "1")
    assert code == 0
    assert out.splitlines()[0] == "KL[1] = H[1]"


def test_mult_row(capsys):
    code, out = run_cli(
        capsys, "--no-cache", "mult", "--n", "3", "--basis", "kl", "--x", "213", "--y", "312"
    )
    assert code == 0
    assert out.strip() == "KL[213] * KL[312] = KL[321] + KL[213]"


def test_structconsts_s2_golden(capsys):
    code, out = run_cli(capsys, "--no-cache", "structconsts", "--n", "2", "--basis", "dualkl")
    assert code == 0
    assert "v^2+1" in out and "v^-1" in out and "-v" in out


def test_cells_json_schema(capsys):
    code, out = run_cli(capsys, "--no-cache", "--format", "json", "cells", "--n", "3", "--order", "left")
    payload = json.loads(out)
    assert code == 0
    assert payload["version"] == 1
    assert payload["order"] == "left"
    assert sorted(map(len, payload["classes"])) == [1, 1, 2, 2]
    assert all(len(e) == 2 for e in payload["hasse"])


def test_cells_two_singletons_at_n2(capsys):
    code, out = run_cli(capsys, "--no-cache", "--format", "json", "cells", "--n", "2", "--order", "left")
    payload = json.loads(out)
    assert [len(c) for c in payload["classes"]] == [1, 1]


def test_hasse_dot_output(capsys):
    code, out = run_cli(capsys, "--no-cache", "hasse", "--n", "4")
    assert code == 0
    assert out.startswith("graph involution_left_order {")
    assert out.count(" -- ") == 14
    assert out.count("label=") == 10


def test_afunc(capsys):
    code, out = run_cli(capsys, "--no-cache", "--format", "json", "afunc", "--n", "3")
    payload = json.loads(out)
    assert code == 0
    assert payload["a"]["123"] == 0 and payload["a"]["321"] == 3
    assert payload["report"]["passed"]


def test_cyclic_rank_and_membership(capsys):
    code, out = run_cli(
        capsys, "--no-cache", "--format", "json", "cyclic", "--n", "3",
        "--check", "rank", "--gen", "213", "--basis", "kl",
    )
    assert code == 0 and json.loads(out)["rank"] == 3
    code, out = run_cli(
        capsys, "--no-cache", "--format", "json", "cyclic", "--n", "3",
        "--check", "membership", "--gen", "213", "--basis", "kl", "--target", "312",
    )
    payload = json.loads(out)
    assert code == 0 and payload["member"] is True and payload["certificate"]
    code, out = run_cli(
        capsys, "--no-cache", "--format", "json", "cyclic", "--n", "3",
        "--check", "membership", "--gen", "312", "--basis", "kl", "--target", "213",
    )
    payload = json.loads(out)
    assert payload["member"] is False and "witness" in payload


def test_cyclic_equals_lm_and_quasi(capsys):
    code, out = run_cli(
        capsys, "--no-cache", "--format", "json", "cyclic", "--n", "3",
        "--check", "equals-lm", "--gen", "213",
    )
    assert code == 0 and json.loads(out)["result"] is True
    code, out = run_cli(
        capsys, "--no-cache", "--format", "json", "cyclic", "--n", "3",
        "--check", "quasi-idempotent", "--gen", "321",
    )
    payload = json.loads(out)
    assert payload["scalar"] == {"-3": 1, "-1": 2, "1": 2, "3": 1}


def test_kahrstrom_single_and_scan_exit_codes(capsys):
    code, out = run_cli(capsys, "--no-cache", "--format", "json", "kahrstrom", "--n", "3", "--all")
    payload = json.loads(out)
    assert code == 0
    assert all(not r["graded"] and not r["ungraded"] for r in payload["results"])
    code, out = run_cli(
        capsys, "--no-cache", "--format", "json", "kahrstrom", "--n", "4",
        "--w", "2143", "--mode", "graded",
    )
    payload = json.loads(out)
    assert payload["results"][0]["graded"] is True
    code, _ = run_cli(
        capsys, "--no-cache", "kahrstrom", "--n", "3", "--scan", "necessary"
    )
    assert code == 0
    code, _ = run_cli(
        capsys, "--no-cache", "kahrstrom", "--n", "3", "--scan", "invariance", "--mode", "graded"
    )
    assert code == 0


def test_verify_suites(capsys):
    for suite in ("paper-tables", "identities", "cells", "necessary"):
        code, out = run_cli(capsys, "--no-cache", "verify", "--n", "3", "--suite", suite)
        assert code == 0, (suite, out)
        assert "FAIL" not in out
    with pytest.raises(SystemExit):
        run_cli(capsys, "--no-cache", "verify", "--n", "3", "--suite", "nope")


def test_rank_guard(capsys):
    with pytest.raises(SystemExit):
        run_cli(capsys, "--no-cache", "klbasis", "--n", "7")
    with pytest.raises(SystemExit):
        run_cli(capsys, "--no-cache", "klbasis", "--n", "0")


def test_cache_round_trip_and_stability(tmp_path, capsys):
    args = ["--cache-dir", str(tmp_path), "--format", "json", "klbasis", "--n", "3"]
    code, first = run_cli(capsys, *args)
    assert code == 0
    assert (tmp_path / "kl-cache-s3.json").exists()
    code, second = run_cli(capsys, *args)  # warm cache
    assert first == second


def test_cache_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HECKE_CACHE_DIR", str(tmp_path))
    code, _ = run_cli(capsys, "klbasis", "--n", "2")
    assert code == 0
    assert (tmp_path / "kl-cache-s2.json").exists()


def test_corrupt_cache_is_rebuilt(tmp_path, capsys):
    (tmp_path / "kl-cache-s2.json").write_text("{not json")
    code, out = run_cli(capsys, "--cache-dir", str(tmp_path), "klbasis", "--n", "2")
    assert code == 0
    assert "KL[21]" in out
