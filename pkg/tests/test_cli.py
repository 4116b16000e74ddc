"""Command-line interface: exit codes, report formats, determinism."""

import json

import pytest

from onsaw import cli


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_verify_cybe_json(capsys):
    code, out = run_cli(["verify", "cybe", "--n", "3", "--format", "json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert doc["command"] == "verify cybe"
    assert [c["status"] for c in doc["checks"]] == ["pass"]


def test_verify_skew_text(capsys):
    code, out = run_cli(["verify", "skew", "--n", "2"], capsys)
    assert code == 0
    assert "PASS" in out


def test_verify_aw(capsys):
    code, out = run_cli(["verify", "aw", "--n", "3"], capsys)
    assert code == 0
    assert "0 failed" in out


def test_verify_automorphism_epsilon(capsys):
    code, out = run_cli(
        ["verify", "automorphism", "--which", "theta2", "--n", "2",
         "--levels", "2", "--epsilon=-1"],
        capsys,
    )
    assert code == 0


def test_theta2_odd_rank_rejected(capsys):
    with pytest.raises(SystemExit):
        cli.main(["verify", "automorphism", "--which", "theta2", "--n", "3",
                  "--levels", "1"])


def test_bad_window_is_validation_error(capsys):
    code = cli.main(["verify", "frt", "--n", "2", "--cutoff", "1"])
    err = capsys.readouterr().err
    assert code == 2
    assert "window" in err


def test_unknown_command(capsys):
    with pytest.raises(SystemExit):
        cli.main(["frobnicate"])


def test_extract_writes_table(tmp_path, capsys):
    out_file = tmp_path / "t3.json"
    code, out = run_cli(["extract", "aw", "--n", "3", "--out", str(out_file)], capsys)
    assert code == 0
    doc = json.loads(out_file.read_text())
    assert doc["rank"] == 3
    assert len(doc["basis"]) == 8
    from onsaw import askey_wilson as aw

    back = aw.import_table(doc)
    assert aw.check_jacobi(back).ok()


def test_charges_print(capsys):
    code, out = run_cli(["charges", "print", "--n", "2", "--max-order", "2"], capsys)
    assert code == 0
    assert "I_0" in out and "I_2" in out


def _normalized_json(out: str) -> dict:
    doc = json.loads(out)
    doc.pop("elapsed_ms", None)
    return doc


@pytest.mark.parametrize("argv", [
    ["verify", "cybe", "--n", "2"],
    ["verify", "skew", "--n", "3"],
    ["verify", "onsager", "--n", "2", "--levels", "2"],
    ["verify", "aw", "--n", "3"],
])
def test_reports_deterministic(argv, capsys):
    full = argv + ["--format", "json", "--parallel", "on"]
    _, out1 = run_cli(full, capsys)
    _, out2 = run_cli(full, capsys)
    assert _normalized_json(out1) == _normalized_json(out2)
    assert json.dumps(_normalized_json(out1)) == json.dumps(_normalized_json(out2))
    # parallel off produces the same report
    _, out3 = run_cli(argv + ["--format", "json", "--parallel", "off"], capsys)
    assert _normalized_json(out1) == _normalized_json(out3)


def test_failure_exit_code(monkeypatch, capsys):
    # force a failing check through a corrupted residual
    from onsaw import rmatrix as rm
    from onsaw.report import Report

    def failing_check(dim):
        rep = Report("verify skew", {"n": dim})
        rep.add("skew-symmetry", False, "entry (1, 2)->(2, 1) monomial [(x,1)] residual 4")
        return rep

    monkeypatch.setattr(rm, "check_skew", failing_check)
    code = cli.main(["verify", "skew", "--n", "2"])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL" in out and "residual" in out
