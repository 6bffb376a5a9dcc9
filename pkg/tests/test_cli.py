"""CLI behavior: outputs, manifests, exit codes, round trips."""

import hashlib
import json

import pytest

from psqr.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_family_command(capsys):
    code, out, err = run_cli(capsys, "family", "2,3,6")
    assert code == 0
    doc = json.loads(out)
    assert doc["family_count"] == 1
    assert doc["parity_sum"] == -1
    manifest = json.loads(err.strip().splitlines()[-1])
    assert manifest["command"] == "family"
    assert manifest["output_sha256"] == hashlib.sha256(out.encode()).hexdigest()


def test_family_parse_error_exit_2(capsys):
    code, _, err = run_cli(capsys, "family", "2,,3")
    assert code == 2
    assert "element 2" in err


def test_psprimes_overflow_exit_4(capsys):
    code, _, err = run_cli(capsys, "psprimes", "--c", "3/2", "--range", f"1,{1 << 44}")
    assert code == 4
    assert "budget" in err


def test_predict_command(capsys):
    code, out, _ = run_cli(capsys, "predict", "2,3", "--c", "1", "--x", "1e6")
    assert code == 0
    doc = json.loads(out)
    assert doc["qr_density"] == "1/4"
    assert doc["qr_count_main_term"] == pytest.approx(18095.6, abs=0.1)
    assert doc["theorem_backed"] is True


def test_predict_rejects_decimal_exponent(capsys):
    code, _, err = run_cli(capsys, "predict", "2,3", "--c", "1.1")
    assert code == 2
    assert "fraction" in err


def test_census_command_json(capsys):
    code, out, _ = run_cli(capsys, "census", "2,3", "--c", "1", "--x", "1e4")
    assert code == 0
    doc = json.loads(out)
    assert doc["total_primes"] == 1033
    assert abs(doc["max_abs_deviation"]) < 0.05


def test_census_csv(capsys):
    code, out, _ = run_cli(capsys, "census", "2", "--c", "1", "--range", "10,500", "--csv")
    assert code == 0
    assert out.splitlines()[0] == "pattern,count,predicted,deviation"


def test_census_window_required(capsys):
    code, _, err = run_cli(capsys, "census", "2,3")
    assert code == 2


def test_census_set_cap_exit_4(capsys):
    big = ",".join(str(n) for n in range(1, 23))
    code, _, _ = run_cli(capsys, "census", big, "--x", "1e4")
    assert code == 4


def test_psprimes_output_and_round_trip(tmp_path, capsys):
    out_file = tmp_path / "ps.txt"
    code, _, err = run_cli(
        capsys, "psprimes", "--c", "11/10", "--range", "1e4,2e4", "--out", str(out_file)
    )
    assert code == 0
    manifest = json.loads(err.strip().splitlines()[-1])
    body = out_file.read_bytes()
    assert manifest["output_sha256"] == hashlib.sha256(body).hexdigest()
    assert (tmp_path / "ps.txt.manifest.json").exists()

    code, direct, _ = run_cli(capsys, "census", "2,3", "--c", "11/10", "--x", "1e4")
    assert code == 0
    code, ingested, _ = run_cli(
        capsys, "census", "2,3", "--c", "11/10", "--prime-file", str(out_file)
    )
    assert code == 0
    assert direct == ingested


def test_psprimes_examples(capsys):
    code, out, _ = run_cli(capsys, "psprimes", "--c", "1", "--range", "10,20")
    assert code == 0
    assert [l for l in out.splitlines() if not l.startswith("#")] == ["11", "13", "17", "19"]

    code, out, _ = run_cli(capsys, "psprimes", "--c", "3/2", "--range", "1,10")
    assert [l for l in out.splitlines() if not l.startswith("#")] == ["2", "5", "11", "31"]

    code, out, _ = run_cli(capsys, "psprimes", "--c", "11/10", "--range", "1,10")
    listed = {int(l) for l in out.splitlines() if not l.startswith("#")}
    assert {2, 3, 7} <= listed


def test_expsum_vaughan_verdicts(capsys):
    code, out, _ = run_cli(capsys, "expsum", "vaughan", "--n", "97", "--u", "5", "--v", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == "PASS"
    assert doc["value"] == pytest.approx(4.574710978503383)


def test_expsum_psistar(capsys):
    code, out, _ = run_cli(capsys, "expsum", "psistar", "--J", "20", "--grid", "20000")
    assert code == 0
    assert json.loads(out)["verdict"] == "PASS"


def test_expsum_bilinear(capsys):
    code, out, _ = run_cli(
        capsys, "expsum", "bilinear", "--N", "100", "--M", "200",
        "--u", "5", "--v", "5", "--j", "1", "--gamma", "10/11", "--s", "3",
    )
    assert code == 0
    assert json.loads(out)["verdict"] == "PASS"


def test_expsum_scan_csv(capsys):
    code, out, _ = run_cli(
        capsys, "expsum", "scan", "--gamma", "205/243", "--s", "3",
        "--n-list", "4096,8192",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "N,M,s,j_max,value_re,value_im,ratio"
    assert len(lines) == 3


def test_expsum_scan_json(capsys):
    code, out, _ = run_cli(
        capsys, "expsum", "scan", "--gamma", "205/243", "--s", "3",
        "--n-list", "4096,8192", "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["gamma"] == pytest.approx(205 / 243)
    assert len(doc["rows"]) == 2
    assert {"N", "M", "s", "j_max", "value_re", "value_im", "ratio"} == set(doc["rows"][0])
    assert doc["coeff_constants"]["b_decay"] == 0.5


def test_expsum_scan_rejects_square_s(capsys):
    code, _, _ = run_cli(
        capsys, "expsum", "scan", "--gamma", "205/243", "--s", "9", "--n-list", "4096,8192"
    )
    assert code == 2


def test_manifest_checksum_stability(capsys):
    _, out1, err1 = run_cli(capsys, "census", "2,3", "--c", "1", "--x", "2000", "--threads", "1")
    _, out2, err2 = run_cli(capsys, "census", "2,3", "--c", "1", "--x", "2000", "--threads", "4")
    assert out1 == out2
    sha1 = json.loads(err1.strip().splitlines()[-1])["output_sha256"]
    sha2 = json.loads(err2.strip().splitlines()[-1])["output_sha256"]
    assert sha1 == sha2


def test_threads_env_default(capsys, monkeypatch):
    monkeypatch.setenv("PSQR_THREADS", "2")
    from psqr.cli import build_parser

    args = build_parser().parse_args(["census", "2", "--x", "1000"])
    assert args.threads == 2
