"""Command-line front end: outputs, exit codes, determinism."""
import json
import subprocess
import sys

import numpy as np
import pytest

from qndwt import amplitude_encode, doppler, dwt_forward, ndwt_atrous, write_csv
from qndwt._golden import PER_SHIFT_REF, STATIONARY_REF
from qndwt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rescaled(x):
    st_ = amplitude_encode(x)
    return st_.amplitudes.real * st_.norm


# --- transform


def test_demo_example1(capsys):
    code, out, _ = run(capsys, "transform", "--demo", "example1")
    assert code == 0
    assert "per-shift" in out and "stationary coefficients" in out and out.rstrip().endswith("(tolerance 1e-05)")
    assert "PASS" in out
    first_row = [float(v) for v in out.splitlines()[2].split()[1:]]
    np.testing.assert_allclose(first_row, PER_SHIFT_REF[0], atol=1e-6)


def test_demo_example1_json(capsys):
    code, out, _ = run(capsys, "transform", "--demo", "example1", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["pass"] is True
    np.testing.assert_allclose(rec["per_shift_ref"], PER_SHIFT_REF, atol=1e-5)
    np.testing.assert_allclose(rec["stationary_ref"], STATIONARY_REF, atol=1e-5)


def test_transform_qndwt_doppler(capsys):
    code, out, _ = run(capsys, "transform", "--gen", "doppler", "--n", "64", "--wavelet", "haar",
                       "--levels", "3", "--mode", "qndwt")
    assert code == 0
    rows = [ln.split(",") for ln in out.splitlines()]
    assert [r[0] for r in rows] == ["d1", "d2", "d3", "a3"]
    got = np.array([[float(v) for v in r[1:]] for r in rows])
    want = ndwt_atrous(rescaled(doppler(64).samples), "haar", 3).as_array()
    np.testing.assert_allclose(got, want, atol=1e-10)


def test_transform_qndwt_json_record(capsys):
    code, out, _ = run(capsys, "transform", "--gen", "doppler", "--n", "16", "--levels", "2",
                       "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert {"N", "L", "wavelet", "per_shift", "d", "a", "level_energies"} <= set(rec)
    assert np.array(rec["per_shift"]).shape == (4, 16) and len(rec["level_energies"]) == 3


@pytest.mark.parametrize("mode", ["dwt", "atrous", "epsilon"])
def test_transform_classical_modes(capsys, mode):
    code, out, _ = run(capsys, "transform", "--gen", "doppler", "--n", "32", "--levels", "2",
                       "--wavelet", "db2", "--mode", mode, "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["N"] == 32 and rec["L"] == 2
    x = doppler(32).samples
    if mode == "dwt":
        np.testing.assert_allclose(rec["coeffs"], dwt_forward(x, "db2", 2).flat(), atol=1e-14)
    elif mode == "atrous":
        np.testing.assert_allclose(rec["d"][0], ndwt_atrous(x, "db2", 2).d[0], atol=1e-14)
    else:
        assert np.array(rec["per_shift"]).shape == (4, 32)


def test_levels_too_deep(capsys):
    code, _, err = run(capsys, "transform", "--gen", "doppler", "--n", "64", "--levels", "9")
    assert code == 2 and "L=9" in err and "log2(N) = 6" in err


@pytest.mark.parametrize("argv, fragment", [
    (["transform", "--wavelet", "meyer"], "meyer"),
    (["transform", "--gen", "doppler", "--n", "48"], "power of two"),
    (["transform", "--gen", "fbm", "--hurst", "1.5"], "hurst"),
    (["transform", "--gen", "doppler", "--snr", "-1"], "snr"),
    (["hadamard", "--reflect"], "--k"),
    (["hadamard", "--theta", "0"], "theta"),
    (["hadamard", "--scales", "1,9", "--n", "16"], "scales"),
    (["spectrum", "--seeds", "0"], "seeds"),
    (["spectrum", "--gen", "fbm", "--n", "64", "--levels", "4", "--fit-range", "3,3"], "fit range"),
    (["shrink", "--gains", "0.5,x"], "gains"),
    (["shrink", "--gains", "1.5"], "gains"),
    (["shrink", "--gains", "0.5", "--mode", "dephase"], "postselect"),
])
def test_config_errors_exit_2(capsys, argv, fragment):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert fragment in err


def test_input_and_gen_conflict(capsys, tmp_path):
    p = tmp_path / "x.csv"
    write_csv(p, np.arange(8.0))
    code, _, err = run(capsys, "gen", "--input", str(p), "--gen", "doppler")
    assert code == 2 and "either" in err
    code, _, err = run(capsys, "transform", "--input", str(tmp_path / "nope.csv"))
    assert code == 2 and "nope.csv" in err


def test_input_file(capsys, tmp_path):
    p = tmp_path / "sig.csv"
    x = np.random.default_rng(0).standard_normal(16)
    write_csv(p, x)
    code, out, _ = run(capsys, "transform", "--input", str(p), "--mode", "dwt", "--levels", "2")
    assert code == 0
    np.testing.assert_allclose([float(v) for v in out.split()], dwt_forward(x, "haar", 2).flat(), atol=1e-15)


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["transform", "--mode", "fourier"])
    assert exc.value.code == 2


# --- hadamard


def test_reflect_finest_band(capsys):
    code, out, _ = run(capsys, "hadamard", "--gen", "doppler", "--n", "128", "--reflect", "--k", "100",
                       "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["abs_diff"] <= 1e-10
    v = doppler(128).samples
    assert abs(rec["hadamard_energy"] - dwt_forward(v / np.linalg.norm(v), "haar", 3).flat()[100] ** 2) < 1e-12


def test_reflect_with_shots(capsys):
    code, out, _ = run(capsys, "hadamard", "--gen", "doppler", "--n", "32", "--reflect", "--k", "20",
                       "--shots", "4000", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["shot_estimate"]["shots"] == 4000
    assert abs(rec["shot_energy"] - rec["hadamard_energy"]) < 5 * rec["shot_estimate"]["stderr"] / 2 + 1e-3


def test_scalogram_csv_and_queries(capsys, tmp_path):
    out_path = tmp_path / "scal.csv"
    code, _, _ = run(capsys, "hadamard", "--gen", "doppler", "--n", "16", "--scales", "1,2",
                     "--shots", "500", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "scale," + ",".join(str(k) for k in range(16))
    assert [ln.split(",")[0] for ln in lines[1:]] == ["1", "2"]
    queries = json.loads(out_path.with_suffix(".queries.json").read_text())
    assert len(queries["queries"]) == 32 and queries["shots"] == 500
    assert all(abs(q["mean"]) <= 1 for q in queries["queries"])


def test_scalogram_exact_reflection_probe(capsys):
    code, out, _ = run(capsys, "hadamard", "--gen", "doppler", "--n", "32", "--probe", "reflection",
                       "--levels", "2", "--format", "json")
    rec = json.loads(out)
    v = doppler(32).samples
    t = ndwt_atrous(v, "haar", 2)
    assert code == 0 and rec["scales"] == [1, 2]
    np.testing.assert_allclose(rec["scalogram"][0], t.d[0] ** 2 / (v @ v), atol=1e-12)


# --- spectrum


def test_spectrum_fbm_slope(capsys):
    code, out, _ = run(capsys, "spectrum", "--gen", "fbm", "--hurst", "0.3333", "--n", "512", "--wavelet", "db2",
                       "--levels", "7", "--seeds", "20", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert 5 / 3 - 0.4 <= rec["slope"] <= 5 / 3 + 0.4
    assert len(rec["slopes"]) == 20 and rec["fit_range"] == [1, 5] and len(rec["E"]) == 7


def test_spectrum_routes_agree(capsys):
    base = ["spectrum", "--gen", "fbm", "--n", "128", "--wavelet", "db2", "--levels", "5", "--seeds", "3",
            "--format", "json"]
    _, classical, _ = run(capsys, *base)
    _, quantum, _ = run(capsys, *base, "--route", "quantum")
    c, q = json.loads(classical), json.loads(quantum)
    np.testing.assert_allclose(c["slopes"], q["slopes"], atol=1e-10)


def test_spectrum_jobs_do_not_change_output(capsys):
    base = ["spectrum", "--gen", "fbm", "--n", "256", "--levels", "6", "--seeds", "8"]
    _, serial, _ = run(capsys, *base)
    _, parallel, _ = run(capsys, *base, "--jobs", "4")
    assert serial == parallel


# --- shrink and gen


def test_shrink_doppler(capsys):
    code, out, _ = run(capsys, "shrink", "--gen", "doppler", "--n", "256", "--snr", "7",
                       "--gains", "0.1,0.3,1,1,1,1,1,1", "--format", "json")
    rec = json.loads(out)
    assert code == 0
    assert rec["mse_denoised"] < rec["mse_noisy"]
    assert 0 < rec["postselect_prob"] <= 1 and len(rec["denoised"]) == 256
    assert {"gains", "mode", "postselect_prob", "mse_noisy", "mse_denoised"} <= set(rec)


def test_shrink_csv_writes_report(capsys, tmp_path):
    out_path = tmp_path / "den.csv"
    code, _, _ = run(capsys, "shrink", "--gen", "doppler", "--n", "256", "--snr", "7", "--gains", "0.1,0.3",
                     "--out", str(out_path))
    assert code == 0
    assert len(out_path.read_text().split()) == 256
    report = json.loads(out_path.with_suffix(".report.json").read_text())
    assert report["L"] == 2 and report["mse_denoised"] < report["mse_noisy"]


def test_gen_csv(capsys):
    code, out, _ = run(capsys, "gen", "--gen", "fbm", "--n", "32", "--seed", "4")
    assert code == 0 and len(out.split()) == 32


# --- determinism and entry points


DETERMINISM_CASES = [
    ["transform", "--demo", "example1"],
    ["transform", "--gen", "fbm", "--n", "64", "--snr", "3", "--seed", "5", "--mode", "qndwt"],
    ["hadamard", "--gen", "doppler", "--n", "32", "--shots", "300", "--seed", "2", "--format", "json"],
    ["spectrum", "--gen", "fbm", "--n", "128", "--levels", "5", "--seeds", "4", "--jobs", "2"],
    ["shrink", "--gen", "doppler", "--n", "64", "--snr", "7", "--gains", "0.1,0.3", "--seed", "9"],
    ["gen", "--gen", "noise", "--n", "16", "--seed", "1"],
]


@pytest.mark.parametrize("argv", DETERMINISM_CASES, ids=lambda a: a[0])
def test_byte_identical_reruns(argv):
    runs = [subprocess.run([sys.executable, "-m", "qndwt", *argv], capture_output=True, check=True)
            for _ in range(2)]
    assert runs[0].stdout == runs[1].stdout and runs[0].stdout


def test_log_level_env(monkeypatch, capsys):
    import logging

    monkeypatch.setenv("QNDWT_LOG", "info")
    root = logging.getLogger()
    saved = root.handlers[:], root.level
    root.handlers = []
    try:
        code = main(["transform", "--gen", "doppler", "--n", "16", "--levels", "2"])
        assert code == 0
        assert "a trous" in capsys.readouterr().err
    finally:
        root.handlers, level = saved
        root.setLevel(level)
