import json
import subprocess
import sys

import numpy as np
import pytest

from rydion.cli import run
from rydion.io import read_csv, read_json

TRAP = """
[trap]
drive_freq_hz = 18.1e6
secular_freqs_hz = 1.76e6, 1.70e6, 0.87e6
[states]
4D52 = 0.0
46S = {alpha}
"""


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def diagnostic(err):
    return json.loads(err.strip().splitlines()[-1])


class TestExitCodes:
    def test_missing_config(self, capsys, tmp_path):
        code, _, err = call(capsys, "trap-info", "--config", tmp_path / "absent.ini")
        assert code == 2
        assert diagnostic(err)["error"] == "ConfigError"

    def test_unstable(self, capsys, tmp_path):
        path = tmp_path / "u.ini"
        path.write_text("[trap]\ndrive_freq_hz = 18.1e6\ngrad_rf = 8.5e8\ngrad_dc = -1e6\n[states]\na = 0\n")
        code, _, err = call(capsys, "trap-info", "--config", path)
        assert code == 3
        assert diagnostic(err)["error"] == "Unstable"

    def test_antitrapped(self, capsys, tmp_path):
        path = tmp_path / "a.ini"
        path.write_text(TRAP.format(alpha=5.6e-27))
        code, _, err = call(capsys, "stark-shift", "--config", path)
        assert code == 3
        assert diagnostic(err)["error"] == "AntiTrapped"

    def test_fit_failure(self, capsys, tmp_path, config_path):
        data = tmp_path / "flat.csv"
        data.write_text("detuning_hz,signal,trials\n" + "".join(f"{d},1.0,100\n" for d in range(-5, 6)))
        code, _, err = call(capsys, "spectrum", "fit", "--config", config_path, "--input", data)
        assert code == 4
        assert diagnostic(err)["error"] == "DegenerateData"

    def test_bad_usage(self, capsys):
        code, _, err = call(capsys, "no-such-command")
        assert code == 2
        assert diagnostic(err)["error"] == "UsageError"

    def test_mm_limit_needs_arguments(self, capsys):
        code, _, _ = call(capsys, "mm-limit", "--alpha", "5.6e-31")
        assert code == 2

    def test_missing_input_file(self, capsys, tmp_path):
        code, _, err = call(capsys, "micromotion-fit", "--input", tmp_path / "absent.csv")
        assert code == 2


class TestSubcommands:
    def test_trap_info(self, capsys, config_path):
        code, out, _ = call(capsys, "trap-info", "--config", config_path)
        info = json.loads(out)
        assert code == 0
        assert info["grad_rf"] == pytest.approx(8.46e8, rel=2e-3)
        assert info["grad_dc"] == pytest.approx(6.81e6, rel=2e-3)
        assert info["mathieu_q"] == pytest.approx(0.29, rel=0.02)

    def test_trap_info_csv(self, capsys, config_path):
        code, out, _ = call(capsys, "trap-info", "--config", config_path, "--format", "csv")
        cols = read_csv(out)
        assert code == 0 and "mathieu_q" in cols["quantity"]

    def test_stark_shift(self, capsys, config_path):
        code, out, _ = call(capsys, "stark-shift", "--config", config_path, "--format", "json")
        rows = {r["label"]: r for r in json.loads(out)["states"]}
        assert rows["46S"]["delta_omega_x_hz"] == pytest.approx(-40.5e3, rel=0.01)
        assert rows["4D52"]["delta_omega_x_hz"] == 0.0

    def test_stark_shift_text_table(self, capsys, config_path):
        code, out, _ = call(capsys, "stark-shift", "--config", config_path, "--format", "text")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 3
        assert len({len(line) for line in lines}) == 1
        assert lines[2].split()[0] == "46S"
        assert float(lines[2].split()[6]) == pytest.approx(-40.53, abs=0.01)

    def test_text_format_only_for_stark_shift(self, capsys, config_path):
        code, _, _ = call(capsys, "trap-info", "--config", config_path, "--format", "text")
        assert code == 2

    def test_no_mm_correction_flag(self, capsys, config_path):
        _, with_mm, _ = call(capsys, "stark-shift", "--config", config_path, "--format", "json")
        _, without, _ = call(capsys, "stark-shift", "--config", config_path, "--format", "json",
                             "--no-mm-correction")
        a = json.loads(with_mm)["states"][1]["delta_omega_x_hz"]
        b = json.loads(without)["states"][1]["delta_omega_x_hz"]
        assert abs(a) > abs(b)
        assert abs(a / b - 1) == pytest.approx(0.0154, abs=0.002)

    def test_fc_matrix(self, capsys, tmp_path, config_path):
        out = tmp_path / "fc.csv"
        code, _, _ = call(capsys, "fc-matrix", "--config", config_path, "--n-max", 10, "--shift-xho", 1.0, "--ratio", 1.0,
                          "--out", out)
        header = read_json(tmp_path / "fc.csv.json")
        table = read_csv(out)
        assert code == 0
        assert header["shift_xho"] == 1.0 and header["n_max"] == 10
        assert table["m0"][0] == pytest.approx(np.exp(-0.25), rel=1e-3)

    def test_fc_matrix_stdout_header(self, capsys, config_path):
        code, out, _ = call(capsys, "fc-matrix", "--config", config_path, "--n-max", 3)
        first = out.splitlines()[0]
        assert first.startswith("# ")
        assert json.loads(first[2:])["lower_state"] == "4D52"
        assert read_csv(out)["n"] == [0, 1, 2, 3]

    def test_spectrum_round_trip(self, capsys, tmp_path, config_path):
        scan = tmp_path / "scan.csv"
        code, _, _ = call(capsys, "spectrum", "synthesize", "--config", config_path, "--nx", 0,
                          "--points", 161, "--trials", 0, "--center-hz", 12e3, "--out", scan)
        assert code == 0
        assert list(read_csv(scan)) == ["detuning_hz", "signal", "trials"]
        code, out, _ = call(capsys, "spectrum", "fit", "--config", config_path, "--input", scan)
        fit = json.loads(out)
        assert code == 0
        assert fit["center_hz"] == pytest.approx(12e3, abs=1.0)
        assert fit["rabi_hz"] == pytest.approx(60e3, rel=1e-5)

    def test_micromotion_fit(self, capsys, tmp_path):
        x = np.linspace(-5, 5, 11)
        data = tmp_path / "mm.csv"
        data.write_text("control,shift_hz\n" + "".join(f"{float(c)!r},{float(-3e4 * (c - 0.4) ** 2 + 5.0)!r}\n" for c in x))
        code, out, _ = call(capsys, "micromotion-fit", "--input", data, "--alpha", 5.6e-31)
        res = json.loads(out)
        assert code == 0
        assert res["control"] == pytest.approx(0.4, abs=1e-9)
        assert res["curvature_hz"] == pytest.approx(-3e4, rel=1e-9)

    def test_mm_limit(self, capsys):
        code, out, _ = call(capsys, "mm-limit", "--alpha", 5.6e-31, "--linewidth-hz", 100e3,
                            "--resolution-fraction", 0.1)
        assert code == 0
        assert json.loads(out)["residual_field_v_per_m"] == pytest.approx(4.9, abs=0.1)

    def test_rabi(self, capsys, tmp_path, config_path):
        out = tmp_path / "rabi.csv"
        code, _, _ = call(capsys, "rabi", "--config", config_path, "--samples", 25, "--points", 21,
                          "--t-max-us", 5, "--full", "--out", out)
        cols = read_csv(out)
        assert code == 0
        assert list(cols) == ["time_s", "p0_median", "p0_lo", "p0_hi", "p_0", "p_e", "p_r", "p_g"]
        total = np.array(cols["p_0"]) + cols["p_e"] + np.array(cols["p_r"]) + cols["p_g"]
        assert np.allclose(total, 1.0, atol=1e-12)

    def test_validate(self, capsys, config_path, tmp_path):
        code, out, _ = call(capsys, "validate", "--config", config_path)
        assert code == 0 and json.loads(out)["ok"]
        bad = tmp_path / "bad.ini"
        bad.write_text(TRAP.format(alpha=5.6e-29).replace("[states]", "grad_rf = 8e8\n[states]"))
        code, out, _ = call(capsys, "validate", "--config", bad)
        assert code == 2
        assert any("mutually exclusive" in v for v in json.loads(out)["violations"])


class TestFigures:
    def test_fig1b(self, capsys, tmp_path, config_path):
        code, _, _ = call(capsys, "figure", "fig1b", "--config", config_path, "--out", tmp_path)
        rows = read_csv(tmp_path / "fig1b.csv")
        meta = read_json(tmp_path / "fig1b.json")
        assert code == 0
        assert list(rows) == ["mode", "n", "shift_hz"]
        x = [s for m, s in zip(rows["mode"], rows["shift_hz"]) if m == "x"]
        assert np.allclose(np.diff(x), meta["slope_x_hz"], rtol=1e-9)

    def test_fig2b_and_fit(self, capsys, tmp_path, config_path):
        call(capsys, "figure", "fig2b", "--config", config_path, "--out", tmp_path)
        meta = read_json(tmp_path / "fig2b.json")
        assert abs(meta["turning_point"]) < 4 * meta["turning_point_err"]
        code, out, _ = call(capsys, "micromotion-fit", "--input", tmp_path / "fig2b.csv")
        assert code == 0 and abs(json.loads(out)["control"]) < 1e-9

    def test_fig3(self, capsys, tmp_path, config_path):
        code, _, _ = call(capsys, "figure", "fig3", "--config", config_path, "--out", tmp_path)
        meta = read_json(tmp_path / "fig3.json")
        assert code == 0
        off = [sum(v for k, v in w.items() if k != "0") for w in meta["weights"]]
        assert off == sorted(off)
        assert list(read_csv(tmp_path / "fig3_spectra.csv")) == ["panel", "shift_xho", "detuning_hz", "depletion"]


    def test_fig4_without_band(self, capsys, tmp_path, config_path):
        code, _, _ = call(capsys, "figure", "fig4", "--config", config_path, "--samples", 0, "--points", 5,
                          "--out", tmp_path)
        cols = read_csv(tmp_path / "fig4.csv")
        assert code == 0
        assert list(cols) == ["time_s", "cooling", "p0"]
        assert sorted(set(cols["cooling"])) == ["doppler", "sideband"]
        assert np.allclose(np.array(cols["p0"])[np.array(cols["time_s"]) == 0], 1.0, atol=1e-12)

    def test_fig4_too_few_samples(self, capsys, tmp_path, config_path):
        code, _, err = call(capsys, "figure", "fig4", "--config", config_path, "--samples", 3, "--points", 5,
                            "--out", tmp_path)
        assert code == 2 and "25" in diagnostic(err)["message"]


class TestDeterminism:
    def test_spectrum_bytes(self, capsys, tmp_path, config_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            call(capsys, "spectrum", "synthesize", "--config", config_path, "--seed", 9, "--points", 101, "--out", p)
        assert paths[0].read_bytes() == paths[1].read_bytes()
        call(capsys, "spectrum", "synthesize", "--config", config_path, "--seed", 10, "--points", 101,
             "--out", tmp_path / "c.csv")
        assert paths[0].read_bytes() != (tmp_path / "c.csv").read_bytes()

    def test_rabi_bytes(self, capsys, tmp_path, config_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            call(capsys, "rabi", "--config", config_path, "--samples", 25, "--points", 11, "--t-max-us", 5,
                 "--out", p)
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_json_outputs_reparse(self, capsys, config_path):
        for argv in (["trap-info"], ["stark-shift", "--format", "json"], ["validate"]):
            _, out, _ = call(capsys, *argv, "--config", config_path)
            assert read_json(out) == json.loads(out)


def test_console_entry_point(config_path):
    proc = subprocess.run([sys.executable, "-m", "rydion", "trap-info", "--config", str(config_path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["species"] == "88Sr+"
