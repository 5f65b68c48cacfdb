import json

import numpy as np
import pytest

from rydion.config import ENV_VAR, load_config, parse_config, validate_config
from rydion.errors import ConfigError, Unstable
from rydion.io import format_value, read_csv, read_json, write_csv, write_json

TWO_PI = 2 * np.pi

TRAP_GRADIENTS = """
[trap]
drive_freq_hz = 18.1e6
grad_rf = 8.5e8
grad_dc = 6.8e6
asymmetry = -0.26
[states]
46S = 5.6e-31
"""


def write(tmp_path, text, name="cfg.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoad:
    def test_ini_and_json_agree(self, config_path):
        ini = load_config(config_path)
        js = load_config(config_path.with_suffix(".json"))
        assert ini.trap == js.trap
        assert ini.states == js.states
        assert ini.scheme == js.scheme
        assert ini.defaults == js.defaults

    def test_units(self, config_path):
        cfg = load_config(config_path)
        assert cfg.trap.drive_freq == pytest.approx(TWO_PI * 18.1e6)
        assert cfg.scheme["rabi_1"] == pytest.approx(TWO_PI * 20e6)
        assert cfg.scheme["gamma_e"] == 3.0e7
        assert cfg.state("46S").polarizability == 5.6e-31

    def test_gradient_form(self, tmp_path):
        cfg = load_config(write(tmp_path, TRAP_GRADIENTS))
        assert cfg.trap.grad_rf == 8.5e8
        assert cfg.defaults["micromotion_correction"] is True

    def test_environment_variable(self, config_path, monkeypatch):
        monkeypatch.setenv(ENV_VAR, str(config_path))
        assert load_config().source == str(config_path)

    def test_missing(self, tmp_path, monkeypatch):
        monkeypatch.delenv(ENV_VAR, raising=False)
        with pytest.raises(ConfigError):
            load_config()
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.ini")

    def test_unstable_trap(self, tmp_path):
        with pytest.raises(Unstable):
            load_config(write(tmp_path, TRAP_GRADIENTS.replace("grad_dc = 6.8e6", "grad_dc = -1e6")))

    @pytest.mark.parametrize("edit", [
        ("drive_freq_hz = 18.1e6", "drive_freq_hz = fast"),
        ("[states]\n46S = 5.6e-31", "[states]"),
        ("asymmetry = -0.26", "asymmetry = -0.26\ncolour = blue"),
        ("[trap]", "[trap]\nspecies = 40Ca+"),
    ])
    def test_schema_errors(self, tmp_path, edit):
        with pytest.raises(ConfigError):
            load_config(write(tmp_path, TRAP_GRADIENTS.replace(*edit)))

    def test_scheme_keys(self):
        raw = {"trap": {"drive_freq_hz": 18.1e6, "secular_freqs_hz": [1.76e6, 1.70e6, 0.87e6]},
               "states": [{"label": "a", "polarizability": 0.0}],
               "scheme": {"rabi_1_hz": 1e6, "rabi_1_hz_sigma": 1e4, "lower_state": "a"}}
        cfg = parse_config(raw)
        assert cfg.scheme["rabi_1_sigma"] == pytest.approx(TWO_PI * 1e4)
        raw["scheme"]["upper_state"] = "zz"
        with pytest.raises(ConfigError):
            parse_config(raw)


class TestValidate:
    def test_example_is_clean(self, config_path):
        report = validate_config(config_path)
        assert report.ok and not report.violations and not report.warnings

    def test_mutually_exclusive(self, tmp_path):
        text = TRAP_GRADIENTS.replace("[states]", "secular_freqs_hz = 1.76e6, 1.70e6, 0.87e6\n[states]")
        report = validate_config(write(tmp_path, text))
        assert not report.ok
        assert any("mutually exclusive" in v for v in report.violations)

    def test_large_polarizability_warns(self, tmp_path):
        report = validate_config(write(tmp_path, TRAP_GRADIENTS.replace("5.6e-31", "5.6e-29")))
        assert any(w.startswith("PerturbationInvalid") for w in report.warnings)

    def test_moderate_polarizability_warns_only(self, tmp_path):
        report = validate_config(write(tmp_path, TRAP_GRADIENTS.replace("5.6e-31", "1.7e-30")))
        assert report.ok
        assert len(report.warnings) == 1

    def test_missing_file(self, tmp_path):
        report = validate_config(tmp_path / "absent.ini")
        assert not report.ok

    def test_unstable_is_violation(self, tmp_path):
        report = validate_config(write(tmp_path, TRAP_GRADIENTS.replace("grad_dc = 6.8e6", "grad_dc = -1e6")))
        assert any("unstable" in v for v in report.violations)

    def test_report_json(self, config_path):
        d = validate_config(config_path).as_dict()
        assert json.loads(json.dumps(d)) == d


class TestIO:
    def test_float_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        values = rng.standard_normal(50) * 10.0 ** rng.integers(-30, 30, 50)
        path = tmp_path / "x.csv"
        write_csv(path, ["i", "v"], enumerate(values))
        back = read_csv(path)
        assert back["i"] == list(range(50))
        assert np.array_equal(np.array(back["v"]), values)

    def test_comment_lines_skipped(self):
        cols = read_csv('# {"a": 1}\nx,y\n1,2.5\n')
        assert cols == {"x": [1], "y": [2.5]}

    def test_ragged_rows(self):
        with pytest.raises(ValueError):
            read_csv("x,y\n1\n")

    def test_json_round_trip(self, tmp_path):
        payload = {"a": np.float64(0.1), "b": np.arange(3), "c": {"d": np.bool_(True)}}
        path = tmp_path / "x.json"
        write_json(path, payload)
        assert read_json(path) == {"a": 0.1, "b": [0, 1, 2], "c": {"d": True}}

    def test_format_value(self):
        assert format_value(0.1) == "0.1"
        assert format_value(np.int64(3)) == "3"
        assert format_value(True) == "true"
