"""Tests for the dnscm command-line interface."""

import json

import pytest

from dnscm.cli import create_parser, flag_overrides, main
from dnscm.manifest import read_manifest


class TestParser:
    def test_grid_flags(self):
        args = create_parser().parse_args(
            ["sweep-kl", "--sigma-u", "0:1:0.5", "--sigma-mu", "0,5", "--delta", "1", "--k", "5"]
        )
        assert flag_overrides(args) == {
            "k": 5,
            "sigma_u_values": [0.0, 0.5, 1.0],
            "sigma_mu_values": [0.0, 5.0],
            "delta_values": [1.0],
        }

    def test_profile_defaults_to_command(self):
        assert create_parser().parse_args(["densities"]).profile == "densities"

    def test_log_level_case_insensitive(self):
        args = create_parser().parse_args(["ewm-example", "--log-level", "debug"])
        assert flag_overrides(args) == {"log_level": "DEBUG"}

    def test_svg_and_bandwidth(self):
        args = create_parser().parse_args(["densities", "--svg", "--bandwidth", "0.25"])
        assert flag_overrides(args) == {"svg": True, "bandwidth": 0.25}

    def test_unset_flags_leave_config_alone(self):
        assert flag_overrides(create_parser().parse_args(["variance-table"])) == {}

    def test_command_required(self):
        with pytest.raises(SystemExit):
            create_parser().parse_args(["--seed", "1"])


class TestMain:
    def test_banner_without_arguments(self, capsys):
        assert main([]) == 0
        assert "Usage: dnscm" in capsys.readouterr().out

    def test_ewm_example(self, tmp_path, capsys):
        assert main(["ewm-example", "--out", str(tmp_path)]) == 0
        captured = capsys.readouterr()
        assert "All 13 checks passed" in captured.out
        assert "Manifest:" in captured.err
        assert (tmp_path / "ewm-example.manifest.json").exists()

    def test_sweep_with_flags(self, tmp_path):
        code = main(
            [
                "sweep-kl",
                "--out", str(tmp_path),
                "--n", "120",
                "--sigma-u", "0,1",
                "--sigma-mu", "0",
                "--seed", "4",
                "--threads", "2",
            ]
        )
        assert code == 0
        manifest = read_manifest(str(tmp_path / "sweep-kl.manifest.json"))
        assert manifest["config"]["n"] == 120
        assert manifest["config"]["seed"] == 4
        assert manifest["config"]["sigma_u_values"] == [0.0, 1.0]
        assert manifest["config"]["noise_scale"] == "variance"

    def test_flags_override_config_file(self, tmp_path):
        config_path = tmp_path / "run.json"
        config_path.write_text(
            json.dumps({"n": 150, "seed": 2, "sigma_u_values": [0.5], "sigma_mu_values": [0.0]}),
            encoding="utf-8",
        )
        out = tmp_path / "out"
        assert main(["sweep-kl", "--config", str(config_path), "--seed", "7", "--out", str(out)]) == 0
        config = read_manifest(str(out / "sweep-kl.manifest.json"))["config"]
        assert config["n"] == 150
        assert config["seed"] == 7
        assert config["sigma_u_values"] == [0.5]

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["ewm-example", "--config", str(tmp_path / "absent.json")]) == 1
        assert "Error loading config file" in capsys.readouterr().err

    def test_invalid_value(self, tmp_path, capsys):
        assert main(["sweep-kl", "--out", str(tmp_path), "--n", "0"]) == 1
        assert "n must be at least 1" in capsys.readouterr().err

    def test_bad_grid(self, tmp_path, capsys):
        assert main(["sweep-kl", "--out", str(tmp_path), "--sigma-u", "1:0:1"]) == 1
        assert "Range grid" in capsys.readouterr().err

    def test_unknown_key_in_config_file(self, tmp_path, capsys):
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({"samples": 10}), encoding="utf-8")
        assert main(["ewm-example", "--config", str(config_path)]) == 1
        assert "Unknown configuration keys: samples" in capsys.readouterr().err

    def test_failed_checks_exit_nonzero(self, tmp_path, capsys):
        code = main(
            [
                "variance-table",
                "--out", str(tmp_path),
                "--n", "100",
                "--sigma-u", "0",
                "--sigma-mu", "0",
                "--repetitions", "2",
            ]
        )
        assert code == 1
        assert "checks failed: variance ordering" in capsys.readouterr().err

    def test_unknown_choice(self):
        with pytest.raises(SystemExit):
            main(["ewm-example", "--welfare", "utilitarian"])
