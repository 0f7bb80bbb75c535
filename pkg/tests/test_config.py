"""Tests for configuration, profiles, config files and manifests."""

import json

import pytest

from dnscm.config import PROFILES, ExperimentConfig, get_profile_config
from dnscm.manifest import generate_manifest, read_manifest
from dnscm.profiles import PROFILE_DESCRIPTIONS, create_config_from_profile
from dnscm.utils import load_config_file, merge_dicts, parse_float_grid


class TestExperimentConfig:
    def test_defaults(self):
        config = ExperimentConfig()
        assert config.seed == 0
        assert config.budget == 2
        assert config.bandwidth == "auto"
        assert config.sigma_u_values == [0.0, 0.5, 5.0]

    def test_grids_become_floats(self):
        config = ExperimentConfig(delta_values=[1, 5])
        assert config.delta_values == [1.0, 5.0]
        assert all(isinstance(v, float) for v in config.delta_values)

    @pytest.mark.parametrize(
        "changes, message",
        [
            ({"seed": -1}, "seed must be non-negative"),
            ({"threads": 0}, "threads must be at least 1"),
            ({"n": 0}, "n must be at least 1"),
            ({"sigma_u_values": []}, "non-empty list"),
            ({"sigma_mu_values": [-0.5]}, "must all be >= 0"),
            ({"noise_scale": "precision"}, "Unknown noise_scale"),
            ({"k": 0}, "k must be at least 1"),
            ({"grid_points": 1}, "grid_points must be at least 2"),
            ({"bandwidth": "scott"}, "Unknown bandwidth"),
            ({"bandwidth": 0.0}, "bandwidth must be positive"),
            ({"budget": -1}, "budget must be >= 0"),
            ({"welfare": "utilitarian"}, "Unknown welfare"),
            ({"mode": "annealing"}, "Unknown mode"),
            ({"log_level": "chatty"}, "Unknown log_level"),
        ],
    )
    def test_validation(self, changes, message):
        with pytest.raises(ValueError, match=message):
            ExperimentConfig(**changes)

    def test_negative_delta_allowed(self):
        assert ExperimentConfig(delta_values=[-1.0]).delta_values == [-1.0]

    def test_to_dict(self):
        assert ExperimentConfig().to_dict()["noise_scale"] == "sd"


class TestProfiles:
    def test_every_profile_builds(self):
        for name in PROFILES:
            assert isinstance(create_config_from_profile(name), ExperimentConfig)
            assert name in PROFILE_DESCRIPTIONS

    def test_sweep_grid(self):
        config = create_config_from_profile("sweep-kl")
        assert len(config.sigma_u_values) == 51
        assert config.sigma_u_values[1] == 0.1
        assert config.sigma_u_values[-1] == 5.0

    def test_delta5_grid(self):
        config = create_config_from_profile("sweep-kl-delta5")
        assert config.delta_values == [5.0]
        assert config.sigma_u_values[-1] == 12.0

    def test_variance_table(self):
        config = create_config_from_profile("variance-table")
        assert (config.sigma_u_values, config.sigma_mu_values, config.repetitions) == ([5.0], [5.0], 50)
        assert config.noise_scale == "variance"

    def test_overrides(self):
        config = create_config_from_profile("densities", {"n": 50, "seed": 9})
        assert (config.n, config.seed) == (50, 9)

    def test_profile_copies_are_independent(self):
        get_profile_config("densities")["sigma_u_values"].append(99.0)
        assert 99.0 not in PROFILES["densities"]["sigma_u_values"]

    def test_unknown_profile(self):
        with pytest.raises(ValueError, match="Available profiles"):
            create_config_from_profile("fig-9")

    def test_unknown_override_key(self):
        with pytest.raises(ValueError, match="Unknown configuration keys: colour"):
            create_config_from_profile("densities", {"colour": "red"})


class TestConfigFiles:
    def test_json(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"n": 10, "delta_values": [2]}), encoding="utf-8")
        assert load_config_file(str(path)) == {"n": 10, "delta_values": [2]}

    def test_yaml(self, tmp_path):
        pytest.importorskip("yaml")
        path = tmp_path / "run.yaml"
        path.write_text("n: 10\nsigma_u_values: [0, 1]\n", encoding="utf-8")
        assert load_config_file(str(path)) == {"n": 10, "sigma_u_values": [0, 1]}

    def test_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config_file(str(tmp_path / "absent.json"))

    def test_not_a_mapping(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ValueError, match="mapping"):
            load_config_file(str(path))

    def test_merge_precedence(self):
        assert merge_dicts({"n": 1, "k": 3}, {"n": 2}, {"k": 4}) == {"n": 2, "k": 4}


class TestParseFloatGrid:
    def test_list(self):
        assert parse_float_grid("0, 0.5,5") == [0.0, 0.5, 5.0]

    def test_inclusive_range(self):
        grid = parse_float_grid("0:5:0.1")
        assert len(grid) == 51
        assert grid[3] == 0.3
        assert grid[-1] == 5.0

    @pytest.mark.parametrize("text", ["", "0:1", "1:0:0.5", "0:1:0", "a,b"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_float_grid(text)


class TestManifest:
    def test_written_next_to_outputs(self, tmp_path):
        config = ExperimentConfig(out_dir=str(tmp_path / "out"), seed=3)
        output = tmp_path / "out" / "table.csv"
        path = generate_manifest("sweep-kl", config, [str(output)], {"grid_points": 4})
        assert path.endswith("sweep-kl.manifest.json")

        manifest = read_manifest(path)
        assert manifest["command"] == "sweep-kl"
        assert manifest["config"]["seed"] == 3
        assert manifest["summary"] == {"grid_points": 4}
        assert manifest["output_files"] == [str(output.absolute())]
        assert manifest["timestamp"].endswith("Z")
        assert "dnscm_version" in manifest
