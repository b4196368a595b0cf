# -*- coding: utf-8 -*-
"""
Tests for settings and per-run config validation.
"""

import sys
from pathlib import Path

import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


@pytest.fixture
def fresh_settings(monkeypatch):
    """Clear the settings cache around a test that changes the environment."""
    from src.core.config import get_settings

    monkeypatch.delenv("WHRF_OUTPUT_DIR", raising=False)
    get_settings.cache_clear()
    yield monkeypatch
    get_settings.cache_clear()


class TestSettings:
    """Tests for the cached settings loader."""

    def test_yaml_and_env_overrides(self, fresh_settings, tmp_path):
        """Test that environment variables win over settings.yaml."""
        from src.core.config import get_settings, save_yaml_config

        path = tmp_path / "settings.yaml"
        save_yaml_config({"runtime": {"output_dir": "from-yaml", "threads": 2}}, str(path))
        fresh_settings.setenv("WHRF_CONFIG_PATH", str(path))
        fresh_settings.setenv("WHRF_THREADS", "6")
        fresh_settings.setenv("WHRF_LOG_LEVEL", "DEBUG")

        settings = get_settings()
        assert settings.runtime.output_dir == "from-yaml"
        assert settings.runtime.threads == 6
        assert settings.logging.level == "DEBUG"
        assert settings.training.learning_rate == 0.05

    def test_missing_file_gives_defaults(self, fresh_settings, tmp_path):
        """Test the defaults when no settings file exists."""
        from src.core.config import get_settings

        fresh_settings.setenv("WHRF_CONFIG_PATH", str(tmp_path / "absent.yaml"))
        fresh_settings.delenv("WHRF_THREADS", raising=False)
        settings = get_settings()
        assert settings.runtime.threads == 1
        assert settings.runtime.output_dir == "runs"

    def test_shipped_settings_parse(self):
        """Test that config/settings.yaml validates."""
        from src.core.config import Settings, load_yaml_config

        settings = Settings(**load_yaml_config(str(project_root / "config" / "settings.yaml")))
        assert settings.training.gradient_mode.value == "parameter-shift"


class TestRunConfigs:
    """Tests for experiment, predict, crt and spectrum configs."""

    def test_shipped_experiment_configs(self):
        """Test that every shipped run config validates against its model."""
        from src.core.config import CrtConfig, ExperimentConfig, SpectrumConfig, load_run_config

        directory = project_root / "config" / "experiments"
        models = {"crt.yaml": CrtConfig, "spectrum.yaml": SpectrumConfig}
        for path in sorted(directory.glob("*.yaml")):
            load_run_config(str(path), models.get(path.name, ExperimentConfig))

    def test_family_fields(self):
        """Test that family-specific fields are enforced."""
        from src.core.config import ExperimentConfig, validate_run_config
        from src.core.exceptions import ConfigurationError

        with pytest.raises(ConfigurationError):
            validate_run_config({"family": "random"}, ExperimentConfig)
        with pytest.raises(ConfigurationError):
            validate_run_config({"family": "hva", "layers": 2, "p": 6}, ExperimentConfig)
        with pytest.raises(ConfigurationError):
            validate_run_config({"family": "random", "p": 4, "f": 2}, ExperimentConfig)
        with pytest.raises(ConfigurationError):
            validate_run_config({"family": "random", "p": 4, "paired_control": True}, ExperimentConfig)
        hva = validate_run_config({"family": "hva", "layers": 2, "f": 3}, ExperimentConfig)
        assert hva.parameter_count == 18
        assert not hva.paired_control

    def test_error_names_the_key(self):
        """Test that the ConfigurationError points at the offending key."""
        from src.core.config import ExperimentConfig, validate_run_config
        from src.core.exceptions import ConfigurationError

        with pytest.raises(ConfigurationError) as info:
            validate_run_config({"hamiltonian": {"n": 5}, "p": 3}, ExperimentConfig)
        assert info.value.config_key.startswith("hamiltonian.n")

    def test_unknown_key_rejected(self):
        """Test that typos in a run config are refused."""
        from src.core.config import CrtConfig, validate_run_config
        from src.core.exceptions import ConfigurationError

        with pytest.raises(ConfigurationError):
            validate_run_config({"trails": 10}, CrtConfig)

    def test_predict_sources(self):
        """Test gamma-or-hamiltonian validation and the default q."""
        from src.core.config import PredictConfig, validate_run_config
        from src.core.exceptions import ConfigurationError

        with pytest.raises(ConfigurationError):
            validate_run_config({"q": 10}, PredictConfig)
        with pytest.raises(ConfigurationError):
            validate_run_config({"gamma": 0.1}, PredictConfig)
        cfg = validate_run_config({"hamiltonian": {"n": 4}, "p": 5, "r": 2}, PredictConfig)
        assert cfg.q == 10

    def test_crt_grid(self):
        """Test that an empty energy window or k >= p is refused."""
        from src.core.config import CrtConfig, validate_run_config
        from src.core.exceptions import ConfigurationError

        with pytest.raises(ConfigurationError):
            validate_run_config({"e_min": 0.5, "e_max": 0.4}, CrtConfig)
        with pytest.raises(ConfigurationError):
            validate_run_config({"k": 4, "p": 4}, CrtConfig)

    def test_malformed_yaml(self, tmp_path):
        """Test that unreadable YAML and missing files raise ConfigurationError."""
        from src.core.config import CrtConfig, load_run_config
        from src.core.exceptions import ConfigurationError

        bad = tmp_path / "bad.yaml"
        bad.write_text("p: [1, 2\n")
        with pytest.raises(ConfigurationError):
            load_run_config(str(bad), CrtConfig)
        with pytest.raises(ConfigurationError):
            load_run_config(str(tmp_path / "missing.yaml"), CrtConfig)
