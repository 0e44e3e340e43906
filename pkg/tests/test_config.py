"""Tests for user settings, validated configuration and logging setup."""

import json

import pytest
from pydantic import ValidationError

from dh_pencil.core.config_validator import AppConfig, ConfigValidator, ToleranceConfig
from dh_pencil.core.logging_config import Environment, LoggingConfig
from dh_pencil.core.settings import Settings, SettingsManager, get_settings, set_settings
from dh_pencil.linalg.tolerance import Tolerance


class TestSettings:
    def test_defaults(self):
        settings = Settings()
        assert settings.tolerance_object() == Tolerance()
        assert settings.output_format == "text"
        assert settings.batch_workers == 4

    def test_round_trip(self, tmp_path):
        path = tmp_path / "settings.json"
        settings = Settings(tolerance={"relative": 1e-8}, output_format="json", default_seed=7)
        settings.save(path)
        loaded = Settings.load(path)
        assert loaded.output_format == "json"
        assert loaded.default_seed == 7
        assert loaded.tolerance["relative"] == 1e-8

    def test_partial_tolerance_keeps_defaults(self):
        settings = Settings.from_dict({"tolerance": {"zero": 1e-6}, "unknown": 1})
        tol = settings.tolerance_object()
        assert tol.zero == 1e-6
        assert tol.relative == Tolerance().relative

    def test_missing_file(self, tmp_path):
        assert Settings.load(tmp_path / "absent.json") == Settings()

    def test_broken_file(self, tmp_path):
        path = tmp_path / "settings.json"
        path.write_text("{not json")
        assert Settings.load(path) == Settings()

    def test_global_instance(self):
        previous = get_settings()
        try:
            custom = Settings(default_seed=3)
            set_settings(custom)
            assert get_settings() is custom
        finally:
            set_settings(previous)


class TestSettingsManager:
    def test_update_persists(self, tmp_path):
        path = tmp_path / "conf" / "settings.json"
        manager = SettingsManager(path)
        manager.update_settings(batch_workers=2, not_a_setting=True)
        assert manager.get_settings().batch_workers == 2
        data = json.loads(path.read_text())
        assert data["batch_workers"] == 2
        assert "not_a_setting" not in data
        assert SettingsManager(path).get_settings().batch_workers == 2


class TestConfigValidator:
    def test_defaults_without_file(self, tmp_path):
        config = ConfigValidator(tmp_path / "config.json").load_config()
        assert config == AppConfig()
        assert config.tolerance.to_tolerance() == Tolerance()

    def test_loads_valid_file(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"tolerance": {"relative": 1e-9}, "output": {"format": "JSON"}}))
        config = ConfigValidator(path).load_config()
        assert config.tolerance.relative == 1e-9
        assert config.output.format == "json"

    def test_invalid_values_fall_back(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"batch": {"max_workers": 0}}))
        validator = ConfigValidator(path)
        assert validator.load_config() == AppConfig()
        assert validator.get_validation_errors()

    def test_invalid_json_falls_back(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text("{")
        assert ConfigValidator(path).load_config() == AppConfig()

    def test_update_setting(self, tmp_path):
        path = tmp_path / "config.json"
        validator = ConfigValidator(path)
        validator.load_config()
        assert validator.update_setting("batch.max_workers", 8)
        assert json.loads(path.read_text())["batch"]["max_workers"] == 8
        assert not validator.update_setting("batch.max_workers", 100)
        assert not validator.update_setting("batch.unknown", 1)
        assert not validator.update_setting("nothing.here", 1)
        assert validator.config is not None
        assert validator.config.batch.max_workers == 8

    def test_update_without_config(self, tmp_path):
        assert not ConfigValidator(tmp_path / "config.json").update_setting("debug_mode", True)

    @pytest.mark.parametrize("value", [float("nan"), float("inf"), -1.0])
    def test_tolerance_rejects(self, value):
        with pytest.raises(ValidationError):
            ToleranceConfig(relative=value)

    def test_output_format(self):
        with pytest.raises(ValidationError):
            AppConfig(output={"format": "xml"})


class TestLoggingConfig:
    def test_test_environment_skips_files(self, tmp_path):
        config = LoggingConfig(log_dir=tmp_path / "logs")
        assert config.environment is Environment.TEST
        assert not config.log_to_file
        assert not (tmp_path / "logs").exists()

    def test_default_log_dir(self):
        config = LoggingConfig(log_to_file=False)
        assert config.log_dir.parts[-2:] == ("DhPencil", "logs")
