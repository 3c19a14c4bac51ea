"""
Unit тесты для настроек и логирования.
"""

import logging

import pytest
from pythonjsonlogger import jsonlogger

from config.logging_config import configure_logging
from config.settings import TRUNCATION_ENV, load_settings
from models.exceptions import InvalidParameters


@pytest.fixture(autouse=True)
def no_env_truncation(monkeypatch):
    monkeypatch.delenv(TRUNCATION_ENV, raising=False)


class TestLoadSettings:
    """Приоритет источников и проверка значений"""

    def test_defaults_from_yaml(self):
        settings = load_settings()
        assert settings.truncation == 8
        assert settings.log_level == 'INFO'
        assert settings.sweep.p_values == [2, 3, 4]
        assert settings.random_tables.count == 200

    def test_env_overrides_yaml(self, monkeypatch):
        monkeypatch.setenv(TRUNCATION_ENV, '5')
        assert load_settings().truncation == 5

    def test_argument_overrides_env(self, monkeypatch):
        monkeypatch.setenv(TRUNCATION_ENV, '5')
        assert load_settings(truncation=3).truncation == 3

    def test_custom_file(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("truncation: 6\nlog_level: debug\nsweep:\n  p_values: [2]\n")
        settings = load_settings(path)
        assert settings.truncation == 6
        assert settings.log_level == 'DEBUG'
        assert settings.sweep.p_values == [2]
        assert settings.sweep.q_values == [2, 3, 4]

    def test_empty_file(self, tmp_path):
        path = tmp_path / "settings.yaml"
        path.write_text("")
        assert load_settings(path).truncation == 8

    @pytest.mark.parametrize("env_value", ['abc', '0', '-2'])
    def test_invalid_env(self, monkeypatch, env_value):
        monkeypatch.setenv(TRUNCATION_ENV, env_value)
        with pytest.raises(InvalidParameters):
            load_settings()

    @pytest.mark.parametrize("content", [
        "truncation: 0\n",
        "log_level: LOUD\n",
        "unknown_key: 1\n",
        "sweep:\n  gamma_bound: 0\n",
    ])
    def test_invalid_file(self, tmp_path, content):
        path = tmp_path / "settings.yaml"
        path.write_text(content)
        with pytest.raises(InvalidParameters):
            load_settings(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_settings(tmp_path / "missing.yaml")


class TestConfigureLogging:
    """Один обработчик на корневом логгере"""

    def test_text_format(self):
        root = configure_logging('warning')
        assert root.level == logging.WARNING
        assert len(root.handlers) == 1
        assert not isinstance(root.handlers[0].formatter, jsonlogger.JsonFormatter)

    def test_json_format(self):
        root = configure_logging('DEBUG', json_format=True)
        assert root.level == logging.DEBUG
        assert isinstance(root.handlers[0].formatter, jsonlogger.JsonFormatter)

    def test_repeated_calls_do_not_stack(self):
        configure_logging()
        root = configure_logging()
        assert len(root.handlers) == 1
