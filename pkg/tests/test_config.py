import pytest

from app.config import Config


def test_defaults_validate(monkeypatch):
    monkeypatch.setattr(Config, "LOG_LEVEL", "INFO")
    monkeypatch.setattr(Config, "WORKERS", 1)
    assert Config.validate()


def test_bad_log_level_and_workers_are_both_reported(monkeypatch):
    monkeypatch.setattr(Config, "LOG_LEVEL", "LOUD")
    monkeypatch.setattr(Config, "WORKERS", 0)

    with pytest.raises(ValueError) as excinfo:
        Config.validate()

    message = str(excinfo.value)
    assert "ZALM_LOG_LEVEL" in message
    assert "ZALM_WORKERS must be at least 1" in message


def test_lowercase_log_level_is_accepted(monkeypatch):
    monkeypatch.setattr(Config, "LOG_LEVEL", "debug")
    assert Config.validate()
