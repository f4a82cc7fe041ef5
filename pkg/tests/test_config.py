"""
Tests for settings loading.
"""
import pytest
from pydantic import ValidationError

from grouplens.config import Settings, get_settings
from grouplens.core.groups import make_symmetric
from grouplens.errors import SizeLimitError


def test_defaults():
    """Test the documented defaults."""
    settings = Settings()
    assert settings.ELEMENT_CAP == 5040
    assert settings.SYMMETRIC_DEGREE_CAP == 6
    assert settings.SEED == 0
    assert settings.LOG_LEVEL == "WARNING"


def test_environment_overrides(monkeypatch):
    """Test GROUPLENS_ prefixed variables override defaults."""
    monkeypatch.setenv("GROUPLENS_SAMPLE_COUNT", "12")
    monkeypatch.setenv("GROUPLENS_LOG_LEVEL", "debug")
    settings = get_settings()
    assert settings.SAMPLE_COUNT == 12
    assert settings.LOG_LEVEL == "DEBUG"


def test_unknown_log_level_rejected():
    with pytest.raises(ValidationError):
        Settings(LOG_LEVEL="chatty")


def test_caps_reach_constructors(monkeypatch):
    """The symmetric degree cap is read from settings at call time."""
    monkeypatch.setenv("GROUPLENS_SYMMETRIC_DEGREE_CAP", "3")
    with pytest.raises(SizeLimitError):
        make_symmetric(4)
    assert make_symmetric(4, degree_cap=4).order == 24
