import sys

import pytest
from loguru import logger

from src.settings import get_settings


@pytest.fixture
def warnings_seen():
    messages = []
    handler = logger.add(lambda message: messages.append(str(message)), level="WARNING")
    yield messages
    logger.remove(handler)


def test_environment_overrides(monkeypatch, tmp_path):
    monkeypatch.setenv("ORRPI_GUARD_DIGITS", "45")
    monkeypatch.setenv("ORRPI_CATALOG", "elsewhere.json")
    monkeypatch.setenv("ORRPI_LOG_LEVEL", "debug")
    settings = get_settings(str(tmp_path / "absent.env"))
    assert settings.guard_digits == 45
    assert settings.catalog_path == "elsewhere.json"
    assert settings.log_level == "DEBUG"


@pytest.mark.parametrize("raw", ["ten", "0", "-3"])
def test_bad_integer_setting(monkeypatch, tmp_path, raw):
    monkeypatch.setenv("ORRPI_WORKERS", raw)
    with pytest.raises(ValueError, match="ORRPI_WORKERS"):
        get_settings(str(tmp_path / "absent.env"))


def test_missing_dotenv_is_logged(monkeypatch, warnings_seen):
    monkeypatch.setitem(sys.modules, "dotenv", None)
    monkeypatch.setenv("ORRPI_PROVE_DIGITS", "77")
    settings = get_settings()
    assert settings.prove_digits == 77
    assert any("python-dotenv unavailable" in m for m in warnings_seen)
