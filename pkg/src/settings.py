import os
from dataclasses import dataclass
from typing import Optional

from .utils import setup_logging

logger = setup_logging()


@dataclass(frozen=True)
class Settings:
    verify_digits: int = 120
    prove_digits: int = 200
    discover_digits: int = 300
    guard_digits: int = 30
    workers: int = 1
    catalog_path: str = "catalog.json"
    log_level: str = "INFO"
    mcp_transport: str = "stdio"
    mcp_port: int = 8000


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}")
    if value <= 0:
        raise ValueError(f"Environment variable {name} must be positive, got {value}")
    return value


def get_settings(env_file: Optional[str] = None) -> Settings:
    try:
        from dotenv import load_dotenv
        load_dotenv(env_file)
    except ImportError as e:
        logger.warning(f"python-dotenv unavailable, reading the process environment only: {e}")

    return Settings(
        verify_digits=_int_env("ORRPI_VERIFY_DIGITS", 120),
        prove_digits=_int_env("ORRPI_PROVE_DIGITS", 200),
        discover_digits=_int_env("ORRPI_DISCOVER_DIGITS", 300),
        guard_digits=_int_env("ORRPI_GUARD_DIGITS", 30),
        workers=_int_env("ORRPI_WORKERS", os.cpu_count() or 1),
        catalog_path=os.getenv("ORRPI_CATALOG", "catalog.json"),
        log_level=os.getenv("ORRPI_LOG_LEVEL", "INFO").upper(),
        mcp_transport=os.getenv("ORRPI_MCP_TRANSPORT", "stdio"),
        mcp_port=_int_env("ORRPI_MCP_PORT", 8000),
    )
