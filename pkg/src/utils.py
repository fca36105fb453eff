import os
import sys
import json
import time
from fractions import Fraction
from typing import Any, Callable, Dict, Optional, TypeVar

from loguru import logger

from .errors import PrecisionExhausted, exit_code_for

T = TypeVar("T")

_LOGGING_CONFIGURED = False


def setup_logging(level: Optional[str] = None, force: bool = False):
    global _LOGGING_CONFIGURED
    if _LOGGING_CONFIGURED and not force:
        return logger

    level = (level or os.getenv("ORRPI_LOG_LEVEL", "INFO")).upper()
    logger.remove()
    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {name}:{function} - {message}",
    )
    _LOGGING_CONFIGURED = True
    return logger


def parse_rational(text: Any) -> Fraction:
    """Parse "p/q", "p" or an int into an exact Fraction; floats are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"Rationals must be given exactly, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Cannot parse rational from {type(text).__name__}")
    cleaned = text.strip().replace(" ", "")
    if not cleaned or "." in cleaned or "e" in cleaned.lower():
        raise ValueError(f"Malformed rational {text!r}")
    try:
        return Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Malformed rational {text!r}: {e}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def write_file(file_path: str, content: str) -> None:
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(content)


def dump_json(data: Any, indent: int = 2) -> str:
    return json.dumps(data, ensure_ascii=False, indent=indent) + "\n"


def monitor_performance(func_name: Optional[str] = None):
    def decorator(func):
        name = func_name or func.__name__

        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                execution_time = time.perf_counter() - start_time
                logger.debug(f"{name} took {execution_time:.3f}s")

        wrapper.__name__ = func.__name__
        wrapper.__doc__ = func.__doc__
        wrapper.__wrapped__ = func
        return wrapper
    return decorator


class RetryConfig:
    def __init__(self, max_retries: int = 3, backoff: int = 2):
        self.max_retries = max_retries
        self.backoff = backoff


def precision_retry(func: Callable[[Any], T], ctx, retry_config: Optional[RetryConfig] = None) -> T:
    """
    Run func(ctx), multiplying the guard digits on PrecisionExhausted.

    Args:
        func: computation taking a PrecisionContext
        ctx: starting PrecisionContext
        retry_config: number of retries and guard-digit growth factor

    Returns:
        The first successful result.
    """
    if retry_config is None:
        retry_config = RetryConfig()

    last_exception: Optional[PrecisionExhausted] = None
    current = ctx
    for attempt in range(retry_config.max_retries + 1):
        try:
            return func(current)
        except PrecisionExhausted as e:
            last_exception = e
            if attempt < retry_config.max_retries:
                current = current.with_guard(current.guard_digits * retry_config.backoff)
                logger.warning(
                    f"Attempt {attempt + 1} exhausted precision: {e}, retrying with {current.guard_digits} guard digits"
                )
            else:
                logger.error(f"Still exhausted after {retry_config.max_retries} retries: {e}")

    raise last_exception


def record_error(state: Dict[str, Any], node: str, error: Exception, action_taken: str = "abort") -> Dict[str, Any]:
    """Append a pipeline error record and mark the state failed."""
    state.setdefault("errors", []).append({
        "node": node,
        "type": type(error).__name__,
        "message": str(error),
        "exit_code": exit_code_for(error),
        "action_taken": action_taken,
    })
    if action_taken == "abort":
        state["status"] = "failed"
        state["workflow_status"] = "failed"
    return state
