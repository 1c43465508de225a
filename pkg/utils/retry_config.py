# =============================================================================
# FILE: utils/retry_config.py
# PURPOSE:
#   Backoff-and-retry wrapper for result-file output (network shares and
#   synced folders fail transiently), plus the mapping from library
#   exceptions to the one-line messages the CLI prints.
# =============================================================================

import functools
import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Type, TypeVar

from squeezing.errors import (
    InvalidArgumentError,
    ResourceLimitError,
    SearchWindowExhaustedError,
    SqueezingError,
    SymmetryViolationError,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

# =============================================================================
# RETRY CONFIGURATION
# =============================================================================

@dataclass(frozen=True)
class RetryConfig:
    """Backoff schedule for a retried operation.

    Attributes:
        max_attempts: Calls made before giving up
        initial_delay: Sleep in seconds after the first failure
        max_delay: Cap on any single sleep
        exponential_base: Growth factor between sleeps
        timeout: Wall-clock budget in seconds across attempts, None for no limit
        retryable_exceptions: Exception types that trigger another attempt
    """

    max_attempts: int = 3
    initial_delay: float = 0.5
    max_delay: float = 5.0
    exponential_base: float = 2.0
    timeout: Optional[float] = 30.0
    retryable_exceptions: Tuple[Type[BaseException], ...] = (OSError,)

    def delay_after(self, failed_attempt: int) -> float:
        """Sleep before the attempt following ``failed_attempt`` (0-based)."""
        return min(self.initial_delay * self.exponential_base ** failed_attempt, self.max_delay)


# CSV, JSON and XLSX writers
FILE_RETRY_CONFIG = RetryConfig()


class RetryExhaustedError(SqueezingError):
    """Raised when every attempt failed or the timeout ran out."""


# =============================================================================
# RETRY DECORATOR
# =============================================================================

def with_retry(config: Optional[RetryConfig] = None) -> Callable[[Callable[..., T]], Callable[..., T]]:
    """
    Retry the wrapped callable on ``config.retryable_exceptions``.

    Other exceptions pass straight through. Usage:

        @with_retry(FILE_RETRY_CONFIG)
        def write_csv(path, rows):
            ...
    """
    config = config or FILE_RETRY_CONFIG

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        name = func.__name__

        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> T:
            deadline = None if config.timeout is None else time.monotonic() + config.timeout
            last_error: Optional[BaseException] = None

            for attempt in range(config.max_attempts):
                if attempt and deadline is not None and time.monotonic() > deadline:
                    message = f"'{name}' ran past its {config.timeout}s timeout after {attempt} attempts"
                    logger.error(message)
                    raise RetryExhaustedError(message) from last_error
                try:
                    result = func(*args, **kwargs)
                except config.retryable_exceptions as e:
                    last_error = e
                    logger.warning("'%s' attempt %d/%d failed: %s: %s",
                                   name, attempt + 1, config.max_attempts, type(e).__name__, e)
                    if attempt + 1 < config.max_attempts:
                        time.sleep(config.delay_after(attempt))
                    continue
                if attempt:
                    logger.info("'%s' succeeded on attempt %d", name, attempt + 1)
                return result

            message = (f"'{name}' failed {config.max_attempts} times; "
                       f"last error {type(last_error).__name__}: {last_error}")
            logger.error(message)
            raise RetryExhaustedError(message) from last_error

        return wrapper
    return decorator


# =============================================================================
# USER-FACING MESSAGES
# =============================================================================

# Checked in order; subclasses before their bases.
_ERROR_MESSAGES: Tuple[Tuple[Type[BaseException], str], ...] = (
    (InvalidArgumentError, "Invalid argument"),
    (ResourceLimitError, "Problem size exceeds the configured limit"),
    (SymmetryViolationError, "Parity symmetry lost during evolution"),
    (SearchWindowExhaustedError, "No optimum inside the search window"),
    (RetryExhaustedError, "Could not write the output file"),
    (PermissionError, "Permission denied while writing output"),
    (OSError, "File system error"),
)


def get_user_friendly_error(exception: BaseException) -> str:
    """Return ``"<failure class>: <detail>"`` for the CLI error line."""
    for exc_type, message in _ERROR_MESSAGES:
        if isinstance(exception, exc_type):
            return f"{message}: {exception}"
    return f"An unexpected error occurred: {exception}"
