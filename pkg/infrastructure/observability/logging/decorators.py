"""
Logging decorators for service and repository methods.

Both decorators time the wrapped call. ``log_operation`` writes plain
start/end/failure records; ``log_computation`` emits one computation event
carrying the coefficient ring and ranks of the result.
"""

import logging
import time
from functools import wraps
from typing import Any, Callable

from infrastructure.observability.logging.loki_handler import (
    get_structured_logger,
    log_computation_event,
)


def _timed(func: Callable, on_success: Callable, on_failure: Callable) -> Callable:
    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        start = time.perf_counter()
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            on_failure(e, round(time.perf_counter() - start, 4))
            raise
        on_success(result, round(time.perf_counter() - start, 4))
        return result

    return wrapper


def log_operation(operation_type: str, log_level: str = "DEBUG"):
    """
    Log the outcome and duration of a call.

    Example:
        >>> @log_operation(operation_type='diagram_load')
        ... def load(self, path: Path) -> MultisectionDiagram:
        ...     ...
    """
    level = getattr(logging, log_level.upper())

    def decorator(func: Callable) -> Callable:
        logger = get_structured_logger(func.__module__)
        context = {"operation_type": operation_type, "function": func.__qualname__}

        def on_success(_: Any, duration: float) -> None:
            logger.log(
                level,
                f"Completed {operation_type}: {func.__qualname__} in {duration}s",
                extra={**context, "status": "success", "duration_seconds": duration},
            )

        def on_failure(e: Exception, duration: float) -> None:
            logger.log(
                level,
                f"Failed {operation_type}: {func.__qualname__} - {type(e).__name__}: {e}",
                extra={**context, "status": "failure", "duration_seconds": duration, "error_type": type(e).__name__},
            )

        return _timed(func, on_success, on_failure)

    return decorator


def _result_summary(result: Any) -> tuple[Any, Any]:
    """Best-effort (ring, ranks) extraction from complexes and reports."""
    ring = getattr(result, "ring", None)
    ranks = getattr(result, "ranks", None)
    if callable(ranks):
        ranks = None
    if isinstance(ranks, dict):
        ranks = list(ranks.values())
    return ring, ranks


def log_computation(computation: str):
    """
    Emit a computation event with the ring and output ranks of the result.

    Example:
        >>> @log_computation(computation='torsion')
        ... def torsion(self, complex_: ChainComplex) -> TorsionValue:
        ...     ...
    """

    def decorator(func: Callable) -> Callable:
        logger = get_structured_logger(func.__module__)

        def on_success(result: Any, duration: float) -> None:
            ring, ranks = _result_summary(result)
            log_computation_event(
                logger,
                computation,
                "success",
                diagram=getattr(result, "name", None),
                ring=ring,
                ranks=ranks,
                duration_seconds=duration,
            )

        def on_failure(e: Exception, duration: float) -> None:
            log_computation_event(
                logger, computation, "failure", duration_seconds=duration, error_message=f"{type(e).__name__}: {e}"
            )

        return _timed(func, on_success, on_failure)

    return decorator
