"""
Tracing decorators for service operations.

Usage:
------
    from infrastructure.observability.tracing.decorators import trace_computation

    @trace_computation(kind='homology')
    def homology_over_z(self, complex_: ChainComplex) -> HomologyReport:
        ...
"""

import time
from functools import wraps
from typing import Any, Callable

from infrastructure.observability.tracing.tempo import enrich_computation_span, get_tracer


def _diagram_name(args: tuple[Any, ...], kwargs: dict[str, Any]) -> str | None:
    """Name of the first diagram or complex argument, if any."""
    for value in (*args, *kwargs.values()):
        if hasattr(value, "collections") or hasattr(value, "maps"):
            return getattr(value, "name", None)
    return None


def _ranks(result: Any) -> Any:
    ranks = getattr(result, "ranks", None)
    if isinstance(ranks, dict):
        return list(ranks.values())
    return None if callable(ranks) else ranks


def trace_computation(kind: str):
    """
    Wrap a service operation in a span named ``msd.<kind>.<function>``.

    The span carries the input diagram (or complex) name and, on success,
    the ring and ranks of the result. Exceptions are recorded by the span
    context manager and re-raised.

    Args:
        kind: Computation family ('complex', 'homology', 'torsion', 'forms', 'monodromy')
    """

    def decorator(func: Callable) -> Callable:
        tracer = get_tracer(func.__module__)
        span_name = f"msd.{kind}.{func.__name__}"

        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            with tracer.start_as_current_span(span_name) as span:
                diagram = _diagram_name(args, kwargs)
                start = time.perf_counter()
                try:
                    result = func(*args, **kwargs)
                except Exception as e:
                    enrich_computation_span(
                        span,
                        kind,
                        "failure",
                        diagram=diagram,
                        failure_reason=type(e).__name__,
                        duration_seconds=round(time.perf_counter() - start, 4),
                    )
                    raise
                enrich_computation_span(
                    span,
                    kind,
                    "success",
                    ring=getattr(result, "ring", None),
                    ranks=_ranks(result),
                    diagram=diagram or getattr(result, "name", None),
                    duration_seconds=round(time.perf_counter() - start, 4),
                )
                return result

        return wrapper

    return decorator
