"""
Loki logging handler and structured logging utilities.

Computation and validation events carry their context (diagram name,
coefficient ring, ranks, durations) in ``extra``; Loki labels go in the
``tags`` entry that python-logging-loki reads.

Helpers never raise. A failure to log is reported on an internal logger.
"""

import logging
import re
import socket
from datetime import datetime, timezone
from enum import Enum
from multiprocessing import Queue
from typing import Any, MutableMapping, Sequence

import logging_loki

# Module logger for internal errors
_internal_logger = logging.getLogger(__name__)

_PUSH_PATH = "/loki/api/v1/push"
_LABEL_NAME = re.compile(r"[^a-zA-Z0-9_]")

StructuredLogger = logging.Logger | logging.LoggerAdapter


def _label_name(key: str) -> str:
    """Loki label names are [a-zA-Z_][a-zA-Z0-9_]*."""
    name = _LABEL_NAME.sub("_", key.strip())
    return name if name and not name[0].isdigit() else f"_{name}"


def setup_loki_handler(
    loki_url: str,
    labels: dict[str, str],
    log_level: str = "INFO",
) -> logging.Handler:
    """
    Build a queued Loki handler so that a slow or absent Loki never delays a computation.

    Args:
        loki_url: Loki base URL or full push endpoint
        labels: Base labels for every record, e.g. {"service": "multisection-toolkit"}
        log_level: Minimum level shipped to Loki

    Returns:
        logging.Handler: A LokiQueueHandler to add to the root logger
    """
    if not loki_url.endswith(_PUSH_PATH):
        loki_url = loki_url.rstrip("/") + _PUSH_PATH

    tags = {_label_name(k): v for k, v in labels.items()}
    tags.setdefault("hostname", socket.gethostname())

    handler = logging_loki.LokiQueueHandler(Queue(-1), url=loki_url, tags=tags, version="1")
    handler.setLevel(log_level.upper())
    return handler


class _LabelledAdapter(logging.LoggerAdapter):
    """Merges fixed labels into the ``tags`` of every record's ``extra``."""

    def process(self, msg: Any, kwargs: MutableMapping[str, Any]) -> tuple[Any, MutableMapping[str, Any]]:
        extra = dict(kwargs.get("extra") or {})
        extra["tags"] = {**self.extra, **extra.get("tags", {})}
        kwargs["extra"] = extra
        return msg, kwargs


def get_structured_logger(name: str, extra_labels: dict[str, str] | None = None) -> StructuredLogger:
    """
    Logger for structured events; with ``extra_labels`` every record carries them as Loki tags.

    Args:
        name: Logger name (typically __name__ of the calling module)
        extra_labels: Labels added to each record, e.g. {"component": "monodromy"}
    """
    logger = logging.getLogger(name)
    if not extra_labels:
        return logger
    return _LabelledAdapter(logger, {_label_name(k): str(v) for k, v in extra_labels.items()})


def enrich_log_context(
    base_context: dict[str, Any],
    **kwargs: Any,
) -> dict[str, Any]:
    """
    Enrich log context with additional metadata, handling type conversions.

    Note:
        - Enum members are logged by value
        - sequences of numbers become comma-joined strings
        - None values are preserved
        - int, float and bool are kept as they are, anything else is str()-ed
    """
    enriched = {**base_context}

    for key, value in kwargs.items():
        if value is None:
            enriched[key] = None
        elif isinstance(value, Enum):
            enriched[key] = value.value
        elif isinstance(value, (int, float, bool)):
            enriched[key] = value
        elif isinstance(value, (list, tuple)):
            enriched[key] = ",".join(str(v) for v in value)
        elif isinstance(value, datetime):
            enriched[key] = value.isoformat()
        else:
            enriched[key] = str(value)

    return enriched


# ============================================================================
# Domain-specific structured logging helper functions
# ============================================================================


def log_computation_event(
    logger: StructuredLogger,
    computation: str,
    status: str,
    diagram: str | None = None,
    ring: Any = None,
    ranks: Sequence[int] | None = None,
    duration_seconds: float | None = None,
    error_message: str | None = None,
) -> None:
    """
    Log a finished computation (complex build, homology, torsion, monodromy).

    Args:
        logger: Logger instance to use
        computation: Computation name ('absolute_complex', 'homology', 'torsion', ...)
        status: 'success' or 'failure'
        diagram: Diagram name if known
        ring: Coefficient ring tag
        ranks: Module ranks or Betti numbers produced
        duration_seconds: Time taken
        error_message: Failure description
    """
    try:
        message = f"Computation {status}: {computation}"

        context = enrich_log_context(
            {
                "event_type": "computation",
                "computation": computation,
                "status": status,
                "timestamp": datetime.now(timezone.utc).isoformat(),
            },
            diagram=diagram,
            ring=ring,
            ranks=ranks,
            duration_seconds=duration_seconds,
            error_message=error_message,
        )

        if status == "success":
            logger.info(message, extra=context)
        else:
            logger.warning(message, extra=context)

    except Exception as e:
        _internal_logger.error(f"Failed to log computation event: {e}")


def log_validation_event(
    logger: StructuredLogger,
    diagram: str,
    valid: bool,
    reasons: Sequence[str] = (),
    page_genus: int | None = None,
    page_components: int | None = None,
) -> None:
    """
    Log the outcome of diagram validation; invalid diagrams log at WARNING with their reasons.
    """
    try:
        context = enrich_log_context(
            {
                "event_type": "validation",
                "valid": valid,
                "timestamp": datetime.now(timezone.utc).isoformat(),
            },
            diagram=diagram,
            reasons="; ".join(reasons) if reasons else None,
            page_genus=page_genus,
            page_components=page_components,
        )

        if valid:
            logger.info(f"Diagram {diagram} is homologically valid", extra=context)
        else:
            logger.warning(f"Diagram {diagram} is invalid: {'; '.join(reasons)}", extra=context)

    except Exception as e:
        _internal_logger.error(f"Failed to log validation event: {e}")
