"""
Grafana Tempo tracing setup and helper functions.

Spans cover the computation pipeline (complex builds, Smith normal forms,
torsion, monodromy). A command-line run is short, so the provider is shut
down at interpreter exit to flush the batch processor.

Usage:
------
    from infrastructure.observability.tracing.tempo import setup_tempo_tracer, get_tracer

    setup_tempo_tracer(endpoint="http://localhost:4317", service_name="multisection-toolkit")

    tracer = get_tracer(__name__)
    with tracer.start_as_current_span("msd.homology.homology_over_z") as span:
        span.set_attribute("computation.ring", "Z")
"""

import atexit
import logging
import socket
from enum import Enum
from typing import Any, Sequence

from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor, ConsoleSpanExporter, SimpleSpanProcessor
from opentelemetry.sdk.trace.sampling import ParentBased, TraceIdRatioBased
from opentelemetry.trace import Span, Status, StatusCode, Tracer

# Internal logger for this module (not sent to Loki to avoid circular dependencies)
_internal_logger = logging.getLogger(__name__)

_provider: TracerProvider | None = None


def setup_tempo_tracer(
    endpoint: str,
    service_name: str,
    sample_rate: float = 1.0,
    enable_console_export: bool = False,
) -> TracerProvider:
    """
    Install the global TracerProvider exporting to Tempo over OTLP gRPC.

    Calling it again returns the provider already installed.

    Args:
        endpoint: Tempo OTLP gRPC endpoint URL (e.g., "http://localhost:4317")
        service_name: Name reported on every span
        sample_rate: Ratio of root spans kept, children follow their parent
        enable_console_export: Also print finished spans to stdout

    Raises:
        Exception: Exporter construction failed (caught by the caller)
    """
    global _provider
    if _provider is not None:
        return _provider

    try:
        provider = TracerProvider(
            resource=Resource.create({"service.name": service_name, "host.name": socket.gethostname()}),
            sampler=ParentBased(TraceIdRatioBased(sample_rate)),
        )
        provider.add_span_processor(BatchSpanProcessor(OTLPSpanExporter(endpoint=endpoint, insecure=True)))
        if enable_console_export:
            provider.add_span_processor(SimpleSpanProcessor(ConsoleSpanExporter()))
        trace.set_tracer_provider(provider)
        atexit.register(provider.shutdown)
    except Exception as e:
        _internal_logger.error(f"Failed to setup Tempo tracer: {e}", exc_info=True)
        raise

    _internal_logger.info(f"Tempo tracer configured: endpoint={endpoint}, sample_rate={sample_rate}")
    _provider = provider
    return provider


def get_tracer(name: str) -> Tracer:
    """
    Get a tracer instance for a module or component.

    Without a configured provider this returns the no-op tracer, so
    instrumented code runs unchanged when tracing is disabled.
    """
    return trace.get_tracer(name)


def _safe_str(value: Any) -> str:
    if value is None:
        return "None"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (list, tuple)):
        return ",".join(_safe_str(v) for v in value)
    return str(value)


def enrich_computation_span(
    span: Span,
    computation: str,
    status: str,
    ring: Any = None,
    ranks: Sequence[int] | None = None,
    diagram: str | None = None,
    failure_reason: str | None = None,
    duration_seconds: float | None = None,
) -> None:
    """
    Enrich span with computation attributes (ring, ranks, diagram).

    Args:
        span: Active span to enrich
        computation: Computation kind (complex, homology, torsion, snf, monodromy)
        status: Operation status (success, failure)
        ring: Coefficient ring tag
        ranks: Ranks or Betti numbers produced by the computation
        diagram: Diagram name
        failure_reason: Exception type name on failure
        duration_seconds: Operation duration
    """
    try:
        span.set_attribute("computation.kind", computation)
        span.set_attribute("computation.status", status)

        if ring is not None:
            span.set_attribute("computation.ring", _safe_str(ring))
        if ranks is not None:
            span.set_attribute("computation.ranks", _safe_str(list(ranks)))
        if diagram is not None:
            span.set_attribute("computation.diagram", diagram)
        if failure_reason is not None:
            span.set_attribute("computation.failure_reason", failure_reason)
        if duration_seconds is not None:
            span.set_attribute("computation.duration_seconds", duration_seconds)

        if status == "success":
            span.set_status(Status(StatusCode.OK))
        else:
            span.set_status(Status(StatusCode.ERROR, description=failure_reason or "Computation failed"))

    except Exception as e:
        _internal_logger.error(f"Failed to enrich computation span: {e}")
