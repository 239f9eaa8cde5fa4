"""
OpenTelemetry tracing for Grafana Tempo.

Components:
-----------
- tempo.py: Tracer setup, configuration, and span enrichment helpers
- decorators.py: trace_computation, wrapping service operations in spans

Tracing is off unless MSD_TRACING_ENABLED is set; without a configured
provider the OpenTelemetry API hands out no-op spans.
"""
