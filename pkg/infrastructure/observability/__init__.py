# observability/
# ├── logging/
# │   ├── loki_handler.py    # Loki handler, structured loggers, event helpers
# │   └── decorators.py      # log_operation, log_computation
# └── tracing/
#     ├── tempo.py           # OTLP tracer setup, span enrichment
#     └── decorators.py      # trace_computation
