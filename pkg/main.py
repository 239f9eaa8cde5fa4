# Optional: load .env into os.environ for local dev (no-op if file missing).
from dotenv import load_dotenv
load_dotenv()

import logging
import sys

from core.settings import app_settings
from application.cli.commands import run
from infrastructure.observability.logging.loki_handler import (
    setup_loki_handler,
    get_structured_logger,
)
from infrastructure.observability.tracing.tempo import setup_tempo_tracer

SERVICE_NAME = "multisection-toolkit"

# Diagnostics go to stderr; stdout carries only command output
logging.basicConfig(
    level=app_settings.log_level,
    format="%(asctime)s %(levelname)s [%(name)s] %(message)s",
    stream=sys.stderr,
)
logger = logging.getLogger(__name__)


def _enable_loki() -> None:
    handler = setup_loki_handler(
        loki_url=app_settings.loki_url,
        labels=app_settings.loki_label_map,
        log_level=app_settings.min_log_level_for_loki,
    )
    logging.getLogger().addHandler(handler)
    get_structured_logger(__name__, {"component": "startup"}).info(
        "Loki shipping enabled",
        extra={"event_type": "startup", "service_name": SERVICE_NAME, "argv": " ".join(sys.argv[1:])},
    )


def _enable_tracing() -> None:
    setup_tempo_tracer(
        endpoint=app_settings.tempo_endpoint,
        service_name=SERVICE_NAME,
        sample_rate=app_settings.trace_sample_rate,
        enable_console_export=app_settings.enable_trace_console_export,
    )


def configure_observability() -> None:
    """Attach the Loki handler and the Tempo tracer when switched on; failures only log."""
    logger.debug(
        "[Startup] level=%s loki=%s tracing=%s verify_certificates=%s",
        app_settings.log_level,
        app_settings.loki_enabled,
        app_settings.tracing_enabled,
        app_settings.verify_certificates,
    )
    for enabled, name, enable in (
        (app_settings.loki_enabled, "Loki logging", _enable_loki),
        (app_settings.tracing_enabled, "Tempo tracing", _enable_tracing),
    ):
        if not enabled:
            continue
        try:
            enable()
        except Exception as e:
            logger.error(f"Failed to initialize {name}: {e}", exc_info=True)


def main() -> int:
    configure_observability()
    return run()


if __name__ == "__main__":
    sys.exit(main())
