# """
# Centralized settings module using Pydantic v2 BaseSettings
#
# Observability switches and computation knobs for the multisection toolkit.
# Values come from MSD_* environment variables (or a .env file loaded by
# main.py), are validated on first import and fail fast on bad input.
# """

import logging

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

_VARIANTS = ("absolute", "relative", "closed")


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables.

    Every field has a default so the command line works without any
    environment; MSD_LOG_LEVEL=DEBUG and friends override them.
    """

    # Logging Configuration
    log_level: str = Field(
        default="WARNING",
        description="Application log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )

    # Loki Logging Configuration
    loki_enabled: bool = Field(
        default=False,
        description="Enable Loki centralized logging",
    )
    loki_url: str = Field(
        default="http://localhost:3100",
        description="Loki push endpoint URL",
    )
    loki_labels: str = Field(
        default="service=multisection-toolkit,environment=development",
        description="Default Loki labels (comma-separated key=value pairs)",
    )
    min_log_level_for_loki: str = Field(
        default="INFO",
        description="Minimum log level to send to Loki (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )

    # Tracing Configuration
    tracing_enabled: bool = Field(
        default=False,
        description="Enable distributed tracing with OpenTelemetry",
    )
    tempo_endpoint: str = Field(
        default="http://localhost:4317",
        description="Tempo OTLP gRPC endpoint URL",
    )
    trace_sample_rate: float = Field(
        default=1.0,
        description="Trace sampling rate (0.0 to 1.0, where 1.0 means 100%)",
        ge=0.0,
        le=1.0,
    )
    enable_trace_console_export: bool = Field(
        default=False,
        description="Enable console export of traces for debugging",
    )

    # Computation Configuration
    verify_certificates: bool = Field(
        default=True,
        description="Re-check every Smith normal form certificate (U*M*V = D, invertible U and V)",
    )
    oracle_window_padding: int = Field(
        default=1,
        description="Extra deck translates on each side of the cover oracle window",
        ge=0,
    )
    max_subbasis_search: int = Field(
        default=4096,
        description="Cap on candidate curve sub-bases tried by the monodromy auto-selection",
        gt=0,
    )
    default_variant: str = Field(
        default="absolute",
        description="Complex variant used when neither the diagram nor the command line names one",
    )

    model_config = SettingsConfigDict(
        # For local dev, call load_dotenv() in main.py before importing settings.
        case_sensitive=False,
        extra="ignore",
        env_prefix="MSD_",
    )

    @field_validator("log_level", "min_log_level_for_loki")
    @classmethod
    def validate_level_name(cls, v: str) -> str:
        level = v.upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {v!r}")
        return level

    @field_validator("default_variant")
    @classmethod
    def validate_variant(cls, v: str) -> str:
        if v not in _VARIANTS:
            raise ValueError(f"default_variant must be one of {', '.join(_VARIANTS)}")
        return v

    @property
    def loki_label_map(self) -> dict[str, str]:
        """Parse ``loki_labels`` ("k=v,k2=v2") into a dict, skipping malformed pairs."""
        labels = {}
        for pair in self.loki_labels.split(","):
            key, sep, value = pair.partition("=")
            if sep and key.strip():
                labels[key.strip()] = value.strip()
        return labels


# Create a single global settings instance
app_settings: Settings = Settings()
