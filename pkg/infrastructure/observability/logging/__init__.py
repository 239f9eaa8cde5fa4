"""
Structured logging with optional shipping to Grafana Loki.
"""
