"""Core module for centralized configuration and utilities."""
