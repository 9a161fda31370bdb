"""Configuration management for mixlab"""

import logging
import os

logger = logging.getLogger(__name__)

VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def _int_env(name: str, default: str) -> int:
    """Read an integer environment variable, naming it on failure"""
    raw = os.getenv(name, default).strip()
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Invalid {name}: {raw!r} is not an integer")


class Config:
    """Application configuration from environment variables

    Values are read when the object is built, so a fresh ``Config()`` picks up
    the current environment (the CLI builds one per invocation).
    """

    def __init__(self):
        # Logging
        self.LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()

        # Enumeration budget defaults
        self.MAX_ELEMENTS: int = _int_env("MIXLAB_MAX_ELEMENTS", "20000")
        self.DEFAULT_RADIUS: int = _int_env("MIXLAB_DEFAULT_RADIUS", "4")

        # Fan-out for profile and scan workers
        self.WORKERS: int = _int_env("MIXLAB_WORKERS", "1")

        # Per-group ball cache
        self.BALL_CACHE_SIZE: int = _int_env("MIXLAB_BALL_CACHE_SIZE", "32")

    def validate(self) -> None:
        """Validate configuration on startup"""
        if self.MAX_ELEMENTS < 1:
            raise ValueError("MIXLAB_MAX_ELEMENTS must be >= 1")

        if self.DEFAULT_RADIUS < 1:
            raise ValueError("MIXLAB_DEFAULT_RADIUS must be >= 1")

        if self.WORKERS < 1:
            raise ValueError("MIXLAB_WORKERS must be >= 1")

        if self.BALL_CACHE_SIZE < 1:
            raise ValueError("MIXLAB_BALL_CACHE_SIZE must be >= 1")

        if self.LOG_LEVEL not in VALID_LOG_LEVELS:
            raise ValueError(f"Invalid LOG_LEVEL: {self.LOG_LEVEL}")


config = Config()
