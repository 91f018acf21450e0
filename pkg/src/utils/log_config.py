"""
Logging setup shared by the CLI and the verification agent.
"""
import logging
import sys
from typing import Optional

from src.utils.settings import Settings, get_settings

_configured = False


class _StderrHandler(logging.StreamHandler):
    """Writes to sys.stderr as it is at emit time, not as it was at setup."""

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def configure_logging(settings: Optional[Settings] = None, level: Optional[str] = None) -> None:
    """
    Configure the 'src' logger.

    The handler is installed once; every call sets the level, so a command
    without --log-level falls back to the configured one.

    Args:
        settings: Source of the default level and the format
        level: Level name overriding settings.log_level
    """
    global _configured
    settings = settings or get_settings()
    root = logging.getLogger("src")
    root.setLevel((level or settings.log_level).upper())
    if _configured:
        return
    handler = _StderrHandler()
    handler.setFormatter(logging.Formatter(settings.log_format))
    root.addHandler(handler)
    root.propagate = False
    _configured = True
