"""
Logging setup for command-line entry points.

Library modules only declare `logger = logging.getLogger(__name__)`; the
CLI calls configure_logging once per invocation. Output goes to stderr so
that stdout stays clean for --json.
"""

import logging
import sys
from typing import Optional, Union

DEFAULT_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: Union[str, int] = 'WARNING', fmt: Optional[str] = None) -> None:
    """
    Configure the root logger.

    Args:
        level: level name ('DEBUG', 'INFO', ...) or a logging constant
        fmt: record format; empty or None falls back to DEFAULT_FORMAT
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logging.basicConfig(
        level=level,
        format=fmt or DEFAULT_FORMAT,
        stream=sys.stderr,
        force=True,
    )
