# -*- coding: utf-8 -*-
"""
Component loggers.

Every component logs through ``get_logger("Trainer")`` and the records are
rendered as ``[Trainer] message`` so CLI output stays readable next to the
JSON and CSV the commands emit.
"""

import logging
import sys

ROOT_LOGGER_NAME = "whrf"


class _ComponentFormatter(logging.Formatter):
    """Formats records as ``[Component] message`` with the level for warnings and up."""

    def format(self, record: logging.LogRecord) -> str:
        component = record.name.rsplit(".", 1)[-1]
        message = record.getMessage()
        if record.levelno >= logging.WARNING:
            return f"[{component}] {record.levelname}: {message}"
        return f"[{component}] {message}"


def get_logger(component: str) -> logging.Logger:
    """
    Get the logger for a component.

    Args:
        component: Short component name, e.g. "Experiment".

    Returns:
        A child of the package root logger.
    """
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{component}")


def configure_logging(level: str = "INFO") -> None:
    """
    Attach a stderr handler to the package root logger.

    Calling this more than once replaces the handler instead of stacking them.

    Args:
        level: Logging level name.
    """
    root = logging.getLogger(ROOT_LOGGER_NAME)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(_ComponentFormatter())
    root.addHandler(handler)
    root.setLevel(level.upper())
    root.propagate = False
