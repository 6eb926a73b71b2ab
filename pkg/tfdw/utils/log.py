"""Logging information.

This module defines the behavior for the default tfdw logging system.
Modules use the `logger` attribute as a normal logging system; records are only written once `set_logger`
attaches a handler, and only for modules registered with `track_module`.
Each record is stamped with the run label (the config hash of the command) and the current stage
(for example the mass of the solve inside a sweep).

Attributes:
    logger (Logger): logger object used for logging by tfdw modules.
    LOG_FORMAT (str): formatting string for logging as '{run}\t{stage}\t{log level}\t{module name}\t{message}'.
    _log_modules (list[str]): modules to track with logging (given as list of names)
    _stage (threading.local): per-thread stack of active stage labels.
"""

import logging
import threading
from contextlib import contextmanager


def _init_logger():
    lg = logging.getLogger(__name__)
    lg.addHandler(logging.NullHandler())
    return lg


logger = _init_logger()  # global logger
LOG_FORMAT = '{run:<13} {stage:<14} {levelname:7} {module:16} {message}'
_log_modules = []
_stage = threading.local()  # per-thread stack of stage labels


def set_logger(name: str, run: str = "-", logfile: str | None = "out.log"):
    """Function to link logger to an output file (or to stderr when `logfile` is None).

    Args:
        name (str): name to use for the logger.
        run (str): label stamped on every record, usually the config hash (default "-").
        logfile (str | None): file to use in recording log output (default "out.log").
    """

    global logger
    logger = logging.getLogger(name)

    for h in list(logger.handlers):
        logger.removeHandler(h)
    for f in list(logger.filters):
        logger.removeFilter(f)

    if logfile is None:
        handler = logging.StreamHandler()
    else:
        open(logfile, 'w').close()
        handler = logging.FileHandler(logfile)
    handler.setFormatter(logging.Formatter(LOG_FORMAT, style='{'))
    logger.addHandler(handler)
    logger.addFilter(ContextFilter(run))


def set_logger_level(level: str):
    """Function to set output level of logger without requiring logging import.

    Args:
        level (str): level to set logger to, given as string (in all caps)
    """

    global logger
    logger.setLevel(getattr(logging, level))


def track_module(module_name: str):
    """Sets a given module to be tracked by logger."""

    if module_name not in _log_modules:
        _log_modules.append(module_name)


def remove_module(module_name: str):
    """Sets a given module to no longer be tracked."""

    assert module_name in _log_modules, "Module is not currently logged: " + module_name
    _log_modules.remove(module_name)


@contextmanager
def stage(label: str):
    """Stamps records emitted inside the block with `label`.

    Stages nest; the innermost label wins.
    """

    stack = _stage.__dict__.setdefault("labels", [])
    stack.append(label)
    try:
        yield
    finally:
        stack.pop()


class ContextFilter(logging.Filter):
    """Stamps run and stage labels and drops records from untracked modules."""

    def __init__(self, run: str):
        super().__init__()
        self.run = run

    def filter(self, record):
        record.run = self.run
        labels = getattr(_stage, "labels", None)
        record.stage = labels[-1] if labels else "-"
        return record.module in _log_modules
