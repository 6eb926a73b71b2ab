"""Atomic file writes shared by state files and curve artifacts."""

import os
import tempfile
from pathlib import Path

from . import log


def atomic_write(path, write) -> Path:
    """Calls write(file handle) on a temporary file and renames it onto `path`.

    Raises:
        OSError: with the path in the message.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", newline="") as fh:
                write(fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
    log.logger.info(f"wrote {path}")
    return path
