import logging
import sys
from pathlib import Path

DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def make_logger(name, path: str | Path | None = None, level=logging.INFO, format=None):
    """Configures and returns the logger `name`.

    Logs to `path` when given, to stderr otherwise. Calling it twice with the same
    target does not stack handlers.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)
    formatter = logging.Formatter(format or DEFAULT_FORMAT)
    if path is not None:
        handler = logging.FileHandler(path, encoding="utf-8")
        target = str(Path(path).resolve())
    else:
        handler = logging.StreamHandler(sys.stderr)
        target = "<stderr>"
    for existing in logger.handlers:
        if getattr(existing, "_convattack_target", None) == target:
            existing.setFormatter(formatter)
            return logger
    handler._convattack_target = target
    handler.setFormatter(formatter)
    logger.addHandler(handler)
    return logger
