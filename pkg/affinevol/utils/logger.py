import logging
import os

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logger(name: str, level: int | None = None) -> logging.Logger:
    """Set up a logger with the specified name and logging level.

    Handlers write to stderr so that table output on stdout stays clean.
    Calling it twice for the same name does not stack handlers.

    Parameters:
    ----------
        name: Name of the logger
        level: Logging level (default from AFFINE_SV_LOG_LEVEL, else INFO)

    Returns:
    -------
        Configured logger instance
    """
    if level is None:
        level = logging.getLevelName(
            os.environ.get("AFFINE_SV_LOG_LEVEL", "INFO").upper()
        )
        if not isinstance(level, int):
            level = logging.INFO

    logger = logging.getLogger(name)
    logger.setLevel(level)

    if not logger.handlers:
        ch = logging.StreamHandler()
        ch.setLevel(logging.DEBUG)
        ch.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(ch)
        logger.propagate = False

    return logger


def set_package_level(level: int | str) -> None:
    """Change the level of every logger created under ``affinevol``."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    for name in list(logging.root.manager.loggerDict):
        if name == "affinevol" or name.startswith("affinevol."):
            logging.getLogger(name).setLevel(level)
