"""
Logging configuration for walters-thermo.

Reports own stdout, so every log record goes to stderr. numpy and scipy signal
overflow and slow convergence through the warnings module; those are routed into
the "py.warnings" logger so they carry the same format and level filter.
"""
import logging
import sys

FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DEBUG_FORMAT = "%(asctime)s - %(name)s:%(funcName)s:%(lineno)d - %(levelname)s - %(message)s"
QUIET_LIBRARIES = ("sqlalchemy", "alembic", "joblib")


def setup_logging(level: int = logging.INFO) -> None:
    """
    Configure the root logger for a CLI run.

    Args:
        level: The logging level to use (default: INFO); DEBUG adds call sites
    """
    formatter = logging.Formatter(
        fmt=DEBUG_FORMAT if level <= logging.DEBUG else FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S"
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    logging.captureWarnings(True)
    for name in QUIET_LIBRARIES:
        logging.getLogger(name).setLevel(logging.WARNING)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
