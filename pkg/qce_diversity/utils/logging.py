"""
Logging setup shared by the CLI and the demo
"""
import logging

from rich.logging import RichHandler


def configure_logging(verbose: bool = False) -> None:
    """Route package loggers through a rich handler"""
    level = logging.DEBUG if verbose else logging.INFO
    handler = RichHandler(show_path=verbose, markup=False, rich_tracebacks=True)
    handler.setFormatter(logging.Formatter("%(message)s", datefmt="[%X]"))

    logger = logging.getLogger("qce_diversity")
    logger.handlers.clear()
    logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
