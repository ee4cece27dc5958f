import logging
from pathlib import Path

from rich.logging import RichHandler

DETAILED_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'


def setup_logging(level: str = "INFO", log_dir: str = "logs") -> logging.Logger:
    """Initialize logging with proper handlers and formatters.

    Console output goes through rich; app.log and error.log get the detailed
    format. Per-block progress goes to the non-propagating 'simulation' logger.
    """
    Path(log_dir).mkdir(parents=True, exist_ok=True)

    detailed_formatter = logging.Formatter(DETAILED_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(level.upper())
    for handler in list(root_logger.handlers):
        if isinstance(handler, (RichHandler, logging.FileHandler)):
            root_logger.removeHandler(handler)
            handler.close()

    console_handler = RichHandler(show_path=False, rich_tracebacks=True)
    console_handler.setLevel(level.upper())
    console_handler.setFormatter(logging.Formatter('%(message)s'))

    app_handler = logging.FileHandler(Path(log_dir) / 'app.log')
    app_handler.setLevel(logging.INFO)
    app_handler.setFormatter(detailed_formatter)

    error_handler = logging.FileHandler(Path(log_dir) / 'error.log')
    error_handler.setLevel(logging.ERROR)
    error_handler.setFormatter(detailed_formatter)

    root_logger.addHandler(console_handler)
    root_logger.addHandler(app_handler)
    root_logger.addHandler(error_handler)

    simulation_logger = logging.getLogger('simulation')
    simulation_logger.setLevel(logging.DEBUG)
    simulation_logger.propagate = False
    for handler in list(simulation_logger.handlers):
        simulation_logger.removeHandler(handler)
        handler.close()

    simulation_handler = logging.FileHandler(Path(log_dir) / 'simulation.log')
    simulation_handler.setFormatter(detailed_formatter)
    simulation_logger.addHandler(simulation_handler)

    return logging.getLogger(__name__)
