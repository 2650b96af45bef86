import logging
import os
from typing import Optional

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(level: str = "INFO", log_dir: Optional[str] = "logs",
                      filename: str = "sweep.log") -> None:
    """Configure the root logger with a stream handler and, if log_dir is set, a file handler."""
    handlers = [logging.StreamHandler()]
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(os.path.join(log_dir, filename)))

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )
    # matplotlib's font manager is noisy at DEBUG
    logging.getLogger("matplotlib").setLevel(logging.WARNING)
