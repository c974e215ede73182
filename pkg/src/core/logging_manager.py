from typing import Dict, Any, Optional
import logging
import logging.handlers
from pathlib import Path
from datetime import datetime

from pythonjsonlogger import jsonlogger

ROOT_LOGGER = "grid2x"


class LoggingManager:
    """Configures the grid2x logger tree."""

    def __init__(self, log_dir: str = "logs", level: str = "INFO", console: bool = False):
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.level = getattr(logging, level.upper(), logging.INFO)

        self.log_formats = {
            "default": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            "detailed": "%(asctime)s - %(name)s - %(levelname)s - %(pathname)s:%(lineno)d - %(message)s",
            "json": "%(asctime)s %(name)s %(levelname)s %(message)s"
        }

        self._setup_logging(console)

    def _rotating(self, filename: str) -> logging.Handler:
        return logging.handlers.RotatingFileHandler(
            self.log_dir / filename,
            maxBytes=10_000_000,  # 10MB
            backupCount=5
        )

    def _setup_logging(self, console: bool):
        # Module loggers live under "src.*"; both trees share the handlers.
        for name in (ROOT_LOGGER, "src"):
            logger = logging.getLogger(name)
            logger.setLevel(self.level)
            if any(getattr(h, "_grid2x", False) for h in logger.handlers):
                continue

            detailed = self._rotating("system.log")
            detailed.setFormatter(logging.Formatter(self.log_formats["detailed"]))
            errors = self._rotating("error.log")
            errors.setLevel(logging.ERROR)
            errors.setFormatter(logging.Formatter(self.log_formats["detailed"]))
            handlers = [detailed, errors]

            if console:
                console_handler = logging.StreamHandler()
                console_handler.setFormatter(logging.Formatter(self.log_formats["default"]))
                handlers.append(console_handler)

            for handler in handlers:
                handler._grid2x = True
                logger.addHandler(handler)

        perf_logger = logging.getLogger(f"{ROOT_LOGGER}.performance")
        perf_logger.setLevel(logging.INFO)
        perf_logger.propagate = False
        if not any(getattr(h, "_grid2x", False) for h in perf_logger.handlers):
            perf_handler = self._rotating("performance.log")
            perf_handler.setFormatter(jsonlogger.JsonFormatter(self.log_formats["json"]))
            perf_handler._grid2x = True
            perf_logger.addHandler(perf_handler)

    def get_logger(self, name: str) -> logging.Logger:
        return logging.getLogger(f"{ROOT_LOGGER}.{name}")

    def log_performance_metric(self, metric_name: str, value: Any, context: Optional[Dict[str, Any]] = None):
        """Log a stage timing or headline count as one JSON record."""
        logger = logging.getLogger(f"{ROOT_LOGGER}.performance")
        logger.info(metric_name, extra={
            "metric": metric_name,
            "value": value,
            "recorded_at": datetime.now().isoformat(),
            "context": context or {}
        })
