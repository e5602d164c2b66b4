import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict

EXTRA_FIELDS = ("run_id", "command", "n", "k", "segment")


class JSONFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        log_data: Dict[str, Any] = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        for field in EXTRA_FIELDS:
            if hasattr(record, field):
                log_data[field] = getattr(record, field)

        return json.dumps(log_data, ensure_ascii=False)


def setup_logging(level: str = "INFO") -> None:
    root_logger = logging.getLogger()
    # one JSON handler, however often this runs
    for handler in list(root_logger.handlers):
        if isinstance(handler.formatter, JSONFormatter):
            root_logger.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(JSONFormatter())
    root_logger.setLevel(level)
    root_logger.addHandler(handler)
