"""Настройка логирования для CLI и скриптов"""

import logging
import sys

from pythonjsonlogger import jsonlogger

TEXT_FORMAT = '%(levelname)s - %(message)s'
JSON_FORMAT = '%(asctime)s %(name)s %(levelname)s %(message)s'


def configure_logging(level: str = 'INFO', json_format: bool = False) -> logging.Logger:
    """
    Один обработчик на stderr у корневого логгера.

    Args:
        level: Имя уровня (DEBUG, INFO, ...)
        json_format: JSON-строки через python-json-logger вместо текста
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler(sys.stderr)
    if json_format:
        handler.setFormatter(jsonlogger.JsonFormatter(JSON_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(TEXT_FORMAT))
    root.addHandler(handler)
    root.setLevel(getattr(logging, level.upper(), logging.INFO))
    return root
