# Config package
from .settings import Settings, SweepSettings, RandomTableSettings, load_settings
from .logging_config import configure_logging

__all__ = [
    'Settings',
    'SweepSettings',
    'RandomTableSettings',
    'load_settings',
    'configure_logging',
]
