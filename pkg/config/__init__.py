"""
Configuration, logging and error handling for the Bateman-Horn toolkit.
"""

from .logging_config import setup_logging, get_logger
from .error_handling import ErrorHandler, BatemanHornError
from .config_manager import ConfigManager
from .resource_guard import ResourceGuard

__all__ = ['setup_logging', 'get_logger', 'ErrorHandler', 'BatemanHornError', 'ConfigManager', 'ResourceGuard']
