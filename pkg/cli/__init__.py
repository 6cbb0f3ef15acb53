"""
Command-line interface components for the Bateman-Horn toolkit.
"""

from .interfaces import CLIInterface, ArgumentValidator
from .main_cli import BatemanHornCLI

__all__ = ['CLIInterface', 'ArgumentValidator', 'BatemanHornCLI']
