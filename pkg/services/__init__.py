"""
Service layer components for the Bateman-Horn toolkit.
"""

from .interfaces import (
    PrimeSourceInterface,
    ReportWriterInterface,
    ConfigManagerInterface
)

__all__ = [
    'PrimeSourceInterface',
    'ReportWriterInterface',
    'ConfigManagerInterface'
]
