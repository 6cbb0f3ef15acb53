"""
Core application components for the Bateman-Horn toolkit.
"""

from .application import BatemanHornApp

__all__ = ['BatemanHornApp']
