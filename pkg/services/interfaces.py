"""
Interface definitions for the major service components.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Iterator, List, Sequence, Union

import numpy as np

from models.core import EngineConfig, PrimeRange


class PrimeSourceInterface(ABC):
    """Interface for prime enumeration."""

    @abstractmethod
    def sieve_range(self, lo: int, hi: int) -> PrimeRange:
        """Exact primality flags for [lo, hi)."""
        pass

    @abstractmethod
    def iter_prime_segments(self, lo: int, hi: int) -> Iterator[np.ndarray]:
        """Primes in [lo, hi), segment by segment, ascending."""
        pass

    @abstractmethod
    def prime_pi(self, x: int) -> int:
        """Number of primes <= x."""
        pass

    @abstractmethod
    def nth_prime(self, n: int) -> int:
        """The n-th prime, p_1 = 2."""
        pass


class ReportWriterInterface(ABC):
    """Interface for rendering result records."""

    @abstractmethod
    def render(self, records: Sequence[Dict[str, Any]], columns: List[str] = None) -> str:
        """Render records in the writer's output format."""
        pass


class ConfigManagerInterface(ABC):
    """Interface for configuration management."""

    @abstractmethod
    def load_config(self, config_path: Union[str, Path]) -> EngineConfig:
        """Load configuration from file."""
        pass

    @abstractmethod
    def save_config(self, config: EngineConfig, config_path: Union[str, Path]) -> None:
        """Save configuration to file."""
        pass

    @abstractmethod
    def merge_cli_args(self, config: EngineConfig, cli_args: Dict[str, Any]) -> EngineConfig:
        """Merge CLI arguments with configuration."""
        pass
